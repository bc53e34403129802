#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

#include "qhi/errors.hpp"

namespace qhi {

using mpreal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

// Extra decimal digits carried internally on top of the requested working precision.
inline constexpr int guard_digits = 10;

struct PrecisionContext {
    int digits = 40;
    double quad_rel_tol = 1e-30;

    PrecisionContext() = default;
    PrecisionContext(int d, double tol) : digits(d), quad_rel_tol(tol) { validate(); }

    static PrecisionContext with_digits(int d)
    {
        PrecisionContext ctx;
        ctx.digits = d;
        ctx.quad_rel_tol = std::pow(10.0, -(d - 5 > 300 ? 300 : d - 5));
        ctx.validate();
        return ctx;
    }

    void validate() const
    {
        if (digits < 15)
            throw ValidationError("PrecisionContext: digits must be >= 15");
        if (!(quad_rel_tol > 0.0))
            throw ValidationError("PrecisionContext: quad_rel_tol must be positive");
        // 10^(-digits+5) underflows double for very large digits; compare in log space.
        if (std::log10(quad_rel_tol) < -(digits - 5) - 1e-9)
            throw ValidationError("PrecisionContext: quad_rel_tol below 10^(-digits+5)");
    }

    // Scale of a quantity that should vanish to working precision: 10^(-(digits - slack)).
    mpreal eps(int slack = 0) const
    {
        mpreal ten = 10;
        return pow(ten, -(digits - slack));
    }
};

// Default working precision for the N-th invariant: covers the cancellation
// of about 0.071 N decimal digits in the even-parity state sum.
inline int digits_for_n(int N)
{
    return 40 + static_cast<int>(std::ceil(0.071 * N));
}

// Sets the MPFR default precision for the lifetime of the guard.
class scoped_precision {
public:
    explicit scoped_precision(const PrecisionContext& ctx) : scoped_precision(ctx.digits + guard_digits) {}
    explicit scoped_precision(int decimal_digits) : old_(mpreal::default_precision())
    {
        mpreal::default_precision(static_cast<unsigned>(decimal_digits));
    }
    ~scoped_precision() { mpreal::default_precision(old_); }
    scoped_precision(const scoped_precision&) = delete;
    scoped_precision& operator=(const scoped_precision&) = delete;

private:
    unsigned old_;
};

inline mpreal const_pi()
{
    mpreal r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline mpreal zeta_ui(unsigned long k)
{
    mpreal r;
    mpfr_zeta_ui(r.backend().data(), k, MPFR_RNDN);
    return r;
}

// Unit roundoff at the current default precision.
inline mpreal working_eps()
{
    mpreal one(1);
    return ldexp(one, -static_cast<int>(mpfr_get_prec(one.backend().data())));
}

// Copies x into a fresh variable at the current default precision. Assignment
// between mpfr numbers of different precision keeps the source precision, so
// inputs are re-based once on entry to every precision-scoped routine.
inline mpreal rebase(const mpreal& x)
{
    mpreal r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

inline mpreal from_string(const std::string& s)
{
    return mpreal(s);
}

// Decimal string at the full current working precision.
inline std::string to_string(const mpreal& x, int digits)
{
    return x.str(digits, std::ios_base::scientific);
}

inline double to_double(const mpreal& x)
{
    return x.convert_to<double>();
}

}  // namespace qhi
