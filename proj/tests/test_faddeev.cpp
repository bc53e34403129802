#include <random>

#include "test_util.hpp"

namespace qhi {
namespace {

using testing::rel_err;

TEST(PhiB, ReferenceValue)
{
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    cplx v = phi_b(make_cplx("0.2", "0.1"), 1 / sqrt(mpreal(5)), ctx);
    EXPECT_LT(rel_err(v, "0.398084900734646216768880122904", "0.688331680597749097840124166355"), 1e-23);
}

TEST(PhiB, UnitModulusAtOrigin)
{
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    EXPECT_LT(to_double(boost::multiprecision::abs(abs(phi_b(cplx(0), mpreal(1), ctx)) - 1)), 1e-23);
}

TEST(PhiB, FunctionalEquation)
{
    // Φ_b(z − ib/2) = (1 + e^{2πbz})·Φ_b(z + ib/2), in both b and 1/b.
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    mpreal b = 1 / sqrt(mpreal(5));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(-0.6, 0.6);
    for (int k = 0; k < 8; ++k) {
        cplx z(mpreal(re(rng)), mpreal(im(rng)));
        for (const mpreal& c : {b, 1 / b}) {
            cplx h(mpreal(0), c / 2);
            cplx lhs = phi_b(z - h, b, ctx);
            cplx rhs = (cplx(1) + exp(z * (2 * const_pi() * c))) * phi_b(z + h, b, ctx);
            EXPECT_LT(rel_err(lhs, rhs), 1e-22);
        }
    }
}

TEST(PhiB, InversionRelation)
{
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    mpreal b = 1 / sqrt(mpreal(5));
    mpreal pi = const_pi();
    for (cplx z : {make_cplx("0.3", "0.2"), make_cplx("-0.8", "0.05"), make_cplx("1.1", "-0.4")}) {
        cplx lhs = phi_b(z, b, ctx) * phi_b(-z, b, ctx);
        cplx rhs = expi(pi * (b * b + 1 / (b * b)) / 12) * exp(mul_i(z * z) * pi);
        EXPECT_LT(rel_err(lhs, rhs), 1e-22);
    }
}

TEST(PhiB, PoleRaises)
{
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    mpreal b(1);
    EXPECT_THROW(phi_b(cplx(mpreal(0), (b + 1 / b) / 2), b, ctx), PoleHit);
}

class SHat : public ::testing::Test {
protected:
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    scoped_precision guard{ctx};
};

TEST_F(SHat, ReferenceValues)
{
    struct Ref {
        const char* re;
        const char* im;
        int N;
        const char* vre;
        const char* vim;
    };
    const Ref refs[] = {
        {"-1", "1", 7, "1.52641066059392828733409690779", "-0.0133846834061057360392697884203"},
        {"0.3", "0.5", 5, "3.02595530111522657650378952965", "-0.234377828644944340940681691773"},
        {"-0.4", "2.0", 9, "1.37510832035685291574840487056", "1.0811922423891775680275538727"},
    };
    for (const Ref& r : refs)
        EXPECT_LT(rel_err(s_hat(make_cplx(r.re, r.im), r.N, ctx), r.vre, r.vim), 1e-28) << r.re << "," << r.im;
}

TEST_F(SHat, QuadratureRouteAgrees)
{
    PrecisionContext qctx(30, 1e-25);
    for (cplx z : {make_cplx("-1", "1"), make_cplx("0.3", "0.5"), make_cplx("0.2", "-0.1")}) {
        cplx a = s_hat(z, 7, ctx);
        cplx b = s_hat_quadrature(z, 7, qctx);
        EXPECT_LT(rel_err(b, a), 1e-22);
    }
}

TEST_F(SHat, ShiftEquation)
{
    int N = 7;
    cplx z = make_cplx("-1", "1");
    cplx step(mpreal(0), 2 * const_pi() / N);
    cplx rhs = s_hat(z + step, N, ctx) * (cplx(1) - exp(z + step));
    EXPECT_LT(rel_err(s_hat(z, N, ctx), rhs), testing::tol(ctx, 5));
}

TEST_F(SHat, ShiftEquationRandomPoints)
{
    std::mt19937_64 rng(5);
    for (int N : {3, 7, 15, 51}) {
        CheckResult r = check_s_hat_functional(N, 25, rng, ctx);
        EXPECT_TRUE(r.pass) << "N=" << N << " residual " << r.value;
    }
}

TEST_F(SHat, NFoldShift)
{
    for (int N : {5, 9}) {
        for (cplx z : {make_cplx("-0.5", "0.3"), make_cplx("-2", "-1"), make_cplx("-0.1", "4")}) {
            cplx ratio = s_hat(z, N, ctx) / s_hat(z + cplx(mpreal(0), 2 * const_pi()), N, ctx);
            EXPECT_LT(rel_err(ratio, cplx(1) - exp(z * N)), testing::tol(ctx, 6));
        }
    }
}

TEST_F(SHat, AsymptoticDecompositionIdentity)
{
    // Log Ŝ_N(z) − (N/2iπ)Li₂(e^z) + ½Log(1 − e^z) − Ψ_N(z)/N ∈ 2πiℤ.
    PrecisionContext qctx(30, 1e-25);
    scoped_precision g(qctx);
    int N = 15;
    cplx z = make_cplx("-0.3", "1");
    cplx li = li2(exp(z));
    cplx d = log_s_hat(z, N, qctx) + mul_i(li) * (mpreal(N) / (2 * const_pi())) + log(cplx(1) - exp(z)) / 2 -
             psi_n(z, N, qctx) / N;
    mpreal k = round(d.im / (2 * const_pi()));
    d.im -= 2 * const_pi() * k;
    EXPECT_LT(to_double(abs(d)), 1e-22);
}

TEST_F(SHat, RegularOnImaginaryAxisLattice)
{
    PrecisionContext qctx(25, 1e-20);
    for (int N : {15, 51}) {
        mpreal step = 2 * const_pi() / N;
        for (int k : {1, 7, N - 2}) {
            for (const char* off : {"0", "1e-20", "0.001"}) {
                cplx z(mpreal(off), step * k);
                cplx v = s_hat(z, N, ctx);
                EXPECT_LT(rel_err(v, s_hat_quadrature(z, N, qctx)), 1e-18) << "N=" << N << " k=" << k;
                cplx up = z + cplx(mpreal(0), step);
                EXPECT_LT(rel_err(v, s_hat(up, N, ctx) * (cplx(1) - exp(up))), testing::tol(ctx, 5));
            }
        }
    }
}

TEST_F(SHat, PolesAndZerosRaise)
{
    int N = 7;
    mpreal pi = const_pi();
    EXPECT_THROW(s_hat(cplx(mpreal(0), 2 * pi), N, ctx), PoleHit);
    EXPECT_THROW(s_hat(cplx(mpreal(0), 2 * pi + 4 * pi / N), N, ctx), PoleHit);
    EXPECT_THROW(s_hat(cplx(mpreal(0), -2 * pi / N), N, ctx), ZeroHit);
    EXPECT_NO_THROW(s_hat(cplx(mpreal(0), pi), N, ctx));
}

TEST_F(SHat, EvenNRejected)
{
    EXPECT_THROW(s_hat(cplx(mpreal("-0.5")), 4, ctx), ValidationError);
}

class Omega : public ::testing::Test {
protected:
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    scoped_precision guard{ctx};
};

TEST_F(Omega, BaseAndPeriod)
{
    int N = 7;
    cplx x = make_cplx("0.4", "0.3");
    cplx y = exp(log(cplx(1) - ipow(x, N)) / N);
    EXPECT_EQ(omega(x, y, 0, N, ctx), cplx(1));
    EXPECT_LT(to_double(abs(omega(x, y, N, N, ctx) - cplx(1))), testing::tol(ctx, 8));
    cplx w3 = omega(x, y, 3, N, ctx);
    EXPECT_LT(rel_err(omega(x, y, N + 3, N, ctx), w3), testing::tol(ctx, 8));
}

TEST_F(Omega, TwoFactorProduct)
{
    int N = 3;
    cplx x = cplx(pow(mpreal("0.5"), mpreal(1) / 3));
    cplx y = x;
    cplx z1 = zeta_pow(N, 1), z2 = zeta_pow(N, 2);
    cplx direct = y / (cplx(1) - x * z1) * y / (cplx(1) - x * z2);
    EXPECT_LT(rel_err(omega(x, y, 2, N, ctx), direct), 1e-38);
}

TEST_F(Omega, RatioIdentityAndPeriodicityRandom)
{
    std::mt19937_64 rng(9);
    for (int N : {5, 11, 31}) {
        for (const CheckResult& r : check_omega(N, 20, rng, ctx))
            EXPECT_TRUE(r.pass) << r.name << " N=" << N << " " << r.value;
    }
}

TEST_F(Omega, OffCurveRaises)
{
    EXPECT_THROW(omega(cplx(mpreal("0.5")), cplx(mpreal("0.5")), 2, 5, ctx), CurveViolation);
}

TEST_F(Omega, DivisionByZeroRaises)
{
    int N = 5;
    cplx x = zeta_pow(N, -2);   // 1 − xζ² = 0
    cplx y(0);
    // x^N = 1 forces y = 0 on the curve.
    EXPECT_THROW(omega(x, y, 3, N, ctx), DivisionByZero);
}

class GN : public ::testing::Test {
protected:
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    scoped_precision guard{ctx};
};

TEST_F(GN, ModulusAtOne)
{
    for (int N = 3; N <= 101; N += 2)
        EXPECT_TRUE(check_g_modulus(N, ctx).pass) << "N=" << N;
}

TEST_F(GN, NthPowerAtOne)
{
    mpreal pi = const_pi();
    for (int N : {3, 5, 7, 9, 11, 13}) {
        cplx gp = ipow(g_n(cplx(1), N, ctx), N);
        mpreal mod = pow(mpreal(N), mpreal(N) / 2);
        EXPECT_LT(to_double(boost::multiprecision::abs(abs(gp) - mod) / mod), 1e-35);
        // With the factors (1 − ζ^{−j}) the closed form carries an extra sign (−1)^{(N−1)/2},
        // which is not an N-th root of unity.
        cplx phase = expi(pi * (N - 2) * (N - 1) * (2 * N - 1) / 12);
        cplx r = ipow(gp / (phase * mod), N);
        cplx sign((N % 4 == 1) ? 1 : -1);
        EXPECT_LT(to_double(abs(r - sign)), 1e-33) << "N=" << N;
    }
}

TEST_F(GN, ZeroAndReference)
{
    EXPECT_LT(to_double(abs(g_n(cplx(0), 7, ctx) - cplx(1))), 1e-38);
    EXPECT_LT(rel_err(g_n(make_cplx("0.3", "0.2"), 7, ctx), "1.4551796380067724754370329275", "-0.269005278937109022391373082985"), 1e-28);
}

TEST_F(GN, ProductIdentity)
{
    // Telescoping the shift equation gives g_N(e^z) = Ŝ_N(z)^{(N−1)/N}·∏_{k=1}^{N−1} Ŝ_N(z + 2kiπ/N)^{−1/N}
    // up to an N-th root of unity. Writing this as Ŝ_N(z)·∏_{k=1}^{N} Ŝ_N(z + 2kiπ/N)^{−1/N} would need
    // Ŝ_N(z + 2iπ) = Ŝ_N(z); the N-th power of g_N(e^z) over the second form is exactly Ŝ_N(z + 2iπ)/Ŝ_N(z).
    mpreal pi = const_pi();
    for (int N : {3, 5, 7, 15}) {
        for (cplx z : {make_cplx("-0.7", "0.4"), make_cplx("-0.2", "1.5"), make_cplx("0.3", "-0.2")}) {
            cplx acc = log_s_hat(z, N, ctx) * (mpreal(N - 1) / N);
            for (int k = 1; k < N; ++k)
                acc -= log_s_hat(z + cplx(mpreal(0), 2 * pi * k / N), N, ctx) / N;
            cplx r = g_n(exp(z), N, ctx) / exp(acc);
            EXPECT_LT(to_double(boost::multiprecision::abs(abs(r) - 1)), 1e-33) << "N=" << N;
            EXPECT_LT(to_double(abs(ipow(r, N) - cplx(1))), 1e-32) << "N=" << N;

            cplx full_period = log_s_hat(z + cplx(mpreal(0), 2 * pi), N, ctx);
            cplx r_closed = r * exp((full_period - log_s_hat(z, N, ctx)) / N);
            cplx defect = exp(full_period - log_s_hat(z, N, ctx));
            EXPECT_LT(to_double(abs(ipow(r_closed, N) - defect) / abs(defect)), 1e-32) << "N=" << N;
            EXPECT_GT(to_double(abs(defect - cplx(1))), 1e-20) << "N=" << N;
        }
    }
}

TEST(XiN, ReferenceValues)
{
    PrecisionContext ctx(30, 1e-25);
    scoped_precision guard(ctx);
    EXPECT_LT(rel_err(xi_n(cplx(mpreal(0), mpreal(1)), 15, ctx), "0.187964422730032314334997241228", "0.130899693899574718269276807637"), 1e-22);
    EXPECT_LT(rel_err(xi_n(make_cplx("-0.3", "1"), 15, ctx), "0.175997245216812848036327066627", "0.0741640346160944745253112050398"), 1e-22);
}

TEST(XiN, StripViolation)
{
    PrecisionContext ctx(20, 1e-15);
    scoped_precision guard(ctx);
    EXPECT_THROW(xi_n(cplx(mpreal(0), mpreal(7)), 15, ctx), StripViolation);
    EXPECT_THROW(xi_n(cplx(mpreal(0), -const_pi() / 15), 15, ctx), StripViolation);
}

TEST(XiN, ApproachesLimitIntegral)
{
    // lim Ξ_N(i) = −(1/6)∫_Ω exp(v/π − v)/(4 sinh v) dv.
    PrecisionContext ctx(25, 1e-20);
    scoped_precision guard(ctx);
    mpreal pi = const_pi();
    auto f = [&](const cplx& v) { return exp(v * (1 / pi - 1)) / (sinh(v) * 4); };
    std::vector<PathPiece> pieces{PathPiece::line(cplx(-80), cplx(mpreal("-0.5")), 40),
                                  PathPiece::arc(cplx(0), mpreal("0.5"), pi, mpreal(0), 4),
                                  PathPiece::line(cplx(mpreal("0.5")), cplx(60), 40)};
    QuadOptions opt;
    opt.rel_tol = 1e-18;
    cplx limit = integrate_path(f, pieces, opt).value * (mpreal(-1) / 6);
    // The distance decays like 1/N: tripling N divides it by about 3.
    double prev = 1e9;
    for (int N : {15, 45, 135, 405}) {
        double d = to_double(abs(xi_n(cplx(mpreal(0), mpreal(1)), N, ctx) - limit));
        EXPECT_LT(d, 0.4 * prev) << "N=" << N;
        prev = d;
    }
}

TEST(PsiN, ExpPsiOverNTendsToOne)
{
    PrecisionContext ctx(20, 1e-15);
    scoped_precision guard(ctx);
    std::vector<cplx> pts{make_cplx("-0.5", "1"), make_cplx("-1", "3"), make_cplx("0.3", "2"), make_cplx("-2", "5")};
    double prev = 1e9;
    for (int N : {15, 45, 135}) {
        double worst = 0;
        for (const cplx& z : pts)
            worst = std::max(worst, to_double(abs(exp(psi_n(z, N, ctx) / N) - cplx(1))));
        EXPECT_LT(worst, prev) << "N=" << N;
        prev = worst;
    }
    EXPECT_LT(prev, 0.05);
}

ErrorEnvelope configured_envelope(double delta, double M)
{
    RunConfig cfg;
    load_config_file(cfg, QHI_DATA_DIR "/qhi.conf");
    return ErrorEnvelope::make(delta, M, cfg.b_prime, cfg.b_doubleprime);
}

std::vector<cplx> strip_grid(double delta, double M, int N)
{
    double lo = delta - M_PI / N, hi = 2 * M_PI - delta - M_PI / N;
    std::vector<cplx> out;
    for (double x : {-3.0, -1.0, -0.2, 0.0, 0.3, M})
        for (double t : {0.0, 0.1, 0.5, 0.9, 1.0})
            out.push_back(cplx{mpreal(std::min(x, M)), mpreal(lo + (hi - lo) * t)});
    return out;
}

TEST(Envelope, XiWithinConfiguredBound)
{
    PrecisionContext ctx(16, 1e-8);
    scoped_precision guard(ctx);
    for (double delta : {0.1, 0.4, 1.5}) {
        ErrorEnvelope e = configured_envelope(delta, 1.0);
        for (const cplx& z : strip_grid(delta, 1.0, 51)) {
            EXPECT_LE(to_double(abs(xi_n(z, 51, ctx))), e.B_delta()) << "delta=" << delta;
            EXPECT_LE(to_double(abs(psi_n(z, 51, ctx))), e.bound) << "delta=" << delta;
        }
    }
}

// Lower side: Re(Log Ŝ_N − (N/2iπ)Li₂(e^z)) ≥ −(Log c_M + B_δ/N).
TEST(Envelope, TwoSidedBoundLowerSide)
{
    PrecisionContext ctx(20, 1e-12);
    scoped_precision guard(ctx);
    for (double delta : {0.3, 0.8, 1.5}) {
        for (double M : {0.0, 1.0}) {
            ErrorEnvelope e = configured_envelope(delta, M);
            for (int N : {15, 51, 151}) {
                double bound = std::log(e.c_M()) + e.B_delta() / N;
                for (const cplx& z : strip_grid(delta, M, N)) {
                    cplx d = log_s_hat(z, N, ctx) + mul_i(li2(exp(z))) * (mpreal(N) / (2 * const_pi()));
                    EXPECT_GE(to_double(d.re), -bound) << "delta=" << delta << " M=" << M << " N=" << N;
                }
            }
        }
    }
}

// Upper side: Re(Log Ŝ_N − (N/2iπ)Li₂(e^z)) ≤ Log c_M + B_δ/N.
TEST(Envelope, TwoSidedBoundUpperSide)
{
    PrecisionContext ctx(20, 1e-12);
    scoped_precision guard(ctx);
    for (double delta : {0.3, 0.8, 1.5}) {
        for (double M : {0.0, 1.0}) {
            ErrorEnvelope e = configured_envelope(delta, M);
            for (int N : {15, 51, 151}) {
                double bound = std::log(e.c_M()) + e.B_delta() / N;
                for (const cplx& z : strip_grid(delta, M, N)) {
                    cplx d = log_s_hat(z, N, ctx) + mul_i(li2(exp(z))) * (mpreal(N) / (2 * const_pi()));
                    EXPECT_LE(to_double(d.re), bound) << "delta=" << delta << " M=" << M << " N=" << N
                                                      << " z=" << to_double(z.re) << "," << to_double(z.im);
                }
            }
        }
    }
}

TEST(Envelope, ExpRatioBound)
{
    PrecisionContext ctx(20, 1e-15);
    scoped_precision guard(ctx);
    for (double delta : {0.1, 0.5, 1.5}) {
        for (double M : {-1.0, 0.0, 2.0}) {
            ErrorEnvelope e = ErrorEnvelope::make(delta, M, 1, 1);
            for (int i = 0; i <= 20; ++i) {
                for (int j = 0; j <= 20; ++j) {
                    double x = M - 8 + 8.0 * i / 20;
                    double y = delta + (2 * M_PI - 2 * delta) * j / 20 + (j % 3 - 1) * 2 * M_PI;
                    cplx ez = exp(cplx(mpreal(x), mpreal(y)));
                    double v = to_double(abs(ez / (cplx(1) - ez)));
                    EXPECT_LE(v, e.exp_ratio_bound());
                }
            }
        }
    }
    EXPECT_THROW(ErrorEnvelope::make(0, 0, 1, 1), ValidationError);
    EXPECT_THROW(ErrorEnvelope::make(4, 0, 1, 1), ValidationError);
}

}  // namespace
}  // namespace qhi
