#pragma once

#include <string>

#include <gtest/gtest.h>

#include "qhi/qhi.hpp"

namespace qhi::testing {

inline double rel_err(const cplx& got, const cplx& want)
{
    return to_double(abs(got - want) / abs(want));
}

inline double rel_err(const cplx& got, const std::string& re, const std::string& im)
{
    return rel_err(got, make_cplx(re, im));
}

inline double abs_err(const mpreal& got, const std::string& want)
{
    return to_double(boost::multiprecision::abs(got - mpreal(want)));
}

inline double tol(const PrecisionContext& ctx, int slack)
{
    return to_double(ctx.eps(slack));
}

}  // namespace qhi::testing
