#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

namespace qhi {
namespace {

using testing::rel_err;

QuantumGluingPoint complete_lift(Case k, int N, const PrecisionContext& ctx)
{
    return quantum_lift(complete_point(ctx), default_colors(k), N, ctx);
}

TEST(StateSum, ReferenceValuesCaseA)
{
    struct Ref {
        int N;
        const char* re;
        const char* im;
        const char* modulus;
    };
    const Ref refs[] = {
        {5, "3.0061137064056667353259326875", "-2.8788585849172125319180468701", "2.91968585521069902352255767778"},
        {7, "3.52103417616638883163214975665", "0.342185683327407430212508064954", "5.79776928971743975469133081903"},
        {11, "2.46732022250185657751876521355", "1.57310077973134849874718035278", "21.4662857052822693372578634269"},
    };
    for (const Ref& r : refs) {
        PrecisionContext ctx = PrecisionContext::with_digits(digits_for_n(r.N));
        scoped_precision guard(ctx);
        StateSumResult s = full_qhi(complete_lift(Case::A, r.N, ctx), ctx);
        EXPECT_LT(rel_err(s.sigma_u, r.re, r.im), 1e-28) << "N=" << r.N;
        EXPECT_LT(testing::abs_err(s.full_modulus, r.modulus) / std::stod(r.modulus), 1e-28) << "N=" << r.N;
    }
}

TEST(StateSum, ReferenceValuesCaseB)
{
    PrecisionContext ctx = PrecisionContext::with_digits(45);
    scoped_precision guard(ctx);
    StateSumResult s5 = full_qhi(complete_lift(Case::B, 5, ctx), ctx);
    EXPECT_LT(rel_err(s5.sigma_u, "2.42093727671917553698094756405", "2.68872323714082114405382832733"), 1e-28);
    EXPECT_LT(testing::abs_err(s5.full_modulus, "2.20607127111412895387390261851"), 1e-28);
    StateSumResult s7 = full_qhi(complete_lift(Case::B, 7, ctx), ctx);
    EXPECT_LT(rel_err(s7.sigma_u, "-0.368099582479164292142059160602", "0.928378279146449616026153589489"), 1e-28);
    EXPECT_LT(testing::abs_err(s7.full_modulus, "0.462061896293837873235361943379"), 1e-28);
    EXPECT_LT(testing::abs_err(full_qhi(complete_lift(Case::B, 11, ctx), ctx).full_modulus,
                               "1.10926056221252352850146279853"), 1e-28);
    EXPECT_LT(testing::abs_err(full_qhi(complete_lift(Case::B, 21, ctx), ctx).full_modulus,
                               "1.13044227543172619455980615015"), 1e-28);
}

TEST(StateSum, LargerNCaseA)
{
    PrecisionContext ctx = PrecisionContext::with_digits(digits_for_n(21));
    scoped_precision guard(ctx);
    mpreal m = full_qhi(complete_lift(Case::A, 21, ctx), ctx).full_modulus;
    EXPECT_LT(testing::abs_err(m, "530.592074650502437178335035137") / 530.6, 1e-28);
}

TEST(StateSum, ReducedInvariantIsRealAtCompletePoint)
{
    PrecisionContext ctx = PrecisionContext::with_digits(45);
    scoped_precision guard(ctx);
    for (Case k : {Case::A, Case::B}) {
        for (int N : {5, 9, 15}) {
            cplx r = reduced_qhi(complete_lift(k, N, ctx), ctx);
            EXPECT_LT(to_double(boost::multiprecision::abs(r.im) / abs(r)), 1e-35);
        }
    }
}

TEST(StateSum, DefectAndGrowth)
{
    PrecisionContext ctx = PrecisionContext::with_digits(45);
    scoped_precision guard(ctx);
    QuantumGluingPoint q = complete_lift(Case::A, 9, ctx);
    StateSumResult s = full_qhi(q, ctx);
    cplx defect = ipow(q.uq[0] * q.vq[0], -4);
    EXPECT_LT(rel_err(s.defect, defect), 1e-40);
    EXPECT_LT(to_double(boost::multiprecision::abs(s.full_modulus - abs(defect) * abs(s.reduced))), 1e-38);
    EXPECT_LT(to_double(boost::multiprecision::abs(s.growth - 2 * const_pi() / 9 * log(s.full_modulus))), 1e-38);
    EXPECT_EQ(s.digits_used, 45);
}

TEST(StateSum, MatchesBruteForceOnRandomLifts)
{
    std::mt19937_64 rng(23);
    for (int N = 3; N <= 15; N += 2) {
        PrecisionContext ctx = PrecisionContext::with_digits(40);
        scoped_precision guard(ctx);
        for (const GluingPoint& p : oracle::random_points(5, rng, ctx)) {
            for (Case k : {Case::A, Case::B}) {
                QuantumGluingPoint q = quantum_lift(p, default_colors(k), N, ctx);
                cplx s = sigma_n(q.uq[0], q.uq[1], N, ctx);
                EXPECT_LT(rel_err(s, oracle::sigma(q.uq[0], q.uq[1], N)), testing::tol(ctx, 10)) << "N=" << N;
                EXPECT_LT(rel_err(reduced_qhi(q, ctx), oracle::reduced(q)), testing::tol(ctx, 10)) << "N=" << N;
            }
        }
    }
}

TEST(StateSum, SigmaRejectsOffCurveInput)
{
    PrecisionContext ctx = PrecisionContext::with_digits(30);
    scoped_precision guard(ctx);
    EXPECT_THROW(sigma_n(cplx(mpreal("0.5")), cplx(2), 5, ctx), CurveViolation);
    EXPECT_THROW(sigma_n(cplx(mpreal("0.5")), cplx(2), 6, ctx), ValidationError);
}

TEST(Kashaev, ReferenceValues)
{
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    scoped_precision guard(ctx);
    EXPECT_LT(testing::abs_err(kashaev(3, ctx), "1.44444444444444444444444444444"), 1e-28);
    EXPECT_LT(testing::abs_err(kashaev(5, ctx), "2.0188854381999831757127338935"), 1e-28);
    EXPECT_LT(testing::abs_err(kashaev(7, ctx), "3.08732713358975019656927322003"), 1e-28);
    EXPECT_LT(testing::abs_err(kashaev(11, ctx), "8.51412048775076753662259036288"), 1e-28);
    mpreal k101 = kashaev(101, ctx);
    EXPECT_LT(to_double(boost::multiprecision::abs(k101 / mpreal("11268237116773.205774701072804") - 1)), 1e-28);
}

TEST(Kashaev, StrictlyIncreasing)
{
    PrecisionContext ctx = PrecisionContext::with_digits(30);
    scoped_precision guard(ctx);
    mpreal prev = 0;
    for (int N = 3; N <= 201; N += 2) {
        mpreal k = kashaev(N, ctx);
        EXPECT_GT(k, prev) << "N=" << N;
        prev = k;
    }
}

TEST(Kashaev, GrowthApproachesVolume)
{
    PrecisionContext ctx = PrecisionContext::with_digits(30);
    scoped_precision guard(ctx);
    GrowthSeries s;
    for (int N = 101; N <= 501; N += 10)
        s.add(N, cplx(kashaev(N, ctx)));
    GrowthFit f = growth_fit(s);
    EXPECT_NEAR(f.c0, to_double(volume_41()), 0.02);
}

TEST(Kernel, KashaevAtUnitArguments)
{
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    for (int N = 3; N <= 51; N += 2)
        EXPECT_TRUE(check_kashaev_kernel(N, ctx).pass) << "N=" << N;
}

TEST(Kernel, ReferenceValue)
{
    PrecisionContext ctx = PrecisionContext::with_digits(45);
    scoped_precision guard(ctx);
    QuantumGluingPoint q = complete_lift(Case::A, 5, ctx);
    cplx j = j_kernel(q.uq[0], q.vq[0], 2, 5, ctx);
    EXPECT_LT(to_double(abs(j - cplx(mpreal("-0.652861604519573158146987481426")))), 1e-28);
}

TEST(Kernel, SumEqualsReducedInvariant)
{
    PrecisionContext ctx = PrecisionContext::with_digits(45);
    for (Case k : {Case::A, Case::B}) {
        for (int N : {5, 7}) {
            CheckResult r = check_kernel_sum(complete_lift(k, N, ctx), ctx);
            EXPECT_TRUE(r.pass) << case_name(k) << " N=" << N << " " << r.value;
        }
    }
}

TEST(Kernel, IndexRange)
{
    PrecisionContext ctx = PrecisionContext::with_digits(30);
    EXPECT_THROW(j_kernel(cplx(1), cplx(1), 5, 5, ctx), ValidationError);
    EXPECT_THROW(j_kernel(cplx(1), cplx(1), -1, 5, ctx), ValidationError);
}

TEST(Residue, IdentityHolds)
{
    PrecisionContext ctx(30, 1e-12);
    for (Case k : {Case::A, Case::B}) {
        for (int N : {5, 15}) {
            ResidueCheck rc = residue_check(complete_lift(k, N, ctx), ctx);
            EXPECT_LT(to_double(rc.rel_diff), 1e-10) << case_name(k) << " N=" << N;
        }
    }
}

TEST(Residue, PoleOnContour)
{
    PrecisionContext ctx(30, 1e-12);
    scoped_precision guard(ctx);
    QuantumGluingPoint q = complete_lift(Case::A, 5, ctx);
    mpreal pi = const_pi();
    // The right edge runs along the imaginary axis through the poles of coth(5z/2).
    Contour c;
    c.name = "through-pole";
    c.vertices = {cplx(mpreal(0), pi / 10), cplx(mpreal(0), 2 * pi - pi / 10), cplx(-pi / 5, 2 * pi - pi / 10),
                  cplx(-pi / 5, pi / 10), cplx(mpreal(0), pi / 10)};
    EXPECT_THROW(residue_check(q, c, ctx), PoleOnContour);
    Contour open = c;
    open.vertices.pop_back();
    EXPECT_THROW(residue_check(q, open, ctx), ContourInvalid);
}

}  // namespace
}  // namespace qhi
