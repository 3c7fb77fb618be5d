#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentzlab/weights.hpp"

using namespace lorentz;

namespace {

Weight power_w(double b) { return Weight(AnalyticWeight::power(b), true); }
Weight one_w() { return power_w(0.0); }
Weight power_u(double a) { return Weight(AnalyticWeight::power(a)); }
Weight rational_w() { return Weight(AnalyticWeight::rational(), true); }

Weight exp_step(int top) {  // cells (k, k+1) with value e^k
    std::vector<double> bp, vals;
    for (int k = 0; k <= top; ++k) bp.push_back(k);
    for (int k = 0; k + 1 <= top; ++k) vals.push_back(std::exp(double(k)));
    return Weight(PiecewiseFn(bp, vals, TailPolicy::ConstantExtension), true);
}

}  // namespace

TEST_CASE("doubling constant") {
    for (double b : {-0.5, 0.0, 1.0, 2.0}) {
        ClassVerdict v = delta2_constant(power_w(b));
        CHECK(v.verdict == Verdict::Pass);
        CHECK(v.constant() == doctest::Approx(std::pow(2.0, b + 1.0)).epsilon(1e-12));
    }
    ClassVerdict one = delta2_constant(one_w());
    CHECK(one.constant() == doctest::Approx(2.0));
    // exponential growth: the ratio e^r keeps climbing with the scan
    ClassVerdict e = delta2_constant(exp_step(64), ScanConfig{5, 2.0});
    CHECK(e.verdict == Verdict::FailGrowth);
}

TEST_CASE("quasi-concavity of the primitive") {
    CHECK(p_quasiconcave(one_w(), 1.0).verdict == Verdict::Pass);
    CHECK(p_quasiconcave(one_w(), 1.0).constant() == doctest::Approx(1.0));
    // w = t^b: holds with constant 1 iff p >= b+1
    ClassVerdict ok = p_quasiconcave(power_w(0.5), 2.0);
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.constant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p_quasiconcave(power_w(1.0), 1.0).verdict == Verdict::FailGrowth);
    CHECK(p_quasiconcave(one_w(), 0.5).verdict == Verdict::FailGrowth);
}

TEST_CASE("muckenhoupt constant on intervals") {
    ClassVerdict flat = ap_constant(Weight::one(), 2.0);
    CHECK(flat.verdict == Verdict::Pass);
    CHECK(flat.constant() == doctest::Approx(1.0).epsilon(1e-12));

    // |x| with p=3: centered intervals give (1/2) * 2^2 = 2
    ClassVerdict va = ap_constant(power_u(1.0), 3.0);
    CHECK(va.verdict == Verdict::Pass);
    CHECK(va.constant() >= 2.0 - 1e-9);

    for (double p : {1.5, 2.0, 3.0}) {
        for (double a : {-0.5, 0.0, 0.5, 1.0, 2.0, 5.0}) {
            ClassVerdict v = ap_constant(power_u(a), p);
            if (a < p - 1.0)
                CHECK(v.verdict == Verdict::Pass);
            else
                CHECK(v.verdict == Verdict::Fail);
        }
    }
    CHECK_THROWS(ap_constant(Weight::one(), 1.0));
}

TEST_CASE("muckenhoupt quotient agrees with quadrature") {
    // off-center and centered fixtures, checked against a fine midpoint sum
    Weight u = power_u(0.5);
    double p = 2.0;
    for (Interval I : {Interval(1.0, 3.0), Interval(-2.0, 2.0), Interval(0.0, 4.0)}) {
        const int N = 2000000;
        double h = I.length() / N, su = 0.0, sd = 0.0;
        for (int i = 0; i < N; ++i) {
            double x = I.a + (i + 0.5) * h;
            double ux = std::pow(std::abs(x), 0.5);
            su += ux * h;
            sd += h / ux;
        }
        double oracle = (su / I.length()) * (sd / I.length());
        // reproduce the scanned quotient through the public scan: the
        // candidate set contains I for these dyadic fixtures
        ClassVerdict v = ap_constant(u, p);
        CHECK(v.constant() >= oracle - 1e-3);
    }
}

TEST_CASE("pointwise maximal quotient") {
    ClassVerdict one = a1_constant(Weight::one(), ScanConfig{6, 2.0});
    CHECK(one.verdict == Verdict::Pass);
    CHECK(one.constant() == doctest::Approx(1.0).epsilon(1e-9));

    // bump cell next to a cheap cell on a constant background
    Weight u(PiecewiseFn({-8, -1, 0, 1, 8}, {1, 1, 3, 1}));
    ClassVerdict v = a1_constant(u, ScanConfig{3, 2.0});
    CHECK(v.verdict == Verdict::Pass);
    // brute force over windows anchored at the scanned nodes
    double brute = 0.0;
    PiecewiseFn step = u.step();
    for (double x : {-4.5, -0.5, 0.5, 4.5}) {  // cell midpoints = scan nodes
        double best = 0.0;
        for (double a = -8.0; a < x; a += 0.125)
            for (double b = x + 0.125; b <= 8.0; b += 0.125)
                best = std::max(best, step.integrate(Interval(a, b)).value / (b - a));
        brute = std::max(brute, best / step.value(x));
    }
    CHECK(v.constant() >= brute - 1e-9);
    CHECK(v.constant() <= 4.0);  // coarse sanity ceiling

    CHECK(a1_constant(power_u(2.0), ScanConfig{8, 2.0}).verdict ==
          Verdict::FailGrowth);
    CHECK(a1_constant(power_u(1.0), ScanConfig{8, 2.0}).verdict ==
          Verdict::FailGrowth);
}

TEST_CASE("mass concentration estimate") {
    ClassVerdict flat = ainfty_estimate(Weight::one());
    CHECK(flat.verdict == Verdict::Pass);
    CHECK(flat.witness["delta"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(flat.witness["constant"].get<double>() == doctest::Approx(1.0).epsilon(0.02));

    for (double a : {-0.5, 0.5, 2.0, 5.0}) {
        ClassVerdict v = ainfty_estimate(power_u(a));
        CHECK(v.verdict == Verdict::Pass);
        double want = std::min(1.0, a + 1.0);
        CHECK(v.witness["tail_slope"].get<double>() ==
              doctest::Approx(want).epsilon(0.1));
    }

    // almost all mass in a spike far below the scanned fractions: the
    // concentration ratio cannot decay at scanned scales
    double thin = std::ldexp(1.0, -14);
    Weight spike(PiecewiseFn({0.0, 1.0 - thin, 1.0}, {std::ldexp(1.0, -28), 1.0}));
    CHECK(ainfty_estimate(spike).verdict == Verdict::FailGrowth);
}

TEST_CASE("hardy average condition") {
    // w = t^b with b < p-1: constant (b+1)/(p-b-1)
    ClassVerdict v = bp_constant(power_w(0.5), 2.0);
    CHECK(v.verdict == Verdict::Pass);
    CHECK(v.constant() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bp_constant(one_w(), 2.0).constant() == doctest::Approx(1.0));
    for (double p : {1.5, 2.0, 3.0}) {
        for (double b : {-0.5, 0.0, 0.5, 1.0, 2.0, 5.0}) {
            ClassVerdict r = bp_constant(power_w(b), p);
            if (b < p - 1.0)
                CHECK(r.verdict == Verdict::Pass);
            else
                CHECK(r.verdict == Verdict::Fail);
        }
    }
}

TEST_CASE("weak hardy condition dispatch and probe") {
    ClassVerdict classical = bp_infty_verdict(one_w(), 2.0, 7);
    CHECK(classical.verdict == Verdict::Pass);
    CHECK(classical.witness["probe_ratio"].get<double>() > 0.5);
    CHECK(classical.witness["probe_ratio"].get<double>() < 5.0);

    CHECK(bp_infty_verdict(power_w(1.0), 2.0, 7).verdict == Verdict::Fail);
    CHECK(bp_infty_verdict(one_w(), 0.5, 7).verdict == Verdict::FailGrowth);
    CHECK(bp_infty_verdict(one_w(), 1.0, 7).verdict == Verdict::Pass);
}

TEST_CASE("integral-average limit condition") {
    for (double b : {-0.5, 0.0, 1.0, 2.0}) {
        ClassVerdict v = bstar_infty_constant(power_w(b));
        CHECK(v.verdict == Verdict::Pass);
        CHECK(v.constant() == doctest::Approx(1.0 / (b + 1.0)).epsilon(1e-10));
    }
    ClassVerdict r = bstar_infty_constant(rational_w());
    CHECK(r.verdict == Verdict::FailGrowth);
    // estimate at the top scale grows like (log r)/2
    double top = r.scales.back().estimate;
    CHECK(top == doctest::Approx(std::log(4096.0) / 2.0).epsilon(0.15));
}

TEST_CASE("dilation supremum scan invariants") {
    for (const Weight& w :
         {power_w(0.5), one_w(), rational_w(),
          Weight(PiecewiseFn({0, 1, 3}, {2, 1}, TailPolicy::ConstantExtension), true)}) {
        CumulativeWeight W(w);
        Wbar wb = wbar_scan(W, 16);
        // monotone in lambda (lambdas stored decreasing)
        for (std::size_t j = 1; j < wb.values.size(); ++j)
            CHECK(wb.values[j] <= wb.values[j - 1] * (1.0 + 1e-12));
        CHECK(wb.values.front() <= 1.0 + 1e-12);
        // submultiplicative on the sampled grid
        for (std::size_t i = 0; i < wb.values.size(); ++i)
            for (std::size_t j = 0; i + j + 1 < wb.values.size(); ++j) {
                double prod = wb.values[i] * wb.values[j];
                CHECK(wb.values[i + j + 1] <= prod * (1.0 + 1e-9));
            }
    }
}

TEST_CASE("dilation battery consistency on the catalog") {
    std::vector<Weight> pass_catalog = {
        power_w(-0.9), power_w(-0.5), power_w(-0.25), one_w(),
        power_w(0.5),  power_w(1.0),  power_w(2.0),   power_w(5.0),
        Weight(PiecewiseFn({0, 2}, {1}, TailPolicy::ConstantExtension), true),
        Weight(PiecewiseFn({0, 1, 3}, {2, 1}, TailPolicy::ConstantExtension), true),
        Weight(PiecewiseFn({0, 1, 2, 4}, {1, 3, 2}, TailPolicy::ConstantExtension),
               true)};
    for (const Weight& w : pass_catalog) {
        auto rep = wbar_battery(w, 2.0);
        CHECK(rep["consistent"].get<bool>());
        CHECK(rep["verdict"].get<std::string>() == "PASS");
        CHECK(rep["submultiplicative_bound"].get<double>() > 0.0);
    }
    auto bad = wbar_battery(rational_w(), 2.0);
    CHECK(bad["consistent"].get<bool>());
    CHECK(bad["verdict"].get<std::string>() == "FAIL-GROWTH");
}

TEST_CASE("joint smallness condition") {
    auto flat = joint_ab_condition(Weight::one(), one_w(), 3);
    CHECK(flat["verdict"].get<std::string>() == "PASS");
    CHECK(flat["cross_check"]["consistent"].get<bool>());
    // eta(eps) = eps exactly for u = w = 1
    for (const auto& row : flat["table"]) {
        CHECK(row["eta"].get<double>() ==
              doctest::Approx(row["eps"].get<double>()));
    }

    auto good = joint_ab_condition(power_u(1.0), power_w(0.5), 3);
    CHECK(good["verdict"].get<std::string>() == "PASS");
    CHECK(good["cross_check"]["consistent"].get<bool>());

    auto bad = joint_ab_condition(Weight::one(), rational_w(), 3);
    CHECK(bad["verdict"].get<std::string>() == "FAIL-GROWTH");
    CHECK(bad["cross_check"]["consistent"].get<bool>());
}

TEST_CASE("multi-interval condition") {
    IntervalFamilies fams = sample_families(11, 200, 6);
    ClassVerdict ok = multi_interval_condition(Weight::one(), one_w(), 1.0, fams);
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.constant() <= 1.0 + 1e-9);  // mediant inequality
    ClassVerdict bad =
        multi_interval_condition(Weight::one(), one_w(), 0.5, fams);
    CHECK(bad.verdict == Verdict::FailGrowth);
}

TEST_CASE("estimates are monotone under candidate enlargement") {
    for (const Weight& w : {power_w(0.5), rational_w()}) {
        CHECK(delta2_constant(w, ScanConfig{12, 2.0}).constant() >=
              delta2_constant(w, ScanConfig{6, 2.0}).constant() - 1e-12);
        CHECK(bstar_infty_constant(w, ScanConfig{12, 2.0}).constant() >=
              bstar_infty_constant(w, ScanConfig{6, 2.0}).constant() - 1e-12);
    }
    CHECK(ap_constant(power_u(0.5), 2.0, ScanConfig{12, 2.0}).constant() >=
          ap_constant(power_u(0.5), 2.0, ScanConfig{6, 2.0}).constant() - 1e-12);
}

TEST_CASE("associate norm two-sided bound from the hardy constant") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> S(0.01, 50.0);
    double p = 2.0;
    for (double b : {-0.5, 0.0, 0.5}) {
        Weight w = power_w(b);
        ClassVerdict bp = bp_constant(w, p);
        REQUIRE(bp.verdict == Verdict::Pass);
        double C = bp.constant();
        CumulativeWeight W(w);
        for (int rep = 0; rep < 200; ++rep) {
            double s = S(rng);
            Flagged assoc = W.assoc_primitive(s, p);
            REQUIRE_FALSE(assoc.divergent);
            double base = s / std::pow(W(s), 1.0 / p);
            CHECK(assoc.value >= base - 1e-12);
            CHECK(assoc.value <= (1.0 + C) * base * (1.0 + 1e-9));
        }
    }
    // step weight: same shape of bound with the scanned constant
    Weight w(PiecewiseFn({0, 1, 4}, {1, 3}, TailPolicy::ConstantExtension), true);
    ClassVerdict bp = bp_constant(w, p);
    REQUIRE(bp.verdict == Verdict::Pass);
    double C = bp.constant();
    CumulativeWeight W(w);
    for (int rep = 0; rep < 200; ++rep) {
        double s = S(rng);
        double base = s / std::pow(W(s), 1.0 / p);
        Flagged assoc = W.assoc_primitive(s, p);
        CHECK(assoc.value >= base - 1e-12);
        CHECK(assoc.value <= (1.0 + C) * base * (1.0 + 1e-9));
    }
}
