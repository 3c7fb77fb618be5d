#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentzlab/probes.hpp"

using namespace lorentz;

namespace {

const double kPi = 3.14159265358979323846;

Weight one_w() { return Weight(AnalyticWeight::power(0.0), true); }
Weight power_w(double b) { return Weight(AnalyticWeight::power(b), true); }
Weight rational_w() { return Weight(AnalyticWeight::rational(), true); }
Weight power_u(double a) { return Weight(AnalyticWeight::power(a)); }

}  // namespace

TEST_CASE("family geometry") {
    IntervalFamily fam;
    fam.intervals = {Interval(0.0, 1.0), Interval(300.0, 301.0)};
    CHECK(fam.well_separated());
    CHECK(fam.dilated(0).length() == doctest::Approx(101.0));
    CHECK(fam.dilated(0).center() == doctest::Approx(0.5));

    // shifted copies: same length, dist = (|j|-1)|I|
    for (int j : {-5, -2, -1, 1, 2, 5}) {
        Interval s = fam.shifted(0, j);
        CHECK(s.length() == doctest::Approx(1.0));
        double dist = j > 0 ? s.a - 1.0 : 0.0 - s.b;
        CHECK(dist == doctest::Approx((std::abs(j) - 1) * 1.0));
    }
    CHECK(fam.shifted(0, 0).a == 0.0);

    IntervalFamily close;
    close.intervals = {Interval(0.0, 1.0), Interval(1.5, 2.5)};
    CHECK(!close.well_separated());
}

TEST_CASE("weak ratio of the identity") {
    CumulativeWeight W(one_w());
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    // weak <= strong with equality on indicators
    CHECK(weak_type_ratio(ProbeOp::Identity, f, Weight::one(), W, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    PiecewiseFn g({0.0, 1.0, 2.0, 3.0}, {3.0, 1.0, 2.0});
    double r = weak_type_ratio(ProbeOp::Identity, g, Weight::one(), W, 1.5);
    CHECK(r <= 1.0 + 1e-12);

    CHECK_THROWS(weak_type_ratio(ProbeOp::Identity, PiecewiseFn({0.0, 1.0}, {0.0}),
                                 Weight::one(), W, 2.0));
}

TEST_CASE("weak ratio homogeneity") {
    CumulativeWeight W(one_w());
    PiecewiseFn f({-1.0, 0.5, 2.0}, {2.0, 0.5});
    for (ProbeOp T : {ProbeOp::Maximal, ProbeOp::Hilbert}) {
        double base = weak_type_ratio(T, f, Weight::one(), W, 2.0);
        for (double c : {2.0, 10.0}) {
            double scaled = weak_type_ratio(T, f.scaled(c), Weight::one(), W, 2.0);
            CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
        }
    }
}

TEST_CASE("maximal ratio against the level-set oracle") {
    // M chi_(0,1) = 1/max(x, 1-x, 1), so |{M chi > y}| = 2/y - 1 for y < 1
    // and sup_y y sqrt(2/y - 1) = 1 at y = 1; strong norm is 1.
    CumulativeWeight W(one_w());
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    double oracle = 0.0;
    for (int i = 1; i <= 4096; ++i) {
        double y = i / 4096.0;
        oracle = std::max(oracle, y * std::sqrt(2.0 / y - 1.0));
    }
    CHECK(oracle == doctest::Approx(1.0).epsilon(1e-6));
    double r = weak_type_ratio(ProbeOp::Maximal, f, Weight::one(), W, 2.0);
    CHECK(r <= 1.02 * oracle);
    CHECK(r >= 0.85 * oracle);
}

TEST_CASE("transform ratio against the closed-form level sets") {
    // |H chi_(0,1)| > y on a set of measure 4t/(t^2-1), t = e^{pi y}
    // (solving |x/(x-1)| = t^{+-1} on all three branches);
    // sup_y y . m(y) = lim_{y->0} 2y/sinh(pi y) = 2/pi.
    CumulativeWeight W(one_w());
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    double oracle = 0.0;
    for (int i = 1; i <= 4096; ++i) {
        double y = 4.0 * i / 4096.0;
        double t = std::exp(kPi * y);
        oracle = std::max(oracle, y * 4.0 * t / (t * t - 1.0));
    }
    CHECK(oracle == doctest::Approx(2.0 / kPi).epsilon(1e-3));
    double r = weak_type_ratio(ProbeOp::Hilbert, f, Weight::one(), W, 1.0);
    CHECK(r <= 1.02 * 2.0 / kPi);
    CHECK(r >= 0.85 * 2.0 / kPi);
}

TEST_CASE("operator probe verdicts") {
    WeakTypeEstimate classical =
        probe_operator(ProbeOp::Hilbert, Weight::one(), one_w(), 2.0);
    CHECK(classical.verdict == Verdict::Pass);
    CHECK(classical.max_ratio > 0.0);

    WeakTypeEstimate heavy =
        probe_operator(ProbeOp::Hilbert, power_u(5.0), one_w(), 2.0);
    CHECK(heavy.verdict == Verdict::FailGrowth);

    WeakTypeEstimate m_log =
        probe_operator(ProbeOp::Maximal, Weight::one(), rational_w(), 1.0);
    CHECK(m_log.verdict == Verdict::Pass);

    WeakTypeEstimate h_log =
        probe_operator(ProbeOp::Hilbert, Weight::one(), rational_w(), 2.0);
    CHECK(h_log.verdict == Verdict::FailGrowth);

    // growth verdicts are monotone under family enlargement
    WeakTypeEstimate sub = probe_operator(ProbeOp::Hilbert, power_u(5.0), one_w(),
                                          2.0, 0, {"dyadic-small"});
    if (sub.verdict == Verdict::FailGrowth)
        CHECK(heavy.verdict == Verdict::FailGrowth);

    nlohmann::json j = to_json(heavy);
    CHECK(j.contains("scales"));
    CHECK(j["verdict"] == "FAIL-GROWTH");
}

TEST_CASE("interval-average transform bound") {
    ClassVerdict flat = cp_interval_test(Weight::one(), ScanConfig{6, 2.0});
    CHECK(flat.verdict == Verdict::Pass);
    double want = 2.0 * std::log(2.0) / kPi;
    CHECK(flat.constant() == doctest::Approx(want).epsilon(1e-9));
    // translation/dilation invariance: same value at every scanned interval
    for (const auto& s : flat.scales)
        CHECK(s.estimate == doctest::Approx(want).epsilon(1e-8));

    // homogeneous density: anchored intervals give a scale-free estimate
    ClassVerdict hom = cp_interval_test(power_u(5.0), ScanConfig{5, 2.0});
    CHECK(hom.verdict == Verdict::Pass);
}

TEST_CASE("dual set-pair comparison") {
    CumulativeWeight W(one_w());
    auto E = MeasurableSet::single(Interval(0.0, 1.0));
    auto F = MeasurableSet::single(Interval(2.0, 3.0));
    auto [left, right] = dual_test_lemma35(Weight::one(), W, 2.0, E, F);
    double want = (3.0 * std::log(3.0) - 4.0 * std::log(2.0)) / kPi;
    CHECK(left == doctest::Approx(want).epsilon(1e-9));
    CHECK(right == doctest::Approx(1.0).epsilon(1e-12));

    // dilation scales both sides by 2^{1-1/p}
    auto E2 = MeasurableSet::single(Interval(0.0, 2.0));
    auto F2 = MeasurableSet::single(Interval(4.0, 6.0));
    auto [l2, r2] = dual_test_lemma35(Weight::one(), W, 2.0, E2, F2);
    CHECK(l2 == doctest::Approx(left * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r2 == doctest::Approx(right * std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS(dual_test_lemma35(Weight::one(), W, 1.0, E, F));
}

TEST_CASE("log shrinking-pair bound") {
    CumulativeWeight W1(one_w());
    auto rep = log_family_test(Weight::one(), W1, 1.0, {4.0, 64.0, 1024.0});
    CHECK(rep["verdict"] == "PASS");
    for (const auto& s : rep["scales"])
        CHECK(s["estimate"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    CumulativeWeight Wr(rational_w());
    auto bad = log_family_test(Weight::one(), Wr, 2.0,
                               {4.0, 64.0, 1024.0, 16384.0});
    CHECK(bad["verdict"] == "FAIL-GROWTH");
}

TEST_CASE("shifted-copy construction") {
    IntervalFamily fam;
    fam.intervals = {Interval(0.0, 1.0)};
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    auto js = lemma37_construction(f, fam, 1.0);
    REQUIRE(js.size() == 1);
    CHECK(js[0] != 0);

    IntervalFamily two;
    two.intervals = {Interval(0.0, 1.0), Interval(300.0, 301.0)};
    PiecewiseFn g({0.0, 1.0, 300.0, 301.0}, {1.5, 0.0, 1.2});
    auto js2 = lemma37_construction(g, two, 1.0);
    CHECK(js2.size() == 2);

    IntervalFamily close;
    close.intervals = {Interval(0.0, 1.0), Interval(1.5, 2.5)};
    CHECK_THROWS_AS(lemma37_construction(f, close, 1.0), std::invalid_argument);
    // non-compliant average
    CHECK_THROWS_AS(lemma37_construction(f.scaled(3.0), fam, 1.0),
                    std::invalid_argument);
}

TEST_CASE("construction falsifier stays silent on seeded families") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(0.25, 2.0), hgt(1.0, 2.0),
        gap(250.0, 400.0);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 1 + static_cast<int>(trial % 3);
        IntervalFamily fam;
        std::vector<double> bp;
        std::vector<double> v;
        double x = -500.0 * m;
        for (int i = 0; i < m; ++i) {
            double L = len(rng);
            fam.intervals.emplace_back(x, x + L);
            if (!bp.empty()) v.push_back(0.0);
            bp.push_back(x);
            bp.push_back(x + L);
            v.push_back(hgt(rng));  // average in [lambda, 2 lambda]
            x += 500.0 + L * gap(rng);
        }
        PiecewiseFn f(bp, v);
        REQUIRE(fam.well_separated());
        CHECK_NOTHROW(lemma37_construction(f, fam, 1.0));
    }
}

TEST_CASE("level-set reduction pipeline") {
    CumulativeWeight W(one_w());
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    auto rep = h_implies_m_reduction(f, Weight::one(), W, 2.0, 0.25);
    CHECK(rep["verdict"] == "PASS");
    CHECK(rep["covered_fraction"].get<double>() > 0.95);
    CHECK(rep["chain_constant"].get<double>() > 0.0);
    CHECK(rep["level_vs_union"].get<double>() < 10.0);

    auto trivial = h_implies_m_reduction(f, Weight::one(), W, 2.0, 4.0);
    CHECK(trivial["K_empty"] == true);
    CHECK(trivial["verdict"] == "PASS");

    CHECK_THROWS(h_implies_m_reduction(PiecewiseFn({0.0, 1.0}, {-1.0}),
                                       Weight::one(), W, 2.0, 0.5));
}

TEST_CASE("rearranged majorization by the averaged maximal function") {
    CumulativeWeight W(one_w());
    PiecewiseFn f = PiecewiseFn::indicator(Interval(0.0, 1.0));
    auto rep = hima_majorization(f, Weight::one(), W, 2.0);
    CHECK(rep["verdict"] == "PASS");
    CHECK(rep["stable"] == true);
    for (const auto& c : rep["constants"]) {
        CHECK(c["constant"].get<double>() > 0.0);
        CHECK(c["constant"].get<double>() < 50.0);
    }

    auto cubic = hima_majorization(PiecewiseFn::indicator(Interval(1.0, 2.0)),
                                   power_u(3.0), W, 2.0);
    CHECK(cubic["stable"] == true);

    auto zero = hima_majorization(PiecewiseFn({0.0, 1.0}, {0.0}), Weight::one(),
                                  W, 2.0);
    CHECK(zero["verdict"] == "PASS");
}

TEST_CASE("product rearrangement splits at half-argument") {
    // (f g)*_u(t) <= f*_u(t/2) g*_u(t/2) for the sampled steps themselves
    CumulativeWeight W(one_w());
    for (double a : {0.0, 0.5}) {
        Weight u = a == 0.0 ? Weight::one() : power_u(a);
        PiecewiseFn f({-1.0, 0.0, 1.0, 2.0}, {1.0, 2.0, 0.5});
        EvalGrid grid = EvalGrid::make(Interval(-9.0, 9.0), f.breakpoints(), 8, 4);
        PiecewiseFn hs = grid.sample([&](double x) { return hilbert(f, x); });
        PiecewiseFn fs = grid.sample([&](double x) { return f.value(x); });
        PiecewiseFn prod = PiecewiseFn::product(fs, hs);
        DecreasingStep pr = rearrange_u(prod, u);
        DecreasingStep fr = rearrange_u(fs, u);
        DecreasingStep hr = rearrange_u(hs, u);
        double prev = 0.0;
        for (double t : pr.block_ends()) {
            for (double s : {0.5 * (prev + t), t}) {
                if (!(s > 0.0)) continue;
                CHECK(pr.value(s) <=
                      fr.value(s / 2.0) * hr.value(s / 2.0) + 1e-9);
            }
            prev = t;
        }
    }
}

TEST_CASE("consistency harness") {
    auto classical = theorem11_harness(Weight::one(), one_w(), 2.0);
    CHECK(classical["consistent"] == true);
    CHECK(classical["probes"]["hilbert"]["verdict"] == "PASS");
    CHECK(classical["conditions"]["a_inf"]["verdict"] == "PASS");

    auto logw = theorem11_harness(Weight::one(), rational_w(), 2.0);
    CHECK(logw["consistent"] == true);
    CHECK(logw["conditions"]["bstar_inf"]["verdict"] == "FAIL-GROWTH");
    CHECK(logw["probes"]["hilbert"]["verdict"] != "PASS");
    CHECK(logw.contains("log_family"));

    auto heavy = theorem11_harness(power_u(5.0), one_w(), 2.0);
    CHECK(heavy["consistent"] == true);
    CHECK(heavy["probes"]["hilbert"]["verdict"] == "FAIL-GROWTH");
}

TEST_CASE("necessary-condition battery") {
    auto flat = necessary_battery(Weight::one(), one_w(), 1.0);
    CHECK(flat["verdict"] == "PASS");
    for (const auto& s : flat["set_pair"]["scales"])
        CHECK(s["estimate"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    auto heavy = necessary_battery(power_u(2.0), one_w(), 2.0);
    CHECK(heavy["set_pair"]["verdict"] == "FAIL-GROWTH");
    CHECK(heavy["verdict"] == "FAIL-GROWTH");
}

TEST_CASE("classical-scale specialization") {
    auto ok = lpq_specialization(Weight::one(), 2.0, 2.0);
    CHECK(ok["case"] == "(a)");
    CHECK(ok["match"] == true);
    CHECK(ok["verdict"] == "PASS");

    auto sub = lpq_specialization(Weight::one(), 0.5, 2.0);
    CHECK(sub["case"] == "p<1");
    CHECK(sub["match"] == true);
    CHECK(sub["verdict"] == "FAIL-GROWTH");

    auto edge = lpq_specialization(Weight::one(), 1.0, 2.0);
    CHECK(edge["case"] == "p=1,q>1");
    CHECK(edge["match"] == true);
    CHECK(edge["witnessed"] == true);  // flat density: polynomial-rate witness

    auto small_q = lpq_specialization(Weight::one(), 2.0, 0.5);
    CHECK(small_q["case"] == "(b)");
    CHECK(small_q["match"] == true);

    auto a1_case = lpq_specialization(Weight::one(), 1.0, 0.5);
    CHECK(a1_case["case"] == "(c)");
    CHECK(a1_case["match"] == true);

    CHECK_THROWS(lpq_specialization(Weight::one(), -1.0, 2.0));
}
