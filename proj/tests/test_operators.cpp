#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentzlab/operators.hpp"

using namespace lorentz;

namespace {

constexpr double kPi = 3.14159265358979323846;

PiecewiseFn unit_box() { return PiecewiseFn::indicator(Interval(0, 1)); }

PiecewiseFn random_step(std::mt19937_64& rng, int max_cells = 8) {
    std::uniform_int_distribution<int> nc(1, max_cells);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    std::uniform_real_distribution<double> V(-3.0, 3.0);
    std::vector<double> bp;
    int cells = nc(rng);
    for (int i = 0; i < cells + 1; ++i) bp.push_back(U(rng));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    while (bp.size() < 2) bp.push_back(bp.back() + 1.0);
    std::vector<double> vals(bp.size() - 1);
    for (auto& v : vals) v = V(rng);
    return PiecewiseFn(bp, vals);
}

}  // namespace

TEST_CASE("hilbert of the unit box matches the log formula") {
    PiecewiseFn f = unit_box();
    auto oracle = [](double x) { return std::log(std::abs(x / (x - 1.0))) / kPi; };
    CHECK(hilbert(f, 2.0) == doctest::Approx(std::log(2.0) / kPi).epsilon(1e-14));
    CHECK(hilbert(f, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(hilbert(f, -1.0) == doctest::Approx(-std::log(2.0) / kPi).epsilon(1e-14));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> X(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        double x = X(rng);
        if (std::abs(x) < 0.3 || std::abs(x - 1.0) < 0.3) continue;
        CHECK(hilbert(f, x) == doctest::Approx(oracle(x)).epsilon(1e-12));
    }
}

TEST_CASE("hilbert rejects points hugging a breakpoint") {
    PiecewiseFn f = unit_box();
    CHECK_THROWS_AS(hilbert(f, 1.0 + 1e-9), std::domain_error);
    CHECK_THROWS_AS(hilbert(f, -1e-9), std::domain_error);
    CHECK_NOTHROW(hilbert(f, 0.5));
}

TEST_CASE("hilbert is linear") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> C(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        PiecewiseFn f = random_step(rng), g = random_step(rng);
        double a = C(rng), b = C(rng);
        PiecewiseFn h = PiecewiseFn::linear_combination(a, f, b, g);
        double x = 9.0 + C(rng);  // safely outside both supports
        CHECK(hilbert(h, x) ==
              doctest::Approx(a * hilbert(f, x) + b * hilbert(g, x)).epsilon(1e-12));
    }
}

TEST_CASE("truncated transform clips cells exactly") {
    PiecewiseFn f = unit_box();
    // x = 1/4, eps = 1/4 keeps only (1/2, 1)
    CHECK(hilbert_trunc(f, 0.25, 0.25) ==
          doctest::Approx(-std::log(3.0) / kPi).epsilon(1e-14));
    // symmetric exclusion inside the cell changes nothing
    CHECK(hilbert_trunc(f, 0.5, 0.25) == doctest::Approx(0.0).epsilon(1e-14));
    // eps past the support gives zero
    CHECK(hilbert_trunc(f, 0.5, 3.0) == doctest::Approx(0.0).epsilon(1e-15));
    // far point, small eps: full transform
    CHECK(hilbert_trunc(f, 2.0, 0.5) ==
          doctest::Approx(std::log(2.0) / kPi).epsilon(1e-14));
}

TEST_CASE("maximal truncation dominates the principal value") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> X(-6.0, 6.0);
    for (int rep = 0; rep < 100; ++rep) {
        PiecewiseFn f = random_step(rng);
        double x = X(rng);
        try {
            double h = hilbert(f, x);
            CHECK(hilbert_max(f, x) >= std::abs(h) - 1e-12);
        } catch (const std::domain_error&) {
            continue;
        }
    }
}

TEST_CASE("maximal truncation beats cancellation for a sign pair") {
    // f = chi_(-1,0) - chi_(0,1); at x = 2 dropping the near cell wins
    PiecewiseFn f({-1, 0, 1}, {1, -1});
    double full = std::log(3.0 / 4.0) / kPi;  // ln(3/2) - ln 2
    CHECK(hilbert(f, 2.0) == doctest::Approx(full).epsilon(1e-14));
    CHECK(hilbert_max(f, 2.0) ==
          doctest::Approx(std::log(1.5) / kPi).epsilon(1e-13));
}

TEST_CASE("hardy-littlewood maximal on steps") {
    PiecewiseFn box = unit_box();
    CHECK(maximal(box, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(maximal(box, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    PiecewiseFn c({0, 1}, {4.0});
    CHECK(maximal(c, 0.3) == doctest::Approx(4.0).epsilon(1e-14));
    // 3 chi_(0,1) + chi_(2,4) at x = 3: best window is (0, 3)
    PiecewiseFn two({0, 1, 2, 4}, {3, 0, 1});
    CHECK(maximal(two, 3.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    // negative values enter through |f|
    PiecewiseFn neg({0, 1}, {-2.0});
    CHECK(maximal(neg, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hardy averaging operator P") {
    DecreasingStep g{{3.0, 1.0}, {1.0, 2.0}, false};
    CHECK(hardy_p(g, 0.5) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(hardy_p(g, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hardy_p(g, 4.0) == doctest::Approx(5.0 / 4.0).epsilon(1e-14));
    DecreasingStep box{{1.0}, {1.0}, false};
    CHECK(hardy_p(box, 0.7) == doctest::Approx(1.0));
    CHECK(hardy_p(box, 2.5) == doctest::Approx(1.0 / 2.5).epsilon(1e-14));
}

TEST_CASE("P preserves decreasingness") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> L(0.1, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        DecreasingStep g;
        double level = 10.0;
        for (int k = 0; k < 4; ++k) {
            level *= std::uniform_real_distribution<double>(0.3, 0.9)(rng);
            g.levels.push_back(level);
            g.widths.push_back(L(rng));
        }
        double prev = hardy_p(g, 1e-6);
        for (double t = 0.1; t < 12.0; t += 0.1) {
            double cur = hardy_p(g, t);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("hardy tail operator Q") {
    DecreasingStep g{{3.0, 1.0}, {1.0, 2.0}, false};
    CHECK(hardy_q(g, 0.5) ==
          doctest::Approx(3.0 * std::log(2.0) + std::log(3.0)).epsilon(1e-14));
    CHECK(hardy_q(g, 2.0) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
    CHECK(hardy_q(g, 5.0) == doctest::Approx(0.0));
    DecreasingStep box{{1.0}, {1.0}, false};
    CHECK(hardy_q(box, 0.25) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(std::isinf(hardy_q(box, 0.0)));
}

TEST_CASE("evaluation grid avoids operand breakpoints") {
    PiecewiseFn f({-1, 0, 0.5, 2}, {1, -2, 3});
    EvalGrid grid = EvalGrid::make(Interval(-4, 4), f.breakpoints(), 8, 4);
    for (double x : grid.nodes()) CHECK_NOTHROW(hilbert(f, x));
    // sampling a step function reproduces it at the nodes
    PiecewiseFn s = grid.sample([&](double x) { return f.value(x); });
    for (double x : grid.nodes())
        CHECK(s.value(x) == doctest::Approx(f.value(x)));
}

TEST_CASE("signed integral of Hf is exact") {
    PiecewiseFn f = unit_box();
    // int_1^2 Hf = (1/pi) int_1^2 ln(x/(x-1)) = 2 ln 2 / pi
    CHECK(integral_hilbert(f, Interval(1, 2)) ==
          doctest::Approx(2.0 * std::log(2.0) / kPi).epsilon(1e-13));
    // over the support the principal value integrates to zero by symmetry
    CHECK(integral_hilbert(f, Interval(0, 1)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("absolute integral of Hf handles the interior sign change") {
    PiecewiseFn f = unit_box();
    CHECK(integral_abs_hilbert(f, Interval(0, 1)) ==
          doctest::Approx(2.0 * std::log(2.0) / kPi).epsilon(1e-10));
    CHECK(integral_abs_hilbert(f, Interval(1, 2)) ==
          doctest::Approx(2.0 * std::log(2.0) / kPi).epsilon(1e-12));
    // |.| dominates the signed value on random steps and windows
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        PiecewiseFn g = random_step(rng);
        Interval J(-5.0, 5.0);
        CHECK(integral_abs_hilbert(g, J) >=
              std::abs(integral_hilbert(g, J)) - 1e-9);
    }
}

TEST_CASE("antisymmetry duality via exact cell integrals") {
    // int (Hf) g = - int f (Hg) for steps; both sides exact by antiderivative
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 50; ++rep) {
        PiecewiseFn f = random_step(rng), g = random_step(rng);
        auto pair = [](const PiecewiseFn& a, const PiecewiseFn& b) {
            // int (Ha) b over the cells of b
            double acc = 0.0;
            const auto& bp = b.breakpoints();
            const auto& v = b.values();
            for (std::size_t k = 0; k < v.size(); ++k)
                if (v[k] != 0.0)
                    acc += v[k] * integral_hilbert(a, Interval(bp[k], bp[k + 1]));
            return acc;
        };
        double lhs = pair(f, g), rhs = -pair(g, f);
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11 * scale));
    }
}

TEST_CASE("cotlar identity residual contracts under refinement") {
    auto bump = [](double x) {
        double s = 1.0 - x * x;
        return x > -1.0 && x < 1.0 ? s * s : 0.0;
    };
    Interval support(-1, 1), window(-2, 2);
    double prev = cotlar_residual(bump, support, window, 1 << 8).residual;
    CHECK(prev < 0.5);
    for (int k = 9; k <= 11; ++k) {
        double cur = cotlar_residual(bump, support, window, 1 << k).residual;
        CHECK(cur <= 0.7 * prev);
        prev = cur;
    }
    CHECK(prev < 5e-2);
}
