// Exact calculus for piecewise-constant functions and analytic weight
// families on the line and the half-line.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace lorentz {

/// Open interval (a, b) with a < b.
struct Interval {
    double a = 0.0;
    double b = 0.0;

    Interval() = default;
    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!(lo < hi)) throw std::invalid_argument("Interval: need a < b");
    }

    double length() const { return b - a; }
    double center() const { return 0.5 * (a + b); }
    bool contains(double x) const { return a < x && x < b; }

    /// Interval with the same center and `factor` times the length.
    Interval dilate(double factor) const {
        double c = center(), h = 0.5 * factor * length();
        return Interval(c - h, c + h);
    }
    /// Overlap length with (lo, hi); 0 if disjoint.
    double overlap(double lo, double hi) const;
};

/// Finite disjoint union of intervals, kept sorted and merged.
class MeasurableSet {
  public:
    MeasurableSet() = default;
    explicit MeasurableSet(std::vector<Interval> parts);
    static MeasurableSet single(Interval I) { return MeasurableSet({I}); }

    const std::vector<Interval>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    double measure() const;

    MeasurableSet unite(const MeasurableSet& other) const;

  private:
    std::vector<Interval> parts_;
};

enum class TailPolicy : std::uint8_t { Zero, ConstantExtension, PowerExtension };

/// Result of an integral that may have been clipped to the window.
struct Mass {
    double value = 0.0;
    bool truncated = false;
};

/// Right-open step function on its window, with a tail policy outside.
/// Cells are (breakpoints[k], breakpoints[k+1]) with constant value values[k].
class PiecewiseFn {
  public:
    PiecewiseFn() = default;
    PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values,
                TailPolicy tail = TailPolicy::Zero,
                double tail_exponent = 0.0, double tail_coefficient = 0.0);

    /// Indicator of an interval.
    static PiecewiseFn indicator(Interval I, double height = 1.0);

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return vals_; }
    TailPolicy tail_policy() const { return tail_; }
    double tail_exponent() const { return tail_exp_; }
    double tail_coefficient() const { return tail_coef_; }

    Interval window() const { return Interval(breaks_.front(), breaks_.back()); }
    std::size_t cell_count() const { return vals_.size(); }

    double value(double x) const;
    bool is_zero() const;
    bool all_positive() const;

    /// Exact integral over J (closed-form tails; truncation flagged under
    /// TailPolicy::Zero when J sticks out of the window).
    Mass integrate(Interval J) const;

    PiecewiseFn abs() const;
    PiecewiseFn scaled(double c) const;

    /// alpha*f + beta*g on the merged breakpoint grid. Zero tails only.
    static PiecewiseFn linear_combination(double alpha, const PiecewiseFn& f,
                                          double beta, const PiecewiseFn& g);
    /// Pointwise product on the merged grid. Zero tails only.
    static PiecewiseFn product(const PiecewiseFn& f, const PiecewiseFn& g);

  private:
    std::vector<double> breaks_;
    std::vector<double> vals_;
    TailPolicy tail_ = TailPolicy::Zero;
    double tail_exp_ = 0.0;
    double tail_coef_ = 0.0;
};

/// Weight families with exact antiderivatives: |x - center|^a on the line
/// (or t^b on the half-line) and 1/(1+t) on the half-line.
class AnalyticWeight {
  public:
    enum class Kind : std::uint8_t { Power, Rational };

    static AnalyticWeight power(double exponent, double center = 0.0);
    static AnalyticWeight rational();

    Kind kind() const { return kind_; }
    double exponent() const { return exponent_; }
    double center() const { return center_; }

    double value(double x) const;
    /// Exact integral over (a, b).
    double integral(double a, double b) const;

  private:
    Kind kind_ = Kind::Power;
    double exponent_ = 0.0;
    double center_ = 0.0;
};

/// A weight: either a positive step function or an analytic family.
/// `half_line` restricts the domain to (0, inf) (weights w live there).
class Weight {
  public:
    Weight() : impl_(AnalyticWeight::power(0.0)) {}
    explicit Weight(PiecewiseFn step, bool half_line = false);
    explicit Weight(AnalyticWeight analytic, bool half_line = false);

    static Weight one() { return Weight(AnalyticWeight::power(0.0)); }

    bool is_step() const { return std::holds_alternative<PiecewiseFn>(impl_); }
    bool is_analytic() const { return !is_step(); }
    bool half_line() const { return half_line_; }
    const PiecewiseFn& step() const { return std::get<PiecewiseFn>(impl_); }
    const AnalyticWeight& analytic() const { return std::get<AnalyticWeight>(impl_); }

    double value(double x) const;
    Mass integrate(Interval J) const;
    /// u(E) as a plain number (truncation folded in; see integrate for flags).
    double measure(const MeasurableSet& E) const;
    double measure(Interval I) const { return integrate(I).value; }

    /// Singular point of the family (power center), if any.
    std::optional<double> singular_point() const;
    /// Breakpoints relevant for candidate-interval scans.
    std::vector<double> scan_points() const;

    /// Step sampling on I with cells refined geometrically toward the
    /// singular point; cell values are exact cell averages.
    PiecewiseFn sample_step(Interval I, int cells_per_side = 48,
                            int splits = 2) const;

  private:
    std::variant<PiecewiseFn, AnalyticWeight> impl_;
    bool half_line_ = false;
};

/// u-measure of E (sum over components; empty E gives 0).
double measure_u(const Weight& u, const MeasurableSet& E);

/// Subset S of I with |S| = fraction*|I| minimizing (or maximizing) u(S).
/// Step weights: greedy by cell value, leftmost ties, marginal cell split.
/// Power weights: exact distance-to-center threshold.
MeasurableSet extremal_subset(const Weight& u, Interval I, double fraction,
                              bool maximize);

inline MeasurableSet sublevel_subset(const Weight& u, Interval I, double fraction) {
    return extremal_subset(u, I, fraction, /*maximize=*/false);
}
inline MeasurableSet superlevel_subset(const Weight& u, Interval I, double fraction) {
    return extremal_subset(u, I, fraction, /*maximize=*/true);
}

// JSON wire format:
//   {"kind":"step","breakpoints":[...],"values":[...],"tail":"zero"}
//   {"kind":"power","exponent":a,"center":x0}
//   {"kind":"rational"}
nlohmann::json to_json(const PiecewiseFn& f);
PiecewiseFn piecewise_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Weight& w);
Weight weight_from_json(const nlohmann::json& j, bool half_line);
nlohmann::json to_json(const MeasurableSet& E);

}  // namespace lorentz
