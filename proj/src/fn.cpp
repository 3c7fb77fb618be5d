#include "lorentzlab/fn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace lorentz {

double Interval::overlap(double lo, double hi) const {
    double left = std::max(a, lo), right = std::min(b, hi);
    return std::max(0.0, right - left);
}

MeasurableSet::MeasurableSet(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    for (const Interval& I : parts) {
        if (!parts_.empty() && I.a <= parts_.back().b) {
            if (I.a < parts_.back().a)
                throw std::invalid_argument("MeasurableSet: overlapping intervals");
            parts_.back().b = std::max(parts_.back().b, I.b);
        } else {
            parts_.push_back(I);
        }
    }
}

double MeasurableSet::measure() const {
    double m = 0.0;
    for (const Interval& I : parts_) m += I.length();
    return m;
}

MeasurableSet MeasurableSet::unite(const MeasurableSet& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return MeasurableSet(std::move(all));
}

PiecewiseFn::PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values,
                         TailPolicy tail, double tail_exponent, double tail_coefficient)
    : breaks_(std::move(breakpoints)),
      vals_(std::move(values)),
      tail_(tail),
      tail_exp_(tail_exponent),
      tail_coef_(tail_coefficient) {
    if (breaks_.size() < 2)
        throw std::invalid_argument("PiecewiseFn: need at least one cell");
    if (vals_.size() + 1 != breaks_.size())
        throw std::invalid_argument("PiecewiseFn: values/breakpoints size mismatch");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i - 1] < breaks_[i]))
            throw std::invalid_argument("PiecewiseFn: breakpoints must increase");
}

PiecewiseFn PiecewiseFn::indicator(Interval I, double height) {
    return PiecewiseFn({I.a, I.b}, {height});
}

double PiecewiseFn::value(double x) const {
    if (x < breaks_.front() || x >= breaks_.back()) {
        switch (tail_) {
            case TailPolicy::Zero: return 0.0;
            case TailPolicy::ConstantExtension:
                return x < breaks_.front() ? vals_.front() : vals_.back();
            case TailPolicy::PowerExtension:
                return tail_coef_ * std::pow(std::abs(x), tail_exp_);
        }
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t cell = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    if (cell >= vals_.size()) cell = vals_.size() - 1;
    return vals_[cell];
}

bool PiecewiseFn::is_zero() const {
    return std::all_of(vals_.begin(), vals_.end(), [](double v) { return v == 0.0; });
}

bool PiecewiseFn::all_positive() const {
    return std::all_of(vals_.begin(), vals_.end(), [](double v) { return v > 0.0; });
}

namespace {
// Antiderivative of |x|^a: sign(x) |x|^{a+1} / (a+1).
double power_antiderivative(double x, double a) {
    if (x == 0.0) return 0.0;
    if (a == -1.0) return std::log(std::abs(x));  // even part only; tails stay one-sided
    double s = x < 0 ? -1.0 : 1.0;
    return s * std::pow(std::abs(x), a + 1.0) / (a + 1.0);
}
}  // namespace

Mass PiecewiseFn::integrate(Interval J) const {
    Mass out;
    for (std::size_t k = 0; k < vals_.size(); ++k)
        out.value += vals_[k] * J.overlap(breaks_[k], breaks_[k + 1]);
    double lo = breaks_.front(), hi = breaks_.back();
    double left_out = J.overlap(-std::numeric_limits<double>::infinity(), lo);
    double right_out = J.overlap(hi, std::numeric_limits<double>::infinity());
    if (left_out > 0.0 || right_out > 0.0) {
        switch (tail_) {
            case TailPolicy::Zero:
                out.truncated = true;
                break;
            case TailPolicy::ConstantExtension:
                out.value += vals_.front() * left_out + vals_.back() * right_out;
                break;
            case TailPolicy::PowerExtension: {
                if (left_out > 0.0) {
                    double a = std::max(J.a, -std::numeric_limits<double>::max());
                    out.value += tail_coef_ * (power_antiderivative(lo, tail_exp_) -
                                               power_antiderivative(a, tail_exp_));
                }
                if (right_out > 0.0)
                    out.value += tail_coef_ * (power_antiderivative(J.b, tail_exp_) -
                                               power_antiderivative(hi, tail_exp_));
                break;
            }
        }
    }
    return out;
}

PiecewiseFn PiecewiseFn::abs() const {
    std::vector<double> v(vals_.size());
    std::transform(vals_.begin(), vals_.end(), v.begin(),
                   [](double x) { return std::abs(x); });
    return PiecewiseFn(breaks_, std::move(v), tail_, tail_exp_, std::abs(tail_coef_));
}

PiecewiseFn PiecewiseFn::scaled(double c) const {
    std::vector<double> v(vals_.size());
    std::transform(vals_.begin(), vals_.end(), v.begin(),
                   [c](double x) { return c * x; });
    return PiecewiseFn(breaks_, std::move(v), tail_, tail_exp_, c * tail_coef_);
}

namespace {
PiecewiseFn combine(const PiecewiseFn& f, const PiecewiseFn& g,
                    const std::function<double(double, double)>& op) {
    if (f.tail_policy() != TailPolicy::Zero || g.tail_policy() != TailPolicy::Zero)
        throw std::invalid_argument("combine: zero tails required");
    std::vector<double> grid;
    grid.reserve(f.breakpoints().size() + g.breakpoints().size());
    std::merge(f.breakpoints().begin(), f.breakpoints().end(),
               g.breakpoints().begin(), g.breakpoints().end(),
               std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> vals(grid.size() - 1);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        double mid = 0.5 * (grid[k] + grid[k + 1]);
        vals[k] = op(f.value(mid), g.value(mid));
    }
    return PiecewiseFn(std::move(grid), std::move(vals));
}
}  // namespace

PiecewiseFn PiecewiseFn::linear_combination(double alpha, const PiecewiseFn& f,
                                            double beta, const PiecewiseFn& g) {
    return combine(f, g, [alpha, beta](double x, double y) { return alpha * x + beta * y; });
}

PiecewiseFn PiecewiseFn::product(const PiecewiseFn& f, const PiecewiseFn& g) {
    return combine(f, g, [](double x, double y) { return x * y; });
}

AnalyticWeight AnalyticWeight::power(double exponent, double center) {
    if (exponent <= -1.0)
        throw std::invalid_argument("AnalyticWeight: exponent must be > -1");
    AnalyticWeight w;
    w.kind_ = Kind::Power;
    w.exponent_ = exponent;
    w.center_ = center;
    return w;
}

AnalyticWeight AnalyticWeight::rational() {
    AnalyticWeight w;
    w.kind_ = Kind::Rational;
    return w;
}

double AnalyticWeight::value(double x) const {
    if (kind_ == Kind::Power) return std::pow(std::abs(x - center_), exponent_);
    return x > -1.0 ? 1.0 / (1.0 + x) : 0.0;
}

double AnalyticWeight::integral(double a, double b) const {
    if (a >= b) return 0.0;
    if (kind_ == Kind::Power)
        return power_antiderivative(b - center_, exponent_) -
               power_antiderivative(a - center_, exponent_);
    return std::log1p(b) - std::log1p(a);
}

Weight::Weight(PiecewiseFn step, bool half_line)
    : impl_(std::move(step)), half_line_(half_line) {
    if (!this->step().all_positive())
        throw std::invalid_argument("Weight: step values must be positive");
}

Weight::Weight(AnalyticWeight analytic, bool half_line)
    : impl_(analytic), half_line_(half_line) {
    if (analytic.kind() == AnalyticWeight::Kind::Rational && !half_line)
        throw std::invalid_argument("Weight: rational family lives on the half-line");
}

double Weight::value(double x) const {
    if (half_line_ && x <= 0.0) return 0.0;
    return is_step() ? step().value(x) : analytic().value(x);
}

Mass Weight::integrate(Interval J) const {
    double lo = J.a, hi = J.b;
    if (half_line_) {
        lo = std::max(lo, 0.0);
        if (hi <= lo) return {};
    }
    if (is_step()) return step().integrate(Interval(lo, hi));
    return {analytic().integral(lo, hi), false};
}

double Weight::measure(const MeasurableSet& E) const {
    double m = 0.0;
    for (const Interval& I : E.components()) m += integrate(I).value;
    return m;
}

std::optional<double> Weight::singular_point() const {
    if (is_analytic() && analytic().kind() == AnalyticWeight::Kind::Power &&
        analytic().exponent() != 0.0)
        return analytic().center();
    return std::nullopt;
}

std::vector<double> Weight::scan_points() const {
    if (is_step()) return step().breakpoints();
    if (auto c = singular_point()) return {*c};
    return {0.0};
}

PiecewiseFn Weight::sample_step(Interval I, int cells_per_side, int splits) const {
    double center = singular_point().value_or(I.center());
    std::vector<double> pts{I.a, I.b};
    auto push_side = [&](double edge) {
        double d = std::abs(edge - center);
        if (d <= 0.0) return;
        double sign = edge > center ? 1.0 : -1.0;
        for (int j = 1; j <= cells_per_side; ++j) {
            double r = d * std::pow(0.5, j / static_cast<double>(splits));
            double x = center + sign * r;
            if (I.contains(x)) pts.push_back(x);
        }
    };
    if (I.contains(center)) {
        pts.push_back(center);
        push_side(I.a);
        push_side(I.b);
    } else {
        // center outside: geometric refinement toward the nearer edge
        double near = std::abs(I.a - center) < std::abs(I.b - center) ? I.a : I.b;
        double far = near == I.a ? I.b : I.a;
        double sign = far > near ? 1.0 : -1.0;
        for (int j = 1; j <= cells_per_side; ++j) {
            double x = near + sign * I.length() * std::pow(0.5, j / static_cast<double>(splits));
            if (I.contains(x)) pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> vals(pts.size() - 1);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double len = pts[k + 1] - pts[k];
        double cellmass = integrate(Interval(pts[k], pts[k + 1])).value;
        vals[k] = std::max(cellmass / len, std::numeric_limits<double>::min());
    }
    return PiecewiseFn(std::move(pts), std::move(vals));
}

double measure_u(const Weight& u, const MeasurableSet& E) { return u.measure(E); }

namespace {

MeasurableSet greedy_step_subset(const PiecewiseFn& u, Interval I, double target,
                                 bool maximize) {
    struct Cell {
        double a, b, v;
    };
    std::vector<Cell> cells;
    std::vector<double> cuts{I.a, I.b};
    for (double c : u.breakpoints())
        if (I.contains(c)) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        cells.push_back({cuts[k], cuts[k + 1], u.value(0.5 * (cuts[k] + cuts[k + 1]))});
    std::stable_sort(cells.begin(), cells.end(), [&](const Cell& x, const Cell& y) {
        if (x.v != y.v) return maximize ? x.v > y.v : x.v < y.v;
        return x.a < y.a;  // leftmost ties
    });
    std::vector<Interval> parts;
    double remaining = target;
    for (const Cell& c : cells) {
        if (remaining <= 0.0) break;
        double take = std::min(remaining, c.b - c.a);
        parts.emplace_back(c.a, c.a + take);  // leftmost slice of the marginal cell
        remaining -= take;
    }
    return MeasurableSet(std::move(parts));
}

// |{x in I : |x - c| <= T}| for I = (a, b).
double near_measure(double a, double b, double c, double T) {
    double lo = std::max(a, c - T), hi = std::min(b, c + T);
    return std::max(0.0, hi - lo);
}

MeasurableSet power_subset(double center, double exponent, Interval I, double target,
                           bool near_center) {
    double a = I.a, b = I.b;
    if (near_center) {
        // threshold T with |{|x-c| <= T} cap I| = target (monotone in T)
        double lo = 0.0, hi = std::max(std::abs(a - center), std::abs(b - center));
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (near_measure(a, b, center, mid) < target ? lo : hi) = mid;
        }
        double T = 0.5 * (lo + hi);
        double s_lo = std::max(a, center - T), s_hi = std::min(b, center + T);
        if (s_hi - s_lo < target) {  // center outside I: take the near end
            if (center <= a) return MeasurableSet::single(Interval(a, a + target));
            return MeasurableSet::single(Interval(b - target, b));
        }
        return MeasurableSet::single(Interval(s_lo, s_hi));
    }
    // far from center: complement of a near-selection of measure |I| - target
    double keep = I.length() - target;
    if (keep <= 0.0) return MeasurableSet::single(I);
    MeasurableSet near = power_subset(center, exponent, I, keep, true);
    const Interval& N = near.components().front();
    std::vector<Interval> parts;
    if (N.a > a) parts.emplace_back(a, N.a);
    if (N.b < b) parts.emplace_back(N.b, b);
    if (parts.empty()) parts.emplace_back(a, a + target);
    return MeasurableSet(std::move(parts));
}

}  // namespace

MeasurableSet extremal_subset(const Weight& u, Interval I, double fraction,
                              bool maximize) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("extremal_subset: fraction must lie in (0,1)");
    double target = fraction * I.length();
    if (u.is_step()) return greedy_step_subset(u.step(), I, target, maximize);
    const AnalyticWeight& w = u.analytic();
    if (w.kind() == AnalyticWeight::Kind::Power) {
        if (w.exponent() == 0.0)
            return MeasurableSet::single(Interval(I.a, I.a + target));
        bool near = maximize == (w.exponent() < 0.0);
        return power_subset(w.center(), w.exponent(), I, target, near);
    }
    // rational 1/(1+t) is decreasing on the half-line
    bool near_zero = maximize;
    if (near_zero) return MeasurableSet::single(Interval(I.a, I.a + target));
    return MeasurableSet::single(Interval(I.b - target, I.b));
}

namespace {
std::string tail_name(TailPolicy t) {
    switch (t) {
        case TailPolicy::Zero: return "zero";
        case TailPolicy::ConstantExtension: return "constant";
        case TailPolicy::PowerExtension: return "power";
    }
    return "zero";
}
TailPolicy tail_from_name(const std::string& s) {
    if (s == "zero") return TailPolicy::Zero;
    if (s == "constant") return TailPolicy::ConstantExtension;
    if (s == "power") return TailPolicy::PowerExtension;
    throw std::invalid_argument("unknown tail policy: " + s);
}
}  // namespace

nlohmann::json to_json(const PiecewiseFn& f) {
    nlohmann::json j{{"kind", "step"},
                     {"breakpoints", f.breakpoints()},
                     {"values", f.values()},
                     {"tail", tail_name(f.tail_policy())}};
    if (f.tail_policy() == TailPolicy::PowerExtension) {
        j["tail_exponent"] = f.tail_exponent();
        j["tail_coefficient"] = f.tail_coefficient();
    }
    return j;
}

PiecewiseFn piecewise_from_json(const nlohmann::json& j) {
    TailPolicy tail = tail_from_name(j.value("tail", "zero"));
    return PiecewiseFn(j.at("breakpoints").get<std::vector<double>>(),
                       j.at("values").get<std::vector<double>>(), tail,
                       j.value("tail_exponent", 0.0), j.value("tail_coefficient", 0.0));
}

nlohmann::json to_json(const Weight& w) {
    if (w.is_step()) return to_json(w.step());
    const AnalyticWeight& a = w.analytic();
    if (a.kind() == AnalyticWeight::Kind::Power)
        return nlohmann::json{{"kind", "power"}, {"exponent", a.exponent()}, {"center", a.center()}};
    return nlohmann::json{{"kind", "rational"}};
}

Weight weight_from_json(const nlohmann::json& j, bool half_line) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "step") return Weight(piecewise_from_json(j), half_line);
    if (kind == "power")
        return Weight(AnalyticWeight::power(j.at("exponent").get<double>(), j.value("center", 0.0)),
                      half_line);
    if (kind == "rational") return Weight(AnalyticWeight::rational(), half_line);
    throw std::invalid_argument("unknown weight kind: " + kind);
}

nlohmann::json to_json(const MeasurableSet& E) {
    nlohmann::json parts = nlohmann::json::array();
    for (const Interval& I : E.components()) parts.push_back({I.a, I.b});
    return parts;
}

}  // namespace lorentz
