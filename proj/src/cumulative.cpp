#include "lorentzlab/cumulative.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace lorentz {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson(const std::function<double(double)>& g, double a, double b) {
    return (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = simpson(g, a, m), right = simpson(g, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(g, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(g, m, b, right, 0.5 * tol, depth - 1);
}

double integrate_smooth(const std::function<double(double)>& g, double a, double b,
                        double tol = 1e-13) {
    if (!(a < b)) return 0.0;
    return adaptive_simpson(g, a, b, simpson(g, a, b), tol, 48);
}

// Real dilogarithm Li2(x) for x <= 1/2 via series, extended by the standard
// reflection identities where needed.
double li2_series(double z) {  // |z| <= 1/2
    double term = z, sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        sum += term / (k * static_cast<double>(k));
        term *= z;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double li2(double x) {  // x < 1
    if (x < -1.0) {
        // Li2(x) = -pi^2/6 - ln^2(-x)/2 - Li2(1/x)
        double l = std::log(-x);
        return -kPi * kPi / 6.0 - 0.5 * l * l - li2(1.0 / x);
    }
    if (x <= 0.5) return li2_series(x);
    // 1/2 < x < 1: Li2(x) = pi^2/6 - ln(x)ln(1-x) - Li2(1-x)
    return kPi * kPi / 6.0 - std::log(x) * std::log1p(-x) - li2_series(1.0 - x);
}

double pow_int(double t, double e) {  // antiderivative of t^e on (0, inf)
    return std::pow(t, e + 1.0) / (e + 1.0);
}

}  // namespace

CumulativeWeight::CumulativeWeight(Weight w) : w_(std::move(w)) {
    if (!w_.half_line())
        throw std::invalid_argument("CumulativeWeight: w must live on the half-line");
    if (w_.is_step()) {
        const auto& bp = w_.step().breakpoints();
        if (bp.front() < 0.0)
            throw std::invalid_argument("CumulativeWeight: step w needs breakpoints >= 0");
        prefix_.resize(bp.size());
        prefix_[0] = w_.integrate(Interval(-1.0, bp.front() > 0 ? bp.front() : 1.0)).value;
        if (bp.front() == 0.0) prefix_[0] = 0.0;
        for (std::size_t k = 1; k < bp.size(); ++k)
            prefix_[k] = prefix_[k - 1] +
                         w_.step().values()[k - 1] * (bp[k] - bp[k - 1]);
    }
}

double CumulativeWeight::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (!w_.is_step()) {
        const auto& a = w_.analytic();
        if (a.kind() == AnalyticWeight::Kind::Power)
            return pow_int(t, a.exponent());
        return std::log1p(t);
    }
    const auto& f = w_.step();
    const auto& bp = f.breakpoints();
    if (t <= bp.front()) return w_.integrate(Interval(-1.0, t)).value;
    auto it = std::upper_bound(bp.begin(), bp.end(), t);
    if (it == bp.end()) {
        double T = bp.back(), WT = prefix_.back();
        switch (f.tail_policy()) {
            case TailPolicy::Zero: return WT;
            case TailPolicy::ConstantExtension: return WT + f.values().back() * (t - T);
            case TailPolicy::PowerExtension:
                return WT + f.tail_coefficient() * (pow_int(t, f.tail_exponent()) -
                                                    pow_int(T, f.tail_exponent()));
        }
    }
    std::size_t k = static_cast<std::size_t>(it - bp.begin()) - 1;
    return prefix_[k] + f.values()[k] * (t - bp[k]);
}

double CumulativeWeight::inverse(double s) const {
    if (s <= 0.0) return 0.0;
    if (!w_.is_step()) {
        const auto& a = w_.analytic();
        if (a.kind() == AnalyticWeight::Kind::Power)
            return std::pow((a.exponent() + 1.0) * s, 1.0 / (a.exponent() + 1.0));
        return std::expm1(s);
    }
    const auto& f = w_.step();
    const auto& bp = f.breakpoints();
    if (s <= prefix_.front()) {
        // head region (0, bp.front()); strictly increasing only for
        // nonzero head policies
        double lo = 0.0, hi = bp.front();
        for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            ((*this)(mid) < s ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    auto it = std::lower_bound(prefix_.begin(), prefix_.end(), s);
    if (it == prefix_.end()) {
        double T = bp.back(), WT = prefix_.back();
        switch (f.tail_policy()) {
            case TailPolicy::Zero: return std::numeric_limits<double>::infinity();
            case TailPolicy::ConstantExtension:
                return T + (s - WT) / f.values().back();
            case TailPolicy::PowerExtension: {
                double e = f.tail_exponent();
                double te = pow_int(T, e) + (s - WT) / f.tail_coefficient();
                return std::pow((e + 1.0) * te, 1.0 / (e + 1.0));
            }
        }
    }
    std::size_t k = static_cast<std::size_t>(it - prefix_.begin());
    if (k == 0) return bp[0];
    return bp[k - 1] + (s - prefix_[k - 1]) / f.values()[k - 1];
}

namespace {
// int_c^d (Wc + v (t - c)) / t dt, exact (c >= 0).
double linear_piece_log_primitive(double c, double d, double Wc, double v) {
    if (d <= c) return 0.0;
    if (c == 0.0) return v * d;  // Wc = 0 at the origin
    return (Wc - v * c) * std::log(d / c) + v * (d - c);
}
}  // namespace

double CumulativeWeight::log_primitive(double r) const {
    if (r <= 0.0) return 0.0;
    if (!w_.is_step()) {
        const auto& a = w_.analytic();
        if (a.kind() == AnalyticWeight::Kind::Power)
            return (*this)(r) / (a.exponent() + 1.0);
        return -li2(-r);
    }
    const auto& f = w_.step();
    const auto& bp = f.breakpoints();
    double acc = 0.0;
    double t0 = bp.front();
    if (t0 > 0.0) {
        double head = std::min(r, t0);
        switch (f.tail_policy()) {
            case TailPolicy::Zero: break;  // W = 0 there
            case TailPolicy::ConstantExtension:
                acc += f.values().front() * head;  // W(t) = v t
                break;
            case TailPolicy::PowerExtension:
                acc += f.tail_coefficient() * pow_int(head, f.tail_exponent()) /
                       (f.tail_exponent() + 1.0);
                break;
        }
        if (r <= t0) return acc;
    }
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double c = bp[k], d = std::min(r, bp[k + 1]);
        if (d <= c) break;
        acc += linear_piece_log_primitive(c, d, prefix_[k], f.values()[k]);
        if (r <= bp[k + 1]) return acc;
    }
    double T = bp.back(), WT = prefix_.back();
    if (r > T) {
        switch (f.tail_policy()) {
            case TailPolicy::Zero:
                acc += WT * std::log(r / T);
                break;
            case TailPolicy::ConstantExtension:
                acc += linear_piece_log_primitive(T, r, WT, f.values().back());
                break;
            case TailPolicy::PowerExtension: {
                double e = f.tail_exponent(), cf = f.tail_coefficient();
                acc += (WT - cf * pow_int(T, e)) * std::log(r / T) +
                       cf * (pow_int(r, e) - pow_int(T, e)) / (e + 1.0);
                break;
            }
        }
    }
    return acc;
}

namespace {
// int over (a, b) of v t^{-p} dt, 0 < a < b finite.
double power_slab(double v, double a, double b, double p) {
    if (b <= a) return 0.0;
    if (p == 1.0) return v * std::log(b / a);
    return v * (std::pow(b, 1.0 - p) - std::pow(a, 1.0 - p)) / (1.0 - p);
}
}  // namespace

Flagged CumulativeWeight::tail_p(double r, double p) const {
    if (!w_.is_step()) {
        const auto& a = w_.analytic();
        if (a.kind() == AnalyticWeight::Kind::Power) {
            double b = a.exponent();
            if (p <= b + 1.0) return Flagged::inf();
            return Flagged::of(std::pow(r, b + 1.0 - p) / (p - b - 1.0));
        }
        // 1/(1+t): convergent for every p > 0; substitute t = r / y^2
        auto g = [r, p](double y) {
            if (y <= 0.0) return 0.0;
            double t = r / (y * y);
            return (1.0 / ((1.0 + t) * std::pow(t, p))) * 2.0 * r / (y * y * y);
        };
        return Flagged::of(integrate_smooth(g, 1e-9, 1.0) + 0.0);
    }
    const auto& f = w_.step();
    const auto& bp = f.breakpoints();
    double acc = 0.0;
    double t0 = bp.front();
    if (r < t0) {
        double a = std::max(r, 1e-300);
        switch (f.tail_policy()) {
            case TailPolicy::Zero: break;
            case TailPolicy::ConstantExtension:
                if (p >= 1.0 && r <= 0.0) return Flagged::inf();
                acc += power_slab(f.values().front(), a, t0, p);
                break;
            case TailPolicy::PowerExtension: {
                double e = f.tail_exponent(), cf = f.tail_coefficient();
                if (e - p <= -1.0 && r <= 0.0) return Flagged::inf();
                acc += cf * (pow_int(t0, e - p) - pow_int(a, e - p));
                break;
            }
        }
    }
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double a = std::max(r, bp[k]);
        acc += power_slab(f.values()[k], std::max(a, 1e-300), bp[k + 1], p);
    }
    double T = std::max(r, bp.back());
    switch (f.tail_policy()) {
        case TailPolicy::Zero: break;
        case TailPolicy::ConstantExtension:
            if (p <= 1.0) return Flagged::inf();
            acc += f.values().back() * std::pow(T, 1.0 - p) / (p - 1.0);
            break;
        case TailPolicy::PowerExtension: {
            double e = f.tail_exponent(), cf = f.tail_coefficient();
            if (p <= e + 1.0) return Flagged::inf();
            acc += cf * std::pow(T, e + 1.0 - p) / (p - e - 1.0);
            break;
        }
    }
    return Flagged::of(acc);
}

namespace {
// int over (c, d) of (Wc + v (t - c))^{-1/p} dt, v > 0.
double linear_piece_assoc(double c, double d, double Wc, double v, double p) {
    if (d <= c) return 0.0;
    double Wd = Wc + v * (d - c);
    if (p == 1.0) return (std::log(Wd) - std::log(Wc)) / v;
    double e = 1.0 - 1.0 / p;
    return (std::pow(Wd, e) - std::pow(Wc, e)) / (v * e);
}
}  // namespace

Flagged CumulativeWeight::assoc_primitive(double s, double p) const {
    if (s <= 0.0) return Flagged::of(0.0);
    if (!w_.is_step()) {
        const auto& a = w_.analytic();
        if (a.kind() == AnalyticWeight::Kind::Power) {
            double b = a.exponent();
            double e = (b + 1.0) / p;
            if (e >= 1.0) return Flagged::inf();
            return Flagged::of(std::pow(b + 1.0, 1.0 / p) * std::pow(s, 1.0 - e) /
                               (1.0 - e));
        }
        // W(t) = log(1+t) ~ t at 0: integrable iff p > 1
        if (p <= 1.0) return Flagged::inf();
        double q = p / (p - 1.0);
        auto g = [this, s, q, p](double y) {
            double t = s * std::pow(y, q);
            double W = (*this)(t);
            if (W <= 0.0) return 0.0;
            return std::pow(W, -1.0 / p) * s * q * std::pow(y, q - 1.0);
        };
        return Flagged::of(integrate_smooth(g, 1e-12, 1.0));
    }
    const auto& f = w_.step();
    const auto& bp = f.breakpoints();
    double t0 = bp.front();
    double acc = 0.0;
    if (t0 > 0.0) {
        switch (f.tail_policy()) {
            case TailPolicy::Zero: return Flagged::inf();  // W vanishes on (0, t0)
            case TailPolicy::ConstantExtension: {
                if (p <= 1.0) return Flagged::inf();
                double v = f.values().front();
                double d = std::min(s, t0);
                acc += std::pow(v, -1.0 / p) * std::pow(d, 1.0 - 1.0 / p) /
                       (1.0 - 1.0 / p);
                break;
            }
            case TailPolicy::PowerExtension: {
                double e = f.tail_exponent(), cf = f.tail_coefficient();
                double ex = (e + 1.0) / p;
                if (ex >= 1.0) return Flagged::inf();
                double d = std::min(s, t0);
                acc += std::pow(cf / (e + 1.0), -1.0 / p) *
                       std::pow(d, 1.0 - ex) / (1.0 - ex);
                break;
            }
        }
        if (s <= t0) return Flagged::of(acc);
    } else if (p <= 1.0) {
        return Flagged::inf();  // W ~ v t at 0
    }
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double c = bp[k], d = std::min(s, bp[k + 1]);
        if (d <= c) break;
        if (prefix_[k] == 0.0 && c == 0.0) {
            double v = f.values()[k];
            acc += std::pow(v, -1.0 / p) * std::pow(d, 1.0 - 1.0 / p) /
                   (1.0 - 1.0 / p);
        } else {
            acc += linear_piece_assoc(c, d, prefix_[k], f.values()[k], p);
        }
        if (s <= bp[k + 1]) return Flagged::of(acc);
    }
    double T = bp.back(), WT = prefix_.back();
    if (s > T) {
        switch (f.tail_policy()) {
            case TailPolicy::Zero:
                acc += std::pow(WT, -1.0 / p) * (s - T);
                break;
            case TailPolicy::ConstantExtension:
                acc += linear_piece_assoc(T, s, WT, f.values().back(), p);
                break;
            case TailPolicy::PowerExtension: {
                // numeric on the smooth tail piece
                auto g = [this, p](double t) { return std::pow((*this)(t), -1.0 / p); };
                acc += integrate_smooth(g, T, s);
                break;
            }
        }
    }
    return Flagged::of(acc);
}

}  // namespace lorentz
