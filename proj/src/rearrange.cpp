#include "lorentzlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lorentz {

double DecreasingStep::total_support() const {
    double s = 0.0;
    for (double w : widths) s += w;
    return s;
}

double DecreasingStep::value(double t) const {
    if (t < 0.0) return levels.empty() ? 0.0 : levels.front();
    double acc = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        acc += widths[k];
        if (t < acc) return levels[k];
    }
    return 0.0;
}

std::vector<double> DecreasingStep::block_ends() const {
    std::vector<double> ends(levels.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        acc += widths[k];
        ends[k] = acc;
    }
    return ends;
}

double DecreasingStep::superlevel_measure(double y) const {
    double m = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k)
        if (levels[k] > y) m += widths[k];
    return m;
}

double distribution_u(const PiecewiseFn& f, double y, const Weight& u) {
    if (y < 0.0) y = 0.0;
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    double m = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (std::abs(v[k]) > y) m += u.integrate(Interval(bp[k], bp[k + 1])).value;
    return m;
}

DecreasingStep rearrange_u(const PiecewiseFn& f, const Weight& u) {
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    // u-mass of cells grouped by |value|, descending
    std::map<double, double, std::greater<double>> mass_by_level;
    bool truncated = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
        double lv = std::abs(v[k]);
        if (lv == 0.0) continue;
        Mass m = u.integrate(Interval(bp[k], bp[k + 1]));
        truncated = truncated || m.truncated;
        mass_by_level[lv] += m.value;
    }
    DecreasingStep out;
    out.truncated = truncated;
    for (const auto& [lv, m] : mass_by_level) {
        if (m <= 0.0) continue;
        out.levels.push_back(lv);
        out.widths.push_back(m);
    }
    return out;
}

Flagged lambda_norm(const DecreasingStep& g, const CumulativeWeight& W, double p) {
    double acc = 0.0, T_prev = 0.0, W_prev = 0.0;
    for (std::size_t k = 0; k < g.levels.size(); ++k) {
        double T = T_prev + g.widths[k];
        double Wk = W(T);
        if (!std::isfinite(Wk)) return Flagged::inf();
        acc += std::pow(g.levels[k], p) * (Wk - W_prev);
        T_prev = T;
        W_prev = Wk;
    }
    return Flagged::of(std::pow(acc, 1.0 / p));
}

Flagged lambda_norm(const PiecewiseFn& f, const Weight& u, const CumulativeWeight& W,
                    double p) {
    return lambda_norm(rearrange_u(f, u), W, p);
}

double lambda_weak_norm(const DecreasingStep& g, const CumulativeWeight& W, double p) {
    double best = 0.0, T = 0.0;
    for (std::size_t k = 0; k < g.levels.size(); ++k) {
        T += g.widths[k];
        best = std::max(best, g.levels[k] * std::pow(W(T), 1.0 / p));
    }
    return best;
}

double lambda_weak_norm(const PiecewiseFn& f, const Weight& u,
                        const CumulativeWeight& W, double p) {
    return lambda_weak_norm(rearrange_u(f, u), W, p);
}

Flagged lambda_qp_norm(const DecreasingStep& g, const CumulativeWeight& W, double q,
                       double p) {
    double acc = 0.0, T = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < g.levels.size(); ++k) {
        T += g.widths[k];
        double cur = (q / p) * std::pow(W(T), p / q);
        if (!std::isfinite(cur)) return Flagged::inf();
        acc += std::pow(g.levels[k], p) * (cur - prev);
        prev = cur;
    }
    return Flagged::of(std::pow(acc, 1.0 / p));
}

Flagged lambda_qp_norm(const PiecewiseFn& f, const Weight& u,
                       const CumulativeWeight& W, double q, double p) {
    return lambda_qp_norm(rearrange_u(f, u), W, q, p);
}

Flagged associate_norm_indicator(const MeasurableSet& E, const Weight& u,
                                 const CumulativeWeight& W, double p) {
    return W.assoc_primitive(u.measure(E), p);
}

nlohmann::json to_json(const DecreasingStep& g) {
    return nlohmann::json{{"levels", g.levels}, {"widths", g.widths}};
}

DecreasingStep decreasing_step_from_json(const nlohmann::json& j) {
    DecreasingStep g;
    g.levels = j.at("levels").get<std::vector<double>>();
    g.widths = j.at("widths").get<std::vector<double>>();
    return g;
}

}  // namespace lorentz
