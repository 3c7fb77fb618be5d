// Distribution functions, decreasing rearrangements with respect to a
// weight u, and the Lorentz functionals built from them.
#pragma once

#include <vector>

#include "lorentzlab/cumulative.hpp"
#include "lorentzlab/fn.hpp"

namespace lorentz {

/// Decreasing right-continuous step function on [0, total_support),
/// zero beyond. Block k has height levels[k] and u-measure widths[k].
struct DecreasingStep {
    std::vector<double> levels;  // strictly decreasing, positive
    std::vector<double> widths;  // positive
    bool truncated = false;      // support was clipped at the window

    bool empty() const { return levels.empty(); }
    double total_support() const;
    double value(double t) const;
    /// Right endpoints T_k of the blocks (cumulative widths).
    std::vector<double> block_ends() const;

    /// Lebesgue measure of {t : value(t) > y}; exact from the blocks.
    double superlevel_measure(double y) const;
};

/// u({ |f| > y }); decreasing and right-continuous in y.
double distribution_u(const PiecewiseFn& f, double y, const Weight& u);

/// Exact decreasing rearrangement of the step function f with respect to u.
DecreasingStep rearrange_u(const PiecewiseFn& f, const Weight& u);

struct LorentzParams {
    double p = 1.0;
    double q = 1.0;
};

/// ( int_0^inf g(t)^p w(t) dt )^{1/p} for a decreasing step g; exact block
/// sums against W. Divergent w-tails are flagged.
Flagged lambda_norm(const DecreasingStep& g, const CumulativeWeight& W, double p);
Flagged lambda_norm(const PiecewiseFn& f, const Weight& u, const CumulativeWeight& W,
                    double p);

/// sup_t g(t) W(t)^{1/p}; exact at block right-endpoints.
double lambda_weak_norm(const DecreasingStep& g, const CumulativeWeight& W, double p);
double lambda_weak_norm(const PiecewiseFn& f, const Weight& u,
                        const CumulativeWeight& W, double p);

/// Block formula with density W^{p/q-1} w, antiderivative (q/p) W^{p/q};
/// collapses to lambda_norm when q = p.
Flagged lambda_qp_norm(const DecreasingStep& g, const CumulativeWeight& W, double q,
                       double p);
Flagged lambda_qp_norm(const PiecewiseFn& f, const Weight& u,
                       const CumulativeWeight& W, double q, double p);

/// ||chi_E|| in the associate space of the weak Lorentz space:
/// int_0^{u(E)} W(t)^{-1/p} dt.
Flagged associate_norm_indicator(const MeasurableSet& E, const Weight& u,
                                 const CumulativeWeight& W, double p);

nlohmann::json to_json(const DecreasingStep& g);
DecreasingStep decreasing_step_from_json(const nlohmann::json& j);

}  // namespace lorentz
