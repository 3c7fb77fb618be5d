// The operators of the theory: Hilbert transform H (closed form on step
// functions), truncations H_eps, maximal Hilbert H*, Hardy-Littlewood
// maximal M, Hardy operators P and Q, and the Cotlar identity residual.
#pragma once

#include <functional>
#include <vector>

#include "lorentzlab/fn.hpp"
#include "lorentzlab/rearrange.hpp"

namespace lorentz {

/// Evaluation nodes kept clear of the operand's breakpoints (Hf blows up
/// logarithmically there). Each partition cell is split and midpoints taken.
class EvalGrid {
  public:
    /// Nodes over `window`: partition = sorted(breakpoints cup geometric
    /// dyadic points around `center`), each cell split `splits` times.
    static EvalGrid make(Interval window, const std::vector<double>& breakpoints,
                         int scale_depth = 12, int splits = 4, double center = 0.0);

    const std::vector<double>& nodes() const { return nodes_; }
    /// Partition cell edges; nodes are interior midpoints of the subcells.
    const std::vector<double>& edges() const { return edges_; }

    /// Step function with the grid's subcells, value(node) per subcell.
    PiecewiseFn sample(const std::function<double(double)>& fn) const;

  private:
    std::vector<double> nodes_;
    std::vector<double> edges_;
};

/// Hf(x) in closed form for a step function; throws if x sits essentially
/// on a jump of f (within 1e-6 of the adjacent cell width), where the
/// logarithm is meaningless.
double hilbert(const PiecewiseFn& f, double x);

/// Truncated transform over {|x-y| > eps}; exact cell clipping.
double hilbert_trunc(const PiecewiseFn& f, double x, double eps);

/// H*f(x) = sup_eps |H_eps f(x)|; the sup is scanned at the kink
/// distances |x - c_k| and one midpoint per smooth segment, where
/// eps -> H_eps f(x) is monotone for step f.
double hilbert_max(const PiecewiseFn& f, double x);

/// Hardy-Littlewood maximal function; exact for step f (candidate
/// endpoints: breakpoints and x itself).
double maximal(const PiecewiseFn& f, double x);

/// Pg(t) = (1/t) int_0^t g for a decreasing step g; exact.
double hardy_p(const DecreasingStep& g, double t);
/// Qg(t) = int_t^inf g(s) ds/s; exact (finite support).
double hardy_q(const DecreasingStep& g, double t);

/// Exact signed int over J of H f via the t ln t antiderivative.
double integral_hilbert(const PiecewiseFn& f, Interval J);

/// Exact int over J of |H f| using the t ln t antiderivative, locating
/// sign changes of Hf by bisection within cells.
double integral_abs_hilbert(const PiecewiseFn& f, Interval J);

struct CotlarResult {
    double residual = 0.0;  // normalized L2 residual of (Hf)^2 - f^2 - 2H(fHf)
    int resolution = 0;
};

/// Samples the smooth function `fn` (support `support`) at resolution n,
/// evaluates the Cotlar combination over `window`, and returns the L2
/// residual normalized by ||f^2||_{L2}.
CotlarResult cotlar_residual(const std::function<double(double)>& fn,
                             Interval support, Interval window, int n);

}  // namespace lorentz
