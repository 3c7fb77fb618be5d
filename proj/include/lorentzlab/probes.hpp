// Adversarial weak-type probes: lower bounds of operator quasi-norms over
// structured witness families, the interval-geometry constructions behind
// the maximal-function reduction, and the consistency harnesses tying the
// certifiers to the observed operator behaviour.
#pragma once

#include <cstdint>
#include <utility>

#include "lorentzlab/operators.hpp"
#include "lorentzlab/weights.hpp"

namespace lorentz {

enum class ProbeOp : std::uint8_t { Identity, Maximal, Hilbert, HilbertMax };
const char* probe_op_name(ProbeOp op);

struct ProbeConfig {
    int scale_depth = 12;        // dyadic grid depth and window radius 2^depth
    int splits = 4;              // subcells per grid cell
    int random_count = 20;       // seeded random step functions
    double growth_factor = 2.0;  // refutation threshold
};

/// Disjoint intervals {I_i} with the derived geometry the constructions
/// use: the 101-dilations I_i* and the shifted copies I_{i,j} of the same
/// length at distance (|j|-1)|I_i|.
struct IntervalFamily {
    std::vector<Interval> intervals;

    /// The 101-dilations are pairwise disjoint.
    bool well_separated() const;
    Interval dilated(std::size_t i, double factor = 101.0) const;
    /// I_{i,j}: j = 0 is I_i itself; j > 0 stacks to the right, j < 0 to
    /// the left, dist(I_{i,j}, I_i) = (|j|-1)|I_i|.
    Interval shifted(std::size_t i, int j) const;

    MeasurableSet as_set() const;
};

struct WeakTypeEstimate {
    std::string op;
    std::vector<ScaleEstimate> scales;  // worst witness series
    std::string worst_family;
    double max_ratio = 0.0;
    nlohmann::json witness;
    Verdict verdict = Verdict::Pass;
};
nlohmann::json to_json(const WeakTypeEstimate& e);

/// ||Tf||_{weak Lambda} / ||f||_{Lambda}, with Tf sampled on an EvalGrid
/// (identity is exact). A lower bound: grid sampling only loses mass.
/// Throws when the denominator is zero or divergent.
double weak_type_ratio(ProbeOp T, const PiecewiseFn& f, const Weight& u,
                       const CumulativeWeight& W, double p, ProbeConfig cfg = {});

/// Maximizes weak_type_ratio over witness families:
///   dyadic-small/-large  indicators anchored at the singular point
///   density-window       f = u chi_I shrinking onto the singular point
///   random-step          seeded random step functions
///   separated-sum        sums of indicators over well-separated families
///   shrinking-pair       odd pairs chi_(-b,-vb) - chi_(vb,b), v = 2^-m
///   harmonic-stack       f = 2^-i on (2^i, 2^{i+1}), i < k
/// `families` filters by name (empty = all). Verdict: FAIL-GROWTH when any
/// series keeps growing across its scales.
WeakTypeEstimate probe_operator(ProbeOp T, const Weight& u, const Weight& w,
                                double p, std::uint64_t seed = 0,
                                std::vector<std::string> families = {},
                                ProbeConfig cfg = {});

/// sup_I (1/u(I)) int_I |H(u chi_I)|, scanned over intervals anchored at
/// the singular point and away from it, organized by log2 |I|.
ClassVerdict cp_interval_test(const Weight& u, ScanConfig cfg = {});

/// ( int_F |H(u chi_E)| / W^{1/p}(u(F)),  u(E) / W^{1/p}(u(E)) ).
/// The harness compares left <= C right over scanned pairs. Requires p > 1.
std::pair<double, double> dual_test_lemma35(const Weight& u,
                                            const CumulativeWeight& W, double p,
                                            const MeasurableSet& E,
                                            const MeasurableSet& F);

/// For b in `scales` and dyadic v: W(u(-bv,bv))/W(u(-b,b)) against
/// C (1+log(1/v))^{-p}; fits the least admissible C per b. PASS iff the
/// fitted C stays stable as b grows.
nlohmann::json log_family_test(const Weight& u, const CumulativeWeight& W,
                               double p, const std::vector<double>& scales,
                               double growth_factor = 2.0);

/// For each I_i finds j_i in [-50,50]\{0} with |H(f chi_{U I_i})| >= lambda/8
/// at every grid node of I_{i,j_i}. Requires a well-separated family and
/// lambda <= avg_{I_i} f <= 2 lambda for every i. Throws a
/// CONSTRUCTION-FAILURE error if some i admits no j (must never fire).
std::vector<int> lemma37_construction(const PiecewiseFn& f,
                                      const IntervalFamily& family, double lambda);

/// Runs the reduction pipeline at level lambda: grid level set of Mf, a
/// greedy well-separated subfamily of covering intervals with averages in
/// (lambda, 2 lambda], the shifted-copy construction, and the final chain
/// lambda W^{1/p}(u(K)) <= C ||f||; reports every measured link constant.
nlohmann::json h_implies_m_reduction(const PiecewiseFn& f, const Weight& u,
                                     const CumulativeWeight& W, double p,
                                     double lambda, ProbeConfig cfg = {});

/// Fits the least C with (H*f)*_u(t) <= C Q((Mf)*_u)(t/4) over scanned t,
/// at several grid refinements; PASS iff C is refinement-stable (< 20%).
/// Requires ainfty_estimate(u) to pass.
nlohmann::json hima_majorization(const PiecewiseFn& f, const Weight& u,
                                 const CumulativeWeight& W, double p,
                                 ProbeConfig cfg = {});

/// The full consistency record: A_inf(u), B*_inf(w), probes of M, H, H*,
/// and the logical cross-checks (H growth-free forces the three conditions;
/// the three conditions force H and H* growth-free). Violations are listed
/// as red flags with witnesses.
nlohmann::json theorem11_harness(const Weight& u, const Weight& w, double p,
                                 std::uint64_t seed = 0, ProbeConfig cfg = {});

/// The four necessary conditions: tail integrability (informational),
/// the set-pair bound W(u(I))/W(u(E)) <= C (|I|/|E|)^p via extremal subsets,
/// p-quasi-concavity of W, and the weak Hardy class of w.
nlohmann::json necessary_battery(const Weight& u, const Weight& w, double p,
                                 ProbeConfig cfg = {});

/// Classical-scale specialization: w(t) = t^{q/p-1}, Lambda exponent q.
/// Dispatches on (p, q) to the matching weight-side condition, runs the
/// Hilbert probe, and records whether the two verdicts agree; p < 1 must
/// refute.
nlohmann::json lpq_specialization(const Weight& u, double p, double q,
                                  std::uint64_t seed = 0, ProbeConfig cfg = {});

}  // namespace lorentz
