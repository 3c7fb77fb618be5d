// Weight-class certifiers: doubling, quasi-concavity, the Muckenhoupt
// ladder A_1 / A_p / A_inf, the Hardy ladder B_p / B_{p,inf} / B*_inf,
// the dilation-supremum battery for W, the joint (eps, eta) condition,
// and the multi-interval condition.
#pragma once

#include <cstdint>

#include "lorentzlab/cumulative.hpp"
#include "lorentzlab/verdict.hpp"

namespace lorentz {

struct ScanConfig {
    int K = 12;                  // dyadic scan range 2^-K .. 2^K
    double growth_factor = 2.0;  // refutation threshold for classify_growth
};

/// sup_r W(2r)/W(r) over dyadic r.
ClassVerdict delta2_constant(const Weight& w, ScanConfig cfg = {});

/// sup over r <= t of (W(t)/t^p) / (W(r)/r^p), organized by the ratio t/r.
ClassVerdict p_quasiconcave(const Weight& w, double p, ScanConfig cfg = {});

/// sup_I (avg_I u)(avg_I u^{-1/(p-1)})^{p-1} over candidate intervals,
/// organized by |I|. Throws for p <= 1 (use a1_constant).
ClassVerdict ap_constant(const Weight& u, double p, ScanConfig cfg = {});

/// sup_x Mu(x)/u(x) over evaluation nodes, organized by distance to the
/// singular point (closest last: that is where the quotient can blow up).
ClassVerdict a1_constant(const Weight& u, ScanConfig cfg = {});

/// Worst-case mass concentration u(E)/u(I) over subsets with |E| = eta|I|,
/// fitted to C eta^delta. The refutation signal is the collapse of the
/// log-log decay slope as eta -> 0.
ClassVerdict ainfty_estimate(const Weight& u, ScanConfig cfg = {});

/// sup_r r^p Tail_p(r)/W(r) over dyadic r; divergent tails FAIL outright.
ClassVerdict bp_constant(const Weight& w, double p, ScanConfig cfg = {});

/// p <= 1: quasi-concavity of W; p > 1: same as bp_constant. Also runs a
/// direct probe of the averaging operator P on random decreasing steps and
/// reports the worst weak-over-strong norm ratio in the witness.
ClassVerdict bp_infty_verdict(const Weight& w, double p, std::uint64_t seed = 0,
                              ScanConfig cfg = {});

/// sup_r (int_0^r W(t)/t dt)/W(r) over dyadic r.
ClassVerdict bstar_infty_constant(const Weight& w, ScanConfig cfg = {});

/// Sampled lambda -> sup_s W(lambda s)/W(s), s scanned dyadically in
/// [2^-depth, 2^depth], lambda = 2^-1 .. 2^-max(10, depth/2).
struct Wbar {
    std::vector<double> lambdas;
    std::vector<double> values;
    int depth = 0;
};
Wbar wbar_scan(const CumulativeWeight& W, int depth);

/// Evaluates the six equivalent characterizations built on the dilation
/// supremum of W at doubling scan depths and asserts their consistency.
/// Returns a report with per-item scales/verdicts, the overall verdict,
/// and the fitted submultiplicative bound when the battery passes.
nlohmann::json wbar_battery(const Weight& w, double p, ScanConfig cfg = {});

/// (eps, eta) table: largest dyadic eta such that W(u(S)) <= eps W(u(I))
/// for every scanned interval I and worst-case S with |S| = eta|I|.
/// Cross-checked against ainfty_estimate(u) and bstar_infty_constant(w).
nlohmann::json joint_ab_condition(const Weight& u, const Weight& w,
                                  std::uint64_t seed = 0, ScanConfig cfg = {});

struct FamilyMember {
    Interval I;
    Interval S;  // S subset of I
};
using IntervalFamilies = std::vector<std::vector<FamilyMember>>;

/// Random families plus adversarial ones with |I|/|S| = 4^k.
IntervalFamilies sample_families(std::uint64_t seed, int random_count,
                                 int adversarial_depth);

/// sup over families of [W(u(U I_j))/W(u(U S_j))] / max_j (|I_j|/|S_j|)^p,
/// organized by max_j |I_j|/|S_j|.
ClassVerdict multi_interval_condition(const Weight& u, const Weight& w, double p,
                                      const IntervalFamilies& families,
                                      ScanConfig cfg = {});

}  // namespace lorentz
