// Verdict plumbing shared by all certifiers: scanned estimates are lower
// bounds of suprema, so the only honest refutation is sustained growth
// across scales.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lorentz {

enum class Verdict { Pass, FailGrowth, Fail, Inconclusive };

const char* verdict_name(Verdict v);

struct ScaleEstimate {
    double scale = 0.0;
    double estimate = 0.0;
};

/// FAIL-GROWTH iff the estimates are still increasing at the end of the
/// scan: a trailing run of >= 3 increasing steps whose total growth is
/// >= growth_factor. Anything that flattens out is bounded on the scanned
/// range and PASSes.
Verdict classify_growth(const std::vector<ScaleEstimate>& scales,
                        double growth_factor = 2.0);

struct ClassVerdict {
    std::string cls;
    std::vector<ScaleEstimate> scales;
    nlohmann::json witness;
    Verdict verdict = Verdict::Pass;

    /// Largest scanned estimate (lower bound of the true constant).
    double constant() const;
};

nlohmann::json to_json(const ClassVerdict& v);

}  // namespace lorentz
