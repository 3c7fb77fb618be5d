#include "lorentzlab/verdict.hpp"

#include <algorithm>

namespace lorentz {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::FailGrowth: return "FAIL-GROWTH";
        case Verdict::Fail: return "FAIL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Verdict classify_growth(const std::vector<ScaleEstimate>& scales,
                        double growth_factor) {
    if (scales.size() < 4) return Verdict::Pass;
    double step_floor = std::min(1.1, growth_factor);
    std::size_t last = scales.size() - 1;
    std::size_t start = last;
    while (start > 0 &&
           scales[start].estimate >= scales[start - 1].estimate * step_floor)
        --start;
    std::size_t steps = last - start;
    if (steps >= 3 && scales[start].estimate > 0.0 &&
        scales[last].estimate >= growth_factor * scales[start].estimate)
        return Verdict::FailGrowth;
    return Verdict::Pass;
}

double ClassVerdict::constant() const {
    double best = 0.0;
    for (const auto& s : scales) best = std::max(best, s.estimate);
    return best;
}

nlohmann::json to_json(const ClassVerdict& v) {
    nlohmann::json scales = nlohmann::json::array();
    for (const auto& s : v.scales)
        scales.push_back({{"scale", s.scale}, {"estimate", s.estimate}});
    return {{"class", v.cls},
            {"scales", scales},
            {"witness", v.witness},
            {"verdict", verdict_name(v.verdict)}};
}

}  // namespace lorentz
