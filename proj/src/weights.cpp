#include "lorentzlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "lorentzlab/operators.hpp"
#include "lorentzlab/rearrange.hpp"

namespace lorentz {

namespace {

std::vector<double> dyadic_range(int K) {
    std::vector<double> out;
    for (int j = -K; j <= K; ++j) out.push_back(std::ldexp(1.0, j));
    return out;
}

// scan exponents 0, +-1, +-2, +-4, ... , +-K: scale steps double in log
// space, so even logarithmic growth of an estimate shows a steady ratio
std::vector<int> doubling_exponents(int K) {
    std::set<int> js{0, K, -K};
    for (int j = 1; j <= K; j *= 2) {
        js.insert(j);
        js.insert(-j);
    }
    return {js.begin(), js.end()};
}

std::vector<double> doubling_range(int K) {
    std::vector<double> out;
    for (int j : doubling_exponents(K)) out.push_back(std::ldexp(1.0, j));
    return out;
}

nlohmann::json interval_json(Interval I) { return {{"a", I.a}, {"b", I.b}}; }

// endpoints for interval scans: breakpoints, the singular point, and a
// geometric grid around it
std::vector<double> candidate_points(const Weight& u, int K) {
    double c = u.singular_point().value_or(0.0);
    std::set<double> pts{c};
    if (u.is_step())
        for (double b : u.step().breakpoints()) pts.insert(b);
    for (double r : dyadic_range(K)) {
        pts.insert(c - r);
        pts.insert(c + r);
    }
    return {pts.begin(), pts.end()};
}

// int_I u^{-1/(p-1)} in closed form
Flagged dual_integral(const Weight& u, Interval I, double p) {
    double e = -1.0 / (p - 1.0);
    if (u.is_step()) {
        const PiecewiseFn& s = u.step();
        Interval win = s.window();
        double acc = 0.0;
        if (I.a < win.a || I.b > win.b) {
            if (s.tail_policy() == TailPolicy::Zero) return Flagged::inf();
            double head = std::max(0.0, win.a - I.a);
            double tail = std::max(0.0, I.b - win.b);
            acc += head * std::pow(s.values().front(), e);
            acc += tail * std::pow(s.values().back(), e);
        }
        const auto& bp = s.breakpoints();
        const auto& v = s.values();
        for (std::size_t k = 0; k < v.size(); ++k)
            acc += I.overlap(bp[k], bp[k + 1]) * std::pow(v[k], e);
        return Flagged::of(acc);
    }
    const AnalyticWeight& a = u.analytic();
    if (a.kind() == AnalyticWeight::Kind::Rational) {
        // (1+t)^{-e} has an elementary antiderivative
        double g = -e;
        auto prim = [&](double t) {
            return g == -1.0 ? std::log1p(t) : std::pow(1.0 + t, g + 1.0) / (g + 1.0);
        };
        double lo = std::max(I.a, 0.0);
        if (I.b <= lo) return Flagged::of(0.0);
        return Flagged::of(prim(I.b) - prim(lo));
    }
    double g = a.exponent() * e;  // |x-c|^g
    double c = a.center();
    auto side = [&](double d1, double d2) -> Flagged {  // 0 <= d1 < d2 distances
        if (d2 <= d1) return Flagged::of(0.0);
        if (d1 <= 0.0 && g <= -1.0) return Flagged::inf();
        if (g == -1.0) return Flagged::of(std::log(d2 / d1));
        return Flagged::of((std::pow(d2, g + 1.0) - std::pow(d1, g + 1.0)) / (g + 1.0));
    };
    Flagged left, right;
    if (I.contains(c) || I.a == c || I.b == c) {
        left = side(0.0, c - I.a);
        right = side(0.0, I.b - c);
    } else if (I.b <= c) {
        left = side(c - I.b, c - I.a);
    } else {
        right = side(I.a - c, I.b - c);
    }
    if (left.divergent || right.divergent) return Flagged::inf();
    return Flagged::of(left.value + right.value);
}

ClassVerdict ratio_scan(const char* cls, const std::vector<double>& scales,
                        const std::vector<double>& estimates,
                        const std::vector<nlohmann::json>& witnesses,
                        double growth_factor) {
    ClassVerdict v;
    v.cls = cls;
    double best = -1.0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        v.scales.push_back({scales[i], estimates[i]});
        if (estimates[i] > best) {
            best = estimates[i];
            v.witness = witnesses.empty() ? nlohmann::json{{"scale", scales[i]}}
                                          : witnesses[i];
        }
    }
    v.verdict = classify_growth(v.scales, growth_factor);
    return v;
}

}  // namespace

ClassVerdict delta2_constant(const Weight& w, ScanConfig cfg) {
    CumulativeWeight W(w);
    std::vector<double> scales, est;
    std::vector<nlohmann::json> wit;
    for (double r : doubling_range(cfg.K)) {
        scales.push_back(r);
        est.push_back(W(2.0 * r) / W(r));
        wit.push_back({{"r", r}});
    }
    return ratio_scan("doubling", scales, est, wit, cfg.growth_factor);
}

ClassVerdict p_quasiconcave(const Weight& w, double p, ScanConfig cfg) {
    CumulativeWeight W(w);
    auto rs = dyadic_range(cfg.K);
    ClassVerdict v;
    v.cls = "quasiconcave";
    double best = -1.0;
    std::vector<int> ratio_exps{0};
    for (int j : doubling_exponents(2 * cfg.K))
        if (j > 0) ratio_exps.push_back(j);
    for (int j : ratio_exps) {
        double lambda = std::ldexp(1.0, j);
        double sup = 0.0, arg = 0.0;
        for (double r : rs) {
            double t = lambda * r;
            if (t > std::ldexp(1.0, cfg.K)) continue;
            double q = (W(t) / std::pow(t, p)) / (W(r) / std::pow(r, p));
            if (q > sup) {
                sup = q;
                arg = r;
            }
        }
        if (sup == 0.0) continue;
        v.scales.push_back({lambda, sup});
        if (sup > best) {
            best = sup;
            v.witness = {{"r", arg}, {"t_over_r", lambda}};
        }
    }
    v.verdict = classify_growth(v.scales, cfg.growth_factor);
    return v;
}

ClassVerdict ap_constant(const Weight& u, double p, ScanConfig cfg) {
    if (p <= 1.0)
        throw std::invalid_argument("ap_constant: needs p > 1; use a1_constant");
    auto pts = candidate_points(u, cfg.K);
    // per dyadic-length bucket, the worst quotient
    std::map<int, std::pair<double, nlohmann::json>> buckets;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Interval I(pts[i], pts[j]);
            Flagged dual = dual_integral(u, I, p);
            if (dual.divergent) {
                ClassVerdict v;
                v.cls = "muckenhoupt";
                v.verdict = Verdict::Fail;
                v.witness = {{"interval", interval_json(I)},
                             {"reason", "dual density not integrable"}};
                return v;
            }
            double len = I.length();
            double q = (u.measure(I) / len) *
                       std::pow(dual.value / len, p - 1.0);
            int b = static_cast<int>(std::lround(std::log2(len)));
            auto it = buckets.find(b);
            if (it == buckets.end() || q > it->second.first)
                buckets[b] = {q, interval_json(I)};
        }
    ClassVerdict v;
    v.cls = "muckenhoupt";
    double best = -1.0;
    for (const auto& [b, val] : buckets) {
        v.scales.push_back({std::ldexp(1.0, b), val.first});
        if (val.first > best) {
            best = val.first;
            v.witness = val.second;
        }
    }
    v.verdict = classify_growth(v.scales, cfg.growth_factor);
    return v;
}

ClassVerdict a1_constant(const Weight& u, ScanConfig cfg) {
    double c = u.singular_point().value_or(0.0);
    double R = std::ldexp(1.0, cfg.K);
    PiecewiseFn step =
        u.is_step() ? u.step() : u.sample_step(Interval(c - R, c + R), 4 * cfg.K);
    // one node per cell; quotient bucketed by distance to the singular
    // point, closest last (that is where A_1 can break)
    std::map<int, std::pair<double, double>> buckets;  // bucket -> (est, x)
    const auto& bp = step.breakpoints();
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double x = 0.5 * (bp[k] + bp[k + 1]);
        double ux = step.value(x);
        if (ux <= 0.0) continue;
        double q = maximal(step, x) / ux;
        double d = std::max(std::abs(x - c), std::ldexp(1.0, -2 * cfg.K));
        int b = static_cast<int>(std::lround(std::log2(d)));
        auto it = buckets.find(b);
        if (it == buckets.end() || q > it->second.first) buckets[b] = {q, x};
    }
    ClassVerdict v;
    v.cls = "pointwise-maximal";
    double best = -1.0;
    for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
        v.scales.push_back({std::ldexp(1.0, it->first), it->second.first});
        if (it->second.first > best) {
            best = it->second.first;
            v.witness = {{"x", it->second.second}};
        }
    }
    v.verdict = classify_growth(v.scales, cfg.growth_factor);
    return v;
}

ClassVerdict ainfty_estimate(const Weight& u, ScanConfig cfg) {
    double c = u.singular_point().value_or(0.0);
    std::vector<Interval> intervals;
    for (double r : dyadic_range(cfg.K)) {
        intervals.emplace_back(c, c + r);
        intervals.emplace_back(c - r, c);
        intervals.emplace_back(c - r, c + r);
    }
    if (u.is_step()) {
        const auto& bp = u.step().breakpoints();
        for (std::size_t i = 0; i < bp.size(); ++i)
            for (std::size_t j = i + 1; j < bp.size(); ++j)
                intervals.emplace_back(bp[i], bp[j]);
    }
    const int M = 10;
    std::vector<double> eta(M), R(M);
    std::vector<nlohmann::json> worst(M);
    for (int m = 0; m < M; ++m) {
        eta[m] = std::ldexp(1.0, -(m + 1));
        double sup = 0.0;
        for (const Interval& I : intervals) {
            MeasurableSet E = superlevel_subset(u, I, eta[m]);
            double q = u.measure(E) / u.measure(I);
            if (q > sup) {
                sup = q;
                worst[m] = {{"interval", interval_json(I)}, {"eta", eta[m]}};
            }
        }
        R[m] = sup;
    }
    // decay exponent per halving of eta, over the small-eta tail
    double tail_slope = 0.0;
    for (int m = M - 4; m < M - 1; ++m)
        tail_slope += std::log2(R[m] / R[m + 1]);
    tail_slope /= 3.0;
    // least-squares slope of log R against log eta over the whole grid
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int m = 0; m < M; ++m) {
        double x = std::log(eta[m]), y = std::log(std::max(R[m], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (M * sxy - sx * sy) / (M * sxx - sx * sx);
    double delta = std::clamp(slope, 0.01, 1.0);
    double C_fit = 0.0;
    for (int m = 0; m < M; ++m)
        C_fit = std::max(C_fit, R[m] / std::pow(eta[m], delta));

    ClassVerdict v;
    v.cls = "mass-concentration";
    for (int m = 0; m < M; ++m)
        v.scales.push_back({eta[m], R[m] / std::pow(eta[m], delta)});
    v.witness = {{"delta", delta},
                 {"constant", C_fit},
                 {"tail_slope", tail_slope},
                 {"worst", worst[M - 1]}};
    // the refutation signal is the collapse of the decay slope: the
    // required constant for any positive exponent then grows without bound
    if (tail_slope >= 0.05 && R[M - 1] <= 0.9)
        v.verdict = Verdict::Pass;
    else if (tail_slope < 0.02)
        v.verdict = Verdict::FailGrowth;
    else
        v.verdict = Verdict::Inconclusive;
    return v;
}

ClassVerdict bp_constant(const Weight& w, double p, ScanConfig cfg) {
    CumulativeWeight W(w);
    std::vector<double> scales, est;
    std::vector<nlohmann::json> wit;
    for (double r : doubling_range(cfg.K)) {
        Flagged tail = W.tail_p(r, p);
        if (tail.divergent) {
            ClassVerdict v;
            v.cls = "hardy-average";
            v.verdict = Verdict::Fail;
            v.witness = {{"r", r}, {"reason", "tail integral diverges"}};
            return v;
        }
        scales.push_back(r);
        est.push_back(std::pow(r, p) * tail.value / W(r));
        wit.push_back({{"r", r}});
    }
    return ratio_scan("hardy-average", scales, est, wit, cfg.growth_factor);
}

ClassVerdict bp_infty_verdict(const Weight& w, double p, std::uint64_t seed,
                              ScanConfig cfg) {
    ClassVerdict v = p <= 1.0 ? p_quasiconcave(w, p, cfg) : bp_constant(w, p, cfg);
    v.cls = "hardy-average-weak";
    // direct probe: P on random decreasing steps, weak norm against strong
    CumulativeWeight W(w);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(0.1, 4.0);
    std::uniform_real_distribution<double> drop(0.3, 0.9);
    double worst = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        DecreasingStep g;
        double level = 8.0;
        int blocks = 2 + static_cast<int>(rng() % 5);
        for (int k = 0; k < blocks; ++k) {
            level *= drop(rng);
            g.levels.push_back(level);
            g.widths.push_back(width(rng));
        }
        Flagged strong = lambda_norm(g, W, p);
        if (strong.divergent || strong.value <= 0.0) continue;
        double weak = 0.0;
        auto consider = [&](double t) {
            if (t <= 0.0) return;
            weak = std::max(weak, hardy_p(g, t) * std::pow(W(t), 1.0 / p));
        };
        for (double t : g.block_ends()) consider(t);
        for (double t : dyadic_range(cfg.K)) consider(t);
        worst = std::max(worst, weak / strong.value);
    }
    v.witness["probe_ratio"] = worst;
    return v;
}

ClassVerdict bstar_infty_constant(const Weight& w, ScanConfig cfg) {
    CumulativeWeight W(w);
    std::vector<double> scales, est;
    std::vector<nlohmann::json> wit;
    for (double r : doubling_range(cfg.K)) {
        scales.push_back(r);
        est.push_back(W.log_primitive(r) / W(r));
        wit.push_back({{"r", r}});
    }
    return ratio_scan("hardy-average-limit", scales, est, wit, cfg.growth_factor);
}

Wbar wbar_scan(const CumulativeWeight& W, int depth) {
    Wbar wb;
    wb.depth = depth;
    int jmax = std::max(10, depth / 2);
    for (int j = 1; j <= jmax; ++j) {
        double lambda = std::ldexp(1.0, -j);
        double sup = 0.0;
        for (int k = -depth; k <= depth; ++k) {
            double s = std::ldexp(1.0, k);
            sup = std::max(sup, W(lambda * s) / W(s));
        }
        wb.lambdas.push_back(lambda);
        wb.values.push_back(sup);
    }
    return wb;
}

nlohmann::json wbar_battery(const Weight& w, double p, ScanConfig cfg) {
    CumulativeWeight W(w);
    const std::vector<int> depths{8, 16, 32, 64};
    std::vector<Wbar> scans;
    for (int d : depths) scans.push_back(wbar_scan(W, d));

    auto value_at = [](const Wbar& wb, int j) {  // lambda = 2^-j
        return wb.values[static_cast<std::size_t>(j - 1)];
    };

    struct Item {
        std::string name;
        std::vector<ScaleEstimate> scales;
        Verdict verdict = Verdict::Pass;
    };
    std::vector<Item> items;

    // (a) the integral-average bound itself, over a widening range
    {
        Item it{"integral-average", {}, Verdict::Pass};
        for (int d : depths) {
            double sup = 0.0;
            for (int k = -d; k <= d; ++k) {
                double r = std::ldexp(1.0, k);
                sup = std::max(sup, W.log_primitive(r) / W(r));
            }
            it.scales.push_back({static_cast<double>(d), sup});
        }
        it.verdict = classify_growth(it.scales, cfg.growth_factor);
        items.push_back(it);
    }
    // (b) a contractive dilation on a fixed lambda grid
    {
        Item it{"contractive-dilation", {}, Verdict::Pass};
        for (std::size_t i = 0; i < scans.size(); ++i) {
            double gap = 1.0 - value_at(scans[i], 10);
            it.scales.push_back(
                {static_cast<double>(depths[i]), 1.0 / std::max(gap, 1e-12)});
        }
        it.verdict = classify_growth(it.scales, cfg.growth_factor);
        items.push_back(it);
    }
    // (c)/(d) fitted constants in the reciprocal-log bounds, exponent 1 and p
    for (double expnt : {1.0, p}) {
        Item it{expnt == 1.0 ? "log-decay" : "log-decay-power", {}, Verdict::Pass};
        for (std::size_t i = 0; i < scans.size(); ++i) {
            double sup = 0.0;
            for (std::size_t j = 1; j <= scans[i].lambdas.size(); ++j) {
                double lam = scans[i].lambdas[j - 1];
                sup = std::max(sup, scans[i].values[j - 1] *
                                        std::pow(1.0 + std::log(1.0 / lam), expnt));
            }
            it.scales.push_back({static_cast<double>(depths[i]), sup});
        }
        it.verdict = classify_growth(it.scales, cfg.growth_factor);
        items.push_back(it);
    }
    // (e) vanishing at 0: the smallest scanned dilation must keep shrinking
    {
        Item it{"vanishing-limit", {}, Verdict::Pass};
        for (std::size_t i = 0; i < scans.size(); ++i)
            it.scales.push_back({static_cast<double>(depths[i]),
                                 1.0 / std::max(scans[i].values.back(), 1e-300)});
        double total = it.scales.back().estimate / it.scales.front().estimate;
        if (total >= cfg.growth_factor)
            it.verdict = Verdict::Pass;
        else if (total <= 1.5)
            it.verdict = Verdict::FailGrowth;
        else
            it.verdict = Verdict::Inconclusive;
        items.push_back(it);
    }
    // (f) the (eps, delta) table: largest dilation achieving each epsilon
    {
        Item it{"eps-delta-table", {}, Verdict::Pass};
        std::vector<ScaleEstimate> agg;
        for (std::size_t i = 0; i < scans.size(); ++i) {
            double worst = 0.0;
            for (double eps : {0.5, 0.25, 0.125}) {
                double delta = 0.0;
                for (std::size_t j = 0; j < scans[i].lambdas.size(); ++j)
                    if (scans[i].values[j] <= eps) {
                        delta = scans[i].lambdas[j];
                        break;
                    }
                double need =
                    delta > 0.0 ? 1.0 / delta : std::ldexp(1.0, depths[i]);
                worst = std::max(worst, need);
            }
            it.scales.push_back({static_cast<double>(depths[i]), worst});
        }
        it.verdict = classify_growth(it.scales, cfg.growth_factor);
        items.push_back(it);
    }

    int pass = 0, fail = 0;
    nlohmann::json jitems = nlohmann::json::array();
    for (const auto& it : items) {
        if (it.verdict == Verdict::Pass) ++pass;
        if (it.verdict == Verdict::FailGrowth || it.verdict == Verdict::Fail) ++fail;
        nlohmann::json scales = nlohmann::json::array();
        for (const auto& s : it.scales)
            scales.push_back({{"scale", s.scale}, {"estimate", s.estimate}});
        jitems.push_back({{"item", it.name},
                          {"scales", scales},
                          {"verdict", verdict_name(it.verdict)}});
    }
    Verdict overall = Verdict::Inconclusive;
    if (pass == static_cast<int>(items.size())) overall = Verdict::Pass;
    if (fail == static_cast<int>(items.size())) overall = Verdict::FailGrowth;

    nlohmann::json report{{"items", jitems},
                          {"consistent", overall != Verdict::Inconclusive},
                          {"verdict", verdict_name(overall)}};
    if (overall == Verdict::Pass) {
        // fitted constant of the submultiplicative reciprocal-log bound
        const Wbar& wb = scans.back();
        double C = 0.0;
        for (std::size_t j = 0; j < wb.lambdas.size(); ++j)
            C = std::max(C, wb.values[j] *
                                (1.0 + std::log(1.0 / wb.lambdas[j])));
        report["submultiplicative_bound"] = C;
    }
    return report;
}

nlohmann::json joint_ab_condition(const Weight& u, const Weight& w,
                                  std::uint64_t seed, ScanConfig cfg) {
    CumulativeWeight W(w);
    double c = u.singular_point().value_or(0.0);
    // interval candidates bucketed by dyadic scale
    std::map<int, std::vector<Interval>> by_scale;
    std::vector<int> exps = doubling_exponents(cfg.K);
    for (int j : exps) {
        double r = std::ldexp(1.0, j);
        by_scale[j] = {Interval(c, c + r), Interval(c - r, c),
                       Interval(c - r, c + r)};
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        int j = exps[rng() % exps.size()];
        double r = std::ldexp(1.0, j);
        double a = c + pos(rng) * r;
        by_scale[j].push_back(Interval(a, a + r));
    }

    const int MMAX = 60;
    nlohmann::json table = nlohmann::json::array();
    bool all_pass = true;
    for (double eps : {0.5, 0.25, 0.125}) {
        // per interval scale, the largest eta that works
        std::vector<ScaleEstimate> scales;
        double eta_uniform = 0.0;
        bool found_all = true;
        for (const auto& [j, ivals] : by_scale) {
            double eta_j = 0.0;
            for (int m = 1; m <= MMAX; ++m) {
                double eta = std::ldexp(1.0, -m);
                bool ok = true;
                for (const Interval& I : ivals) {
                    MeasurableSet S = superlevel_subset(u, I, eta);
                    if (W(u.measure(S)) > eps * W(u.measure(I))) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    eta_j = eta;
                    break;
                }
            }
            if (eta_j == 0.0) {
                found_all = false;
                eta_j = std::ldexp(1.0, -MMAX - 1);
            }
            scales.push_back({std::ldexp(1.0, j), 1.0 / eta_j});
            eta_uniform = eta_uniform == 0.0 ? eta_j : std::min(eta_uniform, eta_j);
        }
        Verdict v = classify_growth(scales, cfg.growth_factor);
        if (!found_all) v = Verdict::FailGrowth;
        if (v != Verdict::Pass) all_pass = false;
        nlohmann::json jscales = nlohmann::json::array();
        for (const auto& s : scales)
            jscales.push_back({{"scale", s.scale}, {"required", s.estimate}});
        table.push_back({{"eps", eps},
                         {"eta", v == Verdict::Pass ? nlohmann::json(eta_uniform)
                                                    : nlohmann::json()},
                         {"scales", jscales},
                         {"verdict", verdict_name(v)}});
    }
    ClassVerdict ainf = ainfty_estimate(u, cfg);
    ClassVerdict bstar = bstar_infty_constant(w, cfg);
    bool both = ainf.verdict == Verdict::Pass && bstar.verdict == Verdict::Pass;
    return {{"table", table},
            {"verdict", all_pass ? "PASS" : "FAIL-GROWTH"},
            {"cross_check",
             {{"mass_concentration", verdict_name(ainf.verdict)},
              {"hardy_average_limit", verdict_name(bstar.verdict)},
              {"consistent", both == all_pass}}}};
}

IntervalFamilies sample_families(std::uint64_t seed, int random_count,
                                 int adversarial_depth) {
    IntervalFamilies fams;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int r = 0; r < random_count; ++r) {
        int J = 1 + static_cast<int>(rng() % 4);
        std::vector<double> edges;
        for (int i = 0; i < 2 * J; ++i) edges.push_back(16.0 * U(rng));
        std::sort(edges.begin(), edges.end());
        std::vector<FamilyMember> fam;
        for (int i = 0; i < J; ++i) {
            double a = edges[2 * i], b = edges[2 * i + 1];
            if (b - a < 1e-6) continue;
            double frac = 0.05 + 0.9 * U(rng);
            double off = (1.0 - frac) * U(rng);
            Interval I(a, b);
            Interval S(a + off * (b - a), a + (off + frac) * (b - a));
            fam.push_back({I, S});
        }
        if (!fam.empty()) fams.push_back(fam);
    }
    for (int k = 1; k <= adversarial_depth; ++k) {
        double big = std::pow(4.0, k);
        fams.push_back({{Interval(0.0, big), Interval(0.0, 1.0)}});
        // several honest intervals plus one starved subset
        std::vector<FamilyMember> fam;
        for (int i = 0; i < 4; ++i) {
            Interval I(3.0 * i, 3.0 * i + 1.0);
            fam.push_back({I, I});
        }
        fam.push_back({Interval(13.0, 13.0 + big), Interval(13.0, 14.0)});
        fams.push_back(fam);
    }
    return fams;
}

ClassVerdict multi_interval_condition(const Weight& u, const Weight& w, double p,
                                      const IntervalFamilies& families,
                                      ScanConfig cfg) {
    CumulativeWeight W(w);
    std::map<int, std::pair<double, nlohmann::json>> buckets;
    for (const auto& fam : families) {
        double uI = 0.0, uS = 0.0, maxratio = 0.0;
        for (const auto& m : fam) {
            uI += u.measure(m.I);
            uS += u.measure(m.S);
            maxratio = std::max(maxratio, m.I.length() / m.S.length());
        }
        if (uS <= 0.0 || maxratio <= 0.0) continue;
        double q = (W(uI) / W(uS)) / std::pow(maxratio, p);
        int b = static_cast<int>(std::lround(std::log2(maxratio)));
        auto it = buckets.find(b);
        if (it == buckets.end() || q > it->second.first)
            buckets[b] = {q, {{"members", fam.size()}, {"max_ratio", maxratio}}};
    }
    ClassVerdict v;
    v.cls = "multi-interval";
    double best = -1.0;
    for (const auto& [b, val] : buckets) {
        v.scales.push_back({std::ldexp(1.0, b), val.first});
        if (val.first > best) {
            best = val.first;
            v.witness = val.second;
        }
    }
    v.verdict = classify_growth(v.scales, cfg.growth_factor);
    return v;
}

}  // namespace lorentz
