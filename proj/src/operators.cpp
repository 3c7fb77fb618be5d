#include "lorentzlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace lorentz {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Jumps of f at its breakpoints (zero tails outside):
// Hf(x) = (1/pi) sum_j jump_j ln|x - c_j|.
struct JumpForm {
    std::vector<double> pos;
    std::vector<double> jump;

    explicit JumpForm(const PiecewiseFn& f) {
        const auto& bp = f.breakpoints();
        const auto& v = f.values();
        for (std::size_t j = 0; j < bp.size(); ++j) {
            double left = (j == 0) ? 0.0 : v[j - 1];
            double right = (j == v.size()) ? 0.0 : v[j];
            double d = right - left;
            if (d != 0.0) {
                pos.push_back(bp[j]);
                jump.push_back(d);
            }
        }
    }

    double eval(double x) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < pos.size(); ++j)
            acc += jump[j] * std::log(std::abs(x - pos[j]));
        return acc / kPi;
    }

    // antiderivative of Hf: (1/pi) sum jump_j l(x - c_j), l(t) = t ln|t| - t
    double antiderivative(double x) const {
        auto ell = [](double t) {
            if (t == 0.0) return 0.0;
            return t * std::log(std::abs(t)) - t;
        };
        double acc = 0.0;
        for (std::size_t j = 0; j < pos.size(); ++j)
            acc += jump[j] * ell(x - pos[j]);
        return acc / kPi;
    }
};

void check_off_breakpoints(const PiecewiseFn& f, double x) {
    const auto& bp = f.breakpoints();
    for (std::size_t j = 0; j < bp.size(); ++j) {
        double left = (j == 0) ? bp[1] - bp[0] : bp[j] - bp[j - 1];
        double right = (j + 1 == bp.size()) ? bp[j] - bp[j - 1] : bp[j + 1] - bp[j];
        double guard = 1e-6 * std::min(left, right);
        if (std::abs(x - bp[j]) < guard &&
            // only jumps carry a log singularity
            std::abs(f.value(bp[j] + 1e-12 * right) -
                     f.value(bp[j] - 1e-12 * left)) > 0.0)
            throw std::domain_error("hilbert: x too close to a breakpoint of f");
    }
}

}  // namespace

double hilbert(const PiecewiseFn& f, double x) {
    if (f.tail_policy() != TailPolicy::Zero)
        throw std::invalid_argument("hilbert: zero-tail step functions only");
    check_off_breakpoints(f, x);
    return JumpForm(f).eval(x);
}

double hilbert_trunc(const PiecewiseFn& f, double x, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("hilbert_trunc: eps must be positive");
    if (f.tail_policy() != TailPolicy::Zero)
        throw std::invalid_argument("hilbert_trunc: zero-tail step functions only");
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    double acc = 0.0;
    auto piece = [&](double a, double b, double vk) {
        // int_a^b vk/(x-y) dy over a piece not containing x
        if (b <= a || vk == 0.0) return;
        acc += vk * (std::log(std::abs(x - a)) - std::log(std::abs(x - b)));
    };
    for (std::size_t k = 0; k < v.size(); ++k) {
        double a = bp[k], b = bp[k + 1];
        piece(a, std::min(b, x - eps), v[k]);
        piece(std::max(a, x + eps), b, v[k]);
    }
    return acc / kPi;
}

double hilbert_max(const PiecewiseFn& f, double x) {
    JumpForm jf(f);
    std::vector<double> dist;
    for (double c : jf.pos) dist.push_back(std::abs(x - c));
    std::sort(dist.begin(), dist.end());
    dist.erase(std::remove_if(dist.begin(), dist.end(),
                              [](double d) { return d <= 0.0; }),
               dist.end());
    dist.erase(std::unique(dist.begin(), dist.end()), dist.end());
    std::vector<double> eps_candidates;
    if (!dist.empty()) {
        eps_candidates.push_back(0.5 * dist.front());  // eps -> 0+ plateau
        for (std::size_t i = 0; i < dist.size(); ++i) {
            eps_candidates.push_back(dist[i]);
            if (i + 1 < dist.size())
                eps_candidates.push_back(0.5 * (dist[i] + dist[i + 1]));
        }
        eps_candidates.push_back(2.0 * dist.back());
    } else {
        eps_candidates.push_back(1.0);
    }
    double best = 0.0;
    for (double eps : eps_candidates)
        best = std::max(best, std::abs(hilbert_trunc(f, x, eps)));
    return best;
}

double maximal(const PiecewiseFn& f, double x) {
    if (f.tail_policy() != TailPolicy::Zero)
        throw std::invalid_argument("maximal: zero-tail step functions only");
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    // prefix integrals of |f| at breakpoints
    std::vector<double> F(bp.size(), 0.0);
    for (std::size_t k = 0; k + 1 < bp.size(); ++k)
        F[k + 1] = F[k] + std::abs(v[k]) * (bp[k + 1] - bp[k]);
    auto prefix_at = [&](double t) {
        if (t <= bp.front()) return 0.0;
        if (t >= bp.back()) return F.back();
        auto it = std::upper_bound(bp.begin(), bp.end(), t);
        std::size_t k = static_cast<std::size_t>(it - bp.begin()) - 1;
        return F[k] + std::abs(v[k]) * (t - bp[k]);
    };
    std::vector<double> lefts{x}, rights{x};
    for (double c : bp) (c < x ? lefts : rights).push_back(c);
    double best = 0.0;
    for (double a : lefts)
        for (double b : rights) {
            if (!(a < b)) continue;
            best = std::max(best, (prefix_at(b) - prefix_at(a)) / (b - a));
        }
    return best;
}

double hardy_p(const DecreasingStep& g, double t) {
    if (t <= 0.0) return g.levels.empty() ? 0.0 : g.levels.front();
    double acc = 0.0, lo = 0.0;
    for (std::size_t k = 0; k < g.levels.size(); ++k) {
        double hi = lo + g.widths[k];
        acc += g.levels[k] * (std::min(t, hi) - std::min(t, lo));
        lo = hi;
    }
    return acc / t;
}

double hardy_q(const DecreasingStep& g, double t) {
    double acc = 0.0, lo = 0.0;
    for (std::size_t k = 0; k < g.levels.size(); ++k) {
        double hi = lo + g.widths[k];
        if (hi > t) {
            double a = std::max(t, lo);
            if (a <= 0.0) return std::numeric_limits<double>::infinity();
            acc += g.levels[k] * (std::log(hi) - std::log(a));
        }
        lo = hi;
    }
    return acc;
}

EvalGrid EvalGrid::make(Interval window, const std::vector<double>& breakpoints,
                        int scale_depth, int splits, double center) {
    std::set<double> edge_set{window.a, window.b};
    std::set<double> operand(breakpoints.begin(), breakpoints.end());
    for (double c : breakpoints)
        if (window.contains(c)) edge_set.insert(c);
    for (int j = -scale_depth; j <= scale_depth; ++j) {
        double r = std::ldexp(1.0, j);
        for (double s : {center - r, center + r})
            if (window.contains(s)) edge_set.insert(s);
    }
    if (window.contains(center)) edge_set.insert(center);
    EvalGrid g;
    // drop near-coincident edges (keep operand breakpoints) so no cell
    // collapses below the evaluation guard of the closed-form transform
    double tol = 1e-10 * window.length();
    for (double e : edge_set) {
        if (!g.edges_.empty() && e - g.edges_.back() < tol) {
            if (operand.count(e)) g.edges_.back() = e;
            continue;
        }
        g.edges_.push_back(e);
    }
    for (std::size_t k = 0; k + 1 < g.edges_.size(); ++k) {
        double a = g.edges_[k], b = g.edges_[k + 1];
        double h = (b - a) / splits;
        for (int i = 0; i < splits; ++i) g.nodes_.push_back(a + (i + 0.5) * h);
    }
    return g;
}

PiecewiseFn EvalGrid::sample(const std::function<double(double)>& fn) const {
    std::vector<double> bp;
    std::vector<double> vals;
    std::size_t node = 0;
    bp.push_back(edges_.front());
    for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
        double a = edges_[k], b = edges_[k + 1];
        // recover subcell count from the nodes in (a, b)
        std::size_t first = node;
        while (node < nodes_.size() && nodes_[node] < b) ++node;
        std::size_t s = node - first;
        double h = (b - a) / static_cast<double>(s);
        for (std::size_t i = 0; i < s; ++i) {
            bp.push_back(a + (i + 1) * h);
            vals.push_back(fn(nodes_[first + i]));
        }
        bp.back() = b;  // avoid roundoff drift at cell edges
    }
    return PiecewiseFn(std::move(bp), std::move(vals));
}

double integral_hilbert(const PiecewiseFn& f, Interval J) {
    JumpForm jf(f);
    return jf.antiderivative(J.b) - jf.antiderivative(J.a);
}

double integral_abs_hilbert(const PiecewiseFn& f, Interval J) {
    JumpForm jf(f);
    // segment edges: J endpoints plus f breakpoints inside J
    std::vector<double> edges{J.a, J.b};
    for (double c : jf.pos)
        if (J.contains(c)) edges.push_back(c);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double total = 0.0;
    const int m = 48;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double c = edges[k], d = edges[k + 1], len = d - c;
        if (len <= 0.0) continue;
        std::vector<double> ts;
        ts.push_back(c + 1e-9 * len);
        for (int i = 0; i < m; ++i) ts.push_back(c + (i + 0.5) * len / m);
        ts.push_back(d - 1e-9 * len);
        std::sort(ts.begin(), ts.end());
        double start = ts.front();
        // Hf is smooth on (c, d); locate sign changes by bisection
        double seg_acc = 0.0;
        double prev_t = start, prev_s = jf.eval(start) >= 0.0 ? 1.0 : -1.0;
        // endpoint pieces (c, start) and (end, d) are tiny; include them in
        // the adjacent signed piece
        double piece_from = c;
        for (std::size_t i = 1; i < ts.size(); ++i) {
            double s = jf.eval(ts[i]) >= 0.0 ? 1.0 : -1.0;
            if (s != prev_s) {
                double lo = prev_t, hi = ts[i];
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    ((jf.eval(mid) >= 0.0 ? 1.0 : -1.0) == prev_s ? lo : hi) = mid;
                }
                double root = 0.5 * (lo + hi);
                seg_acc += prev_s * (jf.antiderivative(root) - jf.antiderivative(piece_from));
                piece_from = root;
                prev_s = s;
            }
            prev_t = ts[i];
        }
        seg_acc += prev_s * (jf.antiderivative(d) - jf.antiderivative(piece_from));
        total += seg_acc;
    }
    return total;
}

CotlarResult cotlar_residual(const std::function<double(double)>& fn,
                             Interval support, Interval window, int n) {
    double h = support.length() / n;
    // uniform lattice covering the window, aligned with the support grid
    long lo = static_cast<long>(std::floor((window.a - support.a) / h));
    long hi = static_cast<long>(std::ceil((window.b - support.a) / h));
    long N = hi - lo;
    auto node = [&](long i) { return support.a + (lo + i + 0.5) * h; };

    std::vector<double> fv(N, 0.0);
    for (long i = 0; i < N; ++i) fv[i] = fn(node(i));

    // Hg on the lattice for lattice step data g, via jumps and a shared
    // log table: Hg(x_i) = (1/pi) sum_j (g_j - g_{j-1}) ln|x_i - c_j|,
    // c_j = support.a + (lo + j) h, so ln|x_i - c_j| = ln h + ln|i - j + 1/2|.
    std::vector<double> logtab(2 * N + 2);
    for (long m = -N; m <= N; ++m)
        logtab[m + N] = std::log(std::abs(m + 0.5));
    double logh = std::log(h);
    auto hilbert_lattice = [&](const std::vector<double>& g) {
        std::vector<double> jump(N + 1, 0.0);
        for (long j = 0; j <= N; ++j)
            jump[j] = (j < N ? g[j] : 0.0) - (j > 0 ? g[j - 1] : 0.0);
        std::vector<double> out(N, 0.0);
        for (long i = 0; i < N; ++i) {
            double acc = 0.0, jsum = 0.0;
            for (long j = 0; j <= N; ++j) {
                acc += jump[j] * logtab[i - j + N];
                jsum += jump[j];
            }
            out[i] = (acc + jsum * logh) / kPi;
        }
        return out;
    };

    std::vector<double> Hf = hilbert_lattice(fv);
    std::vector<double> fHf(N);
    for (long i = 0; i < N; ++i) fHf[i] = fv[i] * Hf[i];
    std::vector<double> HfHf = hilbert_lattice(fHf);

    double num = 0.0, den = 0.0;
    for (long i = 0; i < N; ++i) {
        double r = Hf[i] * Hf[i] - fv[i] * fv[i] - 2.0 * HfHf[i];
        num += r * r * h;
        den += fv[i] * fv[i] * fv[i] * fv[i] * h;
    }
    CotlarResult out;
    out.resolution = n;
    out.residual = den > 0.0 ? std::sqrt(num) / std::sqrt(den) : 0.0;
    return out;
}

}  // namespace lorentz
