#include "ctlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ctlab/rng.hpp"

namespace ctlab {

namespace {
constexpr double kOutsideTol = 1e-14;   // required -<p-q,p-q> margin
constexpr double kTieTol = 1e-9;        // stratum tie width on T
constexpr double kTieSeparation = 1e-6; // r disagreement that counts as ambiguous
}  // namespace

std::array<double, 2> project_into_convex_polygon(const std::vector<std::array<double, 2>>& poly,
                                                  const std::array<double, 2>& q) {
    const std::size_t m = poly.size();
    // inside test: q on the inner side of every directed edge
    int sign = 0;
    bool inside = true;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % m];
        double cr = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
        if (std::abs(cr) < 1e-15) continue;
        int sg = cr > 0 ? 1 : -1;
        if (sign == 0) sign = sg;
        if (sg != sign) {
            inside = false;
            break;
        }
    }
    if (inside) return q;
    double best = std::numeric_limits<double>::max();
    std::array<double, 2> bp = poly[0];
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % m];
        double ex = b[0] - a[0], ey = b[1] - a[1];
        double len2 = ex * ex + ey * ey;
        double s = len2 > 0 ? ((q[0] - a[0]) * ex + (q[1] - a[1]) * ey) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        double px = a[0] + s * ex, py = a[1] + s * ey;
        double d2 = (q[0] - px) * (q[0] - px) + (q[1] - py) * (q[1] - py);
        if (d2 < best) {
            best = d2;
            bp = {px, py};
        }
    }
    return bp;
}

RegularDomain::RegularDomain(SpineComplex spine, bool convexity_gate, std::uint64_t gate_seed)
    : spine_(std::move(spine)) {
    if (spine_.vertices.empty()) throw Error("empty spine");
    edge_geoms_.reserve(spine_.edges.size());
    for (const auto& e : spine_.edges) {
        MinkVec d = spine_.vertices[e.b] - spine_.vertices[e.a];
        double q = lorentz_dot(d, d);
        if (!(q > 0)) throw AchronalityViolation("edge not spacelike");
        double len = std::sqrt(q);
        edge_geoms_.push_back({spine_.vertices[e.a], d * (1.0 / len), len});
    }
    if (convexity_gate) run_convexity_gate(gate_seed);
}

void RegularDomain::candidates(const MinkVec& p, std::vector<Candidate>& out) const {
    out.clear();
    std::size_t idx = 0;
    auto consider = [&](const MinkVec& r, const Stratum& st) {
        MinkVec d = p - r;
        if (d.t <= 0) return;
        double q = lorentz_dot(d, d);
        if (-q > kOutsideTol) out.push_back({-q, r, st});
    };
    for (std::size_t i = 0; i < spine_.vertices.size(); ++i, ++idx)
        consider(spine_.vertices[i], {StratumKind::vertex, i, 0.0, {0, 0}});
    for (std::size_t i = 0; i < edge_geoms_.size(); ++i) {
        const auto& eg = edge_geoms_[i];
        double s = std::clamp(lorentz_dot(p - eg.q0, eg.dir), 0.0, eg.len);
        consider(eg.q0 + eg.dir * s, {StratumKind::edge, i, s, {0, 0}});
    }
    for (std::size_t i = 0; i < spine_.faces.size(); ++i) {
        const auto& f = spine_.faces[i];
        MinkVec d = p - f.origin;
        std::array<double, 2> uv{lorentz_dot(d, f.e1), lorentz_dot(d, f.e2)};
        auto cl = project_into_convex_polygon(f.poly, uv);
        consider(f.origin + f.e1 * cl[0] + f.e2 * cl[1], {StratumKind::face, i, 0.0, cl});
    }
}

bool RegularDomain::best_candidate(const MinkVec& p, BestCand& out) const {
    double bestT2 = -1.0;
    auto consider = [&](const MinkVec& r, StratumKind kind, std::size_t index, double s,
                        std::array<double, 2> uv) {
        double dt = p.t - r.t;
        if (dt <= 0) return;
        double q = -dt * dt;
        for (int i = 0; i < p.n; ++i) {
            double d = p.x[i] - r.x[i];
            q += d * d;
        }
        if (-q > kOutsideTol && -q > bestT2) {
            bestT2 = -q;
            out.r = r;
            out.st = {kind, index, s, uv};
        }
    };
    for (std::size_t i = 0; i < spine_.vertices.size(); ++i)
        consider(spine_.vertices[i], StratumKind::vertex, i, 0.0, {0, 0});
    for (std::size_t i = 0; i < edge_geoms_.size(); ++i) {
        const auto& eg = edge_geoms_[i];
        double s = std::clamp(lorentz_dot(p - eg.q0, eg.dir), 0.0, eg.len);
        consider(eg.q0 + eg.dir * s, StratumKind::edge, i, s, {0, 0});
    }
    for (std::size_t i = 0; i < spine_.faces.size(); ++i) {
        const auto& f = spine_.faces[i];
        MinkVec d = p - f.origin;
        std::array<double, 2> uv{lorentz_dot(d, f.e1), lorentz_dot(d, f.e2)};
        auto cl = project_into_convex_polygon(f.poly, uv);
        consider(f.origin + f.e1 * cl[0] + f.e2 * cl[1], StratumKind::face, i, 0.0, cl);
    }
    if (bestT2 < 0) return false;
    out.T = std::sqrt(bestT2);
    return true;
}

CosmoEval RegularDomain::cosmological_time(const MinkVec& p) const {
    if (p.n != spine_.n) throw DimensionMismatch();
    std::vector<Candidate> cands;
    candidates(p, cands);
    if (cands.empty()) throw OutsideDomain();
    double best_T = -1.0;
    for (const auto& c : cands) best_T = std::max(best_T, std::sqrt(c.T2));

    // deterministic winner: first stratum (vertices, then edges, then faces,
    // each by index) within the tie band of the maximum
    const Candidate* win = nullptr;
    const Candidate* tied = nullptr;
    for (const auto& c : cands) {
        double T = std::sqrt(c.T2);
        if (T < best_T - kTieTol) continue;
        if (!win) {
            win = &c;
        } else if (!tied) {
            MinkVec dr = c.r - win->r;
            double sep = std::abs(dr.t);
            for (int i = 0; i < dr.n; ++i) sep = std::max(sep, std::abs(dr.x[i]));
            if (sep > kTieSeparation) tied = &c;
        }
    }
    CosmoEval ev;
    ev.T = std::sqrt(win->T2);
    ev.r = win->r;
    ev.N = HypPoint((p - win->r) * (1.0 / ev.T), 1e-6);
    ev.stratum = win->st;
    if (tied) {
        ev.ambiguous = true;
        ev.tied = tied->st;
    }
    return ev;
}

bool RegularDomain::contains(const MinkVec& p) const {
    if (p.n != spine_.n) throw DimensionMismatch();
    std::vector<Candidate> cands;
    candidates(p, cands);
    return !cands.empty();
}

double RegularDomain::null_support_boundary(const std::array<double, 3>& xbar, int k) const {
    if (k < 8) throw Error("null_support_boundary needs k >= 8 directions");
    const int n = spine_.n;
    auto tight_plane_height = [&](const std::array<double, 3>& w) {
        // null direction (1, w): the tight support plane height at xbar is the
        // minimum over spine vertices (affine in the stratum, so vertices suffice)
        double h = std::numeric_limits<double>::max();
        for (const auto& v : spine_.vertices) {
            double dot = 0;
            for (int i = 0; i < n; ++i) dot += w[i] * (xbar[i] - v.x[i]);
            h = std::min(h, v.t + dot);
        }
        return h;
    };
    double f = -std::numeric_limits<double>::max();
    if (n == 2) {
        for (int i = 0; i < k; ++i) {
            double a = 6.283185307179586 * i / k;
            f = std::max(f, tight_plane_height({std::cos(a), std::sin(a), 0.0}));
        }
    } else {
        // Fibonacci sphere
        const double ga = 2.399963229728653;
        for (int i = 0; i < k; ++i) {
            double z = 1.0 - 2.0 * (i + 0.5) / k;
            double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = ga * i;
            f = std::max(f, tight_plane_height({rr * std::cos(a), rr * std::sin(a), z}));
        }
    }
    return f;
}

MinkVec RegularDomain::stratum_point(const Stratum& st) const {
    switch (st.kind) {
        case StratumKind::vertex:
            return spine_.vertices.at(st.index);
        case StratumKind::edge: {
            const auto& eg = edge_geoms_.at(st.index);
            return eg.q0 + eg.dir * std::clamp(st.s, 0.0, eg.len);
        }
        case StratumKind::face: {
            const auto& f = spine_.faces.at(st.index);
            return f.origin + f.e1 * st.uv[0] + f.e2 * st.uv[1];
        }
    }
    throw Error("bad stratum");
}

bool RegularDomain::line_resolves(const GradientLine& line, double tol) const {
    MinkVec p = flow(line, 1.0);
    CosmoEval ev;
    try {
        ev = cosmological_time(p);
    } catch (const OutsideDomain&) {
        return false;
    }
    if (std::abs(ev.T - 1.0) > tol) return false;
    MinkVec dr = ev.r - line.r;
    double sep = std::abs(dr.t);
    for (int i = 0; i < dr.n; ++i) sep = std::max(sep, std::abs(dr.x[i]));
    return sep <= tol;
}

void RegularDomain::run_convexity_gate(std::uint64_t seed) const {
    CounterRng rng(seed, 7);
    const int trials = 1000;
    auto random_point = [&]() {
        // random stratum point plus a boosted normal ray: always inside Omega
        std::size_t nv = spine_.vertices.size();
        std::size_t ne = spine_.edges.size();
        std::size_t nf = spine_.faces.size();
        std::size_t pick = rng.next_below(nv + ne + nf);
        MinkVec r;
        if (pick < nv) {
            r = spine_.vertices[pick];
        } else if (pick < nv + ne) {
            const auto& eg = edge_geoms_[pick - nv];
            r = eg.q0 + eg.dir * rng.uniform(0.0, eg.len);
        } else {
            const auto& f = spine_.faces[pick - nv - ne];
            double lo0 = 1e9, hi0 = -1e9, lo1 = 1e9, hi1 = -1e9;
            for (auto& p : f.poly) {
                lo0 = std::min(lo0, p[0]);
                hi0 = std::max(hi0, p[0]);
                lo1 = std::min(lo1, p[1]);
                hi1 = std::max(hi1, p[1]);
            }
            auto uv = project_into_convex_polygon(
                f.poly, {rng.uniform(lo0, hi0), rng.uniform(lo1, hi1)});
            r = f.origin + f.e1 * uv[0] + f.e2 * uv[1];
        }
        std::array<double, 3> rap{0, 0, 0};
        for (int i = 0; i < spine_.n; ++i) rap[i] = rng.uniform(-1.2, 1.2);
        HypPoint N = boost_normal(spine_.n, rap);
        return r + N.v * rng.uniform(0.05, 3.0);
    };
    for (int it = 0; it < trials; ++it) {
        MinkVec p = random_point();
        MinkVec q = random_point();
        MinkVec mid = (p + q) * 0.5;
        if (!contains(mid))
            throw Error("explicit spine rejected: sampled convexity gate failed (midpoint left "
                        "the domain)");
    }
}

SingularMetric::SingularMetric(const SpineComplex& spine) : spine_(&spine) {
    const std::size_t V = spine.vertices.size();
    vertex_dist_.assign(V, std::vector<double>(V, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(V);
    for (const auto& e : spine.edges) {
        adj[e.a].push_back({e.b, e.length});
        adj[e.b].push_back({e.a, e.length});
    }
    if (spine.kind == SpineKind::polygon) {
        // straight segments inside the convex face
        const auto& f = spine.faces.front();
        for (std::size_t i = 0; i < V; ++i)
            for (std::size_t j = 0; j < V; ++j) {
                MinkVec d = spine.vertices[i] - spine.vertices[j];
                double q = lorentz_dot(d, d);
                vertex_dist_[i][j] = std::sqrt(std::max(0.0, q));
            }
        (void)f;
        return;
    }
    for (std::size_t s = 0; s < V; ++s) {
        auto& dist = vertex_dist_[s];
        dist[s] = 0.0;
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            for (auto [w, len] : adj[v]) {
                if (d + len < dist[w]) {
                    dist[w] = d + len;
                    pq.push({d + len, w});
                }
            }
        }
    }
}

double SingularMetric::vertex_distance(std::size_t i, std::size_t j) const {
    return vertex_dist_.at(i).at(j);
}

double SingularMetric::to_vertex(const Stratum& a, std::size_t v) const {
    switch (a.kind) {
        case StratumKind::vertex:
            return vertex_dist_[a.index][v];
        case StratumKind::edge: {
            const auto& e = spine_->edges[a.index];
            return std::min(a.s + vertex_dist_[e.a][v], (e.length - a.s) + vertex_dist_[e.b][v]);
        }
        case StratumKind::face:
            throw Error("face strata are handled by the polygon branch");
    }
    return 0;
}

double SingularMetric::distance(const Stratum& a, const Stratum& b) const {
    if (spine_->kind == SpineKind::polygon) {
        auto coords = [&](const Stratum& st) -> std::array<double, 2> {
            const auto& f = spine_->faces.front();
            if (st.kind == StratumKind::face) return st.uv;
            MinkVec p = st.kind == StratumKind::vertex
                            ? spine_->vertices[st.index]
                            : spine_->vertices[spine_->edges[st.index].a] +
                                  (spine_->vertices[spine_->edges[st.index].b] -
                                   spine_->vertices[spine_->edges[st.index].a]) *
                                      (st.s / spine_->edges[st.index].length);
            MinkVec d = p - f.origin;
            return {lorentz_dot(d, f.e1), lorentz_dot(d, f.e2)};
        };
        auto ca = coords(a), cb = coords(b);
        return std::hypot(ca[0] - cb[0], ca[1] - cb[1]);
    }
    if (spine_->kind == SpineKind::points) {
        if (a.kind == StratumKind::vertex && b.kind == StratumKind::vertex && a.index == b.index)
            return 0.0;
        return a.same_support(b) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (a.kind == StratumKind::edge && b.kind == StratumKind::edge && a.index == b.index)
        return std::abs(a.s - b.s);
    if (b.kind == StratumKind::vertex) return to_vertex(a, b.index);
    if (a.kind == StratumKind::vertex) return to_vertex(b, a.index);
    const auto& eb = spine_->edges[b.index];
    return std::min(to_vertex(a, eb.a) + b.s, to_vertex(a, eb.b) + (eb.length - b.s));
}

}  // namespace ctlab
