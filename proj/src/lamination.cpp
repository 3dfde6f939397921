#include "ctlab/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace ctlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kAngleTol = 1e-12;

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

bool angles_equal(double a, double b) {
    double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return d < kAngleTol || std::abs(d - kTwoPi) < kAngleTol;
}

// strictly inside the CCW open arc from a to b
bool in_open_arc(double x, double a, double b) {
    double span = wrap_angle(b - a);
    double off = wrap_angle(x - a);
    return off > kAngleTol && off < span - kAngleTol;
}

bool leaves_cross(const Leaf& p, const Leaf& q) {
    // shared endpoints never cross
    if (angles_equal(p.theta1, q.theta1) || angles_equal(p.theta1, q.theta2) ||
        angles_equal(p.theta2, q.theta1) || angles_equal(p.theta2, q.theta2))
        return false;
    bool in1 = in_open_arc(q.theta1, p.theta1, p.theta2);
    bool in2 = in_open_arc(q.theta2, p.theta1, p.theta2);
    return in1 != in2;
}

bool same_geodesic(const Leaf& p, const Leaf& q) {
    return (angles_equal(p.theta1, q.theta1) && angles_equal(p.theta2, q.theta2)) ||
           (angles_equal(p.theta1, q.theta2) && angles_equal(p.theta2, q.theta1));
}

// sidedness of a disk point z against the leaf's chord: sign of <(1,z), u>
double chord_side(const MinkVec& u, double zx, double zy) {
    return -u.t + zx * u.x[0] + zy * u.x[1];
}

}  // namespace

MinkVec leaf_normal(double theta1, double theta2) {
    double c1 = std::cos(theta1), s1 = std::sin(theta1);
    double c2 = std::cos(theta2), s2 = std::sin(theta2);
    // Euclidean cross product of the two null directions, time component flipped
    MinkVec u(-(c1 * s2 - s1 * c2), s1 - s2, c2 - c1);
    double q = lorentz_dot(u, u);
    if (!(q > 0))
        throw Error("degenerate leaf: coincident ideal endpoints");
    return u * (1.0 / std::sqrt(q));
}

RegionGraph validate(const MeasuredLamination& lam) {
    const auto& leaves = lam.leaves;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (!(leaves[i].weight > 0))
            throw Error("leaf " + std::to_string(i) + " has non-positive weight");
        if (angles_equal(leaves[i].theta1, leaves[i].theta2))
            throw Error("leaf " + std::to_string(i) + " has coincident endpoints");
    }
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            if (leaves_cross(leaves[i], leaves[j])) throw CrossingLeaves(i, j);

    // transverse measure is additive: merge coincident geodesics
    RegionGraph g;
    for (const auto& lf : leaves) {
        bool merged = false;
        for (auto& m : g.leaves) {
            if (same_geodesic(m, lf)) {
                m.weight += lf.weight;
                merged = true;
                break;
            }
        }
        if (!merged) g.leaves.push_back(lf);
    }
    const std::size_t L = g.leaves.size();
    g.leaf_normals.resize(L);
    for (std::size_t j = 0; j < L; ++j)
        g.leaf_normals[j] = leaf_normal(g.leaves[j].theta1, g.leaves[j].theta2);

    if (L == 0) {
        g.signature.push_back({});
        g.representatives.push_back({0.0, 0.0});
        g.base_region = 0;
        return g;
    }

    // cut the circle at all endpoints; each boundary arc lies in one region
    std::vector<double> angles;
    for (const auto& lf : g.leaves) {
        angles.push_back(wrap_angle(lf.theta1));
        angles.push_back(wrap_angle(lf.theta2));
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < kAngleTol; }),
                 angles.end());

    std::vector<double> arc_mids;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        double a = angles[k];
        double b = (k + 1 < angles.size()) ? angles[k + 1] : angles[0] + kTwoPi;
        if (b - a > 2 * kAngleTol) arc_mids.push_back(wrap_angle(0.5 * (a + b)));
    }

    // group arcs by sign vector
    std::map<std::vector<int>, std::vector<double>> by_sig;
    for (double m : arc_mids) {
        double zx = std::cos(m), zy = std::sin(m);
        std::vector<int> sig(L);
        for (std::size_t j = 0; j < L; ++j)
            sig[j] = chord_side(g.leaf_normals[j], zx, zy) >= 0 ? +1 : -1;
        by_sig[sig].push_back(m);
    }
    if (by_sig.size() != L + 1)
        throw Error("region decomposition inconsistent: expected " + std::to_string(L + 1) +
                    " regions, found " + std::to_string(by_sig.size()));

    for (const auto& [sig, mids] : by_sig) g.signature.push_back(sig);

    // base region: signature closest to the disk center's sign vector
    std::vector<int> center_sig(L);
    for (std::size_t j = 0; j < L; ++j) center_sig[j] = -g.leaf_normals[j].t >= 0 ? +1 : -1;
    std::size_t best = 0, best_ham = L + 1;
    for (std::size_t r = 0; r < g.signature.size(); ++r) {
        std::size_t ham = 0;
        for (std::size_t j = 0; j < L; ++j)
            if (g.signature[r][j] != center_sig[j]) ++ham;
        if (ham < best_ham) {
            best_ham = ham;
            best = r;
        }
    }
    g.base_region = best;

    // orient every leaf away from the base region
    for (std::size_t j = 0; j < L; ++j) {
        if (g.signature[g.base_region][j] == +1) {
            g.leaf_normals[j] = -g.leaf_normals[j];
            for (auto& sig : g.signature) sig[j] = -sig[j];
        }
    }

    // adjacency: the unique pair of regions differing exactly in one leaf
    for (std::size_t j = 0; j < L; ++j) {
        std::vector<std::pair<std::size_t, std::size_t>> found;
        for (std::size_t r = 0; r < g.signature.size(); ++r) {
            if (g.signature[r][j] != -1) continue;
            auto flipped = g.signature[r];
            flipped[j] = +1;
            for (std::size_t s = 0; s < g.signature.size(); ++s)
                if (g.signature[s] == flipped) found.push_back({r, s});
        }
        if (found.size() != 1)
            throw Error("leaf " + std::to_string(j) + " does not separate exactly one region pair");
        g.adjacency.push_back({found[0].first, found[0].second, j});
    }

    // representatives: centroid of the region's boundary arc midpoints and
    // its bounding chord midpoints (interior of a convex region)
    std::vector<std::vector<std::array<double, 2>>> pts(g.signature.size());
    {
        std::size_t r = 0;
        for (const auto& [sig, mids] : by_sig) {
            for (double m : mids) pts[r].push_back({std::cos(m), std::sin(m)});
            ++r;
        }
    }
    for (const auto& adj : g.adjacency) {
        const Leaf& lf = g.leaves[adj.leaf];
        std::array<double, 2> cm = {0.5 * (std::cos(lf.theta1) + std::cos(lf.theta2)),
                                    0.5 * (std::sin(lf.theta1) + std::sin(lf.theta2))};
        pts[adj.region_a].push_back(cm);
        pts[adj.region_b].push_back(cm);
    }
    for (std::size_t r = 0; r < pts.size(); ++r) {
        double cx = 0, cy = 0;
        for (auto& p : pts[r]) {
            cx += p[0];
            cy += p[1];
        }
        g.representatives.push_back({cx / pts[r].size(), cy / pts[r].size()});
    }
    return g;
}

void rebase(RegionGraph& graph, std::size_t new_base) {
    if (new_base >= graph.region_count()) throw Error("unknown region id");
    for (std::size_t j = 0; j < graph.leaves.size(); ++j) {
        if (graph.signature[new_base][j] == +1) {
            graph.leaf_normals[j] = -graph.leaf_normals[j];
            for (auto& sig : graph.signature) sig[j] = -sig[j];
        }
    }
    graph.base_region = new_base;
    for (auto& adj : graph.adjacency)
        if (graph.signature[adj.region_a][adj.leaf] != -1) std::swap(adj.region_a, adj.region_b);
}

double tree_distance(const RegionGraph& graph, const MeasuredLamination&, std::size_t r1,
                     std::size_t r2) {
    if (r1 >= graph.region_count() || r2 >= graph.region_count())
        throw Error("unknown region id");
    double d = 0.0;
    for (std::size_t j = 0; j < graph.leaves.size(); ++j)
        if (graph.signature[r1][j] != graph.signature[r2][j]) d += graph.leaves[j].weight;
    return d;
}

SpineComplex build_spine(const MeasuredLamination&, const RegionGraph& graph) {
    SpineComplex s;
    s.n = 2;
    const std::size_t R = graph.region_count();
    s.vertices.resize(R);
    for (std::size_t r = 0; r < R; ++r) {
        MinkVec v(0.0, 0.0, 0.0);
        for (std::size_t j = 0; j < graph.leaves.size(); ++j)
            if (graph.signature[r][j] == +1)
                v = v + graph.leaf_normals[j] * graph.leaves[j].weight;
        s.vertices[r] = v;
    }
    for (const auto& adj : graph.adjacency) {
        MinkVec d = s.vertices[adj.region_b] - s.vertices[adj.region_a];
        double q = lorentz_dot(d, d);
        if (!(q > 0)) throw AchronalityViolation("spine edge not spacelike");
        s.edges.push_back({adj.region_a, adj.region_b, adj.leaf, std::sqrt(q)});
    }
    s.kind = s.edges.empty() ? SpineKind::points : SpineKind::tree;
    check_achronal(s);
    return s;
}

namespace {

void check_tree_shape(const SpineComplex& s) {
    if (s.kind != SpineKind::tree) return;
    if (s.edges.size() + 1 != s.vertices.size())
        throw Error("tree spine must have #vertices-1 edges");
    std::vector<std::vector<std::size_t>> adj(s.vertices.size());
    for (const auto& e : s.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<char> seen(s.vertices.size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t cnt = 0;
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        ++cnt;
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
    }
    if (cnt != s.vertices.size()) throw Error("tree spine edge graph is not connected");
}

void build_face_frame(const SpineComplex& s, SpineFace& f) {
    if (f.cycle.size() < 3) throw Error("face needs at least 3 vertices");
    f.origin = s.vertices[f.cycle[0]];
    MinkVec a = s.vertices[f.cycle[1]] - f.origin;
    MinkVec b = s.vertices[f.cycle[2]] - f.origin;
    double qa = lorentz_dot(a, a);
    if (!(qa > 0)) throw AchronalityViolation("face edge not spacelike");
    f.e1 = a * (1.0 / std::sqrt(qa));
    MinkVec b2 = b - f.e1 * lorentz_dot(b, f.e1);
    double qb = lorentz_dot(b2, b2);
    if (!(qb > 1e-14)) throw Error("degenerate face: collinear vertices");
    f.e2 = b2 * (1.0 / std::sqrt(qb));
    // all cycle vertices must lie in the plane; record frame coordinates
    f.poly.clear();
    for (auto vi : f.cycle) {
        MinkVec d = s.vertices[vi] - f.origin;
        double u = lorentz_dot(d, f.e1);
        double v = lorentz_dot(d, f.e2);
        MinkVec res = d - f.e1 * u - f.e2 * v;
        if (std::abs(lorentz_dot(res, res)) > 1e-16)
            throw Error("face vertices are not coplanar");
        f.poly.push_back({u, v});
    }
    // convexity: consistent turn sign around the cycle
    int sign = 0;
    const std::size_t m = f.poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        auto& p0 = f.poly[i];
        auto& p1 = f.poly[(i + 1) % m];
        auto& p2 = f.poly[(i + 2) % m];
        double cr = (p1[0] - p0[0]) * (p2[1] - p1[1]) - (p1[1] - p0[1]) * (p2[0] - p1[0]);
        if (std::abs(cr) < 1e-14) continue;
        int sg = cr > 0 ? 1 : -1;
        if (sign == 0)
            sign = sg;
        else if (sign != sg)
            throw Error("face polygon is not convex");
    }
}

}  // namespace

void check_achronal(const SpineComplex& spine, int samples_per_stratum) {
    std::vector<MinkVec> pts = spine.vertices;
    for (const auto& e : spine.edges) {
        MinkVec d = spine.vertices[e.b] - spine.vertices[e.a];
        for (int k = 1; k < samples_per_stratum; ++k)
            pts.push_back(spine.vertices[e.a] + d * (double(k) / samples_per_stratum));
    }
    for (const auto& f : spine.faces) {
        // boundary walk pulled toward the centroid at varying depth
        double cu = 0, cv = 0;
        for (auto& p : f.poly) {
            cu += p[0];
            cv += p[1];
        }
        cu /= f.poly.size();
        cv /= f.poly.size();
        const std::size_t m = f.poly.size();
        for (int k = 0; k < samples_per_stratum; ++k) {
            double s = double(k) / samples_per_stratum * m;
            std::size_t i = std::size_t(s) % m;
            double frac = s - std::floor(s);
            double bu = f.poly[i][0] + frac * (f.poly[(i + 1) % m][0] - f.poly[i][0]);
            double bv = f.poly[i][1] + frac * (f.poly[(i + 1) % m][1] - f.poly[i][1]);
            double depth = 0.25 + 0.25 * (k % 4);
            double u = cu + (bu - cu) * depth;
            double v = cv + (bv - cv) * depth;
            pts.push_back(f.origin + f.e1 * u + f.e2 * v);
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            MinkVec d = pts[i] - pts[j];
            double q = lorentz_dot(d, d);
            if (q < -1e-10)
                throw AchronalityViolation("spine points at indices " + std::to_string(i) + "," +
                                           std::to_string(j) + " are chronologically related");
        }
    }
}

SpineComplex make_explicit_spine(int n, SpineKind kind, std::vector<MinkVec> vertices,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                 const std::vector<std::vector<std::size_t>>& faces) {
    SpineComplex s;
    s.n = n;
    s.kind = kind;
    s.vertices = std::move(vertices);
    if (s.vertices.empty()) throw Error("spine needs at least one vertex");
    for (const auto& v : s.vertices)
        if (v.n != n) throw DimensionMismatch();
    for (auto [a, b] : edges) {
        if (a >= s.vertices.size() || b >= s.vertices.size())
            throw Error("edge references unknown vertex");
        MinkVec d = s.vertices[b] - s.vertices[a];
        double q = lorentz_dot(d, d);
        if (!(q > 0)) throw AchronalityViolation("spine edge not spacelike");
        s.edges.push_back({a, b, std::nullopt, std::sqrt(q)});
    }
    for (const auto& cyc : faces) {
        SpineFace f;
        f.cycle = cyc;
        for (auto vi : cyc)
            if (vi >= s.vertices.size()) throw Error("face references unknown vertex");
        build_face_frame(s, f);
        // face boundaries must be present as edge strata
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            std::size_t va = cyc[i], vb = cyc[(i + 1) % cyc.size()];
            bool found = false;
            for (const auto& e : s.edges)
                if ((e.a == va && e.b == vb) || (e.a == vb && e.b == va)) found = true;
            if (!found) {
                MinkVec d = s.vertices[vb] - s.vertices[va];
                double q = lorentz_dot(d, d);
                if (!(q > 0)) throw AchronalityViolation("face boundary edge not spacelike");
                s.edges.push_back({va, vb, std::nullopt, std::sqrt(q)});
            }
        }
        s.faces.push_back(std::move(f));
    }
    if (kind == SpineKind::polygon && s.faces.empty())
        throw Error("polygon spine needs at least one face");
    check_tree_shape(s);
    check_achronal(s);
    return s;
}

}  // namespace ctlab
