#include "ctlab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ctlab/rng.hpp"
#include "ctlab/util.hpp"

namespace ctlab {

namespace {

double chord(const MinkVec& a, const MinkVec& b) {
    MinkVec d = a - b;
    double q = lorentz_dot(d, d);
    if (q < 0) throw Error("level chord is not spacelike");
    return std::sqrt(q);
}

}  // namespace

LevelSurface::LevelSurface(const RegularDomain& dom, double a) : dom_(&dom), a_(a) {
    if (dom.dim() != 2) throw Error("level meshing is implemented for n = 2 domains only");
    if (!(a > 0)) throw Error("level must be positive");
}

double LevelSurface::height(double x, double y) const {
    // the level graph is the lower envelope over spine strata of
    //   q_t + sqrt(a^2 + |xbar - qbar|^2)
    // with the inner minimization over each stratum in closed form
    const auto& sp = dom_->spine();
    double t = std::numeric_limits<double>::max();
    for (const auto& v : sp.vertices) {
        double dx = x - v.x[0], dy = y - v.x[1];
        t = std::min(t, v.t + std::sqrt(a_ * a_ + dx * dx + dy * dy));
    }
    for (const auto& e : sp.edges) {
        const MinkVec& q0 = sp.vertices[e.a];
        MinkVec d = (sp.vertices[e.b] - q0) * (1.0 / e.length);
        double wx = x - q0.x[0], wy = y - q0.x[1];
        double mu = d.x[0] * d.x[0] + d.x[1] * d.x[1];  // = 1 + d_t^2
        double wd = wx * d.x[0] + wy * d.x[1];
        double rho2 = std::max(0.0, wx * wx + wy * wy - wd * wd / mu);
        double z = -d.t * std::sqrt(mu * (a_ * a_ + rho2));
        double s = std::clamp((wd + z) / mu, 0.0, e.length);
        double ex = wx - s * d.x[0], ey = wy - s * d.x[1];
        t = std::min(t, q0.t + s * d.t + std::sqrt(a_ * a_ + ex * ex + ey * ey));
    }
    for (const auto& f : sp.faces) {
        // spacelike plane as a spatial graph q_t = c + g . qbar
        double a11 = f.e1.x[0], a12 = f.e1.x[1], b1 = f.e1.t;
        double a21 = f.e2.x[0], a22 = f.e2.x[1], b2 = f.e2.t;
        double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-14) continue;  // degenerate projection
        double gx = (b1 * a22 - b2 * a12) / det;
        double gy = (a11 * b2 - a21 * b1) / det;
        double g2 = gx * gx + gy * gy;
        double shrink = a_ / std::sqrt(std::max(1e-14, 1.0 - g2));
        // unconstrained minimizer in base-plane coordinates
        double qx = x - gx * shrink, qy = y - gy * shrink;
        // back to frame coordinates and clamp into the polygon
        MinkVec probe = f.origin;
        double rx = qx - f.origin.x[0], ry = qy - f.origin.x[1];
        double u = (rx * a22 - ry * a12) / det;
        double v = (a11 * ry - a21 * rx) / det;
        auto cl = project_into_convex_polygon(f.poly, {u, v});
        MinkVec q = f.origin + f.e1 * cl[0] + f.e2 * cl[1];
        double dx = x - q.x[0], dy = y - q.x[1];
        t = std::min(t, q.t + std::sqrt(a_ * a_ + dx * dx + dy * dy));
        (void)probe;
    }
    return t;
}

MinkVec LevelSurface::point(double x, double y) const { return MinkVec(height(x, y), x, y); }

MinkVec LevelSurface::point(double x, double y, Stratum& st) const {
    MinkVec p(height(x, y), x, y);
    RegularDomain::BestCand bc;
    dom_->best_candidate(p, bc);
    st = bc.st;
    return p;
}

LevelMesh::LevelMesh(const RegularDomain& dom, double a, Window window, double h)
    : dom_(&dom), surf_(dom, a), a_(a), h_(h), window_(window) {
    if (!(h > 0)) throw Error("mesh spacing must be positive");
    nx_ = int(std::ceil((window.hi[0] - window.lo[0]) / h)) + 1;
    ny_ = int(std::ceil((window.hi[1] - window.lo[1]) / h)) + 1;
    if (nx_ < 2 || ny_ < 2) throw Error("mesh window is empty");
    if (std::size_t(nx_) * std::size_t(ny_) > 40'000'000)
        throw Error("mesh window too large for the requested spacing");
    points_.reserve(std::size_t(nx_) * ny_);
    strata_.reserve(std::size_t(nx_) * ny_);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            double x = window.lo[0] + i * h;
            double y = window.lo[1] + j * h;
            Stratum st;
            points_.push_back(surf_.point(x, y, st));
            strata_.push_back(st);
        }
    }
    grid_total_ = points_.size();
}

std::size_t LevelMesh::node_nearest(double x, double y) const {
    int i = std::clamp(int(std::lround((x - window_.lo[0]) / h_)), 0, nx_ - 1);
    int j = std::clamp(int(std::lround((y - window_.lo[1]) / h_)), 0, ny_ - 1);
    return grid_index(i, j);
}

std::size_t LevelMesh::insert_point(const MinkVec& p) {
    std::size_t id = points_.size();
    points_.push_back(p);
    RegularDomain::BestCand bc;
    dom_->best_candidate(p, bc);
    strata_.push_back(bc.st);
    int ci = std::clamp(int((p.x[0] - window_.lo[0]) / h_), 0, nx_ - 1);
    int cj = std::clamp(int((p.x[1] - window_.lo[1]) / h_), 0, ny_ - 1);
    std::vector<std::pair<std::size_t, double>> links;
    for (int dj = -2; dj <= 2; ++dj) {
        for (int di = -2; di <= 2; ++di) {
            int i = ci + di, j = cj + dj;
            if (i < 0 || i >= nx_ || j < 0 || j >= ny_) continue;
            std::size_t g = grid_index(i, j);
            links.push_back({g, chord(p, points_[g])});
        }
    }
    extra_links_.push_back(std::move(links));
    return id;
}

void LevelMesh::neighbors(std::size_t v, std::vector<std::pair<std::size_t, double>>& out) const {
    out.clear();
    if (v >= grid_total_) {
        out = extra_links_[v - grid_total_];
        return;
    }
    int i = int(v % nx_), j = int(v / nx_);
    static const int off[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                  {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (auto& o : off) {
        int ii = i + o[0], jj = j + o[1];
        if (ii < 0 || ii >= nx_ || jj < 0 || jj >= ny_) continue;
        std::size_t w = grid_index(ii, jj);
        out.push_back({w, chord(points_[v], points_[w])});
    }
    for (std::size_t k = 0; k < extra_links_.size(); ++k)
        for (auto& [g, len] : extra_links_[k])
            if (g == v) out.push_back({grid_total_ + k, len});
}

void LevelMesh::dijkstra_full(std::size_t from, std::vector<double>& dist,
                              std::vector<std::size_t>& prev) const {
    const std::size_t N = points_.size();
    dist.assign(N, std::numeric_limits<double>::infinity());
    prev.assign(N, SIZE_MAX);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[from] = 0;
    pq.push({0, from});
    std::vector<std::pair<std::size_t, double>> nb;
    nb.reserve(16);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        neighbors(v, nb);
        for (auto& [w, len] : nb) {
            if (d + len < dist[w]) {
                dist[w] = d + len;
                prev[w] = v;
                pq.push({d + len, w});
            }
        }
    }
}

std::vector<std::size_t> LevelMesh::extract_path(const std::vector<std::size_t>& prev,
                                                 std::size_t from, std::size_t to) const {
    if (prev[to] == SIZE_MAX && to != from) throw Error("mesh graph search failed");
    std::vector<std::size_t> path;
    for (std::size_t v = to; v != SIZE_MAX; v = prev[v]) {
        path.push_back(v);
        if (v == from) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::size_t> LevelMesh::dijkstra(std::size_t from, std::size_t to) const {
    std::vector<double> dist;
    std::vector<std::size_t> prev;
    dijkstra_full(from, dist, prev);
    if (!std::isfinite(dist[to])) throw Error("mesh graph search failed");
    return extract_path(prev, from, to);
}

LevelMesh mesh_level(const RegularDomain& dom, double a, Window window, double h) {
    return LevelMesh(dom, a, window, h);
}

double sweep_spacing(double h_unit, double a) { return h_unit * std::sqrt(a * std::max(a, 1.0)); }

namespace {

using XY = std::array<double, 2>;

double polyline_length(const LevelSurface& surf, const std::vector<XY>& xs,
                       std::vector<MinkVec>& pts) {
    pts.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = surf.point(xs[i][0], xs[i][1]);
    double L = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) L += chord(pts[i], pts[i + 1]);
    return L;
}

std::vector<XY> resample(const std::vector<XY>& xs, double spacing) {
    if (xs.size() < 2) return xs;
    std::vector<double> seglen(xs.size() - 1);
    double total = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        seglen[i] = std::hypot(xs[i + 1][0] - xs[i][0], xs[i + 1][1] - xs[i][1]);
        total += seglen[i];
    }
    int m = std::max(2, int(std::lround(total / spacing)));
    std::vector<XY> out;
    out.reserve(m + 1);
    out.push_back(xs.front());
    double want = total / m, acc = 0;
    std::size_t seg = 0;
    for (int k = 1; k < m; ++k) {
        double target = k * want;
        while (seg + 1 < seglen.size() && acc + seglen[seg] < target) acc += seglen[seg++];
        double frac = seglen[seg] > 0 ? (target - acc) / seglen[seg] : 0.0;
        out.push_back({xs[seg][0] + frac * (xs[seg + 1][0] - xs[seg][0]),
                       xs[seg][1] + frac * (xs[seg + 1][1] - xs[seg][1])});
    }
    out.push_back(xs.back());
    return out;
}

// coordinate-descent shortening of the lifted polyline; endpoints fixed;
// line-search brackets follow the local vertex spacing
double shorten(const LevelSurface& surf, std::vector<XY>& xs, double step, int max_passes,
               const Window* window, bool* touched_boundary) {
    std::vector<MinkVec> pts;
    double len = polyline_length(surf, xs, pts);
    if (xs.size() < 3) return len;
    for (int pass = 0; pass < max_passes; ++pass) {
        double before = len;
        bool fwd = (pass % 2 == 0);
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            std::size_t i = fwd ? k : xs.size() - 1 - k;
            const MinkVec& A = pts[i - 1];
            const MinkVec& B = pts[i + 1];
            double base = chord(A, pts[i]) + chord(pts[i], B);
            double span = std::max({step,
                                    std::hypot(xs[i][0] - xs[i - 1][0], xs[i][1] - xs[i - 1][1]),
                                    std::hypot(xs[i + 1][0] - xs[i][0], xs[i + 1][1] - xs[i][1])});
            for (int coord = 0; coord < 2; ++coord) {
                double c0 = xs[i][coord];
                auto local = [&](double c) {
                    XY q = xs[i];
                    q[coord] = c;
                    MinkVec P = surf.point(q[0], q[1]);
                    return chord(A, P) + chord(P, B);
                };
                double lo = c0 - span, hi = c0 + span;
                if (window) {
                    lo = std::max(lo, window->lo[coord] + 1e-12);
                    hi = std::min(hi, window->hi[coord] - 1e-12);
                }
                double best = golden_min(local, lo, hi, 30);
                double v = local(best);
                if (v < base - 1e-15) {
                    xs[i][coord] = best;
                    pts[i] = surf.point(xs[i][0], xs[i][1]);
                    base = v;
                }
            }
        }
        len = polyline_length(surf, xs, pts);
        if (before - len < 1e-13 * (1.0 + len)) break;
    }
    if (window && touched_boundary) {
        *touched_boundary = false;
        for (const auto& q : xs)
            if (!window->contains(q[0], q[1], 1.05 * step)) *touched_boundary = true;
    }
    return len;
}

}  // namespace

// resample at h, then keep flat-stratum runs three times coarser: chords on
// edge/face strata are exact, only curved caps need the fine spacing
std::vector<std::array<double, 2>> resample_stratified(const LevelSurface& surf,
                                                       const std::vector<std::array<double, 2>>& xs,
                                                       double h) {
    std::vector<XY> fine = resample(xs, h);
    if (fine.size() <= 3) return fine;
    std::vector<Stratum> st(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) surf.point(fine[i][0], fine[i][1], st[i]);
    std::vector<XY> out;
    out.push_back(fine.front());
    for (std::size_t i = 1; i + 1 < fine.size(); ++i) {
        bool curved = st[i].kind == StratumKind::vertex ||
                      st[i - 1].kind == StratumKind::vertex ||
                      st[i + 1].kind == StratumKind::vertex ||
                      !st[i].same_support(st[i - 1]) || !st[i].same_support(st[i + 1]);
        if (curved || i % 3 == 0) out.push_back(fine[i]);
    }
    out.push_back(fine.back());
    return out;
}

namespace {

void finish_estimate(DistanceEstimate& est) {
    const auto& H = est.history;
    est.value = H.back().second;
    if (H.size() >= 2) {
        double vk = H[H.size() - 1].second, vp = H[H.size() - 2].second;
        est.extrapolated = vk + (vk - vp) / 3.0;
        double resid;
        if (H.size() >= 3) {
            double vpp = H[H.size() - 3].second;
            double prev_ex = vp + (vp - vpp) / 3.0;
            resid = std::abs(est.extrapolated - prev_ex);
        } else {
            resid = std::abs(vk - vp) / 3.0;
        }
        est.error = std::abs(est.value - est.extrapolated) + resid;
    } else {
        est.extrapolated = est.value;
        est.error = 0.1 * est.value + 1e-12;
    }
}

}  // namespace

double shorten_on_surface(const LevelSurface& surf, std::vector<std::array<double, 2>>& xs,
                          double step, int max_passes) {
    return shorten(surf, xs, step, max_passes, nullptr, nullptr);
}

std::vector<std::array<double, 2>> resample_polyline(const std::vector<std::array<double, 2>>& xs,
                                                     double spacing) {
    return resample(xs, spacing);
}

namespace {

Window auto_window(const MinkVec& p1, const MinkVec& p2, double a, int growth) {
    double sep = std::hypot(p1.x[0] - p2.x[0], p1.x[1] - p2.x[1]);
    double pad = (1.5 * sep + 3 * a) * std::pow(2.0, growth) + 1e-6;
    Window w;
    w.lo = {std::min(p1.x[0], p2.x[0]) - pad, std::min(p1.x[1], p2.x[1]) - pad};
    w.hi = {std::max(p1.x[0], p2.x[0]) + pad, std::max(p1.x[1], p2.x[1]) + pad};
    return w;
}

}  // namespace

namespace {

bool same_footpoint(const MinkVec& p1, const MinkVec& p2) {
    MinkVec d12 = p1 - p2;
    double same = std::abs(d12.t);
    for (int i = 0; i < 2; ++i) same = std::max(same, std::abs(d12.x[i]));
    return same < 1e-14;
}

GeodesicResult zero_result(const MinkVec& p1, const MinkVec& p2, double a, double h) {
    GeodesicResult res;
    res.level = a;
    res.est.value = 0.0;
    res.est.extrapolated = 0.0;
    res.est.error = 0.0;
    res.est.history.push_back({h, 0.0});
    res.path = {{p1.x[0], p1.x[1]}, {p2.x[0], p2.x[1]}};
    return res;
}

// shortening ladder from an initial base-plane polyline; endpoints pinned
GeodesicResult optimize_path(const LevelSurface& surf, const Window& win, double h,
                             std::vector<XY> xs, bool seeded, int refinements, const MinkVec& p1,
                             const MinkVec& p2) {
    GeodesicResult res;
    res.level = surf.level();
    bool touched = false;
    auto pin = [&]() {
        xs.front() = {p1.x[0], p1.x[1]};
        xs.back() = {p2.x[0], p2.x[1]};
    };
    // settle the large-scale shape coarse-to-fine: few vertices relax fast,
    // then each refinement only needs local cleanup
    double len0 = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        len0 += std::hypot(xs[i + 1][0] - xs[i][0], xs[i + 1][1] - xs[i][1]);
    double hs = seeded ? 2 * h : std::max(h, len0 / 6.0);
    while (hs > h * 1.01) {
        xs = resample_stratified(surf, xs, hs);
        pin();
        shorten(surf, xs, hs, seeded ? 60 : 200, &win, &touched);
        if (touched) throw WindowTooSmall();
        hs *= 0.5;
    }
    xs = resample_stratified(surf, xs, h);
    pin();
    int passes0 = seeded ? std::max<int>(80, 2 * int(xs.size()))
                         : std::max<int>(120, 5 * int(xs.size()));
    double v0 = shorten(surf, xs, h, passes0, &win, &touched);
    if (touched) throw WindowTooSmall();
    res.est.history.push_back({h, v0});
    for (int r = 1; r < refinements; ++r) {
        h *= 0.5;
        xs = resample_stratified(surf, xs, h);
        pin();
        double v = shorten(surf, xs, h, std::max<int>(160, 4 * int(xs.size())), &win, &touched);
        if (touched) throw WindowTooSmall();
        // refinement of an already-shortened path cannot lengthen
        v = std::min(v, res.est.history.back().second);
        res.est.history.push_back({h, v});
    }
    finish_estimate(res.est);
    res.path = xs;
    return res;
}

std::vector<XY> init_from_mesh(const LevelMesh& mesh, const MinkVec& p1, const MinkVec& p2) {
    LevelMesh work = mesh;
    std::size_t s = work.insert_point(p1);
    std::size_t t = work.insert_point(p2);
    auto node_path = work.dijkstra(s, t);
    std::vector<XY> xs;
    xs.reserve(node_path.size());
    for (auto v : node_path) xs.push_back(work.node_xbar(v));
    return xs;
}

}  // namespace

GeodesicResult geodesic_distance(const LevelMesh& mesh, const GradientLine& l1,
                                 const GradientLine& l2, int refinements) {
    const double a = mesh.level();
    MinkVec p1 = flow(l1, a);
    MinkVec p2 = flow(l2, a);
    if (same_footpoint(p1, p2)) return zero_result(p1, p2, a, mesh.spacing());
    const Window& win = mesh.window();
    if (!win.contains(p1.x[0], p1.x[1]) || !win.contains(p2.x[0], p2.x[1]))
        throw WindowTooSmall();
    return optimize_path(mesh.surface(), win, mesh.spacing(), init_from_mesh(mesh, p1, p2), false,
                         refinements, p1, p2);
}

GeodesicResult distance_between_lines(const RegularDomain& dom, double a, const GradientLine& l1,
                                      const GradientLine& l2, double h_unit, int refinements) {
    return LinePairSolver(dom, l1, l2, h_unit, refinements).at(a);
}

LinePairSolver::LinePairSolver(const RegularDomain& dom, GradientLine l1, GradientLine l2,
                               double h_unit, int refinements)
    : dom_(&dom), l1_(std::move(l1)), l2_(std::move(l2)), h_unit_(h_unit),
      refinements_(refinements) {}

GeodesicResult LinePairSolver::at(double a) {
    for (const auto& [level, res] : cache_)
        if (level == a) return res;
    MinkVec p1 = flow(l1_, a);
    MinkVec p2 = flow(l2_, a);
    double h = sweep_spacing(h_unit_, a);
    if (same_footpoint(p1, p2)) return zero_result(p1, p2, a, h);
    LevelSurface surf(*dom_, a);
    // transported seed: previous path carried along its gradient lines
    if (!seed_.empty()) {
        LevelSurface prev(*dom_, seed_level_);
        std::vector<XY> xs;
        xs.reserve(seed_.size());
        for (const auto& q : seed_) {
            CosmoEval ev = dom_->cosmological_time(prev.point(q[0], q[1]));
            MinkVec moved = ev.r + ev.N.v * a;
            xs.push_back({moved.x[0], moved.x[1]});
        }
        Window w = auto_window(p1, p2, a, 0);
        try {
            GeodesicResult res = optimize_path(surf, w, h, std::move(xs), true, refinements_, p1,
                                               p2);
            seed_ = res.path;
            seed_level_ = a;
            cache_.push_back({a, res});
            return res;
        } catch (const WindowTooSmall&) {
            // fall through to the mesh route
        }
    }
    for (int growth = 0; growth <= 3; ++growth) {
        Window w = auto_window(p1, p2, a, growth);
        LevelMesh mesh(*dom_, a, w, h);
        try {
            GeodesicResult res = optimize_path(surf, w, h, init_from_mesh(mesh, p1, p2), false,
                                               refinements_, p1, p2);
            seed_ = res.path;
            seed_level_ = a;
            cache_.push_back({a, res});
            return res;
        } catch (const WindowTooSmall&) {
            if (growth == 3) throw;
        }
    }
    throw WindowTooSmall();
}

std::pair<double, double> project_curve_length(const RegularDomain& dom,
                                               const std::vector<MinkVec>& polyline, double a) {
    if (polyline.size() < 2) return {0.0, 0.0};
    std::vector<MinkVec> image;
    image.reserve(polyline.size());
    double b = -1;
    for (const auto& p : polyline) {
        CosmoEval ev = dom.cosmological_time(p);
        if (b < 0) b = ev.T;
        if (std::abs(ev.T - b) > 1e-6) throw Error("polyline node off-level");
        image.push_back(ev.r + ev.N.v * a);
    }
    if (!(a > b)) throw Error("projection target level must lie above the curve");
    double Lb = 0, La = 0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        Lb += chord(polyline[i], polyline[i + 1]);
        La += chord(image[i], image[i + 1]);
    }
    return {Lb, La};
}

CompareReport compare_levels(const RegularDomain& dom, double a, double b,
                             const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                             double h_unit, int refinements, int threads) {
    if (!(a >= b && b > 0)) throw Error("compare_levels needs a >= b > 0");
    CompareReport rep;
    rep.a = a;
    rep.b = b;
    rep.pairs.resize(pairs.size());
    parallel_for_index(pairs.size(), threads, [&](std::size_t i) {
        LinePairSolver solver(dom, pairs[i].first, pairs[i].second, h_unit, refinements);
        auto ra = solver.at(a);
        auto rb = solver.at(b);
        ComparePair cp;
        cp.d_a = ra.est;
        cp.d_b = rb.est;
        cp.ratio = rb.est.value > 0 ? ra.est.value / rb.est.value : 1.0;
        double tol = ra.est.error + rb.est.error;
        cp.lower_ok = rb.est.value <= ra.est.value + tol;
        double k2 = (a / b) * (a / b);
        cp.upper_ok = ra.est.value <= k2 * rb.est.value + (ra.est.error + k2 * rb.est.error);
        rep.pairs[i] = cp;
    });
    rep.min_ratio = std::numeric_limits<double>::max();
    rep.max_ratio = 0;
    for (const auto& cp : rep.pairs) {
        rep.min_ratio = std::min(rep.min_ratio, cp.ratio);
        rep.max_ratio = std::max(rep.max_ratio, cp.ratio);
        if (!cp.lower_ok || !cp.upper_ok) ++rep.violations;
    }
    if (rep.pairs.empty()) rep.min_ratio = rep.max_ratio = 1.0;
    return rep;
}

ConvexSurface make_shifted_surface(const RegularDomain& dom, const MinkVec& shift, double level) {
    SpineComplex aux = dom.spine();
    for (auto& v : aux.vertices) v = v + shift;
    for (auto& f : aux.faces) f.origin = f.origin + shift;
    RegularDomain auxdom(std::move(aux));

    // sampling half-width keeping the surface inside the main domain: the
    // per-vertex cone bound needs cosh(rho) < (a'^2 + e^2)/(2 a' e), and the
    // square window must stay inscribed in that disk
    double eps = std::max(1e-9, -shift.t);
    double lim = (level * level + eps * eps) / (2 * level * eps);
    double rho = std::acosh(std::max(1.0, 0.8 * lim));
    rho = std::min(rho, 3.0);
    double R = 0.7 * level * std::sinh(rho);
    double cx = 0, cy = 0;
    for (const auto& v : dom.spine().vertices) {
        cx += v.x[0];
        cy += v.x[1];
    }
    cx /= dom.spine().vertices.size();
    cy /= dom.spine().vertices.size();
    Window w{{cx - R, cy - R}, {cx + R, cy + R}};
    return ConvexSurface(std::move(auxdom), level, w);
}

PairingReport pairing_bound_check(const RegularDomain& dom, const ConvexSurface& surf,
                                  std::size_t m, std::uint64_t seed) {
    PairingReport rep;
    if (m == 0) return rep;
    LevelSurface aux_surface(surf.aux, surf.level);
    // the spine must lie in the past of the surface
    for (const auto& v : dom.spine().vertices) {
        if (aux_surface.height(v.x[0], v.x[1]) <= v.t)
            throw Error("surface does not pass above the spine");
    }
    CounterRng rng(seed, 41);
    rep.sup_T = 0;
    rep.inf_T = std::numeric_limits<double>::max();
    rep.data.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        double x = rng.uniform(surf.window.lo[0], surf.window.hi[0]);
        double y = rng.uniform(surf.window.lo[1], surf.window.hi[1]);
        MinkVec p = aux_surface.point(x, y);
        CosmoEval main_ev = dom.cosmological_time(p);  // throws OutsideDomain if a sample exits
        CosmoEval aux_ev = surf.aux.cosmological_time(p);
        double pairing = lorentz_dot(main_ev.N.v, aux_ev.N.v);
        rep.data.push_back({pairing, main_ev.T});
        rep.max_abs_pairing = std::max(rep.max_abs_pairing, std::abs(pairing));
        rep.sup_T = std::max(rep.sup_T, main_ev.T);
        rep.inf_T = std::min(rep.inf_T, main_ev.T);
    }
    rep.samples = m;
    rep.bound = rep.sup_T / rep.inf_T;
    rep.margin = rep.bound - rep.max_abs_pairing;
    return rep;
}

PastSweepResult past_sweep(const RegularDomain& dom,
                           const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                           const std::vector<double>& a_list, double h_unit, int refinements,
                           int threads) {
    if (a_list.size() < 3) throw Error("past sweep needs at least 3 levels");
    PastSweepResult out;
    const std::size_t P = pairs.size(), A = a_list.size();
    out.rows.resize(P * A);
    std::vector<GeodesicResult> results(P * A);
    parallel_for_index(P, threads, [&](std::size_t pi) {
        LinePairSolver solver(dom, pairs[pi].first, pairs[pi].second, h_unit, refinements);
        for (std::size_t ai = 0; ai < A; ++ai) {
            results[pi * A + ai] = solver.at(a_list[ai]);
            out.rows[pi * A + ai] = {pi, a_list[ai], results[pi * A + ai].est};
        }
    });
    SingularMetric sm = dom.singular_set();
    for (std::size_t pi = 0; pi < P; ++pi) {
        PastPairSummary ps;
        ps.pair_id = pi;
        // affine model d(a) = d0 + c a fitted by least squares
        double Sa = 0, Saa = 0, Sd = 0, Sad = 0, n = double(A);
        for (std::size_t ai = 0; ai < A; ++ai) {
            double a = a_list[ai], d = results[pi * A + ai].est.value;
            Sa += a;
            Saa += a * a;
            Sd += d;
            Sad += a * d;
        }
        double det = n * Saa - Sa * Sa;
        double c = (n * Sad - Sa * Sd) / det;
        double d0 = (Sd - c * Sa) / n;
        double resid = 0, maxbar = 0;
        for (std::size_t ai = 0; ai < A; ++ai) {
            double a = a_list[ai];
            resid = std::max(resid, std::abs(d0 + c * a - results[pi * A + ai].est.value));
            maxbar = std::max(maxbar, results[pi * A + ai].est.error);
        }
        ps.extrapolated = d0;
        ps.error = 2.0 * resid + 1.5 * maxbar + 1e-12;
        ps.oracle = sm.distance(pairs[pi].first.stratum, pairs[pi].second.stratum);
        ps.gap = std::abs(d0 - ps.oracle);
        // Lorentzian length of the retracted shortened path at the lowest level
        std::size_t ai_min = 0;
        for (std::size_t ai = 1; ai < A; ++ai)
            if (a_list[ai] < a_list[ai_min]) ai_min = ai;
        const auto& path = results[pi * A + ai_min].path;
        LevelSurface surf(dom, a_list[ai_min]);
        double rl = 0;
        MinkVec prev_r;
        bool first = true;
        for (const auto& q : path) {
            CosmoEval ev = dom.cosmological_time(surf.point(q[0], q[1]));
            if (!first) {
                MinkVec dr = ev.r - prev_r;
                rl += std::sqrt(std::max(0.0, lorentz_dot(dr, dr)));
            }
            prev_r = ev.r;
            first = false;
        }
        ps.retracted_length = rl;
        out.pairs.push_back(ps);
    }
    return out;
}

FutureSweepResult future_sweep(const RegularDomain& dom,
                               const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                               const std::vector<double>& a_list, double h_unit, int refinements,
                               int threads) {
    if (a_list.size() < 3) throw Error("future sweep needs at least 3 levels");
    FutureSweepResult out;
    const std::size_t P = pairs.size(), A = a_list.size();
    out.rows.resize(P * A);
    std::vector<GeodesicResult> results(P * A);
    parallel_for_index(P, threads, [&](std::size_t pi) {
        LinePairSolver solver(dom, pairs[pi].first, pairs[pi].second, h_unit, refinements);
        for (std::size_t ai = 0; ai < A; ++ai) {
            results[pi * A + ai] = solver.at(a_list[ai]);
            out.rows[pi * A + ai] = {pi, a_list[ai], results[pi * A + ai].est};
        }
    });
    for (std::size_t pi = 0; pi < P; ++pi) {
        FuturePairSummary fs;
        fs.pair_id = pi;
        fs.target = hyperbolic_distance(pairs[pi].first.N, pairs[pi].second.N);
        for (std::size_t ai = 0; ai < A; ++ai) {
            double a = a_list[ai];
            const auto& est = results[pi * A + ai].est;
            fs.renormalized.push_back(est.value / a);
            fs.gaps.push_back(std::abs(est.value / a - fs.target));
            fs.errors.push_back(est.error / a);
        }
        for (std::size_t ai = 0; ai + 1 < A; ++ai)
            if (fs.gaps[ai + 1] > fs.gaps[ai] + fs.errors[ai] + fs.errors[ai + 1])
                fs.monotone_within_bars = false;
        out.pairs.push_back(fs);
    }
    return out;
}

double estimate_gauss_curvature(const LevelMesh& mesh, std::size_t node) {
    int i = int(node % mesh.nx()), j = int(node / mesh.nx());
    if (node >= std::size_t(mesh.nx()) * mesh.ny() || i < 2 || i >= mesh.nx() - 2 || j < 2 ||
        j >= mesh.ny() - 2)
        throw Error("curvature estimate needs an interior node with a full 2-ring");
    const MinkVec p0 = mesh.node_point(node);
    CosmoEval ev = mesh.node_eval(node);
    const MinkVec N = ev.N.v;
    // Minkowski-orthonormal tangent frame at p0
    auto orth = [&](MinkVec v, const MinkVec* against) {
        v = v + N * lorentz_dot(v, N);  // remove the normal part (<N,N> = -1)
        if (against) v = v - *against * lorentz_dot(v, *against);
        double q = lorentz_dot(v, v);
        return v * (1.0 / std::sqrt(q));
    };
    MinkVec e1 = orth(MinkVec(0, 1, 0), nullptr);
    MinkVec e2 = orth(MinkVec(0, 0, 1), &e1);

    std::vector<std::vector<double>> AtA(5, std::vector<double>(5, 0.0));
    std::vector<double> Atb(5, 0.0);
    for (int dj = -2; dj <= 2; ++dj) {
        for (int di = -2; di <= 2; ++di) {
            if (di == 0 && dj == 0) continue;
            MinkVec d = mesh.node_point(mesh.grid_index(i + di, j + dj)) - p0;
            double x1 = lorentz_dot(d, e1);
            double x2 = lorentz_dot(d, e2);
            double w = -lorentz_dot(d, N);  // height along the unit normal
            double row[5] = {x1, x2, 0.5 * x1 * x1, x1 * x2, 0.5 * x2 * x2};
            for (int r = 0; r < 5; ++r) {
                Atb[r] += row[r] * w;
                for (int cc = 0; cc < 5; ++cc) AtA[r][cc] += row[r] * row[cc];
            }
        }
    }
    std::vector<double> sol;
    if (!solve_dense(AtA, Atb, sol)) throw Error("curvature fit is singular");
    double A = sol[2], B = sol[3], C = sol[4];
    return -(A * C - B * B);
}

}  // namespace ctlab
