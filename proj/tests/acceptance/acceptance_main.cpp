// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Optional argument runs a single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ctlab/commands.hpp"
#include "ctlab/levelset.hpp"
#include "ctlab/metric_checks.hpp"
#include "ctlab/rng.hpp"
#include "ctlab/wick.hpp"

using namespace ctlab;

namespace {

constexpr double PI = 3.14159265358979323846;
constexpr int kThreads = 2;

struct Ctx {
    // five seeded random 3-leaf laminations with their probe lines
    struct Scn {
        MeasuredLamination lam;
        RegionGraph graph;
        RegularDomain dom;
        std::vector<GradientLine> lines;                 // two probes per region
        std::vector<std::size_t> line_region;            // region id per line
        std::vector<std::size_t> rep_lines;              // one probe per region
        std::vector<std::pair<std::size_t, std::size_t>> pairs;  // all line pairs
    };
    std::vector<Scn> random_scns;
    // per scenario: past-sweep summaries for the distinct-region pairs (criterion 3)
    std::vector<PastSweepResult> past_results;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> past_pair_ids;
};

RegularDomain make_cone() {
    return RegularDomain(make_explicit_spine(2, SpineKind::points, {MinkVec(0, 0, 0)}, {}, {}));
}

GradientLine vertex_line(const RegularDomain& dom, std::size_t v, const HypPoint& N) {
    return {dom.spine().vertices[v], N, {StratumKind::vertex, v, 0.0, {0, 0}}};
}

GradientLine cone_line(double rho, double phi) {
    return {MinkVec(0, 0, 0), boost_normal(2, {rho * std::cos(phi), rho * std::sin(phi), 0}),
            {StratumKind::vertex, 0, 0, {0, 0}}};
}

MeasuredLamination one_leaf_lam() {
    return MeasuredLamination{{{PI / 2, -PI / 2, 1.0}}};
}

// side signature of a disk point against the oriented leaves
bool in_region(const RegionGraph& g, std::size_t region, double zx, double zy) {
    for (std::size_t j = 0; j < g.leaves.size(); ++j) {
        double lam = zx * g.leaf_normals[j].x[0] + zy * g.leaf_normals[j].x[1] -
                     g.leaf_normals[j].t;
        int side = lam >= 0 ? +1 : -1;
        if (side != g.signature[region][j]) return false;
    }
    return true;
}

HypPoint lift(double zx, double zy) {
    double c = 1.0 / std::sqrt(1.0 - zx * zx - zy * zy);
    return HypPoint(MinkVec(c, c * zx, c * zy));
}

MeasuredLamination random_lamination(CounterRng& rng, int nleaves, double wlo, double whi) {
    MeasuredLamination lam;
    int guard = 0;
    while ((int)lam.leaves.size() < nleaves && guard++ < 100000) {
        Leaf lf{rng.uniform(0, 2 * PI), rng.uniform(0, 2 * PI), rng.uniform(wlo, whi)};
        if (std::abs(std::remainder(lf.theta1 - lf.theta2, 2 * PI)) < 0.35) continue;
        MeasuredLamination trial = lam;
        trial.leaves.push_back(lf);
        try {
            validate(trial);
            lam = trial;
        } catch (const Error&) {
        }
    }
    return lam;
}

void build_random_scenarios(Ctx& ctx) {
    if (!ctx.random_scns.empty()) return;
    for (int k = 0; k < 5; ++k) {
        CounterRng rng(1000 + k, 17);
        MeasuredLamination lam = random_lamination(rng, 3, 0.3, 1.5);
        RegionGraph graph = validate(lam);
        RegularDomain dom(build_spine(lam, graph));
        Ctx::Scn scn{lam, graph, std::move(dom), {}, {}, {}, {}};
        for (std::size_t r = 0; r < scn.graph.region_count(); ++r) {
            auto rep = scn.graph.representatives[r];
            scn.rep_lines.push_back(scn.lines.size());
            scn.lines.push_back(vertex_line(scn.dom, r, lift(rep[0], rep[1])));
            scn.line_region.push_back(r);
            // a jittered second normal inside the same region
            double zx = rep[0], zy = rep[1];
            for (int attempt = 0; attempt < 10; ++attempt) {
                double ang = rng.uniform(0, 2 * PI);
                double rad = 0.12 * std::pow(0.5, attempt);
                double cx = rep[0] + rad * std::cos(ang);
                double cy = rep[1] + rad * std::sin(ang);
                if (cx * cx + cy * cy < 0.94 && in_region(scn.graph, r, cx, cy)) {
                    zx = cx;
                    zy = cy;
                    break;
                }
            }
            scn.lines.push_back(vertex_line(scn.dom, r, lift(zx, zy)));
            scn.line_region.push_back(r);
        }
        for (std::size_t a = 0; a < scn.lines.size(); ++a)
            for (std::size_t b = a + 1; b < scn.lines.size(); ++b) scn.pairs.push_back({a, b});
        ctx.random_scns.push_back(std::move(scn));
    }
}

// ---- criteria ----------------------------------------------------------

bool criterion1(Ctx&, std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    auto dom = make_cone();
    CounterRng rng(42, 1);
    double worst = 0;
    for (int it = 0; it < 10000; ++it) {
        double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
        double t = std::hypot(x, y) + rng.uniform(0.01, 3.0);
        MinkVec p(t, x, y);
        double T = std::sqrt(-lorentz_dot(p, p));
        CosmoEval ev = dom.cosmological_time(p);
        worst = std::max(worst, std::abs(ev.T - T));
        worst = std::max(worst, std::abs(ev.r.t));
        worst = std::max(worst, ev.r.spatial_norm());
        MinkVec n = p * (1.0 / T);
        worst = std::max(worst, std::abs(ev.N.v.t - n.t));
        for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(ev.N.v.x[i] - n.x[i]));
    }
    if (worst > 1e-12) {
        detail = "closed-form residual " + fmt_double(worst);
        return false;
    }
    double worst_rel = 0, worst_order = 10;
    for (auto [rho, phi] : {std::pair{0.7, 0.3}, {1.0, 0.0}, {1.6, 2.1}, {2.0, 4.0}}) {
        auto res = distance_between_lines(dom, 1.0, cone_line(0, 0), cone_line(rho, phi), 0.15, 3);
        worst_rel = std::max(worst_rel, std::abs(res.est.value - rho) / rho);
        double e0 = res.est.history.front().second - rho;
        double e2 = res.est.history.back().second - rho;
        if (e0 > 0 && e2 > 0)
            worst_order = std::min(worst_order, std::log2(e0 / e2) / (res.est.history.size() - 1));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = "time residual <= " + fmt_double(worst) + ", geodesic rel err " +
             fmt_double(worst_rel) + ", order " + fmt_double(worst_order) + ", " +
             fmt_double(secs) + "s";
    return worst_rel <= 0.01 && worst_order >= 1.8 && secs <= 30.0;
}

bool criterion2(Ctx&, std::string& detail) {
    MeasuredLamination lam = one_leaf_lam();
    RegionGraph g = validate(lam);
    RegularDomain dom(build_spine(lam, g));
    HypPoint up(MinkVec(1, 0, 0));
    GradientLine l1 = vertex_line(dom, 0, up);
    GradientLine l2 = vertex_line(dom, 1, up);
    double worst = 0;
    for (double a : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        auto res = distance_between_lines(dom, a, l1, l2, 0.12, 2);
        worst = std::max(worst, std::abs(res.est.value - 1.0));
    }
    detail = "worst |d - 1| = " + fmt_double(worst);
    return worst <= 0.005;
}

bool criterion3(Ctx& ctx, std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    build_random_scenarios(ctx);
    ctx.past_results.clear();
    ctx.past_pair_ids.clear();
    double worst_rel = 0;
    for (auto& scn : ctx.random_scns) {
        std::vector<std::pair<GradientLine, GradientLine>> pairs;
        std::vector<std::pair<std::size_t, std::size_t>> ids;
        for (std::size_t i = 0; i < scn.rep_lines.size(); ++i)
            for (std::size_t j = i + 1; j < scn.rep_lines.size(); ++j) {
                pairs.push_back({scn.lines[scn.rep_lines[i]], scn.lines[scn.rep_lines[j]]});
                ids.push_back({i, j});  // region-indexed
            }
        auto sweep = past_sweep(scn.dom, pairs, {0.4, 0.2, 0.1, 0.05}, 0.12, 2, kThreads);
        for (const auto& ps : sweep.pairs) {
            if (ps.oracle < 0.1) continue;
            worst_rel = std::max(worst_rel, ps.gap / ps.oracle);
        }
        ctx.past_results.push_back(std::move(sweep));
        ctx.past_pair_ids.push_back(std::move(ids));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = "worst relative gap " + fmt_double(worst_rel) + " over 5 laminations, " +
             fmt_double(secs) + "s";
    return worst_rel <= 0.02 && secs <= 300.0;
}

bool criterion4(Ctx& ctx, std::string& detail) {
    build_random_scenarios(ctx);
    std::size_t total = 0, violations = 0;
    for (auto& scn : ctx.random_scns) {
        std::vector<std::pair<GradientLine, GradientLine>> pairs;
        for (auto [a, b] : scn.pairs) pairs.push_back({scn.lines[a], scn.lines[b]});
        for (auto [A, B] : {std::pair{0.4, 0.2}, {1.0, 0.5}}) {
            auto rep = compare_levels(scn.dom, A, B, pairs, 0.12, 2, kThreads);
            total += rep.pairs.size();
            violations += rep.violations;
        }
    }
    detail = std::to_string(total) + " pairs, " + std::to_string(violations) + " violations";
    return total >= 200 && violations == 0;
}

bool criterion5(Ctx& ctx, std::string& detail) {
    build_random_scenarios(ctx);
    std::size_t curves = 0, violations = 0;
    for (std::size_t k = 0; k < ctx.random_scns.size(); ++k) {
        auto& scn = ctx.random_scns[k];
        CounterRng rng(7000 + k, 5);
        double cx = 0, cy = 0;
        for (const auto& v : scn.dom.spine().vertices) {
            cx += v.x[0];
            cy += v.x[1];
        }
        cx /= scn.dom.spine().vertices.size();
        cy /= scn.dom.spine().vertices.size();
        for (int c = 0; c < 100; ++c) {
            double b = (c % 2 == 0) ? 0.2 : 0.5;
            double a = (c % 2 == 0) ? 0.4 : 1.0;
            LevelSurface surf(scn.dom, b);
            double ox = cx + rng.uniform(-1.5, 1.5), oy = cy + rng.uniform(-1.5, 1.5);
            double theta = rng.uniform(0, 2 * PI);
            double kappa = rng.uniform(-0.5, 0.5);
            double len = rng.uniform(0.4, 1.2);
            const int nodes = 16;
            std::vector<MinkVec> poly;
            for (int i = 0; i < nodes; ++i) {
                double s = len * i / (nodes - 1);
                double ang = theta + kappa * s;
                poly.push_back(surf.point(ox + s * std::cos(ang), oy + s * std::sin(ang)));
            }
            auto [Lb, La] = project_curve_length(scn.dom, poly, a);
            double spacing = len / (nodes - 1);
            ++curves;
            if (Lb > La + 2 * spacing) ++violations;
        }
    }
    detail = std::to_string(curves) + " curves, " + std::to_string(violations) + " violations";
    return violations == 0;
}

bool criterion6(Ctx& ctx, std::string& detail) {
    build_random_scenarios(ctx);
    if (ctx.past_results.empty()) {
        std::string d3;
        if (!criterion3(ctx, d3)) {
            detail = "past sweeps unavailable: " + d3;
            return false;
        }
    }
    // CAT(0) quadruples on meshed levels
    double worst_frac = 1.0;
    std::size_t bad5_total = 0;
    for (std::size_t k = 0; k < ctx.random_scns.size(); ++k) {
        auto& scn = ctx.random_scns[k];
        double lo0 = 1e300, lo1 = 1e300, hi0 = -1e300, hi1 = -1e300;
        for (const auto& v : scn.dom.spine().vertices) {
            lo0 = std::min(lo0, v.x[0]);
            hi0 = std::max(hi0, v.x[0]);
            lo1 = std::min(lo1, v.x[1]);
            hi1 = std::max(hi1, v.x[1]);
        }
        Window win{{lo0 - 2.2, lo1 - 2.2}, {hi0 + 2.2, hi1 + 2.2}};
        auto metric = sampled_level_metric(scn.dom, 1.0, win, 0.12, 22, 500 + k, kThreads);
        CounterRng rng(900 + k, 9);
        std::size_t done = 0, ok3 = 0, bad5 = 0;
        int guard = 0;
        while (done < 1000 && guard++ < 100000) {
            Quadruple q{rng.next_below(metric.size()), rng.next_below(metric.size()),
                        rng.next_below(metric.size()), rng.next_below(metric.size())};
            std::array<std::size_t, 4> ids{q.x1, q.y1, q.x2, q.y2};
            std::sort(ids.begin(), ids.end());
            if (std::unique(ids.begin(), ids.end()) != ids.end()) continue;
            double errq = 0;
            bool noisy = false;
            std::array<std::pair<std::size_t, std::size_t>, 6> es{{{q.x1, q.y1},
                                                                   {q.x1, q.x2},
                                                                   {q.x1, q.y2},
                                                                   {q.y1, q.x2},
                                                                   {q.y1, q.y2},
                                                                   {q.x2, q.y2}}};
            for (auto [i, j] : es) {
                errq += metric.bar(i, j);
                if (metric.at(i, j) < 5 * metric.bar(i, j)) noisy = true;
            }
            if (noisy) continue;
            double m = cat0_four_point(metric, q);
            if (m >= -3 * errq) ++ok3;
            if (m < -5 * errq) ++bad5;
            ++done;
        }
        worst_frac = std::min(worst_frac, done ? double(ok3) / done : 1.0);
        bad5_total += bad5;
    }
    // tree limit from the past-extrapolated probe metrics (one line per region)
    double worst_tree = 0;
    for (std::size_t k = 0; k < ctx.random_scns.size(); ++k) {
        auto& scn = ctx.random_scns[k];
        const auto& sweep = ctx.past_results[k];
        const auto& ids = ctx.past_pair_ids[k];
        const std::size_t L = scn.rep_lines.size();
        std::vector<std::vector<double>> d(L, std::vector<double>(L, 0.0));
        for (std::size_t p = 0; p < ids.size(); ++p) {
            auto [i, j] = ids[p];
            d[i][j] = d[j][i] = std::max(0.0, sweep.pairs[p].extrapolated);
        }
        std::vector<std::string> names;
        for (std::size_t i = 0; i < L; ++i) names.push_back("L" + std::to_string(i));
        double scale = 0;
        for (auto& row : d)
            for (double v : row) scale = std::max(scale, v);
        SampledMetric limit;
        limit.ids = names;
        limit.d = d;
        limit.err.assign(L, std::vector<double>(L, 0.0));
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = a + 1; b < L; ++b)
                for (std::size_t c = b + 1; c < L; ++c)
                    for (std::size_t e = c + 1; e < L; ++e)
                        for (const Quadruple& q : {Quadruple{a, b, c, e}, Quadruple{a, c, b, e},
                                                   Quadruple{a, e, b, c}})
                            worst_tree = std::max(worst_tree, tree_four_point(limit, q) / scale);
    }
    detail = "cat0 fraction " + fmt_double(worst_frac) + ", >5err " +
             std::to_string(bad5_total) + ", tree defect " + fmt_double(worst_tree);
    return worst_frac >= 0.995 && bad5_total == 0 && worst_tree <= 0.02;
}

bool criterion7(Ctx& ctx, std::string& detail) {
    build_random_scenarios(ctx);
    MeasuredLamination lam = one_leaf_lam();
    RegionGraph g = validate(lam);
    RegularDomain dom(build_spine(lam, g));
    auto r0 = g.representatives[0];
    auto r1 = g.representatives[1];
    GradientLine l1 = vertex_line(dom, 0, lift(r0[0], r0[1]));
    GradientLine l2 = vertex_line(dom, 1, lift(r1[0], r1[1]));

    double worst_ident = 0, worst_past = 0;
    for (auto kind : {WickKind::deSitter, WickKind::antiDeSitter}) {
        WickGeometry geom(kind, dom);
        for (double a : {0.3, 0.7}) {
            auto wd = wick_level_distance(geom, a, l1, l2, 0.12, 2);
            auto flat = distance_between_lines(dom, wick_flat_level(kind, a), l1, l2, 0.12, 2);
            double composed = wick_length_factor(kind, a) * flat.est.value;
            worst_ident = std::max(worst_ident,
                                   std::abs(wd.est.value - composed) / std::max(1e-12, composed));
        }
        auto sweep = wick_past_sweep(geom, {{l1, l2}}, {0.2, 0.1, 0.05, 0.025}, 0.12, 2, kThreads);
        worst_past = std::max(worst_past, sweep.pairs[0].gap / sweep.pairs[0].oracle);
    }

    // measured ratios against the sinh/cos-sin bounds on >= 100 pairs
    std::size_t checked = 0, violations = 0;
    for (std::size_t k = 0; k < 2 && k < ctx.random_scns.size(); ++k) {
        auto& scn = ctx.random_scns[k];
        std::vector<std::pair<GradientLine, GradientLine>> pairs;
        for (auto [a, b] : scn.pairs) pairs.push_back({scn.lines[a], scn.lines[b]});
        for (auto kind : {WickKind::deSitter, WickKind::antiDeSitter}) {
            double A = 0.4, B = 0.2;
            auto [lo, hi] = wick_bilip_bounds(kind, A, B);
            double fA = wick_length_factor(kind, A), fB = wick_length_factor(kind, B);
            for (const auto& pr : pairs) {
                LinePairSolver solver(scn.dom, pr.first, pr.second, 0.12, 2);
                auto da = solver.at(wick_flat_level(kind, A));
                auto db = solver.at(wick_flat_level(kind, B));
                double va = fA * da.est.value, vb = fB * db.est.value;
                if (vb <= 1e-9) continue;
                double ratio = va / vb;
                double tol = (fA * da.est.error + ratio * fB * db.est.error) / vb;
                ++checked;
                if (!(ratio >= lo - tol && ratio <= hi + tol)) ++violations;
            }
        }
    }
    detail = "identity " + fmt_double(worst_ident) + ", past gap " + fmt_double(worst_past) +
             ", ratios " + std::to_string(checked) + " checked / " + std::to_string(violations) +
             " out of bounds";
    return worst_ident <= 1e-12 && worst_past <= 0.02 && checked >= 100 && violations == 0;
}

bool criterion8(Ctx&, std::string& detail) {
    auto cone = make_cone();
    MeasuredLamination lam = one_leaf_lam();
    RegionGraph g = validate(lam);
    RegularDomain band(build_spine(lam, g));
    HypPoint up(MinkVec(1, 0, 0));
    HypPoint left = boost_normal(2, {-0.4, 0.05, 0});
    HypPoint right = boost_normal(2, {0.45, -0.1, 0});

    struct Case {
        const RegularDomain* dom;
        GradientLine a, b;
        bool distinct;
    };
    std::vector<Case> cases;
    cases.push_back({&cone, cone_line(0, 0), cone_line(1.0, 0.4), true});
    cases.push_back({&cone, cone_line(0.8, 2.0), cone_line(1.2, 5.3), true});
    cases.push_back({&band, vertex_line(band, 0, left), vertex_line(band, 1, right), true});
    cases.push_back({&band, vertex_line(band, 0, up), vertex_line(band, 1, up), false});

    double worst_rel = 0, worst_abs = 0;
    bool monotone = true;
    for (const auto& c : cases) {
        auto res = future_sweep(*c.dom, {{c.a, c.b}}, {5, 20, 100}, 0.12, 2, kThreads);
        const auto& fs = res.pairs[0];
        monotone = monotone && fs.monotone_within_bars;
        if (c.distinct)
            worst_rel = std::max(worst_rel, fs.gaps.back() / fs.target);
        else
            worst_abs = std::max(worst_abs, fs.renormalized.back());
    }
    detail = "distinct-normal final gap " + fmt_double(worst_rel) + ", equal-normal renorm " +
             fmt_double(worst_abs) + (monotone ? ", monotone" : ", NOT monotone");
    return worst_rel <= 0.05 && worst_abs <= 0.02 && monotone;
}

bool criterion9(Ctx&, std::string& detail) {
    std::vector<RegularDomain> doms;
    doms.push_back(make_cone());
    {
        MeasuredLamination lam = one_leaf_lam();
        RegionGraph g = validate(lam);
        doms.push_back(RegularDomain(build_spine(lam, g)));
    }
    {
        MeasuredLamination lam{{{0.1, PI - 0.1, 0.5}, {PI / 4, 3 * PI / 4, 0.7}}};
        RegionGraph g = validate(lam);
        doms.push_back(RegularDomain(build_spine(lam, g)));
    }
    double worst_flat = 1e300, worst_ds = 1e300, worst_ads = 1e300;
    std::uint64_t seed = 11;
    for (const auto& dom : doms) {
        for (const auto& spec : default_surfaces(GeometryKind::flat)) {
            auto surf = make_shifted_surface(dom, spec.shift, spec.level);
            auto rep = pairing_bound_check(dom, surf, 10000, seed++);
            worst_flat = std::min(worst_flat, rep.margin);
            worst_ads = std::min(worst_ads, wick_pairing_check(WickKind::antiDeSitter, rep).margin);
        }
        for (const auto& spec : default_surfaces(GeometryKind::ds)) {
            auto surf = make_shifted_surface(dom, spec.shift, spec.level);
            auto rep = pairing_bound_check(dom, surf, 10000, seed++);
            worst_ds = std::min(worst_ds, wick_pairing_check(WickKind::deSitter, rep).margin);
        }
    }
    detail = "margins: flat " + fmt_double(worst_flat) + ", dS " + fmt_double(worst_ds) +
             ", AdS " + fmt_double(worst_ads);
    return worst_flat >= -1e-9 && worst_ds >= -1e-9 && worst_ads >= -1e-9;
}

bool criterion10(Ctx&, std::string& detail) {
    auto cone = make_cone();
    double worst_cone = 0;
    for (double a : {1.0, 0.75}) {
        LevelMesh mesh(cone, a, {{-1.2 * a, -1.2 * a}, {1.2 * a, 1.2 * a}}, 0.1 * a);
        for (auto node : {mesh.node_nearest(0, 0), mesh.node_nearest(0.5 * a, 0.3 * a),
                          mesh.node_nearest(-0.4 * a, -0.6 * a)}) {
            double k = estimate_gauss_curvature(mesh, node);
            worst_cone = std::max(worst_cone, std::abs(k + 1.0 / (a * a)) * (a * a));
        }
    }
    MeasuredLamination lam = one_leaf_lam();
    RegionGraph g = validate(lam);
    RegularDomain band(build_spine(lam, g));
    const auto& e = band.spine().edges[0];
    MinkVec mid = (band.spine().vertices[e.a] + band.spine().vertices[e.b]) * 0.5;
    LevelMesh bmesh(band, 0.5,
                    {{mid.x[0] - 0.25, mid.x[1] - 0.25}, {mid.x[0] + 0.25, mid.x[1] + 0.25}},
                    0.05);
    double worst_band = 0;
    for (auto node : {bmesh.node_nearest(mid.x[0], mid.x[1]),
                      bmesh.node_nearest(mid.x[0] + 0.1, mid.x[1] - 0.05)}) {
        if (bmesh.node_stratum(node).kind != StratumKind::edge) continue;
        worst_band = std::max(worst_band, std::abs(estimate_gauss_curvature(bmesh, node)));
    }
    // nested hyperboloids: level a0 + a of the cone against the transport value
    double worst_nest = 0;
    for (auto [a0, a] : {std::pair{1.0, 0.5}, {0.5, 0.25}}) {
        LevelMesh nest(cone, a0 + a, {{-1.0, -1.0}, {1.0, 1.0}}, 0.08);
        double k = estimate_gauss_curvature(nest, nest.node_nearest(0.2, -0.1));
        double predicted = curvature_transport(1 / a0, 1 / a0, a, false);
        worst_nest = std::max(worst_nest, std::abs(k - predicted) / std::abs(predicted));
    }
    detail = "cone rel " + fmt_double(worst_cone) + ", band abs " + fmt_double(worst_band) +
             ", transport rel " + fmt_double(worst_nest);
    return worst_cone <= 0.05 && worst_band <= 0.02 && worst_nest <= 0.05;
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(Ctx&, std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    std::vector<Criterion> criteria{
        {1, "cone exactness and geodesic convergence", criterion1},
        {2, "flat band invariant width", criterion2},
        {3, "past convergence to the dual tree", criterion3},
        {4, "level comparison bounds", criterion4},
        {5, "projection expansion", criterion5},
        {6, "CAT(0) levels and tree limit", criterion6},
        {7, "Wick identities, past sweeps and ratio bounds", criterion7},
        {8, "future renormalization to the hyperbolic metric", criterion8},
        {9, "pairing bound on convex surfaces", criterion9},
        {10, "curvature transport on levels", criterion10},
    };
    Ctx ctx;
    bool all_ok = true;
    for (auto& c : criteria) {
        if (only && c.id != only) continue;
        std::string detail;
        bool ok = false;
        auto t0 = std::chrono::steady_clock::now();
        try {
            ok = c.run(ctx, detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s (%6.1fs) %s -- %s\n", c.id, ok ? "PASS" : "FAIL", secs,
                    c.title, detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
