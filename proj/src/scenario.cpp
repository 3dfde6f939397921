#include "ctlab/scenario.hpp"

#include <fstream>

namespace ctlab {

using nlohmann::json;

namespace {

MinkVec vec_from_json(const json& arr, int n, const char* what) {
    if (!arr.is_array() || int(arr.size()) != n + 1)
        throw ParseError(std::string(what) + ": expected an array of " + std::to_string(n + 1) +
                         " coordinates");
    MinkVec v;
    v.n = n;
    v.t = arr[0].get<double>();
    for (int i = 0; i < n; ++i) v.x[i] = arr[i + 1].get<double>();
    return v;
}

}  // namespace

Scenario parse_scenario_json(const json& j) {
    Scenario s;
    try {
        if (!j.is_object()) throw ParseError("scenario must be a JSON object");
        s.schema = j.value("schema", 1);
        if (s.schema != 1) throw ParseError("unsupported scenario schema version");
        s.name = j.value("name", std::string("unnamed"));
        s.dimension = j.value("dimension", 2);
        if (s.dimension != 2 && s.dimension != 3)
            throw ValidationError("dimension must be 2 or 3");
        std::string geom = j.value("geometry", std::string("flat"));
        if (geom == "flat")
            s.geometry = GeometryKind::flat;
        else if (geom == "ds")
            s.geometry = GeometryKind::ds;
        else if (geom == "ads")
            s.geometry = GeometryKind::ads;
        else
            throw ParseError("geometry must be flat, ds or ads");
        if (s.geometry != GeometryKind::flat && s.dimension != 2)
            throw ValidationError("ds/ads geometries require dimension 2");

        if (j.contains("lamination") && j.contains("spine"))
            throw ParseError("give either a lamination or an explicit spine, not both");
        if (j.contains("lamination")) {
            if (s.dimension != 2) throw ValidationError("laminations require dimension 2");
            MeasuredLamination lam;
            for (const auto& lj : j.at("lamination").at("leaves")) {
                Leaf lf;
                const auto& ep = lj.at("endpoints");
                lf.theta1 = ep.at(0).get<double>();
                lf.theta2 = ep.at(1).get<double>();
                lf.weight = lj.at("weight").get<double>();
                lam.leaves.push_back(lf);
            }
            s.lamination = lam;
            if (j.at("lamination").contains("base_region"))
                s.base_region = j.at("lamination").at("base_region").get<std::size_t>();
        } else if (j.contains("spine")) {
            ExplicitSpineSpec sp;
            const auto& js = j.at("spine");
            std::string kind = js.value("kind", std::string("tree"));
            if (kind == "tree")
                sp.kind = SpineKind::tree;
            else if (kind == "polygon")
                sp.kind = SpineKind::polygon;
            else if (kind == "points")
                sp.kind = SpineKind::points;
            else
                throw ParseError("spine kind must be tree, polygon or points");
            for (const auto& vj : js.at("vertices"))
                sp.vertices.push_back(vec_from_json(vj, s.dimension, "spine vertex"));
            if (js.contains("edges"))
                for (const auto& ej : js.at("edges"))
                    sp.edges.push_back({ej.at(0).get<std::size_t>(), ej.at(1).get<std::size_t>()});
            if (js.contains("faces"))
                for (const auto& fj : js.at("faces")) {
                    std::vector<std::size_t> cyc;
                    for (const auto& vi : fj) cyc.push_back(vi.get<std::size_t>());
                    sp.faces.push_back(cyc);
                }
            s.spine = sp;
        } else {
            // empty lamination: the cone
            s.lamination = MeasuredLamination{};
        }

        if (j.contains("probes")) {
            for (const auto& pj : j.at("probes")) {
                ProbeSpec ps;
                if (pj.contains("region")) ps.region = pj.at("region").get<std::size_t>();
                if (pj.contains("vertex")) ps.vertex = pj.at("vertex").get<std::size_t>();
                if (!ps.region && !ps.vertex)
                    throw ParseError("probe needs a region or vertex id");
                if (pj.contains("boost")) {
                    std::array<double, 3> b{0, 0, 0};
                    const auto& bj = pj.at("boost");
                    for (std::size_t i = 0; i < bj.size() && i < 3; ++i)
                        b[i] = bj[i].get<double>();
                    ps.boost = b;
                }
                s.probes.push_back(ps);
            }
        }
        if (j.contains("pairs")) {
            for (const auto& pj : j.at("pairs"))
                s.pairs.push_back({pj.at(0).get<std::size_t>(), pj.at(1).get<std::size_t>()});
        }
        if (j.contains("sweeps")) {
            const auto& sw = j.at("sweeps");
            if (sw.contains("past")) s.sweeps.past = sw.at("past").get<std::vector<double>>();
            if (sw.contains("future")) s.sweeps.future = sw.at("future").get<std::vector<double>>();
            if (sw.contains("compare")) {
                s.sweeps.compare.clear();
                for (const auto& cj : sw.at("compare"))
                    s.sweeps.compare.push_back({cj.at(0).get<double>(), cj.at(1).get<double>()});
            }
        }
        if (j.contains("mesh")) {
            const auto& mj = j.at("mesh");
            if (mj.contains("window")) {
                const auto& w = mj.at("window");
                s.mesh.window.lo = {w.at(0).at(0).get<double>(), w.at(0).at(1).get<double>()};
                s.mesh.window.hi = {w.at(1).at(0).get<double>(), w.at(1).at(1).get<double>()};
            }
            s.mesh.h = mj.value("h", 0.1);
            s.mesh.refinements = mj.value("refinements", 3);
            if (!(s.mesh.h > 0)) throw ValidationError("mesh.h must be positive");
            if (s.mesh.refinements < 1) throw ValidationError("mesh.refinements must be >= 1");
        }
        if (j.contains("surfaces")) {
            for (const auto& sj : j.at("surfaces")) {
                SurfaceSpec ss;
                ss.shift = vec_from_json(sj.at("shift"), s.dimension, "surface shift");
                ss.level = sj.at("level").get<double>();
                if (!(ss.level > 0)) throw ValidationError("surface level must be positive");
                s.surfaces.push_back(ss);
            }
        }
        s.seed = j.value("seed", std::uint64_t(1));
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario JSON error: ") + e.what());
    }
    return parse_scenario_json(j);
}

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["schema"] = s.schema;
    j["name"] = s.name;
    j["dimension"] = s.dimension;
    j["geometry"] = s.geometry == GeometryKind::flat ? "flat"
                    : s.geometry == GeometryKind::ds ? "ds"
                                                     : "ads";
    if (s.lamination) {
        json leaves = json::array();
        for (const auto& lf : s.lamination->leaves)
            leaves.push_back({{"endpoints", {lf.theta1, lf.theta2}}, {"weight", lf.weight}});
        j["lamination"] = {{"leaves", leaves}};
        if (s.base_region) j["lamination"]["base_region"] = *s.base_region;
    }
    if (s.spine) {
        json js;
        js["kind"] = s.spine->kind == SpineKind::tree      ? "tree"
                     : s.spine->kind == SpineKind::polygon ? "polygon"
                                                           : "points";
        json vs = json::array();
        for (const auto& v : s.spine->vertices) {
            json a = json::array();
            a.push_back(v.t);
            for (int i = 0; i < v.n; ++i) a.push_back(v.x[i]);
            vs.push_back(a);
        }
        js["vertices"] = vs;
        json es = json::array();
        for (auto [a, b] : s.spine->edges) es.push_back({a, b});
        js["edges"] = es;
        json fs = json::array();
        for (const auto& f : s.spine->faces) fs.push_back(f);
        js["faces"] = fs;
        j["spine"] = js;
    }
    json probes = json::array();
    for (const auto& p : s.probes) {
        json pj;
        if (p.region) pj["region"] = *p.region;
        if (p.vertex) pj["vertex"] = *p.vertex;
        if (p.boost) pj["boost"] = {(*p.boost)[0], (*p.boost)[1], (*p.boost)[2]};
        probes.push_back(pj);
    }
    j["probes"] = probes;
    json pairs = json::array();
    for (auto [a, b] : s.pairs) pairs.push_back({a, b});
    j["pairs"] = pairs;
    j["sweeps"] = {{"past", s.sweeps.past}, {"future", s.sweeps.future}};
    json cmp = json::array();
    for (auto [a, b] : s.sweeps.compare) cmp.push_back({a, b});
    j["sweeps"]["compare"] = cmp;
    j["mesh"] = {{"window", {{s.mesh.window.lo[0], s.mesh.window.lo[1]},
                             {s.mesh.window.hi[0], s.mesh.window.hi[1]}}},
                 {"h", s.mesh.h},
                 {"refinements", s.mesh.refinements}};
    json surfs = json::array();
    for (const auto& ss : s.surfaces) {
        json a = json::array();
        a.push_back(ss.shift.t);
        for (int i = 0; i < ss.shift.n; ++i) a.push_back(ss.shift.x[i]);
        surfs.push_back({{"shift", a}, {"level", ss.level}});
    }
    j["surfaces"] = surfs;
    j["seed"] = s.seed;
    return j;
}

std::string scenario_hash(const Scenario& s) {
    std::string dump = scenario_to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::pair<GradientLine, GradientLine>> BuiltScenario::line_pairs() const {
    std::vector<std::pair<GradientLine, GradientLine>> out;
    if (!scn.pairs.empty()) {
        for (auto [a, b] : scn.pairs) {
            if (a >= lines.size() || b >= lines.size())
                throw ValidationError("pair references an unknown probe");
            out.push_back({lines[a], lines[b]});
        }
        return out;
    }
    for (std::size_t a = 0; a < lines.size(); ++a)
        for (std::size_t b = a + 1; b < lines.size(); ++b) out.push_back({lines[a], lines[b]});
    return out;
}

BuiltScenario build_scenario(const Scenario& s) {
    std::optional<RegionGraph> graph;
    SpineComplex spine;
    bool gate = false;
    if (s.lamination) {
        graph = validate(*s.lamination);
        if (s.base_region) rebase(*graph, *s.base_region);
        spine = build_spine(*s.lamination, *graph);
    } else {
        const auto& sp = *s.spine;
        spine = make_explicit_spine(s.dimension, sp.kind, sp.vertices, sp.edges, sp.faces);
        gate = true;  // lamination spines are convex by construction
    }
    RegularDomain dom(std::move(spine), gate, s.seed);

    std::vector<GradientLine> lines;
    for (std::size_t i = 0; i < s.probes.size(); ++i) {
        const auto& ps = s.probes[i];
        std::size_t vid = ps.vertex ? *ps.vertex : *ps.region;
        if (vid >= dom.spine().vertices.size())
            throw ValidationError("probe " + std::to_string(i) + " references an unknown " +
                                  (ps.vertex ? "vertex" : "region"));
        HypPoint N;
        if (ps.boost) {
            N = boost_normal(s.dimension, *ps.boost);
        } else if (graph) {
            // lift of the region representative: interior of the normal region
            auto z = graph->representatives[vid];
            double s2 = z[0] * z[0] + z[1] * z[1];
            double c = 1.0 / std::sqrt(1.0 - s2);
            N = HypPoint(MinkVec(c, c * z[0], c * z[1]));
        } else {
            throw ValidationError("probe " + std::to_string(i) +
                                  " on an explicit spine needs an explicit boost");
        }
        GradientLine line{dom.spine().vertices[vid], N, {StratumKind::vertex, vid, 0.0, {0, 0}}};
        if (!dom.line_resolves(line))
            throw ValidationError("probe " + std::to_string(i) +
                                  " does not resolve: the boosted normal leaves the vertex's "
                                  "normal region");
        lines.push_back(line);
    }
    return BuiltScenario{s, std::move(graph), std::move(dom), std::move(lines)};
}

}  // namespace ctlab
