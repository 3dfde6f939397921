#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctlab/domain.hpp"
#include "ctlab/lamination.hpp"
#include "ctlab/levelset.hpp"

#include "json.hpp"

namespace ctlab {

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

enum class GeometryKind { flat, ds, ads };

struct ProbeSpec {
    std::optional<std::size_t> region;
    std::optional<std::size_t> vertex;
    // absent: derive the normal from the region representative (lamination
    // scenarios only), which always lies in the vertex's normal region
    std::optional<std::array<double, 3>> boost;
};

struct ExplicitSpineSpec {
    SpineKind kind = SpineKind::tree;
    std::vector<MinkVec> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::vector<std::size_t>> faces;
};

struct SurfaceSpec {
    MinkVec shift;
    double level = 1.0;
};

struct SweepSpec {
    std::vector<double> past{0.4, 0.2, 0.1, 0.05};
    std::vector<double> future{5, 20, 100};
    std::vector<std::pair<double, double>> compare{{0.4, 0.2}, {1.0, 0.5}};
};

struct MeshSpec {
    Window window{{-2, -2}, {2, 2}};
    double h = 0.1;
    int refinements = 3;
};

struct Scenario {
    int schema = 1;
    std::string name;
    int dimension = 2;
    GeometryKind geometry = GeometryKind::flat;
    std::optional<MeasuredLamination> lamination;
    std::optional<std::size_t> base_region;  // override: defaults to the disk center's region
    std::optional<ExplicitSpineSpec> spine;
    std::vector<ProbeSpec> probes;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // probe index pairs
    SweepSpec sweeps;
    MeshSpec mesh;
    std::vector<SurfaceSpec> surfaces;
    std::uint64_t seed = 1;
};

Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
std::string scenario_hash(const Scenario& s);  // FNV-1a of the canonical dump

// Domain plus resolved probe lines; probe validation failures throw.
struct BuiltScenario {
    Scenario scn;
    std::optional<RegionGraph> graph;
    RegularDomain dom;
    std::vector<GradientLine> lines;

    std::vector<std::pair<GradientLine, GradientLine>> line_pairs() const;
};

BuiltScenario build_scenario(const Scenario& s);

}  // namespace ctlab
