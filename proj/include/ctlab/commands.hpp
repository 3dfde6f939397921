#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctlab/metric_checks.hpp"
#include "ctlab/report.hpp"
#include "ctlab/scenario.hpp"

namespace ctlab {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int threads = 2;
    std::optional<MinkVec> point;
    std::optional<double> level;
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    std::string metric_path;
    std::string metric2_path;
};

const std::vector<std::string>& command_names();

// Dispatch; module errors become "fail" records, never exceptions.
Report run_command(const std::string& command, const Scenario& scn, const RunOptions& opt);

// All-pairs intrinsic metric between sampled grid nodes of a level mesh,
// graph paths shortened on the exact surface at two resolutions.
SampledMetric sampled_level_metric(const RegularDomain& dom, double a, Window window, double h,
                                   std::size_t count, std::uint64_t seed, int threads);

// default convex test surfaces when the scenario lists none
std::vector<SurfaceSpec> default_surfaces(GeometryKind geometry);

}  // namespace ctlab
