#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ctlab/commands.hpp"

namespace {

ctlab::MinkVec parse_point(const std::string& text, int dim) {
    std::stringstream ss(text);
    std::vector<double> parts;
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(std::stod(tok));
    if (int(parts.size()) != dim + 1)
        throw ctlab::ParseError("--point needs " + std::to_string(dim + 1) + " coordinates");
    ctlab::MinkVec v;
    v.n = dim;
    v.t = parts[0];
    for (int i = 0; i < dim; ++i) v.x[i] = parts[i + 1];
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for cosmological time on flat regular domains"};
    std::string command, scenario_path, point_text, pair_text, metric_path, metric2_path;
    std::string out_dir = std::getenv("CTLAB_OUT") ? std::getenv("CTLAB_OUT") : ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    double level = 0;
    bool level_given = false;
    int threads = 2;

    app.add_option("command", command, "one of: eval dist sweep-past sweep-future wick "
                                       "check-cat0 check-tree check-bilip check-projection "
                                       "check-pairing check-curvature")
        ->required();
    app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
    app.add_option("--out", out_dir, "output directory for CSV sidecars");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 64));
    app.add_option("--point", point_text, "point t,x,... for eval");
    auto* level_opt = app.add_option("--level", level, "cosmological level for dist/check");
    app.add_option("--pair", pair_text, "probe pair i,j for dist");
    app.add_option("--metric", metric_path, "metric CSV for check-cat0/check-bilip");
    app.add_option("--metric2", metric2_path, "second metric CSV for check-bilip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 2;
    }
    seed_given = seed_opt->count() > 0;
    level_given = level_opt->count() > 0;

    const auto& names = ctlab::command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        std::cerr << "unknown command: " << command << "\n";
        return 2;
    }

    try {
        ctlab::Scenario scn = ctlab::parse_scenario(scenario_path);
        ctlab::RunOptions opt;
        if (seed_given) opt.seed = seed;
        if (level_given) opt.level = level;
        opt.out_dir = out_dir;
        opt.threads = threads;
        opt.metric_path = metric_path;
        opt.metric2_path = metric2_path;
        if (!point_text.empty()) opt.point = parse_point(point_text, scn.dimension);
        if (!pair_text.empty()) {
            std::stringstream ss(pair_text);
            std::string a, b;
            std::getline(ss, a, ',');
            std::getline(ss, b, ',');
            opt.pair = {std::stoul(a), std::stoul(b)};
        }
        ctlab::Report rep = ctlab::run_command(command, scn, opt);
        std::cout << rep.to_json().dump(2) << "\n";
        return rep.any_fail() ? 1 : 0;
    } catch (const ctlab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ctlab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
