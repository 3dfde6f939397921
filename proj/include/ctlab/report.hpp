#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ctlab {

inline constexpr const char* kVersion = "0.1.0";

struct CheckRecord {
    std::string name;
    std::string status;  // pass | fail | info
    nlohmann::json values;
    std::optional<double> threshold;
    std::string provenance;  // "paper" or "artifact" when a threshold is present
};

struct Report {
    std::string scenario_hash;
    std::string version = kVersion;
    std::vector<CheckRecord> checks;

    void add(CheckRecord rec) { checks.push_back(std::move(rec)); }
    bool any_fail() const;
    nlohmann::json to_json() const;  // checks sorted by name
};

std::string fmt_double(double v);

// CSV with fixed columns; rows already formatted
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace ctlab
