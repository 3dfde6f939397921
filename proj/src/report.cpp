#include "ctlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "ctlab/mink.hpp"

namespace ctlab {

bool Report::any_fail() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.status == "fail"; });
}

nlohmann::json Report::to_json() const {
    auto sorted = checks;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : sorted) {
        nlohmann::json j{{"name", c.name}, {"status", c.status}, {"values", c.values}};
        if (c.threshold) {
            j["threshold"] = *c.threshold;
            j["provenance"] = c.provenance;
        }
        arr.push_back(j);
    }
    return nlohmann::json{{"scenario_hash", scenario_hash}, {"version", version}, {"checks", arr}};
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

}  // namespace ctlab
