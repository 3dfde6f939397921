#include "ctlab/metric_checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ctlab/util.hpp"

namespace ctlab {

SampledMetric make_metric(std::vector<std::string> ids, std::vector<std::vector<double>> d,
                          std::vector<std::vector<double>> err) {
    SampledMetric m;
    m.ids = std::move(ids);
    m.d = std::move(d);
    if (err.empty()) err.assign(m.ids.size(), std::vector<double>(m.ids.size(), 0.0));
    m.err = std::move(err);
    validate_metric(m);
    return m;
}

void validate_metric(const SampledMetric& m) {
    const std::size_t n = m.size();
    if (m.d.size() != n || m.err.size() != n) throw Error("metric matrix shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (m.d[i].size() != n || m.err[i].size() != n) throw Error("metric matrix shape mismatch");
        if (m.d[i][i] != 0.0) throw Error("metric diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (m.d[i][j] < 0) throw Error("metric entries must be non-negative");
            if (m.d[i][j] != m.d[j][i]) throw Error("metric must be exactly symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double slack = 3.0 * (m.err[i][j] + m.err[j][k] + m.err[i][k]);
                if (m.d[i][k] > m.d[i][j] + m.d[j][k] + slack + 1e-12)
                    throw Error("triangle inequality fails beyond 3x error bars");
            }
}

namespace {

// opposite-side diagonal of the hinged planar quadrilateral with side pairs
// (s1, s2) and (s4, s3) sharing the x-diagonal t
double other_diagonal(double s1, double s2, double s3, double s4, double t) {
    if (t < 1e-12) return s1 + s4;
    double a1 = (s1 * s1 - s2 * s2 + t * t) / (2 * t);
    double b1 = std::sqrt(std::max(0.0, s1 * s1 - a1 * a1));
    double a2 = (s4 * s4 - s3 * s3 + t * t) / (2 * t);
    double b2 = std::sqrt(std::max(0.0, s4 * s4 - a2 * a2));
    return std::hypot(a1 - a2, b1 + b2);
}

}  // namespace

double cat0_four_point(const SampledMetric& m, const Quadruple& q) {
    double s1 = m.at(q.x1, q.y1);
    double s2 = m.at(q.y1, q.x2);
    double s3 = m.at(q.x2, q.y2);
    double s4 = m.at(q.y2, q.x1);
    double Dx = m.at(q.x1, q.x2);
    double Dy = m.at(q.y1, q.y2);
    double scale = s1 + s2 + s3 + s4 + Dx + Dy;
    if (scale == 0) return 0.0;

    double tmin = std::max(std::abs(s1 - s2), std::abs(s4 - s3));
    double tmax = std::min(s1 + s2, s4 + s3);
    if (tmin > tmax) {
        // triangle-slack noise; fall back to the collinear configuration
        double t = 0.5 * (tmin + tmax);
        return std::min(t - Dx, other_diagonal(s1, s2, s3, s4, t) - Dy);
    }
    auto u = [&](double t) { return other_diagonal(s1, s2, s3, s4, t); };
    if (Dx > tmax) {
        // not attainable: both surpluses at the boundary configuration
        return std::min(tmax - Dx, u(tmax) - Dy);
    }
    // maximize min(t - Dx, u(t) - Dy) over the hinge range
    auto margin_at = [&](double t) { return std::min(t - Dx, u(t) - Dy); };
    const int grid = 256;
    double best_t = tmin, best = -std::numeric_limits<double>::max();
    for (int k = 0; k <= grid; ++k) {
        double t = tmin + (tmax - tmin) * k / grid;
        double v = margin_at(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double span = (tmax - tmin) / grid;
    double lo = std::max(tmin, best_t - span), hi = std::min(tmax, best_t + span);
    double refined = golden_min([&](double t) { return -margin_at(t); }, lo, hi, 60);
    return std::max(best, margin_at(refined));
}

double approx_midpoint_defect(const SampledMetric& m, std::size_t x, std::size_t y) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t z = 0; z < m.size(); ++z)
        best = std::min(best, std::max(m.at(x, z), m.at(y, z)));
    return best - 0.5 * m.at(x, y);
}

double tree_four_point(const SampledMetric& m, const Quadruple& q) {
    double lhs = m.at(q.x1, q.y1) + m.at(q.x2, q.y2);
    double rhs = std::max(m.at(q.x1, q.x2) + m.at(q.y1, q.y2),
                          m.at(q.x1, q.y2) + m.at(q.y1, q.x2));
    return std::max(0.0, lhs - rhs);
}

std::pair<double, double> bilipschitz_ratio(const SampledMetric& m1, const SampledMetric& m2) {
    if (m1.size() != m2.size()) throw Error("metric id sets differ");
    // align by id
    std::map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < m2.size(); ++i) where[m2.ids[i]] = i;
    std::vector<std::size_t> map2(m1.size());
    for (std::size_t i = 0; i < m1.size(); ++i) {
        auto it = where.find(m1.ids[i]);
        if (it == where.end()) throw Error("metric id sets differ");
        map2[i] = it->second;
    }
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (std::size_t i = 0; i < m1.size(); ++i)
        for (std::size_t j = i + 1; j < m1.size(); ++j) {
            double a = m1.at(i, j), b = m2.at(map2[i], map2[j]);
            double bar = m1.bar(i, j) + m2.bar(map2[i], map2[j]);
            if (a < bar && b < bar) continue;  // noise-dominated pair
            if (b <= 0) throw Error("second metric vanishes where the first does not");
            lo = std::min(lo, a / b);
            hi = std::max(hi, a / b);
        }
    if (hi == 0.0) {
        lo = hi = 1.0;
    }
    return {lo, hi};
}

SampledMetric read_metric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open metric CSV: " + path);
    std::vector<std::tuple<std::string, std::string, double, double>> rows;
    std::map<std::string, std::size_t> index;
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, ds, es;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, ds, ','))
            throw Error("bad metric CSV row: " + line);
        std::getline(ss, es, ',');
        if (a == "id1" || a == "id") continue;  // header
        double dv, ev = 0.0;
        try {
            dv = std::stod(ds);
            if (!es.empty()) ev = std::stod(es);
        } catch (...) {
            throw Error("bad number in metric CSV row: " + line);
        }
        for (const auto& id : {a, b})
            if (!index.count(id)) {
                index[id] = ids.size();
                ids.push_back(id);
            }
        rows.push_back({a, b, dv, ev});
    }
    const std::size_t n = ids.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> err(n, std::vector<double>(n, 0.0));
    for (auto& [a, b, dv, ev] : rows) {
        std::size_t i = index[a], j = index[b];
        d[i][j] = d[j][i] = dv;
        err[i][j] = err[j][i] = ev;
    }
    return make_metric(std::move(ids), std::move(d), std::move(err));
}

void write_metric_csv(const std::string& path, const SampledMetric& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write metric CSV: " + path);
    out << "id1,id2,distance,error\n";
    char buf[128];
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g\n", m.ids[i].c_str(),
                          m.ids[j].c_str(), m.at(i, j), m.bar(i, j));
            out << buf;
        }
}

}  // namespace ctlab
