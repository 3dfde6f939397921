#pragma once

#include <string>
#include <vector>

#include "ctlab/mink.hpp"

namespace ctlab {

// Finite metric sample with per-entry error bars (0 for oracles).
struct SampledMetric {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> d;
    std::vector<std::vector<double>> err;

    std::size_t size() const { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i][j]; }
    double bar(std::size_t i, std::size_t j) const { return err[i][j]; }
};

SampledMetric make_metric(std::vector<std::string> ids, std::vector<std::vector<double>> d,
                          std::vector<std::vector<double>> err = {});

// symmetry, zero diagonal, triangle inequality within 3x error bars
void validate_metric(const SampledMetric& m);

struct Quadruple {
    std::size_t x1, y1, x2, y2;
};

// CAT(0) four-point margin: embed the four cross distances d(x_i, y_j) as a
// planar quadrilateral hinged on the x-diagonal; margin >= 0 iff some hinge
// configuration dominates both measured diagonals.
double cat0_four_point(const SampledMetric& m, const Quadruple& q);

// min over z of max(d(x,z), d(y,z)) - d(x,y)/2
double approx_midpoint_defect(const SampledMetric& m, std::size_t x, std::size_t y);

// max(0, d(x,y) + d(z,w) - max(d(x,z)+d(y,w), d(x,w)+d(y,z)))
double tree_four_point(const SampledMetric& m, const Quadruple& q);

// (min, max) of m1/m2 over pairs, ignoring pairs below combined error
std::pair<double, double> bilipschitz_ratio(const SampledMetric& m1, const SampledMetric& m2);

// CSV exchange: rows "id1,id2,distance,error"
SampledMetric read_metric_csv(const std::string& path);
void write_metric_csv(const std::string& path, const SampledMetric& m);

}  // namespace ctlab
