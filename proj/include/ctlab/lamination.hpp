#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ctlab/mink.hpp"

namespace ctlab {

struct CrossingLeaves : Error {
    std::size_t i, j;
    CrossingLeaves(std::size_t i_, std::size_t j_)
        : Error("leaves " + std::to_string(i_) + " and " + std::to_string(j_) +
                " cross (endpoints interleave)"),
          i(i_),
          j(j_) {}
};

struct AchronalityViolation : Error {
    explicit AchronalityViolation(const std::string& what) : Error(what) {}
};

// Complete geodesic of the disk given by its ideal endpoints, with a weight.
struct Leaf {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double weight = 1.0;
};

struct MeasuredLamination {
    std::vector<Leaf> leaves;
};

struct RegionAdjacency {
    std::size_t region_a;  // base side of the leaf
    std::size_t region_b;
    std::size_t leaf;      // index into RegionGraph::leaves
};

// Complementary regions of the chord family, their sign vectors relative to
// each (oriented) leaf, and the dual adjacency tree. Leaves here are the
// canonical form: coincident leaves merged, normals oriented away from base.
struct RegionGraph {
    std::vector<Leaf> leaves;              // merged
    std::vector<MinkVec> leaf_normals;     // unit spacelike, away from base
    std::vector<std::array<double, 2>> representatives;
    std::vector<std::vector<int>> signature;  // regions x leaves, entries +-1
    std::vector<RegionAdjacency> adjacency;
    std::size_t base_region = 0;

    std::size_t region_count() const { return signature.size(); }
};

enum class SpineKind { points, tree, polygon };

struct SpineEdge {
    std::size_t a, b;
    std::optional<std::size_t> leaf;  // generating leaf, if any
    double length = 0.0;              // Minkowski length, cached
};

// Planar spacelike convex polygon with an orthonormal in-plane frame.
struct SpineFace {
    std::vector<std::size_t> cycle;
    MinkVec origin;                       // = vertex cycle[0]
    MinkVec e1, e2;                       // orthonormal for the induced metric
    std::vector<std::array<double, 2>> poly;  // cycle in frame coords
};

struct SpineComplex {
    int n = 2;
    SpineKind kind = SpineKind::points;
    std::vector<MinkVec> vertices;
    std::vector<SpineEdge> edges;
    std::vector<SpineFace> faces;
};

// Region decomposition; throws CrossingLeaves on interleaving endpoint pairs.
RegionGraph validate(const MeasuredLamination& lam);

// re-orient the graph around another base region (the construction is
// base-dependent only up to translation)
void rebase(RegionGraph& graph, std::size_t new_base);

// Embedded dual tree in R^{1,2}: vertex of region R is the weighted sum of
// oriented leaf normals over the leaves separating R from the base region.
SpineComplex build_spine(const MeasuredLamination& lam, const RegionGraph& graph);

// Dual-tree metric: total weight of the leaves separating the two regions.
double tree_distance(const RegionGraph& graph, const MeasuredLamination& lam,
                     std::size_t r1, std::size_t r2);

// Explicit spine assembly (scenario-provided data); runs full validation.
SpineComplex make_explicit_spine(int n, SpineKind kind, std::vector<MinkVec> vertices,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                 const std::vector<std::vector<std::size_t>>& faces);

// Achronality: all pairwise differences across vertices and sampled edge/face
// points spacelike or zero; throws AchronalityViolation.
void check_achronal(const SpineComplex& spine, int samples_per_stratum = 32);

// Unit spacelike Minkowski normal of the geodesic with the given ideal
// endpoints (sign not yet oriented).
MinkVec leaf_normal(double theta1, double theta2);

}  // namespace ctlab
