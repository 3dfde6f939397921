#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "ctlab/lamination.hpp"
#include "ctlab/mink.hpp"

namespace ctlab {

struct OutsideDomain : Error {
    OutsideDomain() : Error("point is not in the chronological future of the spine") {}
};

enum class StratumKind { vertex, edge, face };

struct Stratum {
    StratumKind kind = StratumKind::vertex;
    std::size_t index = 0;
    double s = 0.0;                    // edge parameter in [0, length]
    std::array<double, 2> uv{0, 0};    // face frame coordinates

    bool same_support(const Stratum& o) const {
        return kind == o.kind && index == o.index;
    }
};

// (T, r, N) at a point plus the supporting stratum. Ties between strata
// within 1e-9 that disagree in r are reported, never silently swallowed.
struct CosmoEval {
    double T = 0.0;
    MinkVec r;
    HypPoint N;
    Stratum stratum;
    bool ambiguous = false;
    std::optional<Stratum> tied;
};

struct GradientLine {
    MinkVec r;
    HypPoint N;
    Stratum stratum;
};

inline GradientLine line_of(const CosmoEval& e) { return {e.r, e.N, e.stratum}; }

// Straight gradient line: r + a N.
inline MinkVec flow(const GradientLine& line, double a) {
    if (!(a > 0)) throw Error("flow parameter must be positive");
    return line.r + line.N.v * a;
}

// Path metric of the initial singularity (the spine itself for finite data).
class SingularMetric {
  public:
    SingularMetric() = default;
    explicit SingularMetric(const SpineComplex& spine);

    double vertex_distance(std::size_t i, std::size_t j) const;
    // distance between arbitrary stratum points (retraction images)
    double distance(const Stratum& a, const Stratum& b) const;

  private:
    const SpineComplex* spine_ = nullptr;
    std::vector<std::vector<double>> vertex_dist_;
    double to_vertex(const Stratum& a, std::size_t v) const;
};

// Omega = I^+(spine): membership, exact cosmological time, retraction,
// normal and the sampled null-support-plane boundary cross-check.
class RegularDomain {
  public:
    explicit RegularDomain(SpineComplex spine, bool convexity_gate = false,
                           std::uint64_t gate_seed = 20240501);

    int dim() const { return spine_.n; }
    const SpineComplex& spine() const { return spine_; }

    CosmoEval cosmological_time(const MinkVec& p) const;
    bool contains(const MinkVec& p) const;

    // allocation-free scan used by level meshing; returns false outside Omega
    struct BestCand {
        double T = 0.0;
        MinkVec r;
        Stratum st;
    };
    bool best_candidate(const MinkVec& p, BestCand& out) const;

    // Inner approximation of the boundary graph from k sampled null
    // directions; converges to the true height from below as k grows.
    double null_support_boundary(const std::array<double, 3>& xbar, int k) const;

    SingularMetric singular_set() const { return SingularMetric(spine_); }

    // checks that N lies in the normal region of the line's stratum
    bool line_resolves(const GradientLine& line, double tol = 1e-7) const;

    MinkVec stratum_point(const Stratum& st) const;

  private:
    SpineComplex spine_;
    struct EdgeGeom {
        MinkVec q0;
        MinkVec dir;  // unit spacelike
        double len;
    };
    std::vector<EdgeGeom> edge_geoms_;

    struct Candidate {
        double T2 = -1.0;
        MinkVec r;
        Stratum st;
    };
    void candidates(const MinkVec& p, std::vector<Candidate>& out) const;
    void run_convexity_gate(std::uint64_t seed) const;
};

// nearest point of a convex polygon (frame coords) to a query point
std::array<double, 2> project_into_convex_polygon(const std::vector<std::array<double, 2>>& poly,
                                                  const std::array<double, 2>& q);

}  // namespace ctlab
