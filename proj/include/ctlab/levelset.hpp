#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ctlab/domain.hpp"

namespace ctlab {

struct WindowTooSmall : Error {
    WindowTooSmall() : Error("shortened geodesic touches the mesh window boundary") {}
};

struct Window {
    std::array<double, 2> lo{0, 0};
    std::array<double, 2> hi{0, 0};

    bool contains(double x, double y, double margin = 0.0) const {
        return x >= lo[0] + margin && x <= hi[0] - margin && y >= lo[1] + margin &&
               y <= hi[1] - margin;
    }
    Window padded(double m) const { return {{lo[0] - m, lo[1] - m}, {hi[0] + m, hi[1] + m}}; }
};

// Exact level-set graph x0 = h_a(xbar), evaluated by a Newton solve on the
// closed-form cosmological time (n = 2 only).
class LevelSurface {
  public:
    LevelSurface(const RegularDomain& dom, double a);

    double height(double x, double y) const;
    MinkVec point(double x, double y) const;
    // surface point together with its supporting stratum
    MinkVec point(double x, double y, Stratum& st) const;

    const RegularDomain& domain() const { return *dom_; }
    double level() const { return a_; }

  private:
    const RegularDomain* dom_;
    double a_;
};

// Grid + both diagonals over a window, lifted to the exact level graph.
class LevelMesh {
  public:
    LevelMesh(const RegularDomain& dom, double a, Window window, double h);

    const RegularDomain& domain() const { return *dom_; }
    const LevelSurface& surface() const { return surf_; }
    double level() const { return a_; }
    double spacing() const { return h_; }
    const Window& window() const { return window_; }

    std::size_t node_count() const { return points_.size(); }
    const MinkVec& node_point(std::size_t i) const { return points_[i]; }
    const Stratum& node_stratum(std::size_t i) const { return strata_[i]; }
    std::array<double, 2> node_xbar(std::size_t i) const {
        return {points_[i].x[0], points_[i].x[1]};
    }
    CosmoEval node_eval(std::size_t i) const { return dom_->cosmological_time(points_[i]); }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t grid_index(int i, int j) const { return std::size_t(j) * nx_ + i; }
    std::size_t node_nearest(double x, double y) const;

    // shortest graph path between two inserted surface points
    std::vector<std::size_t> dijkstra(std::size_t from, std::size_t to) const;
    // full shortest-path tree from a node
    void dijkstra_full(std::size_t from, std::vector<double>& dist,
                       std::vector<std::size_t>& prev) const;
    std::vector<std::size_t> extract_path(const std::vector<std::size_t>& prev, std::size_t from,
                                          std::size_t to) const;
    // appends an off-grid surface node connected to nearby grid nodes
    std::size_t insert_point(const MinkVec& p);

    void neighbors(std::size_t i, std::vector<std::pair<std::size_t, double>>& out) const;

  private:
    const RegularDomain* dom_;
    LevelSurface surf_;
    double a_, h_;
    Window window_;
    int nx_, ny_;
    std::vector<MinkVec> points_;
    std::vector<Stratum> strata_;
    std::vector<std::vector<std::pair<std::size_t, double>>> extra_links_;  // for inserted nodes
    std::size_t grid_total_ = 0;
};

// Upper-bound distance with its refinement history and extrapolation.
struct DistanceEstimate {
    double value = 0.0;
    std::vector<std::pair<double, double>> history;  // (resolution, value)
    double extrapolated = 0.0;
    double error = 0.0;
};

struct GeodesicResult {
    DistanceEstimate est;
    std::vector<std::array<double, 2>> path;  // base-plane polyline, finest level
    double level = 0.0;
};

LevelMesh mesh_level(const RegularDomain& dom, double a, Window window, double h);

// Graph shortest path + coordinate-descent shortening on the exact surface,
// over `refinements` mesh resolutions h, h/2, ...; Richardson in h^2.
GeodesicResult geodesic_distance(const LevelMesh& mesh, const GradientLine& l1,
                                 const GradientLine& l2, int refinements);

// auto-windowed variant with WindowTooSmall growth (at most 3 doublings)
GeodesicResult distance_between_lines(const RegularDomain& dom, double a, const GradientLine& l1,
                                      const GradientLine& l2, double h_unit, int refinements);

// Repeated level distances for one gradient-line pair: the mesh graph search
// runs once, later levels re-shorten the previous path transported along the
// gradient lines (falls back to a fresh mesh when the window is outgrown).
class LinePairSolver {
  public:
    LinePairSolver(const RegularDomain& dom, GradientLine l1, GradientLine l2, double h_unit,
                   int refinements);
    GeodesicResult at(double a);

  private:
    const RegularDomain* dom_;
    GradientLine l1_, l2_;
    double h_unit_;
    int refinements_;
    std::vector<std::array<double, 2>> seed_;
    double seed_level_ = 0.0;
    std::vector<std::pair<double, GeodesicResult>> cache_;
};

// grid spacing used by the sweeps at a given level (h_unit at a = 1)
double sweep_spacing(double h_unit, double a);

// coordinate-descent shortening of a lifted polyline; returns the length
double shorten_on_surface(const LevelSurface& surf, std::vector<std::array<double, 2>>& xs,
                          double step, int max_passes);
// chord-length resampling of a base-plane polyline to a target spacing
std::vector<std::array<double, 2>> resample_polyline(const std::vector<std::array<double, 2>>& xs,
                                                     double spacing);
// resampling that keeps flat-stratum runs coarser (their chords are exact)
std::vector<std::array<double, 2>> resample_stratified(const LevelSurface& surf,
                                                       const std::vector<std::array<double, 2>>& xs,
                                                       double h);

// Minkowski lengths of a level-b polyline and of its flow image at level a.
std::pair<double, double> project_curve_length(const RegularDomain& dom,
                                               const std::vector<MinkVec>& polyline, double a);

struct ComparePair {
    DistanceEstimate d_a, d_b;
    double ratio = 0.0;
    bool lower_ok = true;   // d_b <= d_a + tol
    bool upper_ok = true;   // d_a <= (a/b)^2 d_b + tol
};

struct CompareReport {
    double a = 0, b = 0;
    std::vector<ComparePair> pairs;
    double min_ratio = 0, max_ratio = 0;
    std::size_t violations = 0;
};

CompareReport compare_levels(const RegularDomain& dom, double a, double b,
                             const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                             double h_unit, int refinements, int threads);

// A quasi-concave-time level of an auxiliary (shifted-spine) domain standing
// in for a general convex Cauchy hypersurface.
struct ConvexSurface {
    RegularDomain aux;
    double level;
    Window window;

    ConvexSurface(RegularDomain aux_, double level_, Window win)
        : aux(std::move(aux_)), level(level_), window(win) {}
};

ConvexSurface make_shifted_surface(const RegularDomain& dom, const MinkVec& shift, double level);

struct PairingSample {
    double pairing;  // <N, n>
    double T;        // main cosmological time at the sample
};

struct PairingReport {
    std::size_t samples = 0;
    double max_abs_pairing = 0.0;
    double sup_T = 0.0, inf_T = 0.0;
    double bound = 0.0;   // sup/inf
    double margin = 0.0;  // bound - max
    std::vector<PairingSample> data;
};

PairingReport pairing_bound_check(const RegularDomain& dom, const ConvexSurface& surf,
                                  std::size_t m, std::uint64_t seed);

struct SweepRow {
    std::size_t pair_id = 0;
    double a = 0.0;
    DistanceEstimate est;
};

struct PastPairSummary {
    std::size_t pair_id = 0;
    double extrapolated = 0.0;  // affine-in-a model at a = 0
    double error = 0.0;         // model residual + data bars
    double oracle = 0.0;        // singular-set distance of the retractions
    double gap = 0.0;
    double retracted_length = 0.0;  // Lorentzian length of r o alpha at min a
};

struct PastSweepResult {
    std::vector<SweepRow> rows;
    std::vector<PastPairSummary> pairs;
};

PastSweepResult past_sweep(const RegularDomain& dom,
                           const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                           const std::vector<double>& a_list, double h_unit, int refinements,
                           int threads);

struct FuturePairSummary {
    std::size_t pair_id = 0;
    double target = 0.0;  // d_H(N1, N2)
    std::vector<double> renormalized;  // d_a / a per a
    std::vector<double> gaps;          // |d_a/a - target|
    std::vector<double> errors;        // bars on d_a/a
    bool monotone_within_bars = true;
};

struct FutureSweepResult {
    std::vector<SweepRow> rows;
    std::vector<FuturePairSummary> pairs;
};

FutureSweepResult future_sweep(const RegularDomain& dom,
                               const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                               const std::vector<double>& a_list, double h_unit, int refinements,
                               int threads);

// Least-squares second-fundamental-form fit over the 2-ring (n = 2 only);
// returns -det under the convention that cone levels have positive principal
// curvatures. Throws on boundary nodes.
double estimate_gauss_curvature(const LevelMesh& mesh, std::size_t node);

}  // namespace ctlab
