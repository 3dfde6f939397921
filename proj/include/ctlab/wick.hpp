#pragma once

#include "ctlab/levelset.hpp"

namespace ctlab {

enum class WickKind { deSitter, antiDeSitter };

// de Sitter / anti-de Sitter rescaling of a flat 2+1 domain: time changes
// argth / arctan, orthogonal metric scaled by 1/(1-T^2) resp. 1/(1+T^2).
struct WickGeometry {
    WickKind kind;
    const RegularDomain* dom;

    WickGeometry(WickKind k, const RegularDomain& d) : kind(k), dom(&d) {
        if (d.dim() != 2) throw Error("Wick rotations are defined for 2+1 domains only");
    }
};

// argth(T), strictly increasing bijection (0,1) -> (0,inf)
double ds_time(double T);
// arctan(T), (0,inf) -> (0, pi/2)
double ads_time(double T);

// flat cosmological level corresponding to the rescaled level a
double wick_flat_level(WickKind kind, double a);
// intra-level length factor from the conformal scaling on the orthogonal
// distribution: cosh(a) (dS), cos(a) (AdS)
double wick_length_factor(WickKind kind, double a);
// the factor a quadratic-form reading of the rescaling would give instead
double wick_quadratic_factor(WickKind kind, double a);

struct WickDistance {
    DistanceEstimate est;      // rescaled
    GeodesicResult flat;       // underlying flat computation
    double flat_level = 0.0;
    double factor = 0.0;
};

WickDistance wick_level_distance(const WickGeometry& geom, double a, const GradientLine& l1,
                                 const GradientLine& l2, double h_unit, int refinements);

// metric-tensor comparison bounds between rescaled levels a > b:
//   dS: (1, (sinh a / sinh b)^2);  AdS: ((cos a / cos b)^2, (sin a / sin b)^2)
std::pair<double, double> wick_bilip_bounds(WickKind kind, double a, double b);

// Gauss curvature of the level at cosmological distance a from a surface
// with principal curvatures l1, l2; flat and dS ambient
double curvature_transport(double l1, double l2, double a, bool de_sitter);

// dS k-time cosmological barriers as pure functions of (b, H0, H1)
std::pair<double, double> ds_k_barrier(double b, double H0, double H1);
// asymptotic bound on (upper - lower) as b -> infinity
double ds_k_gap_limit(double H0);

struct WickSweepResult {
    std::vector<SweepRow> rows;             // rescaled values at the rescaled levels
    std::vector<PastPairSummary> pairs;     // extrapolation vs the flat tree oracle
};

// past sweep in the rescaled geometry: levels are given in rescaled time
WickSweepResult wick_past_sweep(const WickGeometry& geom,
                                const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                                const std::vector<double>& a_list, double h_unit, int refinements,
                                int threads);

struct WickPairingReport {
    std::size_t samples = 0;
    double max_abs_pairing = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

// sinh-/tan-ratio pairing bound evaluated from flat pairing samples
WickPairingReport wick_pairing_check(WickKind kind, const PairingReport& flat);

}  // namespace ctlab
