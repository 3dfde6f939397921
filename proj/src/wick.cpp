#include "ctlab/wick.hpp"

#include <cmath>

#include "ctlab/util.hpp"

namespace ctlab {

double ds_time(double T) {
    if (!(T > 0 && T < 1)) throw Error("ds_time needs 0 < T < 1");
    return std::atanh(T);
}

double ads_time(double T) {
    if (!(T > 0)) throw Error("ads_time needs T > 0");
    return std::atan(T);
}

double wick_flat_level(WickKind kind, double a) {
    if (kind == WickKind::deSitter) {
        if (!(a > 0)) throw Error("dS level must be positive");
        return std::tanh(a);
    }
    if (!(a > 0 && a < 1.5707963267948966)) throw Error("AdS level must lie in (0, pi/2)");
    return std::tan(a);
}

double wick_length_factor(WickKind kind, double a) {
    return kind == WickKind::deSitter ? std::cosh(a) : std::cos(a);
}

double wick_quadratic_factor(WickKind kind, double a) {
    double f = wick_length_factor(kind, a);
    return f * f;
}

WickDistance wick_level_distance(const WickGeometry& geom, double a, const GradientLine& l1,
                                 const GradientLine& l2, double h_unit, int refinements) {
    WickDistance out;
    out.flat_level = wick_flat_level(geom.kind, a);
    out.factor = wick_length_factor(geom.kind, a);
    out.flat = distance_between_lines(*geom.dom, out.flat_level, l1, l2, h_unit, refinements);
    out.est = out.flat.est;
    out.est.value *= out.factor;
    out.est.extrapolated *= out.factor;
    out.est.error *= out.factor;
    for (auto& [h, v] : out.est.history) v *= out.factor;
    return out;
}

std::pair<double, double> wick_bilip_bounds(WickKind kind, double a, double b) {
    if (!(a >= b && b > 0)) throw Error("bounds need a >= b > 0");
    if (kind == WickKind::deSitter) {
        double r = std::sinh(a) / std::sinh(b);
        return {1.0, r * r};
    }
    if (!(a < 1.5707963267948966)) throw Error("AdS level must lie in (0, pi/2)");
    double rc = std::cos(a) / std::cos(b);
    double rs = std::sin(a) / std::sin(b);
    return {rc * rc, rs * rs};
}

double curvature_transport(double l1, double l2, double a, bool de_sitter) {
    if (de_sitter) {
        double t = std::tanh(a);
        double d1 = 1 + l1 * t, d2 = 1 + l2 * t;
        if (!(d1 > 0 && d2 > 0)) throw Error("focal point crossed in curvature transport");
        return -((l1 + t) * (l2 + t)) / (d1 * d2);
    }
    double d1 = 1 + a * l1, d2 = 1 + a * l2;
    if (!(d1 > 0 && d2 > 0)) throw Error("focal point crossed in curvature transport");
    return -(l1 * l2) / (d1 * d2);
}

std::pair<double, double> ds_k_barrier(double b, double H0, double H1) {
    if (!(b > 1)) throw Error("ds_k_barrier needs b > 1");
    if (!(H0 <= H1)) throw Error("ds_k_barrier needs H0 <= H1");
    double upper_arg = b / std::sqrt(b * b + 1);  // argcoth(sqrt((b^2+1)/b^2))
    double lower_arg = H0 / (b * b + 2) +
                       std::sqrt(H1 * H1 + (b * b - 1) * (b * b + 2)) / (b * b + 2);
    if (!(std::abs(lower_arg) < 1.0) || !(std::abs(upper_arg) < 1.0))
        throw Error("barrier argument outside the argth domain");
    return {std::atanh(lower_arg), std::atanh(upper_arg)};
}

double ds_k_gap_limit(double H0) {
    if (!(H0 < 3)) throw Error("gap limit needs H0 < 3");
    return 0.5 * std::log(3 - H0);
}

WickSweepResult wick_past_sweep(const WickGeometry& geom,
                                const std::vector<std::pair<GradientLine, GradientLine>>& pairs,
                                const std::vector<double>& a_list, double h_unit, int refinements,
                                int threads) {
    if (a_list.size() < 3) throw Error("past sweep needs at least 3 levels");
    WickSweepResult out;
    const std::size_t P = pairs.size(), A = a_list.size();
    out.rows.resize(P * A);
    parallel_for_index(P, threads, [&](std::size_t pi) {
        LinePairSolver solver(*geom.dom, pairs[pi].first, pairs[pi].second, h_unit, refinements);
        for (std::size_t ai = 0; ai < A; ++ai) {
            double factor = wick_length_factor(geom.kind, a_list[ai]);
            auto flat = solver.at(wick_flat_level(geom.kind, a_list[ai]));
            DistanceEstimate est = flat.est;
            est.value *= factor;
            est.extrapolated *= factor;
            est.error *= factor;
            for (auto& [h, v] : est.history) v *= factor;
            out.rows[pi * A + ai] = {pi, a_list[ai], est};
        }
    });
    SingularMetric sm = geom.dom->singular_set();
    for (std::size_t pi = 0; pi < P; ++pi) {
        PastPairSummary ps;
        ps.pair_id = pi;
        double Sa = 0, Saa = 0, Sd = 0, Sad = 0, n = double(A);
        double resid = 0, maxbar = 0;
        for (std::size_t ai = 0; ai < A; ++ai) {
            double a = a_list[ai], d = out.rows[pi * A + ai].est.value;
            Sa += a;
            Saa += a * a;
            Sd += d;
            Sad += a * d;
        }
        double det = n * Saa - Sa * Sa;
        double c = (n * Sad - Sa * Sd) / det;
        double d0 = (Sd - c * Sa) / n;
        for (std::size_t ai = 0; ai < A; ++ai) {
            resid = std::max(resid,
                             std::abs(d0 + c * a_list[ai] - out.rows[pi * A + ai].est.value));
            maxbar = std::max(maxbar, out.rows[pi * A + ai].est.error);
        }
        ps.extrapolated = d0;
        ps.error = 2.0 * resid + 1.5 * maxbar + 1e-12;
        ps.oracle = sm.distance(pairs[pi].first.stratum, pairs[pi].second.stratum);
        ps.gap = std::abs(d0 - ps.oracle);
        out.pairs.push_back(ps);
    }
    return out;
}

WickPairingReport wick_pairing_check(WickKind kind, const PairingReport& flat) {
    WickPairingReport rep;
    rep.samples = flat.samples;
    if (flat.samples == 0) return rep;
    double sup_tau = -1e300, inf_tau = 1e300;
    for (const auto& s : flat.data) {
        double T = s.T;
        double alpha, beta, tau;
        if (kind == WickKind::deSitter) {
            if (!(T < 1))
                throw Error("dS pairing check needs the surface inside the tight region T < 1");
            double u = 1 - T * T;
            alpha = 1 / (u * u);
            beta = 1 / u;
            tau = std::atanh(T);
        } else {
            double u = 1 + T * T;
            alpha = 1 / (u * u);
            beta = 1 / u;
            tau = std::atan(T);
        }
        double c = std::abs(s.pairing);
        double den = alpha - c * c * (alpha - beta);
        if (!(den > 0)) throw Error("rescaled surface normal degenerates (pairing too large)");
        double w = c * std::sqrt(beta / den);
        rep.max_abs_pairing = std::max(rep.max_abs_pairing, w);
        sup_tau = std::max(sup_tau, tau);
        inf_tau = std::min(inf_tau, tau);
    }
    rep.bound = kind == WickKind::deSitter ? std::sinh(sup_tau) / std::sinh(inf_tau)
                                           : std::tan(sup_tau) / std::tan(inf_tau);
    rep.margin = rep.bound - rep.max_abs_pairing;
    return rep;
}

}  // namespace ctlab
