#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ctlab {

// Base error type; subtypes carry the offending indices/values.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    DimensionMismatch() : Error("dimension mismatch between Minkowski vectors") {}
};

// Point/vector of R^{1,n}, n in {2,3}, signature (-,+,...,+).
struct MinkVec {
    double t = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    int n = 2;

    MinkVec() = default;
    MinkVec(double t_, double x0, double x1) : t(t_), x{x0, x1, 0.0}, n(2) {}
    MinkVec(double t_, double x0, double x1, double x2) : t(t_), x{x0, x1, x2}, n(3) {}

    MinkVec operator+(const MinkVec& o) const {
        check_dim(o);
        MinkVec r = *this;
        r.t += o.t;
        for (int i = 0; i < n; ++i) r.x[i] += o.x[i];
        return r;
    }
    MinkVec operator-(const MinkVec& o) const {
        check_dim(o);
        MinkVec r = *this;
        r.t -= o.t;
        for (int i = 0; i < n; ++i) r.x[i] -= o.x[i];
        return r;
    }
    MinkVec operator*(double s) const {
        MinkVec r = *this;
        r.t *= s;
        for (int i = 0; i < n; ++i) r.x[i] *= s;
        return r;
    }
    MinkVec operator-() const { return *this * -1.0; }

    void check_dim(const MinkVec& o) const {
        if (n != o.n) throw DimensionMismatch();
    }

    double spatial_norm() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += x[i] * x[i];
        return std::sqrt(s);
    }
};

inline MinkVec operator*(double s, const MinkVec& v) { return v * s; }

// <a,b> = -a.t b.t + sum a.x_i b.x_i
inline double lorentz_dot(const MinkVec& a, const MinkVec& b) {
    a.check_dim(b);
    double s = -a.t * b.t;
    for (int i = 0; i < a.n; ++i) s += a.x[i] * b.x[i];
    return s;
}

enum class CausalKind { timelike, lightlike, spacelike, zero };
enum class Orientation { future, past, none };

struct CausalClass {
    CausalKind kind = CausalKind::zero;
    Orientation orientation = Orientation::none;
};

// Classification by sign of <v,v> within 1e-12 absolute and sign of v.t.
inline CausalClass causal_class(const MinkVec& v) {
    constexpr double tol = 1e-12;
    double q = lorentz_dot(v, v);
    double mag = std::abs(v.t);
    for (int i = 0; i < v.n; ++i) mag = std::max(mag, std::abs(v.x[i]));
    CausalClass c;
    if (mag == 0.0) {
        c.kind = CausalKind::zero;
        c.orientation = Orientation::none;
        return c;
    }
    if (q < -tol)
        c.kind = CausalKind::timelike;
    else if (q > tol)
        c.kind = CausalKind::spacelike;
    else
        c.kind = CausalKind::lightlike;
    if (c.kind == CausalKind::timelike || c.kind == CausalKind::lightlike)
        c.orientation = v.t > 0 ? Orientation::future : Orientation::past;
    else
        c.orientation = Orientation::none;
    return c;
}

inline bool is_future_timelike(const MinkVec& v) {
    return v.t > 0.0 && lorentz_dot(v, v) < 0.0;
}

// Point of the hyperboloid model H^n: <v,v> = -1, v.t >= 1.
struct HypPoint {
    MinkVec v;

    HypPoint() : v(1.0, 0.0, 0.0) {}
    explicit HypPoint(const MinkVec& u, double tol = 1e-10) : v(u) {
        double q = lorentz_dot(u, u);
        if (std::abs(q + 1.0) > tol || u.t < 1.0 - tol)
            throw Error("vector is not a future unit timelike vector (off H^n)");
    }
};

// Unit-normalize a future timelike vector onto H^n.
inline HypPoint normalize_timelike(const MinkVec& u) {
    double q = lorentz_dot(u, u);
    if (!(q < 0.0) || u.t <= 0.0) throw Error("cannot normalize: not future timelike");
    return HypPoint(u * (1.0 / std::sqrt(-q)));
}

// d(u,v) = arccosh(-<u,v>), argument clamped to >= 1 against rounding.
inline double hyperbolic_distance(const HypPoint& a, const HypPoint& b) {
    constexpr double tol = 1e-8;
    if (std::abs(lorentz_dot(a.v, a.v) + 1.0) > tol || std::abs(lorentz_dot(b.v, b.v) + 1.0) > tol)
        throw Error("hyperbolic_distance: input off the hyperboloid");
    double c = -lorentz_dot(a.v, b.v);
    return std::acosh(std::max(1.0, c));
}

// N from a rapidity vector: N = (cosh|b|, sinh|b| * b/|b|).
inline HypPoint boost_normal(int n, const std::array<double, 3>& rap) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += rap[i] * rap[i];
    double r = std::sqrt(r2);
    MinkVec v;
    v.n = n;
    v.t = std::cosh(r);
    if (r > 0) {
        double s = std::sinh(r) / r;
        for (int i = 0; i < n; ++i) v.x[i] = s * rap[i];
    }
    return HypPoint(v);
}

}  // namespace ctlab
