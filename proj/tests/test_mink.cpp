#include <cmath>

#include "ctlab/mink.hpp"
#include "ctlab/rng.hpp"
#include "doctest.h"

using namespace ctlab;

TEST_CASE("lorentz_dot basics") {
    CHECK(lorentz_dot(MinkVec(1, 0, 0), MinkVec(1, 0, 0)) == doctest::Approx(-1.0));
    CHECK(lorentz_dot(MinkVec(1, 1, 0), MinkVec(1, 1, 0)) == doctest::Approx(0.0));
    CHECK(lorentz_dot(MinkVec(2, 1, 0), MinkVec(1, 0, 1)) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(lorentz_dot(MinkVec(1, 0, 0), MinkVec(1, 0, 0, 0)), DimensionMismatch);
}

TEST_CASE("lorentz_dot bilinearity and symmetry on random triples") {
    CounterRng rng(991, 1);
    for (int it = 0; it < 2000; ++it) {
        MinkVec a(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        MinkVec b(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        MinkVec c(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        double s = rng.uniform(-3, 3);
        CHECK(lorentz_dot(a, b) == doctest::Approx(lorentz_dot(b, a)).epsilon(1e-12));
        CHECK(lorentz_dot(a + b * s, c) ==
              doctest::Approx(lorentz_dot(a, c) + s * lorentz_dot(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("causal classification") {
    auto c1 = causal_class(MinkVec(1, 0, 0));
    CHECK(c1.kind == CausalKind::timelike);
    CHECK(c1.orientation == Orientation::future);
    auto c2 = causal_class(MinkVec(1, 1, 0));
    CHECK(c2.kind == CausalKind::lightlike);
    CHECK(c2.orientation == Orientation::future);
    auto c3 = causal_class(MinkVec(0, 1, 0));
    CHECK(c3.kind == CausalKind::spacelike);
    CHECK(c3.orientation == Orientation::none);
    auto c4 = causal_class(MinkVec(0, 0, 0));
    CHECK(c4.kind == CausalKind::zero);
    auto c5 = causal_class(MinkVec(-2, 1, 0));
    CHECK(c5.kind == CausalKind::timelike);
    CHECK(c5.orientation == Orientation::past);
}

TEST_CASE("hyperbolic distance on the hyperboloid") {
    HypPoint o(MinkVec(1, 0, 0));
    CHECK(hyperbolic_distance(o, o) == doctest::Approx(0.0));
    HypPoint b1(MinkVec(std::cosh(1.0), std::sinh(1.0), 0));
    CHECK(hyperbolic_distance(o, b1) == doctest::Approx(1.0).epsilon(1e-12));
    HypPoint b2(MinkVec(std::cosh(1.0), -std::sinh(1.0), 0));
    CHECK(hyperbolic_distance(b1, b2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(HypPoint(MinkVec(1.1, 0, 0)), Error);
}

namespace {
// random point of H^2 via a rapidity vector
ctlab::HypPoint random_hyp(ctlab::CounterRng& rng, double rho_max = 3.0) {
    double rho = rng.uniform(0, rho_max);
    double phi = rng.uniform(0, 6.283185307179586);
    return ctlab::HypPoint(
        ctlab::MinkVec(std::cosh(rho), std::sinh(rho) * std::cos(phi), std::sinh(rho) * std::sin(phi)));
}
}  // namespace

TEST_CASE("reverse Cauchy-Schwarz for future timelike pairs") {
    CounterRng rng(1234, 2);
    int done = 0;
    while (done < 10000) {
        MinkVec a(rng.uniform(0.2, 3), rng.uniform(-2, 2), rng.uniform(-2, 2));
        MinkVec b(rng.uniform(0.2, 3), rng.uniform(-2, 2), rng.uniform(-2, 2));
        if (!is_future_timelike(a) || !is_future_timelike(b)) continue;
        double lhs = lorentz_dot(a, b);
        double rhs = -std::sqrt(-lorentz_dot(a, a)) * std::sqrt(-lorentz_dot(b, b));
        CHECK(lhs <= rhs + 1e-12);
        ++done;
    }
}

TEST_CASE("normal pairing bound from the precompactness lemma") {
    // for unit spacelike v with <v,n1> >= 0 and <v,n2> <= 0:
    //   0 <= <v,n1> <= sqrt(<n1,n2>^2 - 1)
    // and the bound is attained by v = (-sinh r, -cosh r, 0) against boosts
    CounterRng rng(77, 3);
    int accepted = 0;
    while (accepted < 10000) {
        HypPoint n1 = random_hyp(rng, 2.0);
        HypPoint n2 = random_hyp(rng, 2.0);
        double g = lorentz_dot(n1.v, n2.v);
        if (g * g - 1.0 < 1e-8) continue;  // n1 == n2 excluded
        MinkVec w(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        double q = lorentz_dot(w, w);
        if (!(q > 1e-6)) continue;
        MinkVec v = w * (1.0 / std::sqrt(q));
        double d1 = lorentz_dot(v, n1.v);
        double d2 = lorentz_dot(v, n2.v);
        if (d1 < 0 || d2 > 0) continue;
        CHECK(d1 >= 0.0);
        CHECK(d1 <= std::sqrt(g * g - 1.0) + 1e-10);
        ++accepted;
    }
    // sharpness at <v,n2> = 0
    double r = 1.0;
    MinkVec v(-std::sinh(r), -std::cosh(r), 0);
    HypPoint n1(MinkVec(1, 0, 0));
    HypPoint n2(MinkVec(std::cosh(r), std::sinh(r), 0));
    double g = lorentz_dot(n1.v, n2.v);
    CHECK(lorentz_dot(v, n1.v) == doctest::Approx(std::sqrt(g * g - 1.0)).epsilon(1e-12));
    CHECK(std::abs(lorentz_dot(v, n2.v)) < 1e-12);
}

TEST_CASE("hyperbolic triangle inequality on random triples") {
    CounterRng rng(555, 4);
    for (int it = 0; it < 1000; ++it) {
        HypPoint a = random_hyp(rng);
        HypPoint b = random_hyp(rng);
        HypPoint c = random_hyp(rng);
        double ab = hyperbolic_distance(a, b);
        double bc = hyperbolic_distance(b, c);
        double ac = hyperbolic_distance(a, c);
        CHECK(ac <= ab + bc + 1e-10);
    }
}

TEST_CASE("boost_normal gives unit future vectors") {
    CounterRng rng(8, 5);
    for (int it = 0; it < 100; ++it) {
        std::array<double, 3> rap{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
        HypPoint N = boost_normal(2, rap);
        CHECK(lorentz_dot(N.v, N.v) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(N.v.t >= 1.0);
    }
    HypPoint rest = boost_normal(2, {0, 0, 0});
    CHECK(rest.v.t == doctest::Approx(1.0));
}
