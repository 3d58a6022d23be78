#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "schrocov/covariance.hpp"
#include "schrocov/random.hpp"
#include "schrocov/spacetime.hpp"
#include "schrocov/states.hpp"

using namespace schrocov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("galilei boost shifts positions by v t") {
    const Event e{1.0, {1.0, 0.0, 0.0}};
    const Event out = boost_event(e, BoostSpec::galilei({0.5, 0.0, 0.0}));
    REQUIRE(out.t == 1.0);
    REQUIRE(out.r == Vec3{0.5, 0.0, 0.0});
}

TEST_CASE("extended boost keeps the two c^-2 time terms") {
    // t' = (1 + 0.005) * 2 - 3/100 = 1.98 by direct substitution
    const Event e{2.0, {3.0, 0.0, 0.0}};
    const Event out = boost_event(e, BoostSpec::extended({1.0, 0.0, 0.0}, 10.0));
    REQUIRE_THAT(out.t, WithinRel(1.98, 1e-15));
    REQUIRE_THAT(out.r.x, WithinRel(1.0, 1e-15));
    REQUIRE(out.r.y == 0.0);
    REQUIRE(out.r.z == 0.0);
}

TEST_CASE("zero velocity is the identity for every kind") {
    const Event e{0.7, {0.3, -1.2, 2.5}};
    for (BoostKind kind : {BoostKind::Galilei, BoostKind::Extended, BoostKind::Lorentz}) {
        const Event out = boost_event(e, {{0.0, 0.0, 0.0}, 10.0, kind});
        REQUIRE(out.t == e.t);
        REQUIRE(out.r == e.r);
        REQUIRE(boost_matrix({{0.0, 0.0, 0.0}, 10.0, kind}) == FrameMatrix::identity());
    }
}

TEST_CASE("extended boost matrix entries") {
    const FrameMatrix m = boost_matrix(BoostSpec::extended({1.0, 0.0, 0.0}, 10.0));
    REQUIRE_THAT(m(0, 0), WithinRel(1.005, 1e-15));
    REQUIRE_THAT(m(0, 1), WithinRel(-0.01, 1e-15));
    REQUIRE(m(0, 2) == 0.0);
    REQUIRE(m(0, 3) == 0.0);
    REQUIRE(m(1, 0) == -1.0);
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j) REQUIRE(m(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("galilei matrix is the extended matrix without c^-2 entries") {
    const FrameMatrix g = boost_matrix(BoostSpec::galilei({0.0, 2.0, 0.0}));
    REQUIRE(g(2, 0) == -2.0);
    REQUIRE(g(0, 0) == 1.0);
    REQUIRE(g(0, 1) == 0.0);
    REQUIRE(g(0, 2) == 0.0);
    REQUIRE(g(0, 3) == 0.0);

    const Vec3 v{0.4, -0.7, 0.2};
    REQUIRE(with_c2_terms_dropped(boost_matrix(BoostSpec::extended(v, 7.0))) ==
            boost_matrix(BoostSpec::galilei(v)));
}

TEST_CASE("compose is the plain matrix product") {
    const FrameMatrix m = boost_matrix(BoostSpec::extended({0.3, 0.1, -0.2}, 5.0));
    REQUIRE(compose(FrameMatrix::identity(), m) == m);
    REQUIRE(compose(m, FrameMatrix::identity()) == m);
}

TEST_CASE("galilei boosts form an exact group") {
    const Vec3 v{0.37, -1.4, 0.9};
    const FrameMatrix round_trip =
        compose(boost_matrix(BoostSpec::galilei(v)), boost_matrix(BoostSpec::galilei(-v)));
    REQUIRE(round_trip == FrameMatrix::identity());
}

TEST_CASE("event route agrees with the matrix route for every kind") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 v = rng.in_ball(0.9);
        const double c = rng.uniform(2.0, 50.0);
        const Event e{rng.uniform(-3.0, 3.0),
                      {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}};
        for (BoostKind kind : {BoostKind::Galilei, BoostKind::Extended, BoostKind::Lorentz}) {
            const BoostSpec b{v, c, kind};
            const Event direct = boost_event(e, b);
            const Event via_matrix = boost_matrix(b).apply(e);
            const double scale = std::max({1.0, std::abs(direct.t), max_abs(direct.r)});
            REQUIRE_THAT(direct.t, WithinAbs(via_matrix.t, 1e-13 * scale));
            REQUIRE_THAT(max_abs(direct.r - via_matrix.r), WithinAbs(0.0, 1e-13 * scale));
        }
    }
}

TEST_CASE("lorentz boost reproduces the textbook axis-aligned form") {
    const double c = 3.0;
    const Vec3 v{1.8, 0.0, 0.0};
    const double gamma = 1.0 / std::sqrt(1.0 - norm2(v) / (c * c));
    const Event e{1.3, {0.7, 0.4, -0.9}};
    const Event out = boost_event(e, BoostSpec::lorentz(v, c));
    REQUIRE_THAT(out.t, WithinRel(gamma * (e.t - v.x * e.r.x / (c * c)), 1e-14));
    REQUIRE_THAT(out.r.x, WithinRel(gamma * (e.r.x - v.x * e.t), 1e-14));
    REQUIRE(out.r.y == e.r.y);
    REQUIRE(out.r.z == e.r.z);
}

TEST_CASE("inverse residual matches its closed-form entries") {
    const BoostSpec b = BoostSpec::extended({1.0, 0.0, 0.0}, 10.0);
    const FrameMatrix r = inverse_residual(b);
    REQUIRE_THAT(r(0, 0), WithinRel(2.5e-5, 1e-14));
    REQUIRE_THAT(r(1, 0), WithinRel(5e-3, 1e-14));
    REQUIRE_THAT(r(0, 1), WithinRel(-5e-5, 1e-14));
    REQUIRE_THAT(r(1, 1), WithinRel(-1e-2, 1e-14));
}

TEST_CASE("inverse residual equals the direct product minus identity") {
    SplitMix64 rng(57);
    for (int trial = 0; trial < 100; ++trial) {
        const double c = rng.uniform(3.0, 100.0);
        const Vec3 v = rng.in_ball(0.3 * c);
        const BoostSpec b = BoostSpec::extended(v, c);

        FrameMatrix product = boost_matrix(b.reversed()) * boost_matrix(b);
        for (int i = 0; i < 4; ++i) product(i, i) -= 1.0;
        REQUIRE(max_abs_diff(inverse_residual(b), product) < 1e-13);
    }
}

TEST_CASE("inverse residual entries keep 1e-14 relative accuracy") {
    SplitMix64 rng(58);
    for (int trial = 0; trial < 100; ++trial) {
        const double c = rng.uniform(3.0, 100.0);
        const Vec3 v = rng.in_ball(0.3 * c);
        const BoostSpec b = BoostSpec::extended(v, c);
        const FrameMatrix r = inverse_residual(b);

        const double c2 = c * c;
        const double s = 0.5 * norm2(v) / c2;
        const double expected[4][4] = {
            {s * s, -v.x * s / c2, -v.y * s / c2, -v.z * s / c2},
            {v.x * s, -v.x * v.x / c2, -v.x * v.y / c2, -v.x * v.z / c2},
            {v.y * s, -v.y * v.x / c2, -v.y * v.y / c2, -v.y * v.z / c2},
            {v.z * s, -v.z * v.x / c2, -v.z * v.y / c2, -v.z * v.z / c2},
        };
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (expected[i][j] == 0.0)
                    REQUIRE(r(i, j) == 0.0);
                else
                    REQUIRE_THAT(r(i, j), WithinRel(expected[i][j], 1e-14));
            }
    }
}

TEST_CASE("inverse residual of zero velocity is the zero matrix") {
    const FrameMatrix r = inverse_residual(BoostSpec::extended({0.0, 0.0, 0.0}, 10.0));
    REQUIRE(max_abs_diff(r, FrameMatrix{}) == 0.0);
}

TEST_CASE("inverse residual rejects non-extended kinds") {
    REQUIRE_THROWS_AS(inverse_residual(BoostSpec::galilei({0.1, 0.0, 0.0})), std::invalid_argument);
    REQUIRE_THROWS_AS(inverse_residual(BoostSpec::lorentz({0.1, 0.0, 0.0}, 10.0)), std::invalid_argument);
}

TEST_CASE("boosts reject invalid input") {
    const Event e{1.0, {1.0, 0.0, 0.0}};
    REQUIRE_THROWS_AS(boost_event(e, BoostSpec::extended({10.0, 0.0, 0.0}, 10.0)), std::invalid_argument);
    REQUIRE_THROWS_AS(boost_event(e, BoostSpec::lorentz({11.0, 0.0, 0.0}, 10.0)), std::invalid_argument);
    REQUIRE_NOTHROW(boost_event(e, BoostSpec::galilei({11.0, 0.0, 0.0})));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(boost_event({nan, {0, 0, 0}}, BoostSpec::galilei({0.1, 0, 0})), std::invalid_argument);
    REQUIRE_THROWS_AS(boost_event(e, BoostSpec::galilei({nan, 0, 0})), std::invalid_argument);
    REQUIRE_THROWS_AS(boost_matrix(BoostSpec::extended({1, 0, 0}, -1.0)), std::invalid_argument);
}

TEST_CASE("advisory regime flag does not gate computation") {
    const BoostSpec fast = BoostSpec::extended({5.0, 0.0, 0.0}, 10.0);
    REQUIRE_FALSE(fast.within_advisory());
    REQUIRE_NOTHROW(boost_matrix(fast));
    REQUIRE(BoostSpec::extended({1.0, 0.0, 0.0}, 10.0).within_advisory());
}

TEST_CASE("extended round trip leaves the rest-energy phase invariant to second order") {
    const Vec3 v{0.2, 0.0, 0.0};
    const auto residual_of_c = [&](double c) {
        const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.3, 0.0}, c);
        const BoostSpec b = BoostSpec::extended(v, c);
        const FrameMatrix round_trip = boost_matrix(b.reversed()) * boost_matrix(b);
        double worst = 0.0;
        for (const Event& e : covariance_probe_events())
            worst = std::max(worst, std::abs(w.phase_at(round_trip.apply(e)) - w.phase_at(e)));
        return worst;
    };
    const OrderScanResult scan = order_scan(residual_of_c, {10.0, 20.0, 40.0, 80.0, 160.0});
    REQUIRE(scan.fitted_exponent <= -1.9);

    // Equivalent boundedness statement: residual * c^2 stays put as c grows.
    double bound = 0.0;
    for (const OrderScanSample& s : scan.samples) bound = std::max(bound, s.residual * s.c * s.c);
    REQUIRE(bound <= scan.samples.front().residual * scan.samples.front().c * scan.samples.front().c * 1.05);
}
