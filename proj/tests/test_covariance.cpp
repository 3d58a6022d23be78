#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "schrocov/covariance.hpp"
#include "schrocov/report.hpp"

using namespace schrocov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("galilei non-covariance is confirmed on the reference instance") {
    const PlaneWave w = PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0});
    const CheckVerdict v = check_galilei_noncovariance(w, {0.3, 0.0, 0.0});
    REQUIRE(v.passed);
    REQUIRE_FALSE(is_inconclusive(v));
    REQUIRE_THAT(v.details.at("off_shell_gap"), WithinAbs(0.3, 1e-12));
    REQUIRE(v.details.at("momentum_change") == 0.0);
}

TEST_CASE("galilei non-covariance is inconclusive for degenerate geometry") {
    const PlaneWave w = PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0});
    REQUIRE(is_inconclusive(check_galilei_noncovariance(w, {0.0, 0.0, 0.0})));
    REQUIRE(is_inconclusive(check_galilei_noncovariance(w, {0.0, 0.4, 0.0})));
}

TEST_CASE("phase-shift covariance holds on the reference instance") {
    const PlaneWave w = PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0});
    const CheckVerdict v = check_phase_shift_covariance(w, {0.2, 0.0, 0.0});
    REQUIRE(v.passed);
    REQUIRE_THAT(v.details.at("boosted_E"), WithinRel(0.72, 1e-14));

    const CheckVerdict still = check_phase_shift_covariance(w, {0.0, 0.0, 0.0});
    REQUIRE(still.passed);
    REQUIRE(still.residual == 0.0);
}

TEST_CASE("phase-shift covariance holds on a random batch") {
    SplitMix64 rng(71);
    for (int i = 0; i < 100; ++i) {
        const PlaneWave w = PlaneWave::schrodinger(rng.uniform(0.1, 10.0), rng.in_ball(5.0));
        REQUIRE(check_phase_shift_covariance(w, rng.in_ball(1.0)).passed);
    }
}

TEST_CASE("mass dependence: one rule cannot serve two masses") {
    const CheckVerdict v = check_mass_dependence(1.0, 2.0, {0.2, 0.0, 0.0});
    REQUIRE(v.passed);
    REQUIRE_THAT(v.details.at("momentum_gap"), WithinAbs(0.2, 1e-12));
    REQUIRE(v.details.at("off_shell") > 1e-3);

    const CheckVerdict tiny = check_mass_dependence(1.0, 1.000001, {1.0, 0.0, 0.0});
    REQUIRE(tiny.passed);
    REQUIRE_THAT(tiny.details.at("momentum_gap"), WithinAbs(1e-6, 1e-11));

    REQUIRE(is_inconclusive(check_mass_dependence(1.0, 2.0, {0.0, 0.0, 0.0})));
    REQUIRE_THROWS_AS(check_mass_dependence(1.0, 1.0, {0.2, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("extended covariance on the reference instance") {
    const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, 10.0);
    const BoostSpec b = BoostSpec::extended({0.2, 0.0, 0.0}, 10.0);
    const CheckVerdict v = check_extended_covariance(w, b);
    REQUIRE(v.passed);
    REQUIRE_THAT(v.details.at("truncated_E"), WithinAbs(100.32, 1e-12));
    // Measured truncation gaps sit on their closed forms.
    REQUIRE_THAT(v.details.at("gap_energy"), WithinAbs(1e-4, 1e-8));
    REQUIRE_THAT(v.details.at("gap_momentum"), WithinAbs(1e-3, 1e-8));
}

TEST_CASE("extended covariance trivial cases") {
    const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, 10.0);
    const CheckVerdict still = check_extended_covariance(w, BoostSpec::extended({0.0, 0.0, 0.0}, 10.0));
    REQUIRE(still.passed);
    REQUIRE(still.details.at("gap_energy") < 1e-9);

    const Vec3 v{0.25, 0.0, 0.0};
    const PlaneWave comoving = PlaneWave::with_rest_energy(2.0, 2.0 * v, 10.0);
    const CheckVerdict gone = check_extended_covariance(comoving, BoostSpec::extended(v, 10.0));
    REQUIRE(gone.passed);
    REQUIRE(gone.details.at("truncated_E") == 200.0);

    REQUIRE_THROWS_AS(
        check_extended_covariance(PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0}),
                                  BoostSpec::extended({0.2, 0.0, 0.0}, 10.0)),
        std::invalid_argument);
}

TEST_CASE("dropping the c^-2 terms breaks momentum covariance") {
    const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, 10.0);
    const BoostSpec b = BoostSpec::extended({0.2, 0.0, 0.0}, 10.0);
    const CheckVerdict v =
        check_extended_covariance(w, b, with_c2_terms_dropped(boost_matrix(b.reversed())));
    REQUIRE_FALSE(v.passed);
    REQUIRE_THAT(v.details.at("gap_momentum"), WithinAbs(0.2, 1e-3));
}

TEST_CASE("operator transform: galilei chain rule at finite-difference accuracy") {
    const PlaneWave w = PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0});
    const CheckVerdict v =
        check_operator_transform(w, BoostSpec::galilei({0.3, 0.0, 0.0}), {0.2, {0.4, 0.0, 0.0}});
    REQUIRE(v.passed);
    REQUIRE(v.residual < 1e-8);

    // Zero velocity: both sides are the same finite differences, bit for bit.
    const CheckVerdict same =
        check_operator_transform(w, BoostSpec::galilei({0.0, 0.0, 0.0}), {0.2, {0.4, 0.0, 0.0}});
    REQUIRE(same.residual == 0.0);
}

TEST_CASE("operator transform: galilei energy line matches the analytic chain rule") {
    const PlaneWave w = PlaneWave::schrodinger(1.0, {1.0, 0.5, 0.0});
    const Vec3 v{0.3, -0.1, 0.0};
    const CheckVerdict verdict = check_operator_transform(w, BoostSpec::galilei(v), {0.2, {0.4, 0.1, 0.0}});
    // d/dt' = d/dt + v.grad, so the probed energy is E - p.v.
    REQUIRE_THAT(verdict.details.at("lhs_E"), WithinAbs(w.energy() - dot(w.p, v), 1e-8));
    REQUIRE_THAT(verdict.details.at("rhs_E"), WithinAbs(w.energy() - dot(w.p, v), 1e-8));
}

TEST_CASE("operator transform: extended kind recovers the m v momentum shift") {
    const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, 10.0);
    const BoostSpec b = BoostSpec::extended({0.2, 0.0, 0.0}, 10.0);
    const CheckVerdict v = check_operator_transform(w, b, {0.1, {0.1, 0.05, 0.0}});
    REQUIRE(v.passed);
    // The probed momentum is p - m v up to (p^2/2m) v/c^2 = 1e-3.
    REQUIRE_THAT(v.details.at("momentum_vs_classical"), WithinAbs(1e-3, 1e-6));
}

TEST_CASE("order scan fits a synthetic inverse-square law exactly") {
    const OrderScanResult r = order_scan([](double c) { return 1.0 / (c * c); }, {10.0, 20.0, 40.0, 80.0});
    REQUIRE_THAT(r.fitted_exponent, WithinAbs(-2.0, 1e-6));
    REQUIRE(r.fit_quality > 0.999999);
    REQUIRE_FALSE(r.converged_to_zero);
}

TEST_CASE("order scan validates its inputs") {
    REQUIRE_THROWS_AS(order_scan([](double) { return 1.0; }, {10.0, 20.0, 40.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(order_scan([](double) { return 1.0; }, {10.0, 20.0, 20.0, 40.0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(order_scan([](double) { return 1.0; }, {10.0, 20.0, -40.0, 80.0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(order_scan([](double) { return std::nan(""); }, {10.0, 20.0, 40.0, 80.0}),
                      std::invalid_argument);
}

TEST_CASE("order scan flags machine-zero convergence") {
    const OrderScanResult r = order_scan([](double) { return 1e-16; }, {10.0, 20.0, 40.0, 80.0});
    REQUIRE(r.converged_to_zero);
    REQUIRE(std::isnan(r.fitted_exponent));
}

TEST_CASE("inverse-entry scans land on the closed-form exponents") {
    const std::vector<double> cs{10.0, 20.0, 40.0, 80.0};
    const OrderScanResult head = scan_inverse_entry({1.0, 0.0, 0.0}, 0, 0, cs);
    REQUIRE_THAT(head.fitted_exponent, WithinAbs(-4.0, 0.01));
    REQUIRE(head.fit_quality >= 0.999);

    const OrderScanResult column = scan_inverse_entry({1.0, 0.0, 0.0}, 1, 0, cs);
    REQUIRE_THAT(column.fitted_exponent, WithinAbs(-2.0, 0.01));
    REQUIRE(column.fit_quality >= 0.999);

    const OrderScanResult row = scan_inverse_entry({1.0, 0.0, 0.0}, 0, 1, cs);
    REQUIRE_THAT(row.fitted_exponent, WithinAbs(-4.0, 0.01));

    // Axis-aligned velocity: spatial off-diagonal entries are identically zero.
    REQUIRE(scan_inverse_entry({1.0, 0.0, 0.0}, 1, 2, cs).converged_to_zero);

    REQUIRE(expected_inverse_entry_exponent(0, 0) == -4.0);
    REQUIRE(expected_inverse_entry_exponent(1, 0) == -2.0);
    REQUIRE(expected_inverse_entry_exponent(2, 2) == -2.0);
    REQUIRE_THROWS_AS(expected_inverse_entry_exponent(4, 0), std::invalid_argument);
}

TEST_CASE("lorentz reference gap vanishes for a resting wave and no boost") {
    const PlaneWave w = PlaneWave::with_rest_energy(1.0, {0.0, 0.0, 0.0}, 10.0);
    REQUIRE(lorentz_reference_gap(w, {0.0, 0.0, 0.0}, 10.0) < 1e-13);
}

TEST_CASE("lorentz reference gap decays as c^-2") {
    const std::vector<double> cs{10.0, 20.0, 40.0, 80.0};
    const OrderScanResult scan = scan_lorentz_gap(1.0, {1.0, 0.0, 0.0}, {0.1, 0.0, 0.0}, cs);
    REQUIRE(scan.fitted_exponent <= -1.9);
    REQUIRE(scan.fit_quality >= 0.999);

    // Gaps shrink roughly 4x per doubling of c.
    for (std::size_t i = 0; i + 1 < scan.samples.size(); ++i) {
        const double ratio = scan.samples[i].residual / scan.samples[i + 1].residual;
        REQUIRE(ratio > 3.5);
        REQUIRE(ratio < 4.5);
    }

    // Zero-momentum wave: the gap comes from gamma alone, still at least c^-2.
    const OrderScanResult resting = scan_lorentz_gap(1.0, {0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}, cs);
    REQUIRE(resting.fitted_exponent <= -1.9);
}

TEST_CASE("lorentz reference gap rejects bad inputs") {
    REQUIRE_THROWS_AS(lorentz_reference_gap(PlaneWave::schrodinger(1.0, {1.0, 0.0, 0.0}), {0.1, 0, 0}, 10.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        lorentz_reference_gap(PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, 10.0), {11.0, 0, 0}, 10.0),
        std::invalid_argument);
}

TEST_CASE("truncation gap decays as c^-2") {
    const OrderScanResult scan =
        scan_truncation_gap(1.0, {1.0, 0.0, 0.0}, {0.2, 0.0, 0.0}, {10.0, 20.0, 40.0, 80.0});
    REQUIRE(scan.fitted_exponent <= -1.9);
    REQUIRE(scan.fitted_exponent >= -2.1);
    REQUIRE(scan.fit_quality >= 0.999);
}

TEST_CASE("extended and lorentz boosts agree on events to order c^-2") {
    const OrderScanResult scan = order_scan(
        [](double c) { return extended_vs_lorentz_event_gap({0.3, 0.1, 0.0}, c); },
        {10.0, 20.0, 40.0, 80.0});
    REQUIRE(scan.fitted_exponent <= -1.9);
}

TEST_CASE("operator-transform momentum error decays as c^-2") {
    const OrderScanResult scan = order_scan(
        [](double c) {
            const PlaneWave w = PlaneWave::with_rest_energy(1.0, {1.0, 0.0, 0.0}, c);
            const BoostSpec b = BoostSpec::extended({0.2, 0.0, 0.0}, c);
            const CheckVerdict v = check_operator_transform(w, b, {0.1, {0.1, 0.05, 0.0}});
            return v.details.at("momentum_vs_classical");
        },
        {10.0, 20.0, 40.0, 80.0});
    REQUIRE(scan.fitted_exponent <= -1.9);
}

TEST_CASE("verify suite passes on the defaults and reports all checks") {
    const CovarianceReport report = run_verify_suite(VerifyConfig{});
    REQUIRE(report.overall);
    REQUIRE(report.verdicts.size() == 9);
    for (std::size_t i = 0; i + 1 < report.verdicts.size(); ++i)
        REQUIRE(report.verdicts[i].name < report.verdicts[i + 1].name);
    for (const CheckVerdict& v : report.verdicts) REQUIRE(v.passed);
    REQUIRE(report.inputs.at("m") == 1.0);
}

TEST_CASE("verify suite fails under sabotage") {
    VerifyConfig cfg;
    cfg.sabotage = Sabotage::DropC2Terms;
    const CovarianceReport report = run_verify_suite(cfg);
    REQUIRE_FALSE(report.overall);
    bool extended_failed = false;
    for (const CheckVerdict& v : report.verdicts)
        if (v.name == "extended-covariance") extended_failed = !v.passed;
    REQUIRE(extended_failed);
}

TEST_CASE("checks are deterministic bit for bit") {
    const VerifyConfig cfg;
    const CovarianceReport a = run_verify_suite(cfg);
    const CovarianceReport b = run_verify_suite(cfg);
    REQUIRE(a.verdicts.size() == b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
        REQUIRE(a.verdicts[i].name == b.verdicts[i].name);
        REQUIRE(std::memcmp(&a.verdicts[i].residual, &b.verdicts[i].residual, sizeof(double)) == 0);
        REQUIRE(a.verdicts[i].details == b.verdicts[i].details);
    }
    REQUIRE(render_verify(a, 42, OutputFormat::Json) == render_verify(b, 42, OutputFormat::Json));
}

TEST_CASE("probe events are fixed and well formed") {
    const auto& events = covariance_probe_events();
    REQUIRE(events.size() == 17);
    REQUIRE(events.front() == Event{0.0, {0.0, 0.0, 0.0}});
    const auto& again = covariance_probe_events();
    REQUIRE(events.size() == again.size());
    for (std::size_t i = 0; i < events.size(); ++i) REQUIRE(events[i] == again[i]);
}
