#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "schrocov/spacetime.hpp"
#include "schrocov/vec3.hpp"

namespace schrocov {

using Complex = std::complex<double>;

/// Natural units: hbar = 1, c explicit. Masses below this floor make the
/// kinetic term p^2/2m numerically meaningless and are rejected.
inline constexpr double kMinMass = 1e-9;

struct EnergyMomentum {
    double E = 0.0;
    Vec3 p{};
};

/// Wave with phase E t - p.r and no dispersion constraint. Boosted plane
/// waves land here because their frequency coefficient generally leaves the
/// p^2/2m shell.
struct LinearPhaseWave {
    double E = 0.0;
    Vec3 p{};

    double phase_at(const Event& e) const { return E * e.t - dot(p, e.r); }
};

/// Multiplier exp(i(alpha t - beta.r)). Applied to a linear-phase wave it
/// shifts (E, p) by (alpha, beta).
struct PhaseFactor {
    double alpha = 0.0;
    Vec3 beta{};

    LinearPhaseWave applied_to(const LinearPhaseWave& w) const { return {w.E + alpha, w.p + beta}; }
};

/// Free-particle plane wave, phase (mc^2 [if include_rest] + p^2/2m) t - p.r.
/// c participates only through the rest term.
struct PlaneWave {
    double m = 1.0;
    Vec3 p{};
    bool include_rest = false;
    double c = 1.0;

    static PlaneWave schrodinger(double m, const Vec3& p) {
        PlaneWave w{m, p, false, 1.0};
        w.validate();
        return w;
    }

    static PlaneWave with_rest_energy(double m, const Vec3& p, double c) {
        PlaneWave w{m, p, true, c};
        w.validate();
        return w;
    }

    void validate() const {
        if (!std::isfinite(m) || m < kMinMass) throw std::invalid_argument("mass must be finite and >= 1e-9");
        if (!is_finite(p)) throw std::invalid_argument("momentum must be finite");
        if (include_rest && (!std::isfinite(c) || c <= 0.0))
            throw std::invalid_argument("rest-energy wave needs a positive finite c");
    }

    double rest_energy() const { return include_rest ? m * c * c : 0.0; }
    double energy() const { return rest_energy() + norm2(p) / (2.0 * m); }
    double phase_at(const Event& e) const { return energy() * e.t - dot(p, e.r); }

    LinearPhaseWave as_linear() const { return {energy(), p}; }
};

inline double phase_at(const PlaneWave& w, const Event& e) { return w.phase_at(e); }
inline double phase_at(const LinearPhaseWave& w, const Event& e) { return w.phase_at(e); }

/// (E, p) read off the phase: E is the t coefficient, p the negated r
/// coefficient, so every displayed wave reports its labelled values.
inline EnergyMomentum energy_momentum(const PlaneWave& w) { return {w.energy(), w.p}; }
inline EnergyMomentum energy_momentum(const LinearPhaseWave& w) { return {w.E, w.p}; }

/// |E - (mc^2 [if include_rest] + p^2/2m)|: zero iff the wave solves the
/// corresponding free Schrodinger equation.
inline double schrodinger_residual(const LinearPhaseWave& w, double m, bool include_rest = false, double c = 1.0) {
    if (!std::isfinite(m) || m < kMinMass) throw std::invalid_argument("mass must be finite and >= 1e-9");
    if (include_rest && (!std::isfinite(c) || c <= 0.0))
        throw std::invalid_argument("rest-energy shell needs a positive finite c");
    const double rest = include_rest ? m * c * c : 0.0;
    return std::abs(w.E - (rest + norm2(w.p) / (2.0 * m)));
}

/// The wave whose phase is phi(t, r - v t): energy picks up p.v, momentum is
/// untouched. This is the bare Galilei boost and it leaves the shell --
/// with or without the rest term, which rides along unchanged.
inline LinearPhaseWave galilei_boost_wave(const PlaneWave& w, const Vec3& v) {
    w.validate();
    if (!is_finite(v)) throw std::invalid_argument("boost velocity must be finite");
    return {w.energy() + dot(w.p, v), w.p};
}

/// Galilei boost followed by the multiplier exp(i(rule_mass v^2/2 t -
/// rule_mass v.r)). With rule_mass = w.m the result is back on shell at
/// p + m v; any other rule mass is the wrong prescription for this wave,
/// which is the point of keeping the parameter separate.
inline LinearPhaseWave phase_shift_boost(const PlaneWave& w, const Vec3& v, double rule_mass) {
    if (!std::isfinite(rule_mass) || rule_mass < kMinMass)
        throw std::invalid_argument("rule mass must be finite and >= 1e-9");
    const PhaseFactor shift{0.5 * rule_mass * norm2(v), rule_mass * v};
    return shift.applied_to(galilei_boost_wave(w, v));
}

/// Complex-valued field over events. Closures keep the phase machinery open
/// to coordinate-composed and synthetic fields.
using WaveField = std::function<Complex(const Event&)>;

inline WaveField to_field(const PlaneWave& w) {
    w.validate();
    return [w](const Event& e) { return std::polar(1.0, w.phase_at(e)); };
}

inline WaveField to_field(const LinearPhaseWave& w) {
    return [w](const Event& e) { return std::polar(1.0, w.phase_at(e)); };
}

/// The field e -> w evaluated at map.e, i.e. the wave re-expressed through a
/// linear coordinate substitution.
inline WaveField composed_field(const PlaneWave& w, const FrameMatrix& map) {
    w.validate();
    return [w, map](const Event& e) { return std::polar(1.0, w.phase_at(map.apply(e))); };
}

struct ExtendedBoostResult {
    /// Low-velocity result with the products vanishing faster than c^0
    /// dropped: (mc^2 + (p - mv)^2/2m, p - mv).
    LinearPhaseWave truncated;
    /// Untruncated route: the wave composed with the reverse extended map,
    /// kept evaluatable so probes can measure the truncation gap.
    WaveField composed;
};

/// Extended boost of a rest-energy wave. The c^-2 time-row terms multiply
/// mc^2 and survive as the m v momentum shift; everything decaying faster is
/// truncated in `truncated` and retained in `composed`.
inline ExtendedBoostResult extended_boost_wave(const PlaneWave& w, const BoostSpec& b) {
    w.validate();
    b.validate();
    if (!w.include_rest)
        throw std::invalid_argument("extended boost of a wave requires the rest-energy term");
    if (b.kind != BoostKind::Extended)
        throw std::invalid_argument("extended_boost_wave requires an extended-kind boost");
    const Vec3 p_shifted = w.p - w.m * b.v;
    const LinearPhaseWave truncated{w.m * b.c * b.c + norm2(p_shifted) / (2.0 * w.m), p_shifted};
    return {truncated, composed_field(w, boost_matrix(b.reversed()))};
}

struct ProbeSteps {
    double h_t = 1e-4;
    double h_r = 1e-4;
};

/// Steps sized as 1e-4 of the characteristic scales, so a rest-energy wave's
/// fast mc^2 frequency stays well inside the aliasing-safe window.
inline ProbeSteps probe_steps_for(double energy_scale, double momentum_scale) {
    return {1e-4 / std::max(1.0, std::abs(energy_scale)), 1e-4 / std::max(1.0, std::abs(momentum_scale))};
}

inline ProbeSteps default_probe_steps(const PlaneWave& w) {
    return probe_steps_for(w.energy(), norm(w.p));
}

namespace detail {

inline constexpr double kMinFieldMagnitude = 1e-12;

/// Phase increment between two nearby field values via the argument of their
/// ratio: wrap-safe while the true increment stays below pi. Anything past
/// pi/2 is treated as an aliasing hazard and rejected.
inline double phase_delta(const WaveField& f, const Event& plus, const Event& minus) {
    const Complex zp = f(plus);
    const Complex zm = f(minus);
    if (std::abs(zp) < kMinFieldMagnitude || std::abs(zm) < kMinFieldMagnitude)
        throw std::domain_error("field magnitude too small to carry a phase");
    const double d = std::arg(zp * std::conj(zm));
    if (std::abs(d) > 1.5707963267948966)
        throw std::domain_error("probe step too large: phase increment exceeds pi/2 (aliasing risk)");
    return d;
}

}  // namespace detail

/// Central-difference (E, p) of a field: E = d(phase)/dt, p = -grad(phase),
/// phase increments unwrapped through the value ratio. Second-order accurate
/// in the step sizes.
inline EnergyMomentum probe_energy_momentum(const WaveField& f, const Event& e, double h_t, double h_r) {
    if (!(h_t > 0.0) || !(h_r > 0.0) || !std::isfinite(h_t) || !std::isfinite(h_r))
        throw std::invalid_argument("probe steps must be positive and finite");
    if (!is_finite(e)) throw std::invalid_argument("probe event must be finite");

    const double dE = detail::phase_delta(f, {e.t + h_t, e.r}, {e.t - h_t, e.r});
    EnergyMomentum out;
    out.E = dE / (2.0 * h_t);

    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double comps[3];
    for (int i = 0; i < 3; ++i) {
        const Vec3 step = h_r * axes[i];
        comps[i] = -detail::phase_delta(f, {e.t, e.r + step}, {e.t, e.r - step}) / (2.0 * h_r);
    }
    out.p = {comps[0], comps[1], comps[2]};
    return out;
}

inline EnergyMomentum probe_energy_momentum(const WaveField& f, const Event& e, const ProbeSteps& h) {
    return probe_energy_momentum(f, e, h.h_t, h.h_r);
}

}  // namespace schrocov
