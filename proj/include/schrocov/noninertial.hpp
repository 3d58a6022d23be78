#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schrocov/quadrature.hpp"
#include "schrocov/spacetime.hpp"
#include "schrocov/states.hpp"
#include "schrocov/vec3.hpp"

namespace schrocov {

enum class TrajectoryKind { Rest, QuadraticRamp, SmoothBump, PiecewiseLinear, Tabulated };

/// A non-inertial coordinate history: displacement xi(t) along a fixed unit
/// axis over the domain [0, t_end], with its time derivative. Bump-type
/// profiles vanish outside the active window.
class Trajectory {
public:
    /// xi = 0 for all t. The domain length is irrelevant to any phase.
    static Trajectory rest(double t_end = 1.0) {
        require_window(t_end);
        Trajectory traj(TrajectoryKind::Rest, t_end);
        traj.profile_ = [](double) { return 0.0; };
        traj.rate_ = [](double) { return 0.0; };
        return traj;
    }

    /// Constant acceleration: xi(t) = a t^2 / 2 on [0, t1].
    static Trajectory quadratic_ramp(double a, double t1) {
        require_window(t1);
        if (!std::isfinite(a)) throw std::invalid_argument("trajectory: acceleration must be finite");
        Trajectory traj(TrajectoryKind::QuadraticRamp, t1);
        traj.profile_ = [a](double t) { return 0.5 * a * t * t; };
        traj.rate_ = [a](double t) { return a * t; };
        return traj;
    }

    /// Smooth excursion returning to rest: xi(t) = amplitude sin^2(pi t / t1),
    /// zero displacement and velocity at both ends of [0, t1].
    static Trajectory smooth_bump(double amplitude, double t1) {
        require_window(t1);
        if (!std::isfinite(amplitude)) throw std::invalid_argument("trajectory: amplitude must be finite");
        constexpr double pi = 3.141592653589793238462643383279502884;
        Trajectory traj(TrajectoryKind::SmoothBump, t1);
        traj.profile_ = [amplitude, t1, pi](double t) {
            const double s = std::sin(pi * t / t1);
            return amplitude * s * s;
        };
        traj.rate_ = [amplitude, t1, pi](double t) { return amplitude * (pi / t1) * std::sin(2.0 * pi * t / t1); };
        return traj;
    }

    /// Exact straight segments between (t, xi) samples; the velocity is the
    /// segment slope (right-continuous at kinks).
    static Trajectory piecewise_linear(std::vector<std::pair<double, double>> samples) {
        validate_samples(samples);
        Trajectory traj(TrajectoryKind::PiecewiseLinear, samples.back().first);
        traj.samples_ = std::move(samples);
        traj.breakpoints_.clear();
        for (const auto& [t, xi] : traj.samples_) traj.breakpoints_.push_back(t);
        auto samples_ptr = std::make_shared<std::vector<std::pair<double, double>>>(traj.samples_);
        traj.profile_ = [samples_ptr](double t) { return interp_linear(*samples_ptr, t); };
        traj.rate_ = [samples_ptr](double t) { return segment_slope(*samples_ptr, t); };
        return traj;
    }

    /// Sampled smooth history: xi interpolated linearly, the velocity taken
    /// from centered differences (one-sided at the ends). Accuracy O(dt^2).
    static Trajectory tabulated(std::vector<std::pair<double, double>> samples) {
        validate_samples(samples);
        Trajectory traj(TrajectoryKind::Tabulated, samples.back().first);
        traj.samples_ = std::move(samples);
        traj.breakpoints_ = {traj.samples_.front().first, traj.t_end_};
        auto samples_ptr = std::make_shared<std::vector<std::pair<double, double>>>(traj.samples_);
        auto rates_ptr = std::make_shared<std::vector<std::pair<double, double>>>(difference_rates(traj.samples_));
        traj.profile_ = [samples_ptr](double t) { return interp_linear(*samples_ptr, t); };
        traj.rate_ = [rates_ptr](double t) { return interp_linear(*rates_ptr, t); };
        return traj;
    }

    TrajectoryKind kind() const { return kind_; }
    double t_end() const { return t_end_; }
    const Vec3& axis() const { return axis_; }

    /// Same history along a different axis (normalized here).
    Trajectory along(const Vec3& axis) const {
        const double n = norm(axis);
        if (!is_finite(axis) || n == 0.0) throw std::invalid_argument("trajectory axis must be finite and nonzero");
        Trajectory copy = *this;
        copy.axis_ = axis / n;
        return copy;
    }

    double profile(double t) const { return profile_(t); }
    double profile_rate(double t) const { return rate_(t); }
    Vec3 xi(double t) const { return profile_(t) * axis_; }
    Vec3 xi_dot(double t) const { return rate_(t) * axis_; }

    bool contains(double t) const { return t >= 0.0 && t <= t_end_; }

    /// Segment boundaries for kink-aware integration.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    /// The history run backwards: xi'(t) = xi(t_end - t). The squared
    /// velocity profile is mirrored, so accumulated phases are unchanged.
    Trajectory time_reversed() const {
        Trajectory rev = *this;
        if (!samples_.empty()) {
            std::vector<std::pair<double, double>> mirrored;
            mirrored.reserve(samples_.size());
            for (auto it = samples_.rbegin(); it != samples_.rend(); ++it)
                mirrored.emplace_back(t_end_ - it->first, it->second);
            return kind_ == TrajectoryKind::Tabulated ? tabulated(std::move(mirrored)).along(axis_)
                                                      : piecewise_linear(std::move(mirrored)).along(axis_);
        }
        const double T = t_end_;
        auto profile = profile_;
        auto rate = rate_;
        rev.profile_ = [profile, T](double t) { return profile(T - t); };
        rev.rate_ = [rate, T](double t) { return -rate(T - t); };
        std::vector<double> pts;
        for (auto it = breakpoints_.rbegin(); it != breakpoints_.rend(); ++it) pts.push_back(T - *it);
        rev.breakpoints_ = std::move(pts);
        return rev;
    }

private:
    Trajectory(TrajectoryKind kind, double t_end) : kind_(kind), t_end_(t_end), breakpoints_{0.0, t_end} {}

    static void require_window(double t1) {
        if (!std::isfinite(t1) || t1 <= 0.0) throw std::invalid_argument("trajectory: window length must be positive");
    }

    static void validate_samples(const std::vector<std::pair<double, double>>& samples) {
        if (samples.size() < 2) throw std::invalid_argument("trajectory: need at least two samples");
        if (std::abs(samples.front().first) > 1e-12)
            throw std::invalid_argument("trajectory: samples must start at t = 0");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second))
                throw std::invalid_argument("trajectory: samples must be finite");
            if (i > 0 && samples[i].first <= samples[i - 1].first)
                throw std::invalid_argument("trajectory: sample times must be strictly increasing");
        }
    }

    static double interp_linear(const std::vector<std::pair<double, double>>& pts, double t) {
        if (t <= pts.front().first) return pts.front().second;
        if (t >= pts.back().first) return pts.back().second;
        auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](double value, const auto& s) { return value < s.first; });
        auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }

    static double segment_slope(const std::vector<std::pair<double, double>>& pts, double t) {
        auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](double value, const auto& s) { return value < s.first; });
        if (hi == pts.begin()) ++hi;
        if (hi == pts.end()) --hi;
        auto lo = hi - 1;
        return (hi->second - lo->second) / (hi->first - lo->first);
    }

    // Derivative at x of the quadratic through three samples.
    static double quadratic_slope(double x, const std::pair<double, double>& a,
                                  const std::pair<double, double>& b, const std::pair<double, double>& c) {
        return a.second * (2.0 * x - b.first - c.first) / ((a.first - b.first) * (a.first - c.first)) +
               b.second * (2.0 * x - a.first - c.first) / ((b.first - a.first) * (b.first - c.first)) +
               c.second * (2.0 * x - a.first - b.first) / ((c.first - a.first) * (c.first - b.first));
    }

    static std::vector<std::pair<double, double>> difference_rates(
        const std::vector<std::pair<double, double>>& pts) {
        const std::size_t n = pts.size();
        std::vector<std::pair<double, double>> rates(n);
        for (std::size_t i = 1; i + 1 < n; ++i)
            rates[i] = {pts[i].first, (pts[i + 1].second - pts[i - 1].second) / (pts[i + 1].first - pts[i - 1].first)};
        if (n == 2) {
            const double slope = (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
            rates[0] = {pts[0].first, slope};
            rates[1] = {pts[1].first, slope};
        } else {
            // Second-order one-sided ends keep the whole table at O(dt^2).
            rates[0] = {pts[0].first, quadratic_slope(pts[0].first, pts[0], pts[1], pts[2])};
            rates[n - 1] = {pts[n - 1].first, quadratic_slope(pts[n - 1].first, pts[n - 3], pts[n - 2], pts[n - 1])};
        }
        return rates;
    }

    TrajectoryKind kind_;
    double t_end_;
    Vec3 axis_{1.0, 0.0, 0.0};
    std::function<double(double)> profile_;
    std::function<double(double)> rate_;
    std::vector<double> breakpoints_;
    std::vector<std::pair<double, double>> samples_;
};

/// Max |d(profile)/dt - profile_rate| over interior sample points, using a
/// small centered difference. Diagnostic for hand-built trajectories.
inline double derivative_consistency_error(const Trajectory& traj, int n_probes = 64) {
    const double h = traj.t_end() * 1e-6;
    double worst = 0.0;
    for (int i = 1; i < n_probes; ++i) {
        const double t = traj.t_end() * i / n_probes;
        const double numeric = (traj.profile(t + h) - traj.profile(t - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(numeric - traj.profile_rate(t)));
    }
    return worst;
}

/// Frame change into the accelerated observer's coordinates:
///   r' = r - xi(t),  t' = (1 + v^2/2c^2) t - v.r/c^2
/// with v the instantaneous history velocity xi_dot(t).
inline Event noninertial_transform(const Event& e, const Trajectory& traj, double c, const Vec3& v) {
    if (!std::isfinite(c) || c <= 0.0) throw std::invalid_argument("speed of light must be positive and finite");
    if (!is_finite(e)) throw std::invalid_argument("event must be finite");
    if (!traj.contains(e.t)) throw std::domain_error("event time outside the trajectory domain");
    const double c2 = c * c;
    return {(1.0 + 0.5 * norm2(v) / c2) * e.t - dot(v, e.r) / c2, e.r - traj.xi(e.t)};
}

inline Event noninertial_transform(const Event& e, const Trajectory& traj, double c) {
    if (!traj.contains(e.t)) throw std::domain_error("event time outside the trajectory domain");
    return noninertial_transform(e, traj, c, traj.xi_dot(e.t));
}

struct TwinPhaseResult {
    double phi = 0.0;
    double estimated_error = 0.0;
    long evaluations = 0;
};

/// Phase accumulated by a wave of mass m riding the history, relative to a
/// resting twin: integral of m xi_dot^2 / 2 over the active window.
/// Closed-form kinds go through adaptive quadrature segment by segment;
/// tabulated histories use the trapezoid rule on their own grid.
inline TwinPhaseResult twin_phase(const Trajectory& traj, double m, const QuadratureOptions& opt = {}) {
    if (!std::isfinite(m) || m < kMinMass) throw std::invalid_argument("mass must be finite and >= 1e-9");

    if (traj.kind() == TrajectoryKind::Rest) return {0.0, 0.0, 0};

    if (traj.kind() == TrajectoryKind::Tabulated) {
        const auto& samples = traj.samples();
        auto integrand_at = [&](std::size_t i) {
            const double v = traj.profile_rate(samples[i].first);
            if (std::isnan(v)) throw std::domain_error("trajectory velocity evaluated to NaN");
            return 0.5 * m * v * v;
        };
        auto trapezoid = [&](std::size_t stride) {
            double total = 0.0;
            std::size_t prev = 0;
            for (std::size_t i = stride; i < samples.size(); i += stride) {
                total += 0.5 * (integrand_at(prev) + integrand_at(i)) * (samples[i].first - samples[prev].first);
                prev = i;
            }
            if (prev + 1 < samples.size())
                total += 0.5 * (integrand_at(prev) + integrand_at(samples.size() - 1)) *
                         (samples.back().first - samples[prev].first);
            return total;
        };
        const double fine = trapezoid(1);
        const double coarse = samples.size() > 2 ? trapezoid(2) : fine;
        return {fine, std::abs(fine - coarse) / 3.0, static_cast<long>(samples.size())};
    }

    auto integrand = [&](double t) {
        const double v = traj.profile_rate(t);
        return 0.5 * m * v * v;
    };
    const QuadratureResult q = integrate_segments(integrand, traj.breakpoints(), opt);
    return {q.value, q.error_estimate, q.evaluations};
}

/// Relative phase between two histories of the same mass.
inline double phase_difference(const Trajectory& a, const Trajectory& b, double m,
                               const QuadratureOptions& opt = {}) {
    return twin_phase(a, m, opt).phi - twin_phase(b, m, opt).phi;
}

/// Parse a trajectory mini-spec:
///   "rest"
///   "quad:a=<real>,t1=<real>"
///   "bump:amp=<real>,t1=<real>"
///   "file:<path>"   two columns per line: t xi, strictly increasing t
inline Trajectory parse_trajectory(const std::string& spec) {
    auto parse_kv = [&](const std::string& body, const std::vector<std::string>& keys) {
        std::vector<double> values(keys.size(), std::nan(""));
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("trajectory spec: expected key=value in '" + spec + "'");
            const std::string key = item.substr(0, eq);
            std::size_t consumed = 0;
            double value;
            try {
                value = std::stod(item.substr(eq + 1), &consumed);
            } catch (const std::exception&) {
                throw std::invalid_argument("trajectory spec: bad number in '" + spec + "'");
            }
            if (consumed != item.size() - eq - 1)
                throw std::invalid_argument("trajectory spec: bad number in '" + spec + "'");
            const auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end())
                throw std::invalid_argument("trajectory spec: unknown key '" + key + "' in '" + spec + "'");
            values[static_cast<std::size_t>(it - keys.begin())] = value;
        }
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (std::isnan(values[i]))
                throw std::invalid_argument("trajectory spec: missing key '" + keys[i] + "' in '" + spec + "'");
        return values;
    };

    if (spec == "rest") return Trajectory::rest();
    if (spec.rfind("quad:", 0) == 0) {
        const auto v = parse_kv(spec.substr(5), {"a", "t1"});
        return Trajectory::quadratic_ramp(v[0], v[1]);
    }
    if (spec.rfind("bump:", 0) == 0) {
        const auto v = parse_kv(spec.substr(5), {"amp", "t1"});
        return Trajectory::smooth_bump(v[0], v[1]);
    }
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("trajectory file not readable: " + path);
        std::vector<std::pair<double, double>> samples;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            double t, xi;
            if (!(ls >> t >> xi)) throw std::invalid_argument("trajectory file: bad line '" + line + "'");
            samples.emplace_back(t, xi);
        }
        return Trajectory::tabulated(std::move(samples));
    }
    throw std::invalid_argument("unrecognized trajectory spec '" + spec + "'");
}

}  // namespace schrocov
