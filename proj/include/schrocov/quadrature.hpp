#pragma once

#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace schrocov {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    long max_evaluations = 1'000'000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 node-weight table on [-1, 1]: {x, gauss w, kronrod w}.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    auto sample = [&](double x) {
        const double y = f(x);
        if (std::isnan(y)) throw std::domain_error("integrand evaluated to NaN");
        return y;
    };

    const double y0 = sample(mid);
    double g7 = kG7K15[0][1] * y0;
    double k15 = kG7K15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const double yi = sample(mid + dx) + sample(mid - dx);
        g7 += kG7K15[i][1] * yi;
        k15 += kG7K15[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    return {a, b, k15, std::abs(k15 - g7)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Splits the interval
/// with the largest |K15 - G7| discrepancy until the summed estimate drops
/// below max(abs_tol, rel_tol * |integral|); the discrepancy sum is returned
/// as a conservative error estimate. Throws if the evaluation cap is hit.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integration bounds must be finite");
    if (a == b) return {0.0, 0.0, 0};

    long evaluations = 15;
    std::priority_queue<detail::Panel> panels;
    panels.push(detail::evaluate_panel(f, a, b));
    double total = panels.top().value;
    double total_error = panels.top().error;

    while (total_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (evaluations + 30 > opt.max_evaluations)
            throw std::runtime_error("quadrature did not converge within the evaluation cap");
        const detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const detail::Panel left = detail::evaluate_panel(f, worst.a, mid);
        const detail::Panel right = detail::evaluate_panel(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    return {total, total_error, evaluations};
}

/// Integrate over consecutive [breakpoints[i], breakpoints[i+1]] segments and
/// sum. Kinks placed on segment boundaries never degrade convergence.
template <class F>
QuadratureResult integrate_segments(F&& f, std::span<const double> breakpoints, const QuadratureOptions& opt = {}) {
    if (breakpoints.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    QuadratureResult sum;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        QuadratureOptions segment_opt = opt;
        segment_opt.max_evaluations = opt.max_evaluations - sum.evaluations;
        const QuadratureResult r = integrate_adaptive(f, breakpoints[i], breakpoints[i + 1], segment_opt);
        sum.value += r.value;
        sum.error_estimate += r.error_estimate;
        sum.evaluations += r.evaluations;
    }
    return sum;
}

}  // namespace schrocov
