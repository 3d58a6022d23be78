#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "schrocov/vec3.hpp"

namespace schrocov {

/// A spacetime point in raw (t, x, y, z) coordinates. Time is kept in its
/// own unit (not ct), so matrices acting on events mix units: row 0 carries
/// time, rows 1-3 carry lengths.
struct Event {
    double t = 0.0;
    Vec3 r{};

    constexpr bool operator==(const Event&) const = default;
};

inline bool is_finite(const Event& e) { return std::isfinite(e.t) && is_finite(e.r); }

enum class BoostKind { Galilei, Extended, Lorentz };

inline const char* to_string(BoostKind k) {
    switch (k) {
        case BoostKind::Galilei: return "galilei";
        case BoostKind::Extended: return "extended";
        case BoostKind::Lorentz: return "lorentz";
    }
    return "?";
}

/// A frame change moving with velocity v relative to the original frame.
///
/// Galilei:  t' = t,                         r' = r - v t
/// Extended: t' = (1 + v^2/2c^2) t - v.r/c^2, r' = r - v t
/// Lorentz:  the exact boost with gamma = 1/sqrt(1 - v^2/c^2)
///
/// The Extended kind keeps exactly the two c^-2 time-line terms that matter
/// at low velocity; |v|/c <= 0.3 is the advisory validity regime, not a hard
/// limit (order scans deliberately push c around).
struct BoostSpec {
    Vec3 v{};
    double c = 1.0;
    BoostKind kind = BoostKind::Galilei;

    static BoostSpec galilei(const Vec3& v) { return {v, 1.0, BoostKind::Galilei}; }
    static BoostSpec extended(const Vec3& v, double c) { return {v, c, BoostKind::Extended}; }
    static BoostSpec lorentz(const Vec3& v, double c) { return {v, c, BoostKind::Lorentz}; }

    double beta() const { return norm(v) / c; }
    bool within_advisory() const { return beta() <= 0.3; }

    /// Same kind and c, opposite velocity.
    BoostSpec reversed() const { return {-v, c, kind}; }

    void validate() const {
        if (!is_finite(v)) throw std::invalid_argument("boost velocity must be finite");
        if (!std::isfinite(c) || c <= 0.0) throw std::invalid_argument("speed of light must be positive and finite");
        if (kind != BoostKind::Galilei && norm(v) >= c)
            throw std::invalid_argument("boost requires |v| < c for " + std::string(to_string(kind)) + " kind");
    }
};

/// 4x4 real matrix acting on the column (t, x, y, z). Row-major storage.
class FrameMatrix {
public:
    FrameMatrix() = default;

    static FrameMatrix identity() {
        FrameMatrix m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int row, int col) { return m_[static_cast<std::size_t>(row * 4 + col)]; }
    double operator()(int row, int col) const { return m_[static_cast<std::size_t>(row * 4 + col)]; }

    Event apply(const Event& e) const {
        const std::array<double, 4> in{e.t, e.r.x, e.r.y, e.r.z};
        std::array<double, 4> out{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(i)] += (*this)(i, j) * in[static_cast<std::size_t>(j)];
        return {out[0], {out[1], out[2], out[3]}};
    }

    friend FrameMatrix operator*(const FrameMatrix& a, const FrameMatrix& b) {
        FrameMatrix r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
                r(i, j) = s;
            }
        return r;
    }

    constexpr bool operator==(const FrameMatrix&) const = default;

private:
    std::array<double, 16> m_{};
};

/// Standard matrix product a.b (apply b first, then a).
inline FrameMatrix compose(const FrameMatrix& a, const FrameMatrix& b) { return a * b; }

inline double max_abs_diff(const FrameMatrix& a, const FrameMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

namespace detail {

inline double lorentz_gamma(double v2, double c) {
    return 1.0 / std::sqrt(1.0 - v2 / (c * c));
}

// Negation that avoids -0.0 in rendered matrices.
inline double negated(double x) { return x == 0.0 ? 0.0 : -x; }

}  // namespace detail

/// Boost an event into the frame moving with b.v. All three kinds are linear
/// maps; this is the closed-form route, boost_matrix the matrix route.
inline Event boost_event(const Event& e, const BoostSpec& b) {
    b.validate();
    if (!is_finite(e)) throw std::invalid_argument("event must be finite");
    switch (b.kind) {
        case BoostKind::Galilei:
            return {e.t, e.r - b.v * e.t};
        case BoostKind::Extended: {
            const double c2 = b.c * b.c;
            const double s = 0.5 * norm2(b.v) / c2;
            return {(1.0 + s) * e.t - dot(b.v, e.r) / c2, e.r - b.v * e.t};
        }
        case BoostKind::Lorentz: {
            const double v2 = norm2(b.v);
            if (v2 == 0.0) return e;
            const double c2 = b.c * b.c;
            const double gamma = detail::lorentz_gamma(v2, b.c);
            const Vec3 r_par = (dot(b.v, e.r) / v2) * b.v;
            const Vec3 r_perp = e.r - r_par;
            return {gamma * (e.t - dot(b.v, e.r) / c2), r_perp + gamma * (r_par - b.v * e.t)};
        }
    }
    throw std::logic_error("unreachable boost kind");
}

/// The 4x4 matrix of the boost, in raw (t, x, y, z) coordinates.
///
/// Extended: row 0 = (1 + v^2/2c^2, -vx/c^2, -vy/c^2, -vz/c^2),
///           rows 1-3 = (-v_i | identity block).
/// Galilei:  the same with every 1/c^2 entry zeroed.
/// Lorentz:  row 0 = (gamma, -gamma v_j/c^2),
///           rows 1-3 = (-gamma v_i | delta_ij + (gamma-1) vhat_i vhat_j).
inline FrameMatrix boost_matrix(const BoostSpec& b) {
    b.validate();
    FrameMatrix m = FrameMatrix::identity();
    const double v2 = norm2(b.v);
    const double c2 = b.c * b.c;
    switch (b.kind) {
        case BoostKind::Galilei:
            m(1, 0) = detail::negated(b.v.x);
            m(2, 0) = detail::negated(b.v.y);
            m(3, 0) = detail::negated(b.v.z);
            break;
        case BoostKind::Extended:
            m(0, 0) = 1.0 + 0.5 * v2 / c2;
            m(0, 1) = detail::negated(b.v.x / c2);
            m(0, 2) = detail::negated(b.v.y / c2);
            m(0, 3) = detail::negated(b.v.z / c2);
            m(1, 0) = detail::negated(b.v.x);
            m(2, 0) = detail::negated(b.v.y);
            m(3, 0) = detail::negated(b.v.z);
            break;
        case BoostKind::Lorentz: {
            if (v2 == 0.0) break;
            const double gamma = detail::lorentz_gamma(v2, b.c);
            m(0, 0) = gamma;
            const std::array<double, 3> v{b.v.x, b.v.y, b.v.z};
            for (int i = 0; i < 3; ++i) {
                m(0, i + 1) = detail::negated(gamma * v[static_cast<std::size_t>(i)] / c2);
                m(i + 1, 0) = detail::negated(gamma * v[static_cast<std::size_t>(i)]);
                for (int j = 0; j < 3; ++j)
                    m(i + 1, j + 1) = (i == j ? 1.0 : 0.0) +
                                      (gamma - 1.0) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] / v2;
            }
            break;
        }
    }
    return m;
}

/// T(-v) T(v) - I for the extended boost.
///
/// The product residual has exact closed-form entries (s = v^2/2c^2):
///   (0,0) = s^2          (0,j) = -v_j s / c^2
///   (i,0) = v_i s        (i,j) = -v_i v_j / c^2
/// They are computed in this factored form: the naive multiply-then-subtract
/// route loses ~5 digits to the 1 - 1 cancellation on the diagonal.
inline FrameMatrix inverse_residual(const BoostSpec& b) {
    b.validate();
    if (b.kind != BoostKind::Extended)
        throw std::invalid_argument("inverse_residual is defined for the extended boost only");
    const double c2 = b.c * b.c;
    const double s = 0.5 * norm2(b.v) / c2;
    const std::array<double, 3> v{b.v.x, b.v.y, b.v.z};
    FrameMatrix r;
    r(0, 0) = s * s;
    for (int i = 0; i < 3; ++i) {
        r(0, i + 1) = detail::negated(v[static_cast<std::size_t>(i)] * s / c2);
        r(i + 1, 0) = v[static_cast<std::size_t>(i)] * s;
        for (int j = 0; j < 3; ++j)
            r(i + 1, j + 1) =
                detail::negated(v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] / c2);
    }
    return r;
}

/// Copy of m with the 1/c^2 entries of the time row zeroed. Applied to an
/// extended boost matrix this yields the matching Galilei matrix; it is also
/// the "drop-c2-terms" sabotage hook used to demonstrate check sensitivity.
inline FrameMatrix with_c2_terms_dropped(FrameMatrix m) {
    m(0, 0) = 1.0;
    m(0, 1) = 0.0;
    m(0, 2) = 0.0;
    m(0, 3) = 0.0;
    return m;
}

}  // namespace schrocov
