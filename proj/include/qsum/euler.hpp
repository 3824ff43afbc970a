#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qsum/formal.hpp"
#include "qsum/quad.hpp"
#include "qsum/series.hpp"

namespace qsum {

// One member of the q-Euler family E^{[m]}_{a,q} = d^m/da^m E_{a,q}, where
// E_{a,q} is the unique formal solution of x sigma_q y + a y = 1.
struct EulerFactor {
    Complex a;
    int m = 0;

    EulerFactor(Complex a_, int m_ = 0) : a(a_), m(m_) {
        if (a_ == Complex(0.0)) throw ZeroParameter("EulerFactor: a must be nonzero");
        if (m_ < 0) throw Error("EulerFactor: derivative order must be >= 0");
    }
};

// A 2*pi*Z-periodic set of singular ray angles.
class SingularSet {
public:
    void add(double base_angle) {
        constexpr double tau = 2.0 * std::numbers::pi;
        double b = std::fmod(base_angle, tau);
        if (b < 0.0) b += tau;
        for (double e : base_) {
            if (std::abs(e - b) < 1e-12 || std::abs(std::abs(e - b) - tau) < 1e-12) return;
        }
        base_.push_back(b);
    }

    const std::vector<double>& base_angles() const { return base_; }

    bool contains(double d, double tol = 1e-12) const {
        constexpr double tau = 2.0 * std::numbers::pi;
        for (double b : base_) {
            const double delta = std::remainder(d - b, tau);
            if (std::abs(delta) <= tol) return true;
        }
        return false;
    }

    // All representatives b + 2*pi*k lying strictly inside (d1, d2).
    std::vector<double> representatives_in(double d1, double d2) const {
        constexpr double tau = 2.0 * std::numbers::pi;
        std::vector<double> out;
        for (double b : base_) {
            const double k0 = std::ceil((d1 - b) / tau);
            for (double th = b + k0 * tau; th < d2; th += tau)
                if (th > d1 && th < d2) out.push_back(th);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<double> base_;  // representatives in [0, 2*pi)
};

// Singular ray angles arg(-a_i) + 2*pi*Z of a collection of Euler factors.
inline SingularSet singular_directions(const std::vector<EulerFactor>& facs) {
    SingularSet s;
    for (const auto& f : facs) s.add(std::arg(-f.a));
    return s;
}

// Coefficients of E^{[m]}_{a,q} to order N, from the defining recurrence
// a c_0 = 1, a c_n = -q^{n-1} c_{n-1} differentiated m times in a. (The
// closed form sometimes quoted with a^n instead of a^{-n-1} fails the
// equation for a != 1; the recurrence is authoritative.)
inline FormalSeries euler_coeffs(const EulerFactor& fac, const QContext& ctx, int N) {
    if (N < 0) throw Error("euler_coeffs: N must be >= 0");
    std::vector<Complex> base(static_cast<std::size_t>(N) + 1);
    base[0] = 1.0 / fac.a;
    for (int n = 1; n <= N; ++n)
        base[static_cast<std::size_t>(n)] =
            -std::exp(ctx.logq * (n - 1)) * base[static_cast<std::size_t>(n - 1)] / fac.a;
    if (fac.m == 0) return FormalSeries(std::move(base));
    // c_n = (-1)^n q^{n(n-1)/2} a^{-n-1}; the m-th a-derivative multiplies by
    // (-1)^m (n+1)(n+2)...(n+m) a^{-m}.
    const Complex am = std::pow(fac.a, static_cast<double>(fac.m));
    const double sign = (fac.m % 2 == 0) ? 1.0 : -1.0;
    for (int n = 0; n <= N; ++n) {
        double rising = 1.0;
        for (int i = 1; i <= fac.m; ++i) rising *= static_cast<double>(n + i);
        base[static_cast<std::size_t>(n)] *= sign * rising / am;
    }
    return FormalSeries(std::move(base));
}

// Closed-form Borel transform: xi -> (-1)^m m! / (xi + a)^{m+1}.
// The m! is forced by d^m/da^m (xi + a)^{-1}.
inline ScaledFunction euler_borel(const EulerFactor& fac) {
    double mfac = 1.0;
    for (int i = 2; i <= fac.m; ++i) mfac *= i;
    const double sign = (fac.m % 2 == 0) ? 1.0 : -1.0;
    return [a = fac.a, m = fac.m, c = sign * mfac](const LogPoint& xi) {
        const Complex den = std::pow(xi.to_complex() + a, static_cast<double>(m + 1));
        return ScaledComplex::from(c / den);
    };
}

namespace detail {
inline void require_nonsingular(const EulerFactor& fac, Direction d, double tol = 1e-9) {
    if (singular_directions({fac}).contains(d.d, tol))
        throw SingularDirection("direction hits the pole ray arg(-a)");
}
}  // namespace detail

// Directional sum S^d_q(E^{[m]}_{a,q})(x): order-1 Laplace transform of the
// closed-form Borel germ.
inline ScaledComplex euler_sum_scaled(const EulerFactor& fac, Direction d, const QContext& ctx,
                                      const LogPoint& x, const QuadratureConfig& cfg = {}) {
    detail::require_nonsingular(fac, d);
    return laplace_numeric_scaled(euler_borel(fac), d, ctx, TransformOrder{}, x, cfg);
}

inline Complex euler_sum(const EulerFactor& fac, Direction d, const QContext& ctx,
                         const LogPoint& x, const QuadratureConfig& cfg = {}) {
    return euler_sum_scaled(fac, d, ctx, x, cfg).value();
}

// Predicted jump S^{d1} - S^{d2} of the Euler sum (m = 0): the sum over the
// pole representatives crossed between d1 and d2 of
//   (2 pi i / sqrt(2 pi log q)) res(xi^{-1} K(x, xi)/(xi + a), xi = pole),
// where the pole sits on the crossed sheet, log xi0 = log|a| + i theta.
// Note the printed closed form for a = 1, (0, 2 pi) has the opposite sign;
// quadrature decides in favor of the residue computation.
inline ScaledComplex stokes_jump_scaled(const EulerFactor& fac, Direction d1, Direction d2,
                                        const QContext& ctx, const LogPoint& x) {
    if (fac.m != 0) throw Error("stokes_jump: only m = 0 supported");
    if (!(d1.d < d2.d)) throw Error("stokes_jump: requires d1 < d2");
    detail::require_nonsingular(fac, d1);
    detail::require_nonsingular(fac, d2);
    const double L = ctx.logq;
    const Complex lx = x.log();
    ScaledComplex total;
    const auto reps = singular_directions({fac}).representatives_in(d1.d, d2.d);
    for (double theta : reps) {
        const Complex lxi0{std::log(std::abs(fac.a)), theta};
        const Complex w = lx - L / 2.0 - lxi0;
        // residue of xi^{-1} K / (xi + a) at xi0 = -a: K(x, xi0) / (-a)
        ScaledComplex res = ScaledComplex::from_log(-w * w / (2.0 * L)) * (1.0 / (-fac.a));
        total += res * Complex{0.0, 2.0 * std::numbers::pi / std::sqrt(2.0 * std::numbers::pi * L)};
    }
    return total;
}

inline Complex stokes_jump(const EulerFactor& fac, Direction d1, Direction d2, const QContext& ctx,
                           const LogPoint& x) {
    return stokes_jump_scaled(fac, d1, d2, ctx, x).value();
}

// f(N; r0, lambda) = sum_{k=0}^{N-1} exp(lambda (N - k + r0)^2), in log-safe
// form, together with the ratio |f| * |exp(-lambda (N + r0)^2)| whose
// boundedness controls the Stokes correction sums.
struct GeometricBoundSum {
    ScaledComplex value;
    double ratio;
};

inline GeometricBoundSum geometric_bound_sum(int N, Complex r0, double lambda) {
    if (N < 1) throw Error("geometric_bound_sum: N must be >= 1");
    // f = e^{lambda (N + r0)^2} sum_k e^{k lambda (k - 2N - 2 r0)}; the inner
    // terms are bounded for Re(r0) in a fixed band.
    Complex inner{0.0};
    for (int k = 0; k < N; ++k)
        inner += std::exp(lambda * static_cast<double>(k) *
                          (static_cast<double>(k) - 2.0 * N - 2.0 * r0));
    const Complex lead = lambda * (static_cast<double>(N) + r0) * (static_cast<double>(N) + r0);
    GeometricBoundSum out;
    out.value = ScaledComplex::from_log(lead) * inner;
    out.ratio = std::abs(inner);
    return out;
}

// --- sheet reduction for S^0(E_{1,q}) ---------------------------------------

// S^0(E_{1,q})(x) for x = (r, t) with |t| possibly huge, computed by shifting
// the argument to the base sheet (quadrature there) and adding the crossed
// Stokes terms in log-safe form.
inline ScaledComplex euler_sum_sheet_reduced(const QContext& ctx, const LogPoint& x, Direction d,
                                             const QuadratureConfig& cfg = {}) {
    constexpr double tau = 2.0 * std::numbers::pi;
    const double L = ctx.logq;
    const int N = static_cast<int>(std::lround(x.argument / tau));
    const LogPoint base_pt{x.modulus, x.argument - tau * N};
    ScaledComplex total = euler_sum_scaled(EulerFactor{Complex{1.0}}, d, ctx, base_pt, cfg);
    const Complex lx = x.log();
    const Complex pref{0.0, std::sqrt(tau / L)};
    // S^0(x) = S^0(x e^{-2 pi i N}) - sqrt(2 pi / log q) i sum_k K_k  (N > 0),
    // with the sign fixed by the residue computation (see stokes_jump).
    for (int k = 0; k < std::abs(N); ++k) {
        const double shift = (N > 0 ? -1.0 : 1.0) * std::numbers::pi * (2 * k + 1);
        const Complex lk = lx + Complex{0.0, shift} - L / 2.0;
        ScaledComplex term = ScaledComplex::from_log(-lk * lk / (2.0 * L)) * pref;
        total = (N > 0) ? total - term : total + term;
    }
    return total;
}

// Growth diagnostic for the inverse of the Euler sum: for each angle t,
// reports log|1/S^0(E_{1,q})(r e^{it})| + max(|t|-pi, 0)^2/(2 log q).
// Bounded above across the grid. The normalization uses (|t|-pi)^2, the
// sharp decay exponent: the dominant crossed-pole kernel is centered at
// argument pi, so |S| grows like e^{(|t|-pi)^2/(2 log q)}; a t^2
// normalization (as sometimes quoted) overshoots by a factor e^{pi|t|/log q}.
struct SpiralScanRow {
    double t;
    double log_abs_sum;  // log|S|
    double report;       // -log|S| + max(|t|-pi, 0)^2/(2 log q)
};

inline std::vector<SpiralScanRow> spiral_inverse_scan(const QContext& ctx, double r,
                                                      const std::vector<double>& t_grid,
                                                      Direction d = Direction{0.0},
                                                      const QuadratureConfig& cfg = {}) {
    std::vector<SpiralScanRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const LogPoint x{r, t};
        const ScaledComplex s = euler_sum_sheet_reduced(ctx, x, d, cfg);
        const double ls = s.abs_log();
        const double shifted = std::max(std::abs(t) - std::numbers::pi, 0.0);
        rows.push_back({t, ls, -ls + shifted * shifted / (2.0 * ctx.logq)});
    }
    return rows;
}

}  // namespace qsum
