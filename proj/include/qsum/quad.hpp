#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "qsum/context.hpp"
#include "qsum/errors.hpp"
#include "qsum/kernel.hpp"
#include "qsum/logpoint.hpp"

namespace qsum {

// Caller-supplied analytic function on a ray/spiral neighborhood. The scaled
// return keeps q-exponential growth representable.
using ScaledFunction = std::function<ScaledComplex(const LogPoint&)>;
using ComplexFunction = std::function<Complex(const LogPoint&)>;

inline ScaledFunction scaled(ComplexFunction f) {
    return [f = std::move(f)](const LogPoint& p) { return ScaledComplex::from(f(p)); };
}

// Grid policy for the integral transforms. step/max_window <= 0 means "derive
// from the effective base": step = 0.1 sqrt(log q'), window = 60 sqrt(log q')
// (the Gaussian kernel has std dev sqrt(log q') in the log variable).
struct QuadratureConfig {
    double step = 0.0;
    double tol = 1e-10;
    double max_window = 0.0;
    int blocks = 3;

    struct Resolved {
        double step;
        double tol;
        double max_window;
        int blocks;
    };

    Resolved resolve(double logq_eff) const {
        Resolved r{step, tol, max_window, blocks};
        if (r.step <= 0.0) r.step = 0.1 * std::sqrt(logq_eff);
        if (r.max_window <= 0.0) r.max_window = 60.0 * std::sqrt(logq_eff);
        if (!(r.tol > 0.0 && r.tol < 1.0)) throw Error("QuadratureConfig: tol out of range");
        if (r.blocks < 1) throw Error("QuadratureConfig: blocks must be >= 1");
        if (r.max_window < 10.0 * r.step) throw Error("QuadratureConfig: window below 10 steps");
        return r;
    }
};

namespace detail {

// Uniform-grid trapezoid sum over the real line, window grown symmetrically
// from `center` until `blocks` consecutive expansion rounds each contribute
// less than tol relative to the accumulated value. Fixed summation order.
inline ScaledComplex adaptive_trapezoid(const std::function<ScaledComplex(double)>& f,
                                        double center, const QuadratureConfig::Resolved& cfg,
                                        const char* what) {
    constexpr int kPtsPerSide = 8;
    ScaledComplex total = f(center);
    int quiet_rounds = 0;
    for (int round = 0;; ++round) {
        ScaledComplex block;
        for (int i = 0; i < kPtsPerSide; ++i) {
            const double off = (round * kPtsPerSide + i + 1) * cfg.step;
            block += f(center - off);
            block += f(center + off);
        }
        total += block;
        total.normalize();
        const bool quiet =
            block.is_zero() ||
            (!total.is_zero() && block.abs_log() - total.abs_log() < std::log(cfg.tol));
        quiet_rounds = quiet ? quiet_rounds + 1 : 0;
        if (quiet_rounds >= cfg.blocks) break;
        if ((round + 2) * kPtsPerSide * cfg.step > cfg.max_window)
            throw WindowExhausted(std::string(what) +
                                  ": window exhausted before the tail stabilized");
    }
    return total * cfg.step;
}

inline void require_finite(const ScaledComplex& v, const char* what) {
    if (!std::isfinite(v.sig.real()) || !std::isfinite(v.sig.imag()) ||
        std::isnan(v.logscale) || v.logscale == std::numeric_limits<double>::infinity())
        throw NonFinite(std::string(what) + ": integrand returned a non-finite value");
}

}  // namespace detail

// Analytic q-Laplace transform of order k along direction d:
//   (2 pi log q')^{-1/2} Int_0^{inf e^{id}} exp(-(log(x/(sqrt(q') xi)))^2/(2 log q'))
//                        phi(xi) dxi/xi,     q' = q^{1/k},
// realized in the log variable xi = e^{u + id} so the kernel is exactly
// Gaussian in u, centered at u* = log|x| - log(q')/2.
inline ScaledComplex laplace_numeric_scaled(const ScaledFunction& phi, Direction d,
                                            const QContext& ctx, TransformOrder k,
                                            const LogPoint& x, const QuadratureConfig& cfg = {}) {
    const double le = k.effective_logq(ctx);
    const auto rc = cfg.resolve(le);
    const Complex lx = x.log();
    auto integrand = [&](double u) {
        const LogPoint xi{std::exp(u), d.d};
        const Complex w = lx - le / 2.0 - Complex{u, d.d};
        ScaledComplex v = phi(xi);
        detail::require_finite(v, "laplace_numeric");
        return v * ScaledComplex::from_log(-w * w / (2.0 * le));
    };
    const double center = std::log(x.modulus) - le / 2.0;
    ScaledComplex r = detail::adaptive_trapezoid(integrand, center, rc, "laplace_numeric");
    return r * (1.0 / std::sqrt(2.0 * std::numbers::pi * le));
}

inline Complex laplace_numeric(const ScaledFunction& phi, Direction d, const QContext& ctx,
                               TransformOrder k, const LogPoint& x,
                               const QuadratureConfig& cfg = {}) {
    return laplace_numeric_scaled(phi, d, ctx, k, x, cfg).value();
}

// Analytic q-Borel transform of order k on the spiral x = r q'^{it}:
//   (2 pi log q')^{-1/2} (1/i) Int exp(+(log(x/(sqrt(q') xi)))^2/(2 log q'))
//                        f(x) dx/x,
// in the angular log variable theta = arg x (dx/x = i dtheta), Gaussian
// centered at theta* = arg xi.
inline ScaledComplex borel_numeric_scaled(const ScaledFunction& f, double r, const QContext& ctx,
                                          TransformOrder k, const LogPoint& xi,
                                          const QuadratureConfig& cfg = {}) {
    const double le = k.effective_logq(ctx);
    const auto rc = cfg.resolve(le);
    const Complex lxi = xi.log();
    const double logr = std::log(r);
    auto integrand = [&](double theta) {
        const LogPoint x{r, theta};
        const Complex w = Complex{logr, theta} - le / 2.0 - lxi;
        ScaledComplex v = f(x);
        detail::require_finite(v, "borel_numeric");
        return v * ScaledComplex::from_log(w * w / (2.0 * le));
    };
    ScaledComplex res = detail::adaptive_trapezoid(integrand, xi.argument, rc, "borel_numeric");
    return res * (1.0 / std::sqrt(2.0 * std::numbers::pi * le));
}

inline Complex borel_numeric(const ScaledFunction& f, double r, const QContext& ctx,
                             TransformOrder k, const LogPoint& xi,
                             const QuadratureConfig& cfg = {}) {
    return borel_numeric_scaled(f, r, ctx, k, xi, cfg).value();
}

// --- empirical growth scans ------------------------------------------------

enum class ScanKind { AngularSpiral, RadialRay };

struct GrowthScan {
    std::vector<std::array<double, 2>> samples;  // (parameter, log|f|)
    double quadratic_coeff = 0.0;                // leading coefficient of the LSQ fit
};

namespace detail {
// Least-squares quadratic fit, returns the t^2 coefficient.
inline double fit_quadratic(const std::vector<std::array<double, 2>>& s) {
    double S0 = 0, S1 = 0, S2 = 0, S3 = 0, S4 = 0, b0 = 0, b1 = 0, b2 = 0;
    for (const auto& [p, y] : s) {
        const double p2 = p * p;
        S0 += 1;
        S1 += p;
        S2 += p2;
        S3 += p2 * p;
        S4 += p2 * p2;
        b0 += y;
        b1 += p * y;
        b2 += p2 * y;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    const double A[3][3] = {{S0, S1, S2}, {S1, S2, S3}, {S2, S3, S4}};
    auto det3 = [](const double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double D = det3(A);
    if (D == 0.0) return 0.0;
    double M[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
    const double b[3] = {b0, b1, b2};
    for (int i = 0; i < 3; ++i) M[i][2] = b[i];
    return det3(M) / D;
}
}  // namespace detail

// Samples log|f| along a spiral (fixed modulus, grid of angles) or a ray
// (fixed direction, grid of log-moduli) and fits the best quadratic; the
// leading coefficient is the empirical q-exponential growth rate.
inline GrowthScan growth_scan(const ScaledFunction& f, ScanKind kind, double fixed,
                              const std::vector<double>& grid) {
    GrowthScan out;
    out.samples.reserve(grid.size());
    for (double p : grid) {
        const LogPoint z = (kind == ScanKind::AngularSpiral) ? LogPoint{fixed, p}
                                                             : LogPoint{std::exp(p), fixed};
        ScaledComplex v = f(z);
        detail::require_finite(v, "growth_scan");
        out.samples.push_back({p, v.abs_log()});
    }
    out.quadratic_coeff = detail::fit_quadratic(out.samples);
    return out;
}

}  // namespace qsum
