#pragma once

#include <cmath>
#include <numbers>

#include "qsum/context.hpp"
#include "qsum/logpoint.hpp"

namespace qsum {

// Value of the Gaussian q-kernel, kept in exponent form so compositions stay
// finite when the exponent runs past +-700 (Stokes-scale arguments do).
struct KernelValue {
    Complex log_value;

    Complex value() const { return std::exp(log_value); }
    ScaledComplex scaled() const { return ScaledComplex::from_log(log_value); }
};

namespace detail {
// log of e_q(x) = (2 pi log q)^{-1/2} exp(-(log(q^{1/2} x))^2 / (2 log q)),
// with logq given directly so order changes are a parameter substitution.
inline Complex eq_kernel_log(Complex logx, double logq) {
    const Complex s = logq / 2.0 + logx;
    return -0.5 * std::log(2.0 * std::numbers::pi * logq) - s * s / (2.0 * logq);
}
}  // namespace detail

inline KernelValue eq_kernel(const LogPoint& x, const QContext& ctx) {
    return {detail::eq_kernel_log(x.log(), ctx.logq)};
}

// Kernel with the base rescaled to q^{1/k}: e_{q;k}(x) = e_{q^{1/k}}(x).
inline KernelValue eq_kernel(const LogPoint& x, const QContext& ctx, TransformOrder k) {
    return {detail::eq_kernel_log(x.log(), k.effective_logq(ctx))};
}

// Residual of the change-of-variables identity
//   e_q(xi1/x) e_q(xi2/x) = e_{q^2}(xi/q) e_{q^{1/2}}(zeta/x),
// with xi = xi1/xi2 and zeta = q^{1/4} sqrt(xi1 xi2). Computed in exponent
// form; zero up to rounding on the whole surface.
inline double kernel_identity_residual(const LogPoint& xi1, const LogPoint& xi2, const LogPoint& x,
                                       const QContext& ctx) {
    const double L = ctx.logq;
    const LogPoint xi = xi1 / xi2;
    const LogPoint zeta = (xi1 * xi2).sqrt().scaled(std::exp(L / 4.0));
    const Complex lhs = detail::eq_kernel_log((xi1 / x).log(), L) +
                        detail::eq_kernel_log((xi2 / x).log(), L);
    const Complex rhs = detail::eq_kernel_log(xi.scaled(1.0 / ctx.q).log(), 2.0 * L) +
                        detail::eq_kernel_log((zeta / x).log(), L / 2.0);
    return std::abs(lhs - rhs);
}

// Residual of e_{q^2}(xi/q) = (1/2) e_{q^{1/2}}(u/q^{1/4}) with xi = u^2.
inline double halfpower_kernel_residual(const LogPoint& u, const QContext& ctx) {
    const double L = ctx.logq;
    const LogPoint xi = u.pow(2.0);
    const Complex lhs = detail::eq_kernel_log(xi.scaled(1.0 / ctx.q).log(), 2.0 * L);
    const Complex rhs = std::log(Complex{0.5}) +
                        detail::eq_kernel_log(u.scaled(std::exp(-L / 4.0)).log(), L / 2.0);
    return std::abs(lhs - rhs);
}

}  // namespace qsum
