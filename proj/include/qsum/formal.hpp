#pragma once

#include <cmath>

#include "qsum/series.hpp"

namespace qsum {

namespace detail {
// q'^{s * n(n-1)/2} as one exp() call; repeated multiplication would
// accumulate error across n ~ 100.
inline Complex gevrey_factor(double logq_eff, int n, double sign) {
    const double e = sign * 0.5 * static_cast<double>(n) * (n - 1) * logq_eff;
    return {std::exp(e), 0.0};
}
}  // namespace detail

// Formal q-Borel transform of order k: c_n -> c_n * (q^{1/k})^{-n(n-1)/2}.
inline FormalSeries qborel_formal(const FormalSeries& f, const QContext& ctx,
                                  TransformOrder k = TransformOrder{}) {
    const double le = k.effective_logq(ctx);
    std::vector<Complex> c(f.coefficients());
    for (int n = 0; n <= f.order(); ++n)
        c[static_cast<std::size_t>(n)] *= detail::gevrey_factor(le, n, -1.0);
    return FormalSeries(std::move(c));
}

// Formal q-Laplace transform of order k: c_n -> c_n * (q^{1/k})^{+n(n-1)/2}.
inline FormalSeries qlaplace_formal(const FormalSeries& f, const QContext& ctx,
                                    TransformOrder k = TransformOrder{}) {
    const double le = k.effective_logq(ctx);
    std::vector<Complex> c(f.coefficients());
    for (int n = 0; n <= f.order(); ++n)
        c[static_cast<std::size_t>(n)] *= detail::gevrey_factor(le, n, +1.0);
    return FormalSeries(std::move(c));
}

// Residual of the conjugation identity
//   B(x^j sigma^m f) = q^{-j(j-1)/2} xi^j sigma^{m-j} B(f),
// as a max coefficient deviation relative to the coefficient scale.
// Zero up to rounding for every j, m.
inline double check_commutation(int j, int m, const FormalSeries& f, const QContext& ctx) {
    const FormalSeries lhs = qborel_formal(apply_sigma_q(f, ctx, m).shifted(j), ctx);
    const FormalSeries rhs = apply_sigma_q(qborel_formal(f, ctx), ctx, m - j).shifted(j) *
                             detail::gevrey_factor(ctx.logq, j, -1.0);
    const double scale = std::max(1.0, std::max(lhs.max_abs(), rhs.max_abs()));
    return max_abs_diff(lhs, rhs) / scale;
}

}  // namespace qsum
