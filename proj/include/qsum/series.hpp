#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qsum/context.hpp"
#include "qsum/errors.hpp"
#include "qsum/logpoint.hpp"

namespace qsum {

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

// Truncated formal power series with complex coefficients. The truncation
// order is explicit; arithmetic propagates it pessimistically (min rule) so
// garbage coefficients are never silently used.
class FormalSeries {
public:
    FormalSeries() : coeffs_(1, Complex{0.0, 0.0}) {}
    explicit FormalSeries(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.assign(1, Complex{0.0, 0.0});
    }

    static FormalSeries zero(int order) {
        return FormalSeries(std::vector<Complex>(static_cast<std::size_t>(order) + 1));
    }
    static FormalSeries constant(Complex c, int order) {
        auto f = zero(order);
        f.coeffs_[0] = c;
        return f;
    }
    static FormalSeries monomial(Complex c, int power, int order) {
        auto f = zero(std::max(order, power));
        f.coeffs_[static_cast<std::size_t>(power)] = c;
        return f;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    Complex at(int n) const {
        return (n >= 0 && n <= order()) ? coeffs_[static_cast<std::size_t>(n)] : Complex{0.0};
    }
    const std::vector<Complex>& coefficients() const { return coeffs_; }

    // Index of the first nonzero coefficient; kInfiniteValuation if all zero.
    int valuation() const {
        for (int n = 0; n <= order(); ++n)
            if (coeffs_[static_cast<std::size_t>(n)] != Complex(0.0)) return n;
        return kInfiniteValuation;
    }
    bool is_zero() const { return valuation() == kInfiniteValuation; }

    FormalSeries truncated(int new_order) const {
        if (new_order >= order()) return *this;
        return FormalSeries(std::vector<Complex>(coeffs_.begin(), coeffs_.begin() + new_order + 1));
    }

    friend FormalSeries operator+(const FormalSeries& f, const FormalSeries& g) {
        const int n = std::min(f.order(), g.order());
        std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = f.at(i) + g.at(i);
        return FormalSeries(std::move(c));
    }
    friend FormalSeries operator-(const FormalSeries& f, const FormalSeries& g) {
        return f + (g * Complex{-1.0, 0.0});
    }
    friend FormalSeries operator*(const FormalSeries& f, Complex s) {
        auto c = f.coeffs_;
        for (auto& v : c) v *= s;
        return FormalSeries(std::move(c));
    }
    friend FormalSeries operator*(Complex s, const FormalSeries& f) { return f * s; }

    // Cauchy product, truncated to the min of the two orders.
    friend FormalSeries operator*(const FormalSeries& f, const FormalSeries& g) {
        const int n = std::min(f.order(), g.order());
        std::vector<Complex> c(static_cast<std::size_t>(n) + 1, Complex{0.0});
        for (int k = 0; k <= n; ++k)
            for (int i = 0; i <= k; ++i) c[static_cast<std::size_t>(k)] += f.at(i) * g.at(k - i);
        return FormalSeries(std::move(c));
    }

    // Multiplication by x^j. j < 0 requires valuation >= |j|.
    FormalSeries shifted(int j) const {
        if (j == 0) return *this;
        if (j > 0) {
            std::vector<Complex> c(coeffs_.size() + static_cast<std::size_t>(j), Complex{0.0});
            std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + j);
            return FormalSeries(std::move(c));
        }
        const int drop = -j;
        if (!is_zero() && valuation() < drop)
            throw Error("FormalSeries::shifted: negative shift below valuation");
        if (order() < drop) return zero(0);
        return FormalSeries(std::vector<Complex>(coeffs_.begin() + drop, coeffs_.end()));
    }

    // Partial-sum evaluation at a complex point.
    Complex evaluate(Complex x) const {
        Complex acc{0.0};
        for (int n = order(); n >= 0; --n) acc = acc * x + coeffs_[static_cast<std::size_t>(n)];
        return acc;
    }

    friend double max_abs_diff(const FormalSeries& f, const FormalSeries& g) {
        const int n = std::min(f.order(), g.order());
        double m = 0.0;
        for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(f.at(i) - g.at(i)));
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    std::vector<Complex> coeffs_;  // index = power of x, size = order + 1
};

// sigma_q^m acting on series: coefficient n picks up q^{m n}. Negative m is a
// plain coefficient scaling as well.
inline FormalSeries apply_sigma_q(const FormalSeries& f, const QContext& ctx, int m) {
    if (m == 0) return f;
    std::vector<Complex> c(f.coefficients());
    for (int n = 0; n <= f.order(); ++n)
        c[static_cast<std::size_t>(n)] *= std::exp(ctx.logq * static_cast<double>(m) * n);
    return FormalSeries(std::move(c));
}

inline FormalSeries series_mul(const FormalSeries& f, const FormalSeries& g) { return f * g; }

}  // namespace qsum
