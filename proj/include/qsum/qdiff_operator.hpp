#pragma once

#include <map>

#include "qsum/series.hpp"

namespace qsum {

// L = a_n sigma_q^n + ... + a_0 with truncated-series coefficients a_j.
struct QDifferenceOperator {
    std::map<int, FormalSeries> terms;  // shift exponent j >= 0 -> a_j

    explicit QDifferenceOperator(std::map<int, FormalSeries> t) : terms(std::move(t)) {
        if (terms.empty()) throw DegenerateOperator("operator has no terms");
        for (const auto& [j, a] : terms)
            if (j < 0) throw DegenerateOperator("negative shift exponent");
    }

    int max_shift() const { return terms.rbegin()->first; }
};

// sum_j a_j * sigma_q^j(f), truncated to the order of f. The coefficients
// a_j are taken as exact polynomials (zero-extended), so every returned
// coefficient is trustworthy.
inline FormalSeries operator_apply(const QDifferenceOperator& L, const FormalSeries& f,
                                   const QContext& ctx) {
    const int n = f.order();
    FormalSeries acc = FormalSeries::zero(n);
    for (const auto& [j, a] : L.terms) {
        std::vector<Complex> padded(static_cast<std::size_t>(n) + 1, Complex{0.0});
        for (int i = 0; i <= std::min(n, a.order()); ++i)
            padded[static_cast<std::size_t>(i)] = a.at(i);
        acc = acc + FormalSeries(std::move(padded)) * apply_sigma_q(f, ctx, j);
    }
    return acc;
}

}  // namespace qsum
