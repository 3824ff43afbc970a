#pragma once

#include <cmath>

#include "qsum/errors.hpp"
#include "qsum/rational.hpp"

namespace qsum {

// Fixed base of the q-difference operator sigma_q : y(x) -> y(qx).
// Requires q > 1; the natural log is cached since every transform uses it.
struct QContext {
    double q;
    double logq;

    explicit QContext(double q_) : q(q_), logq(std::log(q_)) {
        if (!(q_ > 1.0)) throw Error("QContext: q must be > 1");
    }

    // Context for the rescaled base q^{1/k} used by order-k transforms.
    QContext order_base(Rational k) const {
        return QContext(std::exp(logq * static_cast<double>(k.den()) /
                                 static_cast<double>(k.num())));
    }
};

// Order of a Borel/Laplace transform, kept as an exact fraction so that
// composed multisummation stages never drift apart.
struct TransformOrder {
    Rational k{1};

    TransformOrder() = default;
    explicit TransformOrder(Rational k_) : k(k_) {
        if (!(Rational(0) < k_)) throw Error("TransformOrder: k must be positive");
    }

    // log of the effective base q^{1/k}.
    double effective_logq(const QContext& ctx) const {
        return ctx.logq * static_cast<double>(k.den()) / static_cast<double>(k.num());
    }
};

// A ray direction in radians. Not reduced mod 2*pi: d and d + 2*pi are
// distinct directions on the Riemann surface of the logarithm.
struct Direction {
    double d = 0.0;

    Direction() = default;
    explicit Direction(double d_) : d(d_) {}
};

}  // namespace qsum
