#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "qsum/errors.hpp"

namespace qsum {

using Complex = std::complex<double>;

// A point of the Riemann surface of the logarithm: positive modulus and an
// unbounded real argument. (r, th) and (r, th + 2*pi) are different points;
// log() is single-valued.
struct LogPoint {
    double modulus;
    double argument;

    LogPoint(double modulus_, double argument_) : modulus(modulus_), argument(argument_) {
        if (!(modulus_ > 0.0)) throw Error("LogPoint: modulus must be positive");
    }

    Complex log() const { return {std::log(modulus), argument}; }

    // Projection to the complex plane (forgets the sheet).
    Complex to_complex() const { return std::polar(modulus, argument); }

    static LogPoint from_log(Complex logv) { return {std::exp(logv.real()), logv.imag()}; }

    // Principal-sheet lift of a nonzero complex number.
    static LogPoint from_complex(Complex z) {
        if (z == Complex(0.0)) throw Error("LogPoint: zero has no lift");
        return {std::abs(z), std::arg(z)};
    }

    // Continuous square root on the surface: (sqrt r, th/2). No branch cut.
    LogPoint sqrt() const { return {std::sqrt(modulus), argument / 2.0}; }

    LogPoint pow(double e) const { return {std::pow(modulus, e), argument * e}; }
    LogPoint inverse() const { return {1.0 / modulus, -argument}; }
    LogPoint scaled(double factor) const { return {modulus * factor, argument}; }
    LogPoint rotated(double dtheta) const { return {modulus, argument + dtheta}; }

    friend LogPoint operator*(const LogPoint& a, const LogPoint& b) {
        return {a.modulus * b.modulus, a.argument + b.argument};
    }
    friend LogPoint operator/(const LogPoint& a, const LogPoint& b) {
        return {a.modulus / b.modulus, a.argument - b.argument};
    }
};

// A complex number stored as sig * exp(logscale). Keeps kernel values and
// Stokes-scale sums representable when exponents run past +-700.
struct ScaledComplex {
    Complex sig{0.0, 0.0};
    double logscale = 0.0;

    ScaledComplex() = default;
    ScaledComplex(Complex s, double l) : sig(s), logscale(l) {}

    static ScaledComplex from(Complex v) { return {v, 0.0}; }

    // exp of a complex exponent, exactly representable for any real part.
    static ScaledComplex from_log(Complex logv) {
        return {std::polar(1.0, logv.imag()), logv.real()};
    }

    bool is_zero() const { return sig == Complex(0.0); }

    // log|value|; -inf for zero.
    double abs_log() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return logscale + std::log(std::abs(sig));
    }

    // May overflow/underflow to inf/0 when the exponent is out of double range.
    Complex value() const {
        if (is_zero()) return {0.0, 0.0};
        return sig * std::exp(logscale);
    }

    ScaledComplex& normalize() {
        const double a = std::abs(sig);
        if (a > 0.0 && std::isfinite(a)) {
            sig /= a;
            logscale += std::log(a);
        }
        return *this;
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        return {a.sig * b.sig, a.logscale + b.logscale};
    }
    friend ScaledComplex operator*(const ScaledComplex& a, Complex c) {
        return {a.sig * c, a.logscale};
    }
    friend ScaledComplex operator*(const ScaledComplex& a, double c) {
        return {a.sig * c, a.logscale};
    }

    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.logscale >= b.logscale)
            return {a.sig + b.sig * std::exp(b.logscale - a.logscale), a.logscale};
        return {b.sig + a.sig * std::exp(a.logscale - b.logscale), b.logscale};
    }
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
        return a + ScaledComplex{-b.sig, b.logscale};
    }

    ScaledComplex& operator+=(const ScaledComplex& o) { return *this = *this + o; }
};

}  // namespace qsum
