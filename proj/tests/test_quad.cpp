#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsum/euler.hpp"
#include "qsum/quad.hpp"

using namespace qsum;

namespace {
ScaledFunction monomial_fn(int n) {
    return [n](const LogPoint& p) {
        return ScaledComplex::from_log(static_cast<double>(n) * p.log());
    };
}
double gevrey_exponent(double logq_eff, int n) {
    return 0.5 * static_cast<double>(n) * (n - 1) * logq_eff;
}
}  // namespace

TEST_CASE("Gauss moments of the Laplace transform") {
    for (double q : {1.5, 2.0, 4.0}) {
        const QContext ctx(q);
        for (const Rational k : {Rational{1}, Rational{2}, Rational{1, 2}}) {
            const TransformOrder ord{k};
            const double le = ord.effective_logq(ctx);
            const LogPoint x{0.8, 0.3};
            for (int n = -3; n <= 6; ++n) {
                const ScaledComplex got =
                    laplace_numeric_scaled(monomial_fn(n), Direction{0.0}, ctx, ord, x);
                const ScaledComplex want =
                    ScaledComplex::from_log(gevrey_exponent(le, n) +
                                            static_cast<double>(n) * x.log());
                const double rel =
                    std::abs((got - want).value() * std::exp(-want.abs_log()));
                CHECK(rel < 1e-8);
            }
        }
    }
}

TEST_CASE("Gauss moments of the Borel transform") {
    for (double q : {1.5, 2.0, 4.0}) {
        const QContext ctx(q);
        for (const Rational k : {Rational{1}, Rational{2}, Rational{1, 2}}) {
            const TransformOrder ord{k};
            const double le = ord.effective_logq(ctx);
            const LogPoint xi{0.7, -0.4};
            for (int n = -3; n <= 6; ++n) {
                // spiral radius at the saddle, where the integrand peak is
                // comparable to the answer; other radii are valid but lose
                // digits to oscillatory cancellation
                const double r = xi.modulus * std::exp(le / 2.0 - n * le);
                const ScaledComplex got =
                    borel_numeric_scaled(monomial_fn(n), r, ctx, ord, xi);
                const ScaledComplex want =
                    ScaledComplex::from_log(-gevrey_exponent(le, n) +
                                            static_cast<double>(n) * xi.log());
                const double rel =
                    std::abs((got - want).value() * std::exp(-want.abs_log()));
                CHECK(rel < 1e-8);
            }
        }
    }
}

TEST_CASE("constant function is a fixed point") {
    const QContext ctx(2.0);
    const Complex l =
        laplace_numeric(monomial_fn(0), Direction{0.0}, ctx, TransformOrder{}, {0.5, 0.0});
    CHECK(std::abs(l - 1.0) < 1e-10);
    const Complex b = borel_numeric(monomial_fn(0), 1.0, ctx, TransformOrder{}, {0.5, 0.0});
    CHECK(std::abs(b - 1.0) < 1e-10);
}

TEST_CASE("transforms are linear") {
    const QContext ctx(2.0);
    const Direction d{0.1};
    const LogPoint x{0.4, 0.2};
    const Complex al{0.7, -0.3}, be{-1.2, 0.5};
    auto f = monomial_fn(1);
    auto g = monomial_fn(2);
    auto combo = [&](const LogPoint& p) { return f(p) * al + g(p) * be; };
    const Complex lhs = laplace_numeric(combo, d, ctx, TransformOrder{}, x);
    const Complex rhs = al * laplace_numeric(f, d, ctx, TransformOrder{}, x) +
                        be * laplace_numeric(g, d, ctx, TransformOrder{}, x);
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("Laplace sum of the geometric Borel germ matches the divergent expansion") {
    const QContext ctx(2.0);
    auto phi = scaled([](const LogPoint& p) { return 1.0 / (p.to_complex() + 1.0); });
    const LogPoint x{0.05, 0.0};
    const Complex s = laplace_numeric(phi, Direction{0.0}, ctx, TransformOrder{}, x);
    const FormalSeries e = euler_coeffs(EulerFactor{Complex{1.0}}, ctx, 9);
    Complex partial{0.0};
    for (int n = 0; n <= 8; ++n) partial += e.at(n) * std::pow(0.05, n);
    const double tail = std::abs(e.at(9)) * std::pow(0.05, 9);
    CHECK(std::abs(s - partial) < 2.0 * tail);
}

TEST_CASE("round trip through both transforms recovers the germ") {
    const QContext ctx(2.0);
    auto phi = scaled([](const LogPoint& p) { return 1.0 / (p.to_complex() + 1.0); });
    auto summed = [&](const LogPoint& x) {
        return laplace_numeric_scaled(phi, Direction{0.0}, ctx, TransformOrder{}, x);
    };
    SUBCASE("pinned point") {
        const LogPoint xi{0.3, 0.0};
        const Complex back = borel_numeric(summed, 0.3, ctx, TransformOrder{}, xi);
        CHECK(std::abs(back - 1.0 / 1.3) < 1e-7);
    }
    SUBCASE("ten ray points") {
        for (int i = 1; i <= 10; ++i) {
            const double r = 0.05 * i;
            const LogPoint xi{r, 0.0};
            const Complex back = borel_numeric(summed, r, ctx, TransformOrder{}, xi);
            CHECK(std::abs(back - 1.0 / (1.0 + r)) < 1e-6);
        }
    }
}

TEST_CASE("halving the step slashes the moment error until the rounding floor") {
    const QContext ctx(2.0);
    const LogPoint x{0.8, 0.0};
    auto moment_error = [&](double step) {
        QuadratureConfig cfg;
        cfg.step = step;
        cfg.tol = 1e-14;
        const Complex got =
            laplace_numeric(monomial_fn(2), Direction{0.0}, ctx, TransformOrder{}, x, cfg);
        const Complex want = std::exp(gevrey_exponent(ctx.logq, 2) + 2.0 * x.log());
        return std::abs(got - want) / std::abs(want);
    };
    const double coarse = moment_error(1.3);
    const double fine = moment_error(0.65);
    CHECK(coarse > 1e-10);  // coarse grid is visibly wrong
    CHECK((fine < coarse / 100.0 || fine < 1e-12));
    CHECK(moment_error(0.325) < 1e-12);
}

TEST_CASE("window exhaustion on a germ growing faster than the kernel") {
    const QContext ctx(2.0);
    auto too_fast = [&](const LogPoint& p) {
        const Complex l = p.log();
        return ScaledComplex::from_log(l * l / ctx.logq);
    };
    CHECK_THROWS_AS(
        laplace_numeric(too_fast, Direction{0.0}, ctx, TransformOrder{}, LogPoint{1.0, 0.0}),
        WindowExhausted);
}

TEST_CASE("non-finite integrand is reported") {
    const QContext ctx(2.0);
    auto bad = [](const LogPoint&) {
        return ScaledComplex::from(Complex{std::nan(""), 0.0});
    };
    CHECK_THROWS_AS(
        laplace_numeric(bad, Direction{0.0}, ctx, TransformOrder{}, LogPoint{0.5, 0.0}),
        NonFinite);
}

TEST_CASE("config validation") {
    QuadratureConfig cfg;
    cfg.tol = 2.0;
    CHECK_THROWS_AS(cfg.resolve(std::log(2.0)), Error);
    cfg.tol = 1e-10;
    cfg.step = 1.0;
    cfg.max_window = 5.0;
    CHECK_THROWS_AS(cfg.resolve(std::log(2.0)), Error);
}

TEST_CASE("growth scan measures the kernel's angular growth") {
    const QContext ctx(2.0);
    auto kernel = [&](const LogPoint& p) {
        return ScaledComplex::from_log(detail::eq_kernel_log(p.log(), ctx.logq));
    };
    std::vector<double> grid;
    for (int i = -20; i <= 20; ++i) grid.push_back(0.8 * i);
    const GrowthScan scan = growth_scan(kernel, ScanKind::AngularSpiral, 1.0, grid);
    CHECK(scan.quadratic_coeff ==
          doctest::Approx(1.0 / (2.0 * ctx.logq)).epsilon(0.05));
}

TEST_CASE("growth scan of a constant is flat") {
    std::vector<double> grid{-3.0, -1.0, 0.0, 2.0, 5.0};
    const GrowthScan scan = growth_scan(monomial_fn(0), ScanKind::AngularSpiral, 1.0, grid);
    CHECK(std::abs(scan.quadratic_coeff) < 1e-12);
}

TEST_CASE("growth scan along a ray sees radial q-exponential growth") {
    const QContext ctx(2.0);
    auto f = [&](const LogPoint& p) {
        const Complex l = p.log();
        return ScaledComplex::from_log(l * l / (2.0 * ctx.logq));
    };
    std::vector<double> grid;
    for (int i = -15; i <= 15; ++i) grid.push_back(0.5 * i);
    const GrowthScan scan = growth_scan(f, ScanKind::RadialRay, 0.0, grid);
    CHECK(scan.quadratic_coeff ==
          doctest::Approx(1.0 / (2.0 * ctx.logq)).epsilon(0.05));
}
