#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qsum/qsum.hpp"

using namespace qsum;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;

struct Common {
    double q = 2.0;
    double quad_step = 0.0;
    double quad_tol = 1e-10;
    double quad_window = 0.0;
    std::string format = "json";
    std::string out;

    QuadratureConfig cfg() const { return {quad_step, quad_tol, quad_window, 3}; }
    QContext ctx() const { return QContext(q); }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--q", c.q, "base q > 1")->check(CLI::Range(1.0 + 1e-12, 1e12));
    sub->add_option("--quad-step", c.quad_step, "quadrature step (log variable); 0 = auto");
    sub->add_option("--quad-tol", c.quad_tol, "quadrature relative tail tolerance");
    sub->add_option("--quad-window", c.quad_window, "quadrature max half-window; 0 = auto");
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out, "also write the report to FILE");
}

// Report emission: canonical JSON (sorted keys, no timestamps) or rows as CSV.
// Wall time goes to stderr only so reports stay byte-identical across runs.
int finish(const Json& report, bool pass, const Common& c, const std::string& csv) {
    std::string payload;
    if (c.format == "csv" && !csv.empty())
        payload = csv;
    else
        payload = report.dump(2) + "\n";
    std::cout << payload;
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) {
            std::cerr << "cannot open output file: " << c.out << "\n";
            return kExitParse;
        }
        f << payload;
    }
    return pass ? kExitPass : kExitFail;
}

Json config_echo(const Common& c) {
    return Json{{"format", c.format},
                {"q", c.q},
                {"quad_step", c.quad_step},
                {"quad_tol", c.quad_tol},
                {"quad_window", c.quad_window}};
}

std::string rational_str(const Rational& r) { return r.str(); }

// E^{[m]} functional-equation residual: x S_m(qx) + a S_m(x) + m S_{m-1}(x)
// equals 1 for m = 0 and 0 for m >= 1.
double euler_residual(const EulerFactor& fac, Direction d, const QContext& ctx,
                      const LogPoint& x, const QuadratureConfig& cfg) {
    const Complex sm_qx = euler_sum(fac, d, ctx, x.scaled(ctx.q), cfg);
    const Complex sm_x = euler_sum(fac, d, ctx, x, cfg);
    Complex lhs = x.to_complex() * sm_qx + fac.a * sm_x;
    if (fac.m > 0)
        lhs += static_cast<double>(fac.m) *
               euler_sum(EulerFactor{fac.a, fac.m - 1}, d, ctx, x, cfg);
    return std::abs(lhs - (fac.m == 0 ? Complex{1.0} : Complex{0.0}));
}

int run_euler_sum(const Common& c, const std::string& a_s, int m, double d,
                  const std::string& x_s) {
    const QContext ctx = c.ctx();
    const EulerFactor fac{parse_complex(a_s), m};
    const LogPoint x = parse_logpoint(x_s);
    const Complex v = euler_sum(fac, Direction{d}, ctx, x, c.cfg());
    const double residual = euler_residual(fac, Direction{d}, ctx, x, c.cfg());
    const bool pass = residual < 1e-7;
    Json rep{{"command", "euler-sum"},
             {"config", config_echo(c)},
             {"input", Json{{"a", complex_to_json(fac.a)},
                            {"d", d},
                            {"m", m},
                            {"x", Json{{"argument", x.argument}, {"modulus", x.modulus}}}}},
             {"pass", pass},
             {"residual", residual},
             {"value", complex_to_json(v)}};
    std::ostringstream csv;
    csv << "re,im,residual,pass\n"
        << v.real() << "," << v.imag() << "," << residual << "," << (pass ? 1 : 0) << "\n";
    return finish(rep, pass, c, csv.str());
}

int run_stokes_check(const Common& c, const std::string& a_s, double d1, double d2,
                     const std::string& x_s) {
    const QContext ctx = c.ctx();
    const EulerFactor fac{parse_complex(a_s)};
    const LogPoint x = parse_logpoint(x_s);
    const Complex formula = stokes_jump(fac, Direction{d1}, Direction{d2}, ctx, x);
    const Complex quad = euler_sum(fac, Direction{d1}, ctx, x, c.cfg()) -
                         euler_sum(fac, Direction{d2}, ctx, x, c.cfg());
    // jumps grow like exp(t^2 / (2 log q)) across sheets, so gate relative to
    // the formula's own magnitude
    const double residual = std::abs(formula - quad) / std::max(1.0, std::abs(formula));
    const bool pass = residual < 1e-6;
    Json rep{{"command", "stokes-check"},
             {"config", config_echo(c)},
             {"input", Json{{"a", complex_to_json(fac.a)},
                            {"d1", d1},
                            {"d2", d2},
                            {"x", Json{{"argument", x.argument}, {"modulus", x.modulus}}}}},
             {"jump_formula", complex_to_json(formula)},
             {"jump_quadrature", complex_to_json(quad)},
             {"pass", pass},
             {"residual", residual}};
    std::ostringstream csv;
    csv << "formula_re,formula_im,quad_re,quad_im,residual,pass\n"
        << formula.real() << "," << formula.imag() << "," << quad.real() << "," << quad.imag()
        << "," << residual << "," << (pass ? 1 : 0) << "\n";
    return finish(rep, pass, c, csv.str());
}

int run_spiral_scan(const Common& c, double r, const std::vector<double>& t_grid, double d) {
    if (t_grid.empty()) throw ParseError("spiral-scan: --grid needs at least one angle");
    if (!(r > 0.0)) throw ParseError("spiral-scan: radius must be positive");
    const QContext ctx = c.ctx();
    const auto rows = spiral_inverse_scan(ctx, r, t_grid, Direction{d}, c.cfg());
    // bound check against the row nearest t = 0
    std::size_t base = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i].t) < std::abs(rows[base].t)) base = i;
    double max_report = rows[0].report;
    for (const auto& row : rows) max_report = std::max(max_report, row.report);
    const bool pass = max_report <= rows[base].report + 3.0;
    Json table = Json::array();
    std::ostringstream csv;
    csv << "t,log_abs_sum,report\n";
    for (const auto& row : rows) {
        table.push_back(
            Json{{"log_abs_sum", row.log_abs_sum}, {"report", row.report}, {"t", row.t}});
        csv << row.t << "," << row.log_abs_sum << "," << row.report << "\n";
    }
    Json rep{{"command", "spiral-scan"},
             {"config", config_echo(c)},
             {"input", Json{{"d", d}, {"r", r}, {"t_grid", t_grid}}},
             {"base_report", rows[base].report},
             {"max_report", max_report},
             {"pass", pass},
             {"rows", table}};
    return finish(rep, pass, c, csv.str());
}

int run_newton_polygon(const Common& c, const std::string& operator_file) {
    const QDifferenceOperator L = operator_from_json(load_json_file(operator_file));
    const NewtonPolygon np = newton_polygon(L);
    Json verts = Json::array();
    for (const auto& [j, v] : np.vertices) verts.push_back(Json::array({j, v}));
    Json slopes = Json::array();
    for (const auto& s : np.slopes) slopes.push_back(rational_str(s));
    Json rep{{"command", "newton-polygon"},
             {"config", config_echo(c)},
             {"input", Json{{"operator", operator_file}}},
             {"pass", true},
             {"slopes", slopes},
             {"vertices", verts}};
    std::ostringstream csv;
    csv << "slope\n";
    for (const auto& s : np.slopes) csv << rational_str(s) << "\n";
    return finish(rep, true, c, csv.str());
}

int run_multisum(const Common& c, const std::string& order_s, const std::string& a_s,
                 const std::string& b_s, double d, const std::string& x_s) {
    const QContext ctx = c.ctx();
    std::vector<Rational> s;
    std::stringstream ss(order_s);
    std::string tok;
    while (std::getline(ss, tok, ',')) s.push_back(parse_rational(tok));
    const MultisumOrder order = tilde_sequence(s);
    const LogPoint x = parse_logpoint(x_s);
    const Direction dir{d};
    // Germs with a known analytic continuation: the Euler pole germ for a
    // single order, the module-product germ f1 for order (1,2).
    BorelGerm germ;
    Complex reference;
    if (s.size() == 1) {
        const EulerFactor fac{parse_complex(a_s)};
        germ = BorelGerm{euler_borel(fac),
                         qborel_formal(euler_coeffs(fac, ctx, 16), ctx), 1.0};
        reference = euler_sum(fac, dir, ctx, x, c.cfg());
    } else if (s.size() == 2 && s[0] == Rational(1) && s[1] == Rational(2)) {
        const Complex a = parse_complex(a_s);
        const Complex b = parse_complex(b_s);
        const F1Evaluator f1(a, b, ctx);
        germ = BorelGerm{f1.fn(), f1.taylor_series(), f1.base_radius()};
        reference = euler_sum(EulerFactor{a}, dir, ctx, x, c.cfg()) *
                    euler_sum(EulerFactor{b}, dir, ctx, x, c.cfg());
    } else {
        throw ParseError("multisum: no continued germ available for order " + order_s +
                         " (supported: a single order, or 1,2)");
    }
    const Complex v = multisum(germ, order, dir, ctx, x, c.cfg());
    const double residual = std::abs(v - reference);
    const bool pass = residual < 1e-6;
    Json tilde = Json::array();
    for (const auto& t : order.s_tilde) tilde.push_back(rational_str(t));
    Json rep{{"command", "multisum"},
             {"config", config_echo(c)},
             {"input", Json{{"a", a_s},
                            {"b", b_s},
                            {"d", d},
                            {"order", order_s},
                            {"x", Json{{"argument", x.argument}, {"modulus", x.modulus}}}}},
             {"pass", pass},
             {"reference", complex_to_json(reference)},
             {"residual", residual},
             {"s_tilde", tilde},
             {"value", complex_to_json(v)}};
    std::ostringstream csv;
    csv << "re,im,residual,pass\n"
        << v.real() << "," << v.imag() << "," << residual << "," << (pass ? 1 : 0) << "\n";
    return finish(rep, pass, c, csv.str());
}

int run_product_check(const Common& c, const std::string& a_file, const std::string& b_file,
                      double d, const std::vector<std::string>& grid_s) {
    if (grid_s.empty()) throw ParseError("product-check: --grid needs at least one point");
    const QContext ctx = c.ctx();
    const EulerDecomposition A = decomposition_from_json(load_json_file(a_file));
    const EulerDecomposition B = decomposition_from_json(load_json_file(b_file));
    std::vector<LogPoint> grid;
    grid.reserve(grid_s.size());
    for (const auto& g : grid_s) grid.push_back(parse_logpoint(g));
    bool has_derivative = false;
    for (const auto& t : A.terms) has_derivative |= (t.factor && t.factor->m > 0);
    for (const auto& t : B.terms) has_derivative |= (t.factor && t.factor->m > 0);
    const double threshold = has_derivative ? 1e-4 : 1e-6;
    const ProductCheckReport rep = product_theorem_check(A, B, Direction{d}, ctx, grid, c.cfg());
    const bool pass = rep.max_deviation < threshold;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "modulus,argument,lhs_re,lhs_im,rhs_re,rhs_im,deviation\n";
    for (const auto& row : rep.rows) {
        rows.push_back(Json{{"deviation", row.deviation},
                            {"lhs", complex_to_json(row.lhs)},
                            {"rhs", complex_to_json(row.rhs)},
                            {"x", Json{{"argument", row.x.argument}, {"modulus", row.x.modulus}}}});
        csv << row.x.modulus << "," << row.x.argument << "," << row.lhs.real() << ","
            << row.lhs.imag() << "," << row.rhs.real() << "," << row.rhs.imag() << ","
            << row.deviation << "\n";
    }
    Json out{{"command", "product-check"},
             {"config", config_echo(c)},
             {"input", Json{{"A", a_file}, {"B", b_file}, {"d", d}}},
             {"max_deviation", rep.max_deviation},
             {"pass", pass},
             {"rows", rows},
             {"threshold", threshold}};
    return finish(out, pass, c, csv.str());
}

int run_identity_suite(const Common& c) {
    const QuadratureConfig cfg = c.cfg();
    Json checks = Json::object();
    bool pass = true;

    // Gauss moments, both directions, n in -3..6, k in {1, 2, 1/2}.
    {
        double worst = 0.0;
        for (double q : {1.5, 2.0, 4.0}) {
            const QContext ctx(q);
            for (const Rational& k : {Rational(1), Rational(2), Rational(1, 2)}) {
                const TransformOrder ord{k};
                const double le = ord.effective_logq(ctx);
                for (int n = -3; n <= 6; ++n) {
                    const LogPoint x{0.8, 0.3};
                    auto mono = [n](const LogPoint& p) {
                        return ScaledComplex::from_log(static_cast<double>(n) * p.log());
                    };
                    const Complex lv =
                        laplace_numeric(mono, Direction{0.0}, ctx, ord, x, cfg);
                    const Complex lw = std::exp(le * n * (n - 1) / 2.0 +
                                                static_cast<double>(n) * x.log());
                    worst = std::max(worst, std::abs(lv - lw) / std::abs(lw));
                    const LogPoint xi{1.1, 0.2};
                    const double r = xi.modulus * std::exp(le / 2.0 - n * le);
                    const Complex bv = borel_numeric(mono, r, ctx, ord, xi);
                    const Complex bw = std::exp(-le * n * (n - 1) / 2.0 +
                                                static_cast<double>(n) * xi.log());
                    worst = std::max(worst, std::abs(bv - bw) / std::abs(bw));
                }
            }
        }
        checks["gauss_moments"] = Json{{"max_rel_error", worst}, {"pass", worst < 1e-8}};
        pass = pass && worst < 1e-8;
    }

    // Formal round trip on random series.
    {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const QContext ctx(2.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Complex> cs(20);
            for (auto& z : cs) z = {u(rng), u(rng)};
            const FormalSeries f(cs);
            for (const Rational& k : {Rational(1), Rational(2), Rational(1, 2)}) {
                const FormalSeries g =
                    qlaplace_formal(qborel_formal(f, ctx, TransformOrder{k}), ctx,
                                    TransformOrder{k});
                worst = std::max(worst, max_abs_diff(g, f) / std::max(1e-30, f.max_abs()));
            }
        }
        checks["formal_round_trip"] = Json{{"max_rel_error", worst}, {"pass", worst < 1e-12}};
        pass = pass && worst < 1e-12;
    }

    // Analytic round trip on the pole germ.
    {
        const QContext ctx(2.0);
        const ScaledFunction phi = euler_borel(EulerFactor{Complex{1.0}});
        auto sum = [&](const LogPoint& x) {
            return laplace_numeric_scaled(phi, Direction{0.0}, ctx, TransformOrder{}, x, cfg);
        };
        double worst = 0.0;
        for (int i = 1; i <= 10; ++i) {
            const LogPoint xi{0.15 * i, 0.0};
            const Complex rec = borel_numeric(sum, 0.05, ctx, TransformOrder{}, xi);
            worst = std::max(worst, std::abs(rec - phi(xi).value()));
        }
        checks["analytic_round_trip"] = Json{{"max_error", worst}, {"pass", worst < 1e-6}};
        pass = pass && worst < 1e-6;
    }

    // Kernel factorization and half-power identities at random surface points.
    {
        std::mt19937 rng(54321);
        std::uniform_real_distribution<double> mod(0.2, 3.0);
        std::uniform_real_distribution<double> arg(-7.0, 7.0);
        double worst = 0.0;
        for (double q : {1.5, 2.0, 4.0}) {
            const QContext ctx(q);
            for (int trial = 0; trial < 300; ++trial) {
                const LogPoint xi1{mod(rng), arg(rng)};
                const LogPoint xi2{mod(rng), arg(rng)};
                const LogPoint x{mod(rng), arg(rng)};
                worst = std::max(worst, kernel_identity_residual(xi1, xi2, x, ctx));
                worst = std::max(worst, halfpower_kernel_residual(x, ctx));
            }
        }
        checks["kernel_identities"] = Json{{"max_residual", worst}, {"pass", worst < 1e-10}};
        pass = pass && worst < 1e-10;
    }

    // Morphism battery on Euler sums.
    {
        const QContext ctx(2.0);
        std::vector<LogPoint> grid;
        for (int i = 1; i <= 4; ++i) grid.push_back({0.02 * i, 0.1});
        const MorphismReport rep = morphism_checks(
            EulerFactor{Complex{1.0}}, EulerFactor{Complex{2.0}}, Direction{0.0}, ctx, grid);
        const bool ok = rep.max() < 1e-6;
        checks["morphisms"] = Json{{"additivity", rep.additivity},
                                   {"equivariance", rep.equivariance},
                                   {"pass", ok},
                                   {"pullout", rep.pullout}};
        pass = pass && ok;
    }

    Json rep{{"command", "identity-suite"},
             {"checks", checks},
             {"config", config_echo(c)},
             {"pass", pass}};
    std::ostringstream csv;
    csv << "check,pass\n";
    for (const auto& [name, body] : checks.items())
        csv << name << "," << (body["pass"].get<bool>() ? 1 : 0) << "\n";
    return finish(rep, pass, c, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional summation toolkit for linear q-difference equations"};
    app.require_subcommand(1);

    Common c_euler, c_stokes, c_spiral, c_newton, c_multi, c_product, c_suite;
    std::string a_s = "1", b_s = "1", x_s = "0.05,0", order_s = "1";
    std::string operator_file, a_file, b_file;
    int m = 0, n = 0;
    double d = 0.0, d2 = 2.0 * std::numbers::pi, r = 0.5;
    std::vector<double> t_grid;
    std::vector<std::string> grid_s;

    CLI::App* euler = app.add_subcommand("euler-sum", "directional sum of E^[m]_{a,q}");
    add_common(euler, c_euler);
    euler->add_option("--a", a_s, "parameter a (re,im)");
    euler->add_option("--m", m, "parameter-derivative order")->check(CLI::Range(0, 6));
    euler->add_option("--d", d, "summation direction (radians)");
    euler->add_option("--x", x_s, "evaluation point (re,im or r@theta)");

    CLI::App* stokes = app.add_subcommand("stokes-check", "jump formula vs quadrature");
    add_common(stokes, c_stokes);
    stokes->add_option("--a", a_s, "parameter a (re,im)");
    stokes->add_option("--d", d, "first direction d1");
    stokes->add_option("--d2", d2, "second direction d2 > d1");
    stokes->add_option("--x", x_s, "evaluation point (re,im or r@theta)");

    CLI::App* spiral = app.add_subcommand("spiral-scan", "inverse-growth scan over angles");
    add_common(spiral, c_spiral);
    spiral->add_option("--r", r, "spiral modulus")->check(CLI::PositiveNumber);
    spiral->add_option("--grid", t_grid, "angles t (repeatable)");
    spiral->add_option("--d", d, "summation direction (radians)");

    CLI::App* newton = app.add_subcommand("newton-polygon", "polygon of an operator JSON");
    add_common(newton, c_newton);
    newton->add_option("--operator", operator_file, "operator JSON file")->required();

    CLI::App* multi = app.add_subcommand("multisum", "iterated Laplace summation");
    add_common(multi, c_multi);
    multi->add_option("--order", order_s, "summation orders, e.g. 1,2");
    multi->add_option("--a", a_s, "parameter a (re,im)");
    multi->add_option("--b", b_s, "parameter b (re,im)");
    multi->add_option("--d", d, "summation direction (radians)");
    multi->add_option("--x", x_s, "evaluation point (re,im or r@theta)");
    multi->add_option("--n", n, "unused placeholder for symmetric flags")->group("");

    CLI::App* product = app.add_subcommand("product-check", "product-theorem verifier");
    add_common(product, c_product);
    product->add_option("--A", a_file, "first decomposition JSON")->required();
    product->add_option("--B", b_file, "second decomposition JSON")->required();
    product->add_option("--d", d, "summation direction (radians)");
    product->add_option("--grid", grid_s, "evaluation points (repeatable)");

    CLI::App* suite = app.add_subcommand("identity-suite", "full invariant battery");
    add_common(suite, c_suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return kExitParse;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitFail;
    try {
        if (app.got_subcommand(euler))
            code = run_euler_sum(c_euler, a_s, m, d, x_s);
        else if (app.got_subcommand(stokes))
            code = run_stokes_check(c_stokes, a_s, d, d2, x_s);
        else if (app.got_subcommand(spiral))
            code = run_spiral_scan(c_spiral, r, t_grid, d);
        else if (app.got_subcommand(newton))
            code = run_newton_polygon(c_newton, operator_file);
        else if (app.got_subcommand(multi))
            code = run_multisum(c_multi, order_s, a_s, b_s, d, x_s);
        else if (app.got_subcommand(product))
            code = run_product_check(c_product, a_file, b_file, d, grid_s);
        else if (app.got_subcommand(suite))
            code = run_identity_suite(c_suite);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "wall_ms="
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << "\n";
    return code;
}
