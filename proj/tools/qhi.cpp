#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "qhi/qhi.hpp"

namespace qhi {
namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_validation = 2;
constexpr int exit_numeric = 3;

// Flag values that map onto config keys. They are collected as strings and
// applied after the config file, so flags win over the file.
struct FlagSet {
    std::map<std::string, std::string> values;

    void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }
};

struct Options {
    std::string config;
    FlagSet flags;
    int N = 0;
    std::string quantity = "qhi";
    std::string model = "log";
    std::string suite = "exact";
    std::string variant = "both";
    std::string route = "auto";
    std::string input;
};

RunConfig resolve(const Options& o)
{
    RunConfig cfg;
    if (!o.config.empty())
        load_config_file(cfg, o.config);
    apply_key_values(cfg, o.flags.values);
    apply_environment(cfg);
    cfg.validate();
    return cfg;
}

GrowthModel parse_model(const std::string& s)
{
    if (s == "log")
        return GrowthModel::LogInverse;
    if (s == "inverse")
        return GrowthModel::Inverse;
    throw ValidationError("model must be 'log' or 'inverse'");
}

// Output goes to the configured file or to stdout.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ValidationError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* app, Options& o)
{
    app->add_option("--config", o.config, "flat key=value config file");
    o.flags.bind(app, "--digits", "digits", "working precision in decimal digits");
    o.flags.bind(app, "--quad-tol", "quad_rel_tol", "relative quadrature tolerance");
    o.flags.bind(app, "--case", "case", "a or b");
    o.flags.bind(app, "--a0", "a0", "even color a0 >= 4");
    o.flags.bind(app, "--lk-lambda", "lk_lambda_over_2pii", "l_kappa(lambda)/2 pi i");
    o.flags.bind(app, "--lk-mu", "lk_mu_over_pii", "l_kappa(mu)/pi i");
    o.flags.bind(app, "--u0", "u0", "'re,im' or 'complete'");
    o.flags.bind(app, "--root", "root", "which root v0 of the curve equation (0 or 1)");
    o.flags.bind(app, "--format", "format", "csv or json");
    o.flags.bind(app, "--output", "output", "output file (default stdout)");
}

void add_contour(CLI::App* app, Options& o)
{
    o.flags.bind(app, "--alpha-minus", "alpha_minus", "s- = alpha_minus*pi/N");
    o.flags.bind(app, "--alpha-plus", "alpha_plus", "s+ = alpha_plus*pi/N");
    o.flags.bind(app, "--eta", "eta", "offset below the real axis");
    o.flags.bind(app, "--eta-prime", "eta_prime", "offset below 2 pi i");
    o.flags.bind(app, "--x", "x", "left edge of the case (a) plus contour");
    o.flags.bind(app, "--eps", "eps", "half gap around i pi");
}

QuantumGluingPoint lift_for(const RunConfig& cfg, int N, const PrecisionContext& ctx)
{
    GluingPoint p = point_from_config(cfg, ctx);
    return quantum_lift(p, cfg.colors(), N, ctx);
}

int cmd_invariant(const Options& o)
{
    RunConfig cfg = resolve(o);
    require_odd(o.N);
    PrecisionContext ctx = cfg.context_for(o.N);
    scoped_precision guard(ctx);
    QuantumGluingPoint q = lift_for(cfg, o.N, ctx);
    StateSumResult r = full_qhi(q, ctx);
    Sink sink(cfg.output);
    const char* kase = case_name(classify_case(q.colors));
    if (cfg.format == Format::Json) {
        json j = to_json(r);
        j["case"] = kase;
        j["point"] = to_json(q, ctx);
        sink.out() << j.dump(2) << '\n';
    } else {
        CsvTable t;
        t.rows.push_back(make_row(r));
        write_csv(sink.out(), t);
        sink.out() << "#case," << kase << '\n';
    }
    return exit_ok;
}

int cmd_sweep(const Options& o)
{
    RunConfig cfg = resolve(o);
    GrowthModel model = parse_model(o.model);
    if (o.quantity != "qhi" && o.quantity != "kashaev" && o.quantity != "quantum")
        throw ValidationError("quantity must be qhi, kashaev or quantum");
    CsvTable table;
    GrowthSeries series;
    Sink sink(cfg.output);
    bool csv = cfg.format == Format::Csv;
    if (csv)
        sink.out() << csv_header << '\n';
    for (int N = cfg.n_start; N <= cfg.n_end; N += cfg.n_step) {
        PrecisionContext ctx = cfg.context_for(N);
        scoped_precision guard(ctx);
        auto t0 = std::chrono::steady_clock::now();
        CsvRow row;
        if (o.quantity == "qhi") {
            StateSumResult r = full_qhi(lift_for(cfg, N, ctx), ctx);
            row = make_row(r);
        } else if (o.quantity == "kashaev") {
            mpreal k = kashaev(N, ctx);
            mpreal g = 2 * const_pi() / N * log(k);
            row = make_row(N, cplx(k), k, g, ctx.digits, 0);
        } else {
            QuantumIntegral Q = quantum_integral(lift_for(cfg, N, ctx), ctx);
            row = make_row(N, Q.value, abs(Q.value), Q.growth, ctx.digits, 0);
        }
        if (o.quantity != "qhi")
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        {
            scoped_precision parse(row.digits + guard_digits);
            series.add_log(N, {to_double(mpreal(row.value_re)), to_double(mpreal(row.value_im))},
                           to_double(log(mpreal(row.modulus))));
        }
        table.rows.push_back(row);
        if (csv) {
            write_csv_row(sink.out(), row);
            sink.out().flush();
        }
    }
    std::optional<GrowthFit> fit;
    if (series.rows.size() >= 4)
        fit = growth_fit(series, model);
    if (csv) {
        if (fit)
            write_fit_footer(sink.out(), make_fit_footer(*fit, static_cast<int>(series.rows.size())));
    } else {
        json rows = json::array();
        for (const CsvRow& r : table.rows)
            rows.push_back({{"N", r.N},
                            {"value", {r.value_re, r.value_im}},
                            {"modulus", r.modulus},
                            {"growth", r.growth},
                            {"digits", r.digits},
                            {"seconds", r.seconds}});
        json j{{"quantity", o.quantity}, {"rows", rows}};
        if (fit)
            j["fit"] = make_fit_footer(*fit, static_cast<int>(series.rows.size())).fields;
        sink.out() << j.dump(2) << '\n';
    }
    return exit_ok;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& rs, Format f)
{
    if (f == Format::Json) {
        json arr = json::array();
        for (const auto& r : rs)
            arr.push_back({{"check", r.name},
                           {"value", r.value},
                           {"tolerance", r.tolerance},
                           {"pass", r.pass},
                           {"detail", r.detail}});
        os << json{{"checks", arr}, {"pass", all_pass(rs)}}.dump(2) << '\n';
        return;
    }
    os << "check,value,tolerance,status,detail\n";
    for (const auto& r : rs)
        os << r.name << ',' << decimal(r.value) << ',' << decimal(r.tolerance) << ',' << (r.pass ? "pass" : "FAIL")
           << ',' << r.detail << '\n';
}

int cmd_check(const Options& o)
{
    RunConfig cfg = resolve(o);
    std::vector<CheckResult> rs;
    if (o.suite == "exact") {
        int N = o.N ? o.N : 7;
        require_odd(N);
        PrecisionContext ctx = cfg.context_for(N);
        scoped_precision guard(ctx);
        rs = exact_suite(N, cfg.colors(), point_from_config(cfg, ctx), ctx);
    } else if (o.suite == "spm") {
        int N = o.N ? o.N : 2001;
        require_odd(N);
        PrecisionContext ctx(cfg.precision_digits_override.value_or(25), cfg.quad_rel_tol);
        rs = spm_suite(cfg.kase, N, cfg.contour, ctx);
    } else {
        throw ValidationError("suite must be 'exact' or 'spm'");
    }
    Sink sink(cfg.output);
    print_checks(sink.out(), rs, cfg.format);
    return all_pass(rs) ? exit_ok : exit_check_failed;
}

std::vector<Variant> variants_for(const std::string& s)
{
    if (s == "minus")
        return {Variant::Minus};
    if (s == "plus")
        return {Variant::Plus};
    if (s == "both")
        return {Variant::Minus, Variant::Plus};
    throw ValidationError("variant must be minus, plus or both");
}

int cmd_saddle(const Options& o)
{
    RunConfig cfg = resolve(o);
    PrecisionContext ctx(cfg.precision_digits_override.value_or(40), cfg.quad_rel_tol);
    scoped_precision guard(ctx);
    int d = ctx.digits;
    json arr = json::array();
    Sink sink(cfg.output);
    bool csv = cfg.format == Format::Csv;
    if (csv)
        sink.out() << "case,variant,z0_re,z0_im,f_re,f_im,f2_re,f2_im\n";
    for (Variant v : variants_for(o.variant)) {
        Potential p = Potential::limit(cfg.kase, v);
        cplx z0 = saddle_points(p, ctx);
        cplx f = potential_eval(p, z0, ctx);
        cplx f2 = second_derivative(p, z0, ctx);
        if (csv) {
            sink.out() << case_name(cfg.kase) << ',' << variant_name(v) << ',' << decimal(z0.re, d) << ','
                       << decimal(z0.im, d) << ',' << decimal(f.re, d) << ',' << decimal(f.im, d) << ','
                       << decimal(f2.re, d) << ',' << decimal(f2.im, d) << '\n';
        } else {
            arr.push_back({{"case", case_name(cfg.kase)},
                           {"variant", variant_name(v)},
                           {"z0", to_json(z0, d)},
                           {"f", to_json(f, d)},
                           {"f2", to_json(f2, d)}});
        }
    }
    if (!csv)
        sink.out() << arr.dump(2) << '\n';
    return exit_ok;
}

int cmd_classical(const Options& o)
{
    RunConfig cfg = resolve(o);
    int N = o.N ? o.N : 101;
    if (N < 1)
        throw ValidationError("N must be positive");
    Route route;
    if (o.route == "auto")
        route = Route::Auto;
    else if (o.route == "vertical")
        route = Route::Vertical;
    else if (o.route == "deformed")
        route = Route::Deformed;
    else
        throw ValidationError("route must be auto, vertical or deformed");
    PrecisionContext ctx(cfg.precision_digits_override.value_or(25), cfg.quad_rel_tol);
    scoped_precision guard(ctx);
    int d = ctx.digits;
    Sink sink(cfg.output);
    bool csv = cfg.format == Format::Csv;
    json arr = json::array();
    if (csv)
        sink.out() << "case,variant,N,contour,value_re,value_im,growth,spm_re,spm_im,seconds\n";
    for (Variant v : variants_for(o.variant)) {
        auto t0 = std::chrono::steady_clock::now();
        Potential p = Potential::limit(cfg.kase, v);
        ClassicalIntegral I = classical_integral(p, N, cfg.contour, ctx, route);
        mpreal g = 2 * const_pi() / N * log(abs(I.value));
        cplx sp = spm_prediction(p, N, ctx);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (csv) {
            sink.out() << case_name(cfg.kase) << ',' << variant_name(v) << ',' << N << ','
                       << scenario_name(I.scenario) << ',' << decimal(I.value.re, d) << ','
                       << decimal(I.value.im, d) << ',' << decimal(g, d) << ',' << decimal(sp.re, d) << ','
                       << decimal(sp.im, d) << ',' << decimal(secs) << '\n';
        } else {
            Contour c = build_contour(I.scenario, N, p, cfg.contour, ctx);
            arr.push_back({{"case", case_name(cfg.kase)},
                           {"variant", variant_name(v)},
                           {"N", N},
                           {"value", to_json(I.value, d)},
                           {"growth", decimal(g, d)},
                           {"spm", to_json(sp, d)},
                           {"contour", to_json(c)},
                           {"seconds", secs}});
        }
    }
    if (!csv)
        sink.out() << arr.dump(2) << '\n';
    return exit_ok;
}

int cmd_fit(const Options& o)
{
    RunConfig cfg = resolve(o);
    GrowthModel model = parse_model(o.model);
    std::ifstream in(o.input);
    if (!in)
        throw ValidationError("cannot open input file '" + o.input + "'");
    CsvTable t = read_csv(in);
    GrowthSeries s = series_from_csv(t);
    GrowthFit f = growth_fit(s, model);
    Sink sink(cfg.output);
    if (cfg.format == Format::Json)
        sink.out() << json(make_fit_footer(f, static_cast<int>(s.rows.size())).fields).dump(2) << '\n';
    else
        write_fit_footer(sink.out(), make_fit_footer(f, static_cast<int>(s.rows.size())));
    return exit_ok;
}

int run(int argc, char** argv)
{
    CLI::App app{"Numerical lab for the quantum hyperbolic invariants of the figure-eight knot complement"};
    app.require_subcommand(1);
    Options o;

    auto* inv = app.add_subcommand("invariant", "full invariant at one N");
    add_common(inv, o);
    inv->add_option("--N", o.N, "odd N >= 3")->required();

    auto* sweep = app.add_subcommand("sweep", "growth rates over a range of N with a fit footer");
    add_common(sweep, o);
    o.flags.bind(sweep, "--from", "n_start", "first N (odd)");
    o.flags.bind(sweep, "--to", "n_end", "last N (odd)");
    o.flags.bind(sweep, "--step", "n_step", "even step");
    sweep->add_option("--quantity", o.quantity, "qhi, kashaev or quantum");
    sweep->add_option("--model", o.model, "log (c0 + c1 log N/N + c2/N) or inverse (c0 + c2/N)");

    auto* check = app.add_subcommand("check", "identity and asymptotic cross-checks");
    add_common(check, o);
    add_contour(check, o);
    check->add_option("--suite", o.suite, "exact or spm");
    check->add_option("--N", o.N, "odd N");

    auto* saddle = app.add_subcommand("saddle", "critical points of the limit potentials");
    add_common(saddle, o);
    saddle->add_option("--variant", o.variant, "minus, plus or both");

    auto* classical = app.add_subcommand("classical", "classical integrals and their SPM predictions");
    add_common(classical, o);
    add_contour(classical, o);
    classical->add_option("--N", o.N, "N");
    classical->add_option("--variant", o.variant, "minus, plus or both");
    classical->add_option("--route", o.route, "auto, vertical or deformed");

    auto* fit = app.add_subcommand("fit", "refit the growth column of a sweep CSV");
    add_common(fit, o);
    fit->add_option("--input", o.input, "sweep CSV")->required();
    fit->add_option("--model", o.model, "log or inverse");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*inv)
            return cmd_invariant(o);
        if (*sweep)
            return cmd_sweep(o);
        if (*check)
            return cmd_check(o);
        if (*saddle)
            return cmd_saddle(o);
        if (*classical)
            return cmd_classical(o);
        return cmd_fit(o);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_numeric;
    }
}

}  // namespace
}  // namespace qhi

int main(int argc, char** argv)
{
    return qhi::run(argc, argv);
}
