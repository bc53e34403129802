#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhi/asymptotics.hpp"
#include "qhi/statesum.hpp"

namespace qhi {

// ---------------------------------------------------------------------------
// Run configuration

enum class Format { Csv, Json };

struct RunConfig {
    std::optional<int> precision_digits_override;
    double quad_rel_tol = 1e-10;
    long a0 = 4;
    Case kase = Case::A;
    std::optional<long> lk_lambda_over_2pii;  // default from the case
    long lk_mu_over_pii = 0;
    std::string u0 = "complete";
    int root = 0;                              // index into solve_curve(u0)
    int n_start = 5, n_end = 401, n_step = 2;
    ContourParams contour;
    std::string output;                        // empty means stdout
    Format format = Format::Csv;
    // Ξ_N envelope constants, B_δ = B′/δ + B″.
    double b_prime = 0;
    double b_doubleprime = 0;

    int digits_for(int N) const { return precision_digits_override ? *precision_digits_override : digits_for_n(N); }

    PrecisionContext context_for(int N) const { return PrecisionContext(digits_for(N), quad_rel_tol); }

    long lk_lambda() const { return lk_lambda_over_2pii ? *lk_lambda_over_2pii : (kase == Case::A ? 1 : 2); }

    ColorSystem colors() const { return colors_from_weights(a0, lk_lambda(), lk_mu_over_pii); }

    void validate() const
    {
        if (a0 < 4 || a0 % 2 != 0)
            throw ValidationError("a0 must be even and >= 4");
        if (n_start % 2 == 0 || n_end % 2 == 0)
            throw ValidationError("N range endpoints must be odd");
        if (n_step <= 0 || n_step % 2 != 0)
            throw ValidationError("N step must be a positive even integer");
        if (n_start < 3 || n_end < n_start)
            throw ValidationError("N range must satisfy 3 <= start <= end");
        if (precision_digits_override && *precision_digits_override < 15)
            throw ValidationError("precision digits must be >= 15");
        contour.validate();
    }
};

inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

inline long parse_long(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key + ": expected an integer, got '" + v + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key + ": expected a number, got '" + v + "'");
    }
}

}  // namespace detail

inline Case parse_case(const std::string& s)
{
    if (s == "a" || s == "A")
        return Case::A;
    if (s == "b" || s == "B")
        return Case::B;
    throw ValidationError("case must be 'a' or 'b', got '" + s + "'");
}

inline Format parse_format(const std::string& s)
{
    if (s == "csv")
        return Format::Csv;
    if (s == "json")
        return Format::Json;
    throw ValidationError("format must be 'csv' or 'json', got '" + s + "'");
}

// Applies recognised keys; unknown keys are rejected so typos do not pass silently.
inline void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv)
{
    using detail::parse_double;
    using detail::parse_long;
    for (const auto& [k, v] : kv) {
        if (k == "digits")
            cfg.precision_digits_override = static_cast<int>(parse_long(k, v));
        else if (k == "quad_rel_tol")
            cfg.quad_rel_tol = parse_double(k, v);
        else if (k == "a0")
            cfg.a0 = parse_long(k, v);
        else if (k == "case")
            cfg.kase = parse_case(v);
        else if (k == "lk_lambda_over_2pii")
            cfg.lk_lambda_over_2pii = parse_long(k, v);
        else if (k == "lk_mu_over_pii")
            cfg.lk_mu_over_pii = parse_long(k, v);
        else if (k == "u0")
            cfg.u0 = v;
        else if (k == "root")
            cfg.root = static_cast<int>(parse_long(k, v));
        else if (k == "n_start")
            cfg.n_start = static_cast<int>(parse_long(k, v));
        else if (k == "n_end")
            cfg.n_end = static_cast<int>(parse_long(k, v));
        else if (k == "n_step")
            cfg.n_step = static_cast<int>(parse_long(k, v));
        else if (k == "alpha_minus")
            cfg.contour.alpha_minus = parse_double(k, v);
        else if (k == "alpha_plus")
            cfg.contour.alpha_plus = parse_double(k, v);
        else if (k == "eta")
            cfg.contour.eta = parse_double(k, v);
        else if (k == "eta_prime")
            cfg.contour.eta_prime = parse_double(k, v);
        else if (k == "x")
            cfg.contour.x = parse_double(k, v);
        else if (k == "eps")
            cfg.contour.eps = parse_double(k, v);
        else if (k == "output")
            cfg.output = v;
        else if (k == "format")
            cfg.format = parse_format(v);
        else if (k == "b_prime")
            cfg.b_prime = parse_double(k, v);
        else if (k == "b_doubleprime")
            cfg.b_doubleprime = parse_double(k, v);
        else
            throw ValidationError("unknown config key '" + k + "'");
    }
}

inline void load_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file '" + path + "'");
    apply_key_values(cfg, parse_key_values(in));
}

// QHI_PRECISION_DIGITS takes precedence over both the file and the flags.
inline void apply_environment(RunConfig& cfg)
{
    const char* env = std::getenv("QHI_PRECISION_DIGITS");
    if (env && *env)
        cfg.precision_digits_override = static_cast<int>(detail::parse_long("QHI_PRECISION_DIGITS", trim(env)));
}

// "re,im" or "complete". Parsed at the current default precision.
inline std::optional<cplx> parse_complex(const std::string& text)
{
    std::string s = trim(text);
    if (s == "complete")
        return std::nullopt;
    auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
        throw ValidationError("complex input must be 're,im' or 'complete', got '" + text + "'");
    std::string re = trim(s.substr(0, comma)), im = trim(s.substr(comma + 1));
    // Validate with stod first; the MPFR constructor throws a generic error on junk.
    detail::parse_double("complex real part", re);
    detail::parse_double("complex imaginary part", im);
    return cplx(mpreal(re), mpreal(im));
}

inline GluingPoint point_from_config(const RunConfig& cfg, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    auto u0 = parse_complex(cfg.u0);
    if (!u0)
        return complete_point(ctx);
    auto roots = solve_curve(*u0, ctx);
    if (cfg.root < 0 || cfg.root >= static_cast<int>(roots.size()))
        throw ValidationError("root index out of range for this u0");
    return roots[cfg.root];
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* csv_header = "N,value_re,value_im,modulus,growth,digits,seconds";

struct CsvRow {
    int N = 0;
    std::string value_re, value_im, modulus, growth;
    int digits = 0;
    double seconds = 0;
};

struct CsvFit {
    std::map<std::string, std::string> fields;
};

struct CsvTable {
    std::vector<CsvRow> rows;
    std::vector<CsvFit> fits;
};

// Decimal rendering with `digits` significant digits.
inline std::string decimal(const mpreal& x, int digits)
{
    return x.str(digits, std::ios_base::scientific);
}

// Shortest decimal form of a double that reads back to the same bits.
inline std::string decimal(double x)
{
    char buf[40];
    for (int p = 1; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, x);
        if (std::strtod(buf, nullptr) == x)
            break;
    }
    return buf;
}

inline CsvRow make_row(int N, const cplx& value, const mpreal& modulus, const mpreal& growth, int digits,
                       double seconds)
{
    CsvRow r;
    r.N = N;
    r.value_re = decimal(value.re, digits);
    r.value_im = decimal(value.im, digits);
    r.modulus = decimal(modulus, digits);
    r.growth = decimal(growth, digits);
    r.digits = digits;
    r.seconds = seconds;
    return r;
}

inline CsvRow make_row(const StateSumResult& s)
{
    scoped_precision guard(s.digits_used + guard_digits);
    cplx value = s.defect * s.reduced;
    return make_row(s.N, value, s.full_modulus, s.growth, s.digits_used, s.seconds);
}

inline void write_csv_row(std::ostream& os, const CsvRow& r)
{
    os << r.N << ',' << r.value_re << ',' << r.value_im << ',' << r.modulus << ',' << r.growth << ',' << r.digits
       << ',' << decimal(r.seconds) << '\n';
}

inline CsvFit make_fit_footer(const GrowthFit& f, int n_rows)
{
    CsvFit out;
    out.fields["model"] = f.model;
    out.fields["c0"] = decimal(f.c0);
    out.fields["c1"] = decimal(f.c1);
    out.fields["c2"] = decimal(f.c2);
    out.fields["residual"] = decimal(f.residual);
    out.fields["condition"] = decimal(f.condition);
    out.fields["rows"] = std::to_string(n_rows);
    return out;
}

// Footer lines look like "#fit,key=value,key=value"; values never contain commas.
inline void write_fit_footer(std::ostream& os, const CsvFit& f)
{
    os << "#fit";
    for (const auto& [k, v] : f.fields)
        os << ',' << k << '=' << v;
    os << '\n';
}

inline void write_csv(std::ostream& os, const CsvTable& t)
{
    os << csv_header << '\n';
    for (const CsvRow& r : t.rows)
        write_csv_row(os, r);
    for (const CsvFit& f : t.fits)
        write_fit_footer(os, f);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

inline CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.rfind("#fit", 0) == 0) {
            CsvFit f;
            auto parts = split(line, ',');
            for (std::size_t k = 1; k < parts.size(); ++k) {
                auto eq = parts[k].find('=');
                if (eq == std::string::npos)
                    throw ValidationError("csv line " + std::to_string(lineno) + ": malformed #fit field");
                f.fields[parts[k].substr(0, eq)] = parts[k].substr(eq + 1);
            }
            t.fits.push_back(f);
            continue;
        }
        if (line[0] == '#')
            continue;
        if (!header) {
            if (line != csv_header)
                throw ValidationError("csv: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        auto p = split(line, ',');
        if (p.size() != 7)
            throw ValidationError("csv line " + std::to_string(lineno) + ": expected 7 fields");
        CsvRow r;
        r.N = static_cast<int>(detail::parse_long("N", p[0]));
        r.value_re = p[1];
        r.value_im = p[2];
        r.modulus = p[3];
        r.growth = p[4];
        r.digits = static_cast<int>(detail::parse_long("digits", p[5]));
        r.seconds = detail::parse_double("seconds", p[6]);
        t.rows.push_back(r);
    }
    if (!header)
        throw ValidationError("csv: missing header");
    return t;
}

// Growth series from CSV rows. The log-modulus is recomputed from the modulus
// string so values beyond double range survive.
inline GrowthSeries series_from_csv(const CsvTable& t)
{
    GrowthSeries s;
    for (const CsvRow& r : t.rows) {
        scoped_precision guard(r.digits + guard_digits);
        mpreal m(r.modulus);
        if (!(m > 0))
            throw NumericError("csv: non-positive modulus at N = " + std::to_string(r.N));
        std::complex<double> v(mpreal(r.value_re).convert_to<double>(), mpreal(r.value_im).convert_to<double>());
        s.add_log(r.N, v, to_double(log(m)));
    }
    return s;
}

// ---------------------------------------------------------------------------
// JSON

using json = nlohmann::json;

inline json to_json(const cplx& z, int digits)
{
    return json::array({decimal(z.re, digits), decimal(z.im, digits)});
}

inline cplx cplx_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw ValidationError("json: complex must be [\"re\", \"im\"]");
    return make_cplx(j[0].get<std::string>(), j[1].get<std::string>());
}

inline json to_json(const ColorSystem& c)
{
    return json{{"a", {c.a0, c.a1, c.a2}},
                {"b", {c.b0, c.b1, c.b2}},
                {"lk_lambda_over_2pii", c.lk_lambda_2pii},
                {"lk_mu_over_pii", c.lk_mu_pii},
                {"h2_mu", c.h2_mu},
                {"h_rho_lambda_over_2pii", c.h_rho_lambda_2pii}};
}

inline ColorSystem colors_from_json(const json& j)
{
    ColorSystem c;
    auto a = j.at("a").get<std::vector<long>>();
    auto b = j.at("b").get<std::vector<long>>();
    if (a.size() != 3 || b.size() != 3)
        throw ValidationError("json: colors need three entries each");
    c.a0 = a[0], c.a1 = a[1], c.a2 = a[2];
    c.b0 = b[0], c.b1 = b[1], c.b2 = b[2];
    c.lk_lambda_2pii = j.at("lk_lambda_over_2pii").get<long>();
    c.lk_mu_pii = j.at("lk_mu_over_pii").get<long>();
    c.h2_mu = j.at("h2_mu").get<int>();
    c.h_rho_lambda_2pii = j.at("h_rho_lambda_over_2pii").get<long>();
    return c;
}

// Values are written with `digits` significant digits (the full working
// precision including guard digits by default).
inline json to_json(const QuantumGluingPoint& q, int digits)
{
    json j;
    j["N"] = q.N;
    j["digits"] = digits;
    j["u0"] = to_json(q.base.u0, digits);
    j["v0"] = to_json(q.base.v0, digits);
    j["colors"] = to_json(q.colors);
    j["case"] = case_name(classify_case(q.colors));
    json uq = json::array(), vq = json::array();
    for (int k = 0; k < 3; ++k) {
        uq.push_back(to_json(q.uq[k], digits));
        vq.push_back(to_json(q.vq[k], digits));
    }
    j["uq"] = uq;
    j["vq"] = vq;
    j["l0u"] = to_json(q.l0u, digits);
    j["l1u"] = to_json(q.l1u, digits);
    j["l0v_star"] = to_json(q.l0v_star, digits);
    j["l1v_star"] = to_json(q.l1v_star, digits);
    j["shifts"] = {q.shift_l0u, q.shift_l1u, q.shift_l0v_star, q.shift_l1v_star};
    return j;
}

inline json to_json(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    return to_json(q, ctx.digits + guard_digits);
}

// Parses at the precision recorded in the document.
inline QuantumGluingPoint quantum_point_from_json(const json& j)
{
    try {
        int digits = j.at("digits").get<int>();
        scoped_precision guard(digits);
        QuantumGluingPoint q;
        q.N = j.at("N").get<int>();
        q.base = GluingPoint::make(cplx_from_json(j.at("u0")), cplx_from_json(j.at("v0")));
        q.colors = colors_from_json(j.at("colors"));
        for (int k = 0; k < 3; ++k) {
            q.uq[k] = cplx_from_json(j.at("uq").at(k));
            q.vq[k] = cplx_from_json(j.at("vq").at(k));
        }
        q.l0u = cplx_from_json(j.at("l0u"));
        q.l1u = cplx_from_json(j.at("l1u"));
        q.l0v_star = cplx_from_json(j.at("l0v_star"));
        q.l1v_star = cplx_from_json(j.at("l1v_star"));
        auto s = j.at("shifts").get<std::vector<long>>();
        if (s.size() != 4)
            throw ValidationError("json: shifts need four entries");
        q.shift_l0u = s[0], q.shift_l1u = s[1], q.shift_l0v_star = s[2], q.shift_l1v_star = s[3];
        return q;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("json: ") + e.what());
    }
}

inline json to_json(const Contour& c, int digits = 17)
{
    json verts = json::array();
    for (const cplx& v : c.vertices)
        verts.push_back(to_json(v, digits));
    return json{{"name", c.name}, {"closed", c.closed()}, {"vertices", verts}};
}

inline json to_json(const StateSumResult& s)
{
    scoped_precision guard(s.digits_used + guard_digits);
    int d = s.digits_used;
    return json{{"N", s.N},
                {"sigma_u", to_json(s.sigma_u, d)},
                {"sigma_vstar", to_json(s.sigma_vstar, d)},
                {"g_u0", to_json(s.g_u0, d)},
                {"g_v0star", to_json(s.g_v0star, d)},
                {"reduced", to_json(s.reduced, d)},
                {"defect", to_json(s.defect, d)},
                {"full_modulus", decimal(s.full_modulus, d)},
                {"growth", decimal(s.growth, d)},
                {"digits", d},
                {"seconds", s.seconds}};
}

}  // namespace qhi
