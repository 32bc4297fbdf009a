#include "hypeis/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "hypeis/config.hpp"
#include "hypeis/cycles.hpp"
#include "hypeis/eiskernel.hpp"
#include "hypeis/exp_sums.hpp"
#include "hypeis/genus.hpp"
#include "hypeis/qforms.hpp"
#include "hypeis/qseries.hpp"

namespace hypeis {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::complex<double> parse_tau(const std::string& raw)
{
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    auto bad = [&] { return std::invalid_argument("cannot parse tau '" + raw + "', expected a+bi"); };
    if (s.empty()) throw bad();
    auto to_double = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw bad();
        return v;
    };
    try {
        if (s.back() != 'i') return {to_double(s), 0.0};
        s.pop_back();
        // split at the last sign that is not a leading sign or an exponent sign
        size_t cut = std::string::npos;
        for (size_t i = s.size(); i-- > 1;)
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                cut = i;
                break;
            }
        if (cut == std::string::npos) return {0.0, to_double(s)};
        return {to_double(s.substr(0, cut)), to_double(s.substr(cut))};
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const std::out_of_range&) {
        throw bad();
    }
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json num(double x) { return format_number(x); }
json num(cplx z) { return json{{"re", format_number(z.real())}, {"im", format_number(z.imag())}}; }

struct Options {
    std::optional<i64> D, d, m;
    int k = 4;
    std::optional<int> mmax, cmax;
    std::optional<i64> amax;
    std::string tau, w;
    std::optional<double> tol, lambda;
    int rho = 2;
    bool as_json = false, as_csv = false;
    std::string which;
};

i64 need_D(const Options& o)
{
    if (!o.D) throw UsageError("--D is required");
    require_positive_discriminant(*o.D);
    return *o.D;
}

DiscriminantSplit split_of(const Options& o, std::ostream& err)
{
    i64 D = need_D(o);
    if (o.d) return make_split(D, *o.d);
    auto ds = fundamental_divisors(D);
    std::ostringstream choices;
    for (size_t i = 0; i < ds.size(); ++i) choices << (i ? ", " : "") << ds[i];
    err << "warning: --d not given; using d = " << ds.back() << ", the largest fundamental divisor of D = " << D
        << " (choices: " << choices.str() << ")\n";
    return make_split(D, ds.back());
}

json budgets_json(const std::map<std::string, double>& b)
{
    json j = json::object();
    for (const auto& [k, v] : b) j[k] = num(v);
    return j;
}

void print_report(const VerificationReport& r, const Options& o, std::ostream& out)
{
    if (o.as_json) {
        json j{{"schema", kSchemaVersion},
               {"command", "verify"},
               {"name", r.name},
               {"lhs", num(r.lhs)},
               {"rhs", num(r.rhs)},
               {"abs_err", num(r.abs_err)},
               {"rel_err", num(r.rel_err)},
               {"tolerance", num(r.tolerance)},
               {"budgets", budgets_json(r.budgets)},
               {"pass", r.pass},
               {"wall_time_ms", r.wall_time_ms}};
        out << j.dump(2) << "\n";
    } else if (o.as_csv) {
        out << "name,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tolerance,pass,wall_time_ms\n";
        out << r.name << "," << format_number(r.lhs.real()) << "," << format_number(r.lhs.imag()) << ","
            << format_number(r.rhs.real()) << "," << format_number(r.rhs.imag()) << "," << format_number(r.abs_err)
            << "," << format_number(r.rel_err) << "," << format_number(r.tolerance) << ","
            << (r.pass ? "true" : "false") << "," << r.wall_time_ms << "\n";
    } else {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "\n"
            << "  lhs      " << format_number(r.lhs.real()) << " " << format_number(r.lhs.imag()) << "i\n"
            << "  rhs      " << format_number(r.rhs.real()) << " " << format_number(r.rhs.imag()) << "i\n"
            << "  abs_err  " << format_number(r.abs_err) << "  (tolerance " << format_number(r.tolerance) << ")\n"
            << "  rel_err  " << format_number(r.rel_err) << "\n";
        for (const auto& [k, v] : r.budgets) out << "  " << k << " = " << format_number(v) << "\n";
    }
}

void finish(VerificationReport& r, double rel_tol, double abs_floor = 0)
{
    r.abs_err = std::abs(r.lhs - r.rhs);
    double scale = std::abs(r.rhs);
    r.rel_err = scale > 0 ? r.abs_err / scale : (r.abs_err == 0 ? 0 : INFINITY);
    r.tolerance = std::max(rel_tol * scale, abs_floor);
    r.pass = r.abs_err < r.tolerance;
}

// ---- commands ----

int cmd_classes(const Options& o, std::ostream& out)
{
    i64 D = need_D(o);
    auto reps = class_reps(D);
    auto ds = fundamental_divisors(D);
    if (o.as_json) {
        json rows = json::array();
        for (const auto& q : reps) {
            json chi = json::object();
            for (i64 d : ds) chi[std::to_string(d)] = genus_character(make_split(D, d), q);
            rows.push_back({{"form", {q.a, q.b, q.c}},
                            {"content", content(q)},
                            {"length", num(2 * std::log(geodesic(q).epsilon))},
                            {"chi", chi}});
        }
        json j{{"schema", kSchemaVersion}, {"command", "classes"}, {"D", D}, {"class_number", reps.size()},
               {"fundamental_divisors", ds}, {"classes", rows}};
        out << j.dump(2) << "\n";
        return 0;
    }
    if (o.as_csv) {
        out << "a,b,c,content,length";
        for (i64 d : ds) out << ",chi_" << d;
        out << "\n";
    } else {
        out << "D = " << D << ", " << reps.size() << " class" << (reps.size() == 1 ? "" : "es") << "\n";
    }
    for (const auto& q : reps) {
        std::string len = format_number(2 * std::log(geodesic(q).epsilon));
        if (o.as_csv) {
            out << q.a << "," << q.b << "," << q.c << "," << content(q) << "," << len;
            for (i64 d : ds) out << "," << genus_character(make_split(D, d), q);
        } else {
            out << "  [" << q.a << ", " << q.b << ", " << q.c << "]  content " << content(q) << "  length " << len;
            for (i64 d : ds) out << "  chi_" << d << " = " << genus_character(make_split(D, d), q);
        }
        out << "\n";
    }
    return 0;
}

int cmd_salie(const Options& o, std::ostream& out, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    i64 m = o.m.value_or(1), A = o.amax.value_or(30);
    if (A < 1) throw UsageError("--amax must be >= 1");
    ClassIndex idx(sp.D);
    std::vector<int> chi;
    for (const auto& q : idx.reps()) chi.push_back(genus_character(sp, q));
    json rows = json::array();
    if (o.as_csv) out << "a,c,T,weyl_side\n";
    for (i64 a = 1; a <= A; ++a) {
        cplx t = salie_sum(sp, m, 4 * a);
        auto w = weyl_sums_by_class(idx, m, a);
        cplx rhs = 0;
        for (size_t i = 0; i < w.size(); ++i) rhs += 2.0 * double(chi[i]) * w[i];
        if (o.as_json)
            rows.push_back({{"a", a}, {"c", 4 * a}, {"T", num(t)}, {"weyl_side", num(rhs)}});
        else if (o.as_csv)
            out << a << "," << 4 * a << "," << format_number(t.real()) << "," << format_number(rhs.real()) << "\n";
        else
            out << "  c = " << 4 * a << "  T = " << format_number(t.real()) << "  2 sum chi W = "
                << format_number(rhs.real()) << "\n";
    }
    if (o.as_json) {
        json j{{"schema", kSchemaVersion}, {"command", "salie"}, {"D", sp.D}, {"d", sp.d}, {"m", m}, {"rows", rows}};
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_weyl(const Options& o, std::ostream& out)
{
    i64 D = need_D(o);
    i64 m = o.m.value_or(1), A = o.amax.value_or(30);
    if (A < 1) throw UsageError("--amax must be >= 1");
    ClassIndex idx(D);
    json rows = json::array();
    if (o.as_csv) out << "a,class,a0,b0,c0,re,im\n";
    for (i64 a = 1; a <= A; ++a) {
        auto w = weyl_sums_by_class(idx, m, a);
        for (size_t i = 0; i < w.size(); ++i) {
            const QuadForm& q = idx.reps()[i];
            if (o.as_json)
                rows.push_back({{"a", a}, {"class", {q.a, q.b, q.c}}, {"W", num(w[i])}});
            else if (o.as_csv)
                out << a << "," << i << "," << q.a << "," << q.b << "," << q.c << "," << format_number(w[i].real())
                    << "," << format_number(w[i].imag()) << "\n";
            else
                out << "  a = " << a << "  [" << q.a << ", " << q.b << ", " << q.c << "]  W = "
                    << format_number(w[i].real()) << " " << format_number(w[i].imag()) << "i\n";
        }
    }
    if (o.as_json) {
        json j{{"schema", kSchemaVersion}, {"command", "weyl"}, {"D", D}, {"m", m}, {"rows", rows}};
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_trace(const Options& o, const Config& cfg, std::ostream& out, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    int M = o.mmax.value_or(cfg.m_max);
    if (M < 0) throw UsageError("--mmax must be >= 0");
    FaberTraces ft = faber_traces(sp, M, o.tol.value_or(cfg.quad_tol));
    if (o.as_json) {
        json rows = json::array();
        for (int m = 0; m <= M; ++m) rows.push_back({{"m", m}, {"trace", num(ft.trace[m])}, {"error", num(ft.error[m])}});
        json j{{"schema", kSchemaVersion}, {"command", "trace"}, {"D", sp.D}, {"d", sp.d}, {"tr_one", num(ft.tr_one)},
               {"faber", rows}};
        out << j.dump(2) << "\n";
        return 0;
    }
    if (o.as_csv) out << "m,re,im,error\n";
    else out << "tr(1) = " << format_number(ft.tr_one) << "\n";
    for (int m = 0; m <= M; ++m) {
        if (o.as_csv)
            out << m << "," << format_number(ft.trace[m].real()) << "," << format_number(ft.trace[m].imag()) << ","
                << format_number(ft.error[m]) << "\n";
        else
            out << "  tr(j_" << m << ") = " << format_number(ft.trace[m].real()) << " "
                << format_number(ft.trace[m].imag()) << "i  +- " << format_number(ft.error[m]) << "\n";
    }
    return 0;
}

int cmd_fourier(const Options& o, const Config& cfg, std::ostream& out, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    int M = o.mmax.value_or(cfg.m_max);
    i64 A = o.amax.value_or(cfg.a_max);
    if (M < 1) throw UsageError("--mmax must be >= 1");
    FourierTable t = fourier_table(o.k, sp, M, A);
    std::optional<FourierValue> val;
    cplx tau;
    if (!o.tau.empty()) {
        tau = parse_tau(o.tau);
        if (tau.imag() <= 0) throw UsageError("tau must lie in the upper half-plane");
        val = fourier_eval(t, tau);
    }
    if (o.as_json) {
        json rows = json::array();
        for (size_t m = 0; m < t.coeffs.size(); ++m)
            rows.push_back({{"m", m}, {"c", num(t.coeffs[m])}, {"trunc_err", num(t.trunc_err[m])}});
        json j{{"schema", kSchemaVersion}, {"command", "fourier"}, {"k", t.k}, {"D", sp.D}, {"d", sp.d},
               {"a_max", t.a_max}, {"coeffs", rows}};
        if (t.k == 2) j["constant_term_times_v"] = num(t.const_times_v);
        if (val) j["eval"] = {{"tau", num(tau)}, {"value", num(val->value)}, {"tail", num(val->tail)}};
        out << j.dump(2) << "\n";
        return 0;
    }
    if (o.as_csv) out << "m,re,im,trunc_err\n";
    else out << "k = " << t.k << ", D = " << sp.D << ", d = " << sp.d << ", a_max = " << t.a_max << "\n";
    for (size_t m = 0; m < t.coeffs.size(); ++m) {
        if (o.as_csv)
            out << m << "," << format_number(t.coeffs[m].real()) << "," << format_number(t.coeffs[m].imag()) << ","
                << format_number(t.trunc_err[m]) << "\n";
        else
            out << "  c_" << m << " = " << format_number(t.coeffs[m].real()) << "  +- "
                << format_number(t.trunc_err[m]) << "\n";
    }
    if (!o.as_csv) {
        if (t.k == 2) out << "  constant term = " << format_number(t.const_times_v) << " / v\n";
        if (val)
            out << "  value at tau = " << format_number(val->value.real()) << " " << format_number(val->value.imag())
                << "i  +- " << format_number(val->tail) << "\n";
    }
    return 0;
}

VerificationReport verify_laplace(const Options& o)
{
    VerificationReport r;
    r.name = "laplace";
    i64 m = o.m.value_or(2);
    double lambda = o.lambda.value_or(1.0), tol = o.tol.value_or(1e-13);
    double v = m > 0 ? (o.k / 2.0) / (2 * std::numbers::pi * double(m)) : 0.5;
    QuadResult q = contour_cm(o.k, m, lambda, v, 0.0, tol);
    r.lhs = q.value;
    r.rhs = cplx(0, 2 * std::numbers::pi * laplace_bessel(o.k, m, lambda));
    r.budgets = {{"k", double(o.k)}, {"m", double(m)}, {"lambda", lambda}, {"v", v}, {"quad_tol", tol}};
    // the closed form vanishes exactly for m <= 0 and at zeros of the Bessel factor
    finish(r, 1e-8, 1e-12 * std::max(1.0, q.l1));
    if (std::abs(r.rhs) < 1e-12) r.tolerance = 1e-8, r.pass = r.abs_err < r.tolerance;
    return r;
}

VerificationReport verify_bridge(const Options& o, const Config& cfg, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    i64 m = o.m.value_or(1);
    int cmax = o.cmax.value_or(cfg.c_max);
    i64 A = o.amax.value_or(cfg.a_max);
    double tol = o.tol.value_or(cfg.quad_tol);
    BridgeCheck b = dit_bridge_check(sp, m, o.rho, tol, cmax, A);
    VerificationReport r;
    r.name = "bridge";
    r.lhs = b.lhs;
    r.rhs = b.rhs;
    r.budgets = {{"c_max", double(cmax)}, {"a_max", double(A)}, {"quad_tol", tol}, {"lhs_err", b.lhs_err},
                 {"rhs_err", b.rhs_err}};
    finish(r, 0.0, 1e-4);
    return r;
}

VerificationReport verify_thm_main(const Options& o, const Config& cfg, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    cplx tau = o.tau.empty() ? cplx(0, 3) : parse_tau(o.tau);
    if (tau.imag() <= 0) throw UsageError("tau must lie in the upper half-plane");
    int M = o.mmax.value_or(cfg.m_max);
    i64 A = o.amax.value_or(cfg.a_max);
    double tol = o.tol.value_or(cfg.quad_tol);
    FourierValue f = fourier_eval(2, sp, tau, 0.0, M, A);
    MainRhs rhs = rhs_theorem_main(sp, tau, M, tol);
    VerificationReport r;
    r.name = "thm-main";
    r.lhs = f.value;
    r.rhs = rhs.value;
    r.budgets = {{"m_max", double(M)}, {"a_max", double(A)}, {"quad_tol", tol}, {"fourier_tail", f.tail},
                 {"trace_err", rhs.error}};
    finish(r, 1e-3);
    return r;
}

VerificationReport verify_thm_var(const Options& o, const Config& cfg, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    cplx tau = o.tau.empty() ? cplx(0, 2) : parse_tau(o.tau);
    if (tau.imag() <= 0) throw UsageError("tau must lie in the upper half-plane");
    int M = o.mmax.value_or(std::min(cfg.m_max, 5));
    i64 A = o.amax.value_or(cfg.a_max);
    int cmax = o.cmax.value_or(cfg.c_max);
    double tol = o.tol.value_or(cfg.quad_tol);
    FourierValue f = fourier_eval(o.k, sp, tau, 0.0, M, A);
    VarRhs rhs = rhs_theorem_var(o.k, sp, tau, M, tol, cmax);
    VerificationReport r;
    r.name = "thm-var";
    r.lhs = f.value;
    r.rhs = rhs.value;
    r.budgets = {{"k", double(o.k)},    {"m_max", double(M)},   {"a_max", double(A)}, {"c_max", double(cmax)},
                 {"quad_tol", tol},     {"fourier_tail", f.tail}, {"trace_err", rhs.error}};
    finish(r, 1e-3);
    return r;
}

VerificationReport verify_salie_weyl(const Options& o, std::ostream& err)
{
    DiscriminantSplit sp = split_of(o, err);
    i64 m = o.m.value_or(1), A = o.amax.value_or(30);
    if (A < 1) throw UsageError("--amax must be >= 1");
    ClassIndex idx(sp.D);
    std::vector<int> chi;
    for (const auto& q : idx.reps()) chi.push_back(genus_character(sp, q));
    VerificationReport r;
    r.name = "salie-weyl";
    double worst = -1;
    for (i64 a = 1; a <= A; ++a) {
        cplx t = salie_sum(sp, m, 4 * a);
        auto w = weyl_sums_by_class(idx, m, a);
        cplx rhs = 0;
        for (size_t i = 0; i < w.size(); ++i) rhs += 2.0 * double(chi[i]) * w[i];
        if (std::abs(t - rhs) > worst) {
            worst = std::abs(t - rhs);
            r.lhs = t;
            r.rhs = rhs;
        }
    }
    r.budgets = {{"m", double(m)}, {"a_max", double(A)}};
    finish(r, 0.0, 1e-10);
    return r;
}

VerificationReport verify_akn(const Options& o)
{
    cplx tau = o.tau.empty() ? cplx(0, 2.1) : parse_tau(o.tau);
    cplx w = o.w.empty() ? cplx(0.2, 1.0) : parse_tau(o.w);
    int M = o.mmax.value_or(20);
    AknResult a = akn_kernel(tau, w, M);
    VerificationReport r;
    r.name = "akn";
    r.lhs = a.direct;
    r.rhs = a.series;
    r.budgets = {{"M", double(M)}, {"last_term", a.last_term}, {"N_qseries", double(default_qseries_order())}};
    finish(r, 0.0, 1e-6);
    if (!a.series_converged) r.pass = false;
    return r;
}

int cmd_verify(const Options& o, const Config& cfg, std::ostream& out, std::ostream& err)
{
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    if (o.which == "laplace")
        r = verify_laplace(o);
    else if (o.which == "bridge")
        r = verify_bridge(o, cfg, err);
    else if (o.which == "thm-main")
        r = verify_thm_main(o, cfg, err);
    else if (o.which == "thm-var")
        r = verify_thm_var(o, cfg, err);
    else if (o.which == "salie-weyl")
        r = verify_salie_weyl(o, err);
    else if (o.which == "akn")
        r = verify_akn(o);
    else
        throw UsageError("unknown check '" + o.which + "'");
    r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    print_report(r, o, out);
    return r.pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Twisted hyperbolic Eisenstein series on SL2(Z)"};
    app.require_subcommand(1);
    Options o;

    auto add_D = [&](CLI::App* c) { c->add_option("--D", o.D, "discriminant D > 0, non-square"); };
    auto add_d = [&](CLI::App* c) { c->add_option("--d", o.d, "positive fundamental discriminant dividing D"); };
    auto add_fmt = [&](CLI::App* c) {
        auto* j = c->add_flag("--json", o.as_json, "JSON output");
        auto* v = c->add_flag("--csv", o.as_csv, "CSV output");
        j->excludes(v);
    };

    auto* classes = app.add_subcommand("classes", "class representatives and genus characters");
    classes->add_option("disc", o.D, "discriminant (same as --D)");
    add_D(classes);
    add_fmt(classes);

    auto* salie = app.add_subcommand("salie", "Salie sums T_m(d, d', 4a) next to 2 sum chi W");
    add_D(salie);
    add_d(salie);
    salie->add_option("--m", o.m);
    salie->add_option("--amax", o.amax, "last a (default 30)");
    add_fmt(salie);

    auto* weyl = app.add_subcommand("weyl", "quadratic Weyl sums per class");
    add_D(weyl);
    weyl->add_option("--m", o.m);
    weyl->add_option("--amax", o.amax, "last a (default 30)");
    add_fmt(weyl);

    auto* trace = app.add_subcommand("trace", "twisted traces of j_m");
    add_D(trace);
    add_d(trace);
    trace->add_option("--mmax", o.mmax);
    trace->add_option("--tol", o.tol);
    add_fmt(trace);

    auto* fourier = app.add_subcommand("fourier", "Salie-Bessel Fourier table at s = 0");
    fourier->add_option("--k", o.k, "even weight >= 2")->default_val(4);
    add_D(fourier);
    add_d(fourier);
    fourier->add_option("--mmax", o.mmax);
    fourier->add_option("--amax", o.amax);
    fourier->add_option("--tau", o.tau, "evaluate at tau = a+bi");
    add_fmt(fourier);

    auto* verify = app.add_subcommand("verify", "run one check and print a verification report");
    verify->add_option("which", o.which, "laplace | bridge | thm-main | thm-var | salie-weyl | akn")->required();
    verify->add_option("--k", o.k)->default_val(4);
    add_D(verify);
    add_d(verify);
    verify->add_option("--m", o.m);
    verify->add_option("--mmax", o.mmax);
    verify->add_option("--amax", o.amax);
    verify->add_option("--cmax", o.cmax);
    verify->add_option("--tau", o.tau);
    verify->add_option("--w", o.w, "second point for akn");
    verify->add_option("--tol", o.tol);
    verify->add_option("--rho", o.rho)->default_val(2);
    verify->add_option("--lambda", o.lambda);
    add_fmt(verify);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        Config cfg = config_from_env();
        set_default_qseries_order(cfg.N_qseries);
        if (*classes) return cmd_classes(o, out);
        if (*salie) return cmd_salie(o, out, err);
        if (*weyl) return cmd_weyl(o, out);
        if (*trace) return cmd_trace(o, cfg, out, err);
        if (*fourier) return cmd_fourier(o, cfg, out, err);
        if (*verify) return cmd_verify(o, cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace hypeis
