#include "liouville/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "liouville/almost_period.hpp"
#include "liouville/config.hpp"
#include "liouville/counterexample.hpp"
#include "liouville/evolution.hpp"
#include "liouville/fourier.hpp"
#include "liouville/grid.hpp"
#include "liouville/rational.hpp"
#include "liouville/report.hpp"
#include "liouville/sigma.hpp"
#include "liouville/spectra.hpp"

namespace liouville {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---- config merging: explicit flags win, config fills the rest ----

void merge_double(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                  double& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = c.get_double(k);
}

void merge_long(const CLI::Option* o, const ExperimentConfig& c, const char* k, long& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = c.get_long(k);
}

void merge_int(const CLI::Option* o, const ExperimentConfig& c, const char* k, int& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = static_cast<int>(c.get_long(k));
}

void merge_unsigned(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                    unsigned& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) {
        const long raw = c.get_long(k);
        if (raw < 0) throw UsageError(std::string("config key ") + k + ": must be >= 0");
        v = static_cast<unsigned>(raw);
    }
}

void merge_string(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                  std::string& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = c.get_string(k);
}

void merge_string_list(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                       std::vector<std::string>& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = c.get_string_list(k);
}

void merge_double_list(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                       std::vector<double>& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) v = c.get_double_list(k);
}

void merge_int_list(const CLI::Option* o, const ExperimentConfig& c, const char* k,
                    std::vector<int>& v) {
    c.touch(k);
    if (o->count() == 0 && c.has(k)) {
        v.clear();
        for (long x : c.get_long_list(k)) v.push_back(static_cast<int>(x));
    }
}

// ---- shared output plumbing ----

struct CommonFlags {
    std::string config_path;
    std::string out_json;
    std::string out_csv;
    bool no_timestamp = false;

    ExperimentConfig load_config() const {
        if (config_path.empty()) return ExperimentConfig();
        return ExperimentConfig::load(config_path);
    }
};

void add_common_options(CLI::App* sub, CommonFlags& cf) {
    sub->add_option("--config", cf.config_path,
                    "key = value file; explicit flags override config values");
    sub->add_option("--out-json", cf.out_json, "write the JSON report to this path");
    sub->add_option("--out-csv", cf.out_csv, "write CSV data to this path");
    sub->add_flag("--no-timestamp", cf.no_timestamp,
                  "omit the timestamp field so identical runs emit identical bytes");
}

void reject_unknown(const ExperimentConfig& cfg) {
    const std::vector<std::string> leftover = cfg.unconsumed_keys();
    if (!leftover.empty()) {
        std::string msg = "unknown config key(s):";
        for (const std::string& k : leftover) msg += " " + k;
        throw UsageError(msg);
    }
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

ordered_json json_report(const InequalityReport& r) {
    ordered_json j;
    j["claim"] = r.claim_id;
    j["points_checked"] = r.points_checked;
    j["violation_count"] = r.violation_count;
    j["worst_margin"] = r.worst_margin;
    j["worst_point"] = r.worst_point;
    ordered_json viols = ordered_json::array();
    for (const Violation& v : r.violations) {
        ordered_json e;
        e["point"] = v.point;
        e["lhs"] = v.lhs;
        e["rhs"] = v.rhs;
        viols.push_back(e);
    }
    j["violations"] = viols;
    return j;
}

void emit_json(const CommonFlags& cf, const ordered_json& body) {
    if (cf.out_json.empty()) return;
    ordered_json root;
    if (!cf.no_timestamp) root["timestamp"] = iso_timestamp();
    for (const auto& [k, v] : body.items()) root[k] = v;
    std::ofstream out(cf.out_json);
    if (!out) throw UsageError("cannot write JSON output: " + cf.out_json);
    out << root.dump(2) << "\n";
}

void show(const InequalityReport& r) { std::cout << summary_line(r) << "\n"; }

// ---- coefficient and forcing flag groups ----

struct CoeffFlags {
    std::vector<std::string> a_terms, b_terms, c_terms;
    double period = 1.0;
    std::string preset;
    CLI::Option* o_a = nullptr;
    CLI::Option* o_b = nullptr;
    CLI::Option* o_c = nullptr;
    CLI::Option* o_period = nullptr;
    CLI::Option* o_preset = nullptr;
};

void add_coeff_options(CLI::App* sub, CoeffFlags& cf) {
    cf.o_preset = sub->add_option(
        "--preset", cf.preset,
        "coefficient preset: laplacian (a=1), damped (c=-1), cosine-well "
        "(c=-(1+cos 2 pi x)/2), cosine-drift (b=cos 2 pi x)");
    cf.o_a = sub->add_option("--a-term", cf.a_terms,
                             "diffusion term const:v | cos:k:v | sin:k:v (repeatable)");
    cf.o_b = sub->add_option("--b-term", cf.b_terms, "drift term (repeatable)");
    cf.o_c = sub->add_option("--c-term", cf.c_terms, "zero-order term (repeatable)");
    cf.o_period = sub->add_option("--period", cf.period, "cell period (default 1)");
}

CoefficientField resolve_coeffs(CoeffFlags& cf, const ExperimentConfig& cfg) {
    merge_string(cf.o_preset, cfg, "preset", cf.preset);
    merge_string_list(cf.o_a, cfg, "a-term", cf.a_terms);
    merge_string_list(cf.o_b, cfg, "b-term", cf.b_terms);
    merge_string_list(cf.o_c, cfg, "c-term", cf.c_terms);
    merge_double(cf.o_period, cfg, "period", cf.period);

    if (!cf.preset.empty() &&
        (!cf.a_terms.empty() || !cf.b_terms.empty() || !cf.c_terms.empty()))
        throw UsageError("give either --preset or explicit coefficient terms, not both");

    std::vector<std::string> a = cf.a_terms, b = cf.b_terms, c = cf.c_terms;
    if (!cf.preset.empty()) {
        if (cf.preset == "laplacian") {
            a = {"const:1"};
        } else if (cf.preset == "damped") {
            a = {"const:1"};
            c = {"const:-1"};
        } else if (cf.preset == "cosine-well") {
            a = {"const:1"};
            c = {"const:-0.5", "cos:1:-0.5"};
        } else if (cf.preset == "cosine-drift") {
            a = {"const:1"};
            b = {"cos:1:1"};
        } else {
            throw UsageError("unknown coefficient preset: " + cf.preset);
        }
    }
    if (a.empty()) a = {"const:1"};
    return CoefficientField::make(FourierSeries::parse_terms(a, cf.period),
                                  FourierSeries::parse_terms(b, cf.period),
                                  FourierSeries::parse_terms(c, cf.period));
}

struct ForcingFlags {
    std::vector<std::string> f_terms;  // space factor
    double f_offset = 1.0;
    std::vector<std::string> f_waves;  // kind:freq:amp with freq decimal or sqrt2|pi|2pi
    std::string f_preset;
    CLI::Option* o_terms = nullptr;
    CLI::Option* o_offset = nullptr;
    CLI::Option* o_waves = nullptr;
    CLI::Option* o_preset = nullptr;
};

void add_forcing_options(CLI::App* sub, ForcingFlags& ff) {
    ff.o_preset = sub->add_option(
        "--f-preset", ff.f_preset,
        "forcing preset: unit (f=1), zero (f=0), two-tone (sin t + sin sqrt2 t)");
    ff.o_terms = sub->add_option("--f-term", ff.f_terms,
                                 "space factor term const:v | cos:k:v | sin:k:v "
                                 "(repeatable; default constant 1)");
    ff.o_offset =
        sub->add_option("--f-offset", ff.f_offset, "constant part of the time factor");
    ff.o_waves = sub->add_option(
        "--f-wave", ff.f_waves,
        "time factor wave sin:freq:amp | cos:freq:amp; freq is a decimal or one of "
        "sqrt2, sqrt3, pi, 2pi (repeatable)");
}

double parse_frequency(const std::string& token) {
    if (token == "sqrt2") return std::sqrt(2.0);
    if (token == "sqrt3") return std::sqrt(3.0);
    if (token == "pi") return std::numbers::pi;
    if (token == "2pi") return 2.0 * std::numbers::pi;
    return parse_double_strict(token, "wave frequency");
}

TimeSinusoid parse_wave(const std::string& text) {
    const std::size_t p1 = text.find(':');
    const std::size_t p2 = (p1 == std::string::npos) ? std::string::npos
                                                     : text.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw UsageError("wave must be kind:freq:amp, got '" + text + "'");
    const std::string kind = text.substr(0, p1);
    TimeSinusoid w;
    if (kind == "sin")
        w.use_cos = false;
    else if (kind == "cos")
        w.use_cos = true;
    else
        throw UsageError("wave kind must be sin or cos, got '" + kind + "'");
    w.freq = parse_frequency(text.substr(p1 + 1, p2 - p1 - 1));
    w.amp = parse_double_strict(text.substr(p2 + 1), "wave amplitude");
    if (!(w.freq > 0.0)) throw UsageError("wave frequency must be positive");
    return w;
}

ForcingField resolve_forcing(ForcingFlags& ff, const ExperimentConfig& cfg,
                             double period) {
    merge_string(ff.o_preset, cfg, "f-preset", ff.f_preset);
    merge_string_list(ff.o_terms, cfg, "f-term", ff.f_terms);
    merge_double(ff.o_offset, cfg, "f-offset", ff.f_offset);
    merge_string_list(ff.o_waves, cfg, "f-wave", ff.f_waves);

    const bool explicit_parts = !ff.f_terms.empty() || !ff.f_waves.empty() ||
                                ff.o_offset->count() > 0 || cfg.has("f-offset");
    if (!ff.f_preset.empty() && explicit_parts)
        throw UsageError("give either --f-preset or explicit forcing parts, not both");

    ForcingField f;
    if (!ff.f_preset.empty()) {
        if (ff.f_preset == "unit") {
            f = ForcingField::constant(1.0, period);
        } else if (ff.f_preset == "zero") {
            f = ForcingField::constant(0.0, period);
        } else if (ff.f_preset == "two-tone") {
            f.space = FourierSeries::constant(1.0, period);
            f.offset = 0.0;
            f.waves.push_back(TimeSinusoid{1.0, 1.0, false});
            f.waves.push_back(TimeSinusoid{std::sqrt(2.0), 1.0, false});
        } else {
            throw UsageError("unknown forcing preset: " + ff.f_preset);
        }
        return f;
    }
    f.space = ff.f_terms.empty() ? FourierSeries::constant(1.0, period)
                                 : FourierSeries::parse_terms(ff.f_terms, period);
    f.offset = ff.f_offset;
    for (const std::string& w : ff.f_waves) f.waves.push_back(parse_wave(w));
    return f;
}

Scheme parse_scheme(const std::string& s) {
    if (s == "upwind") return Scheme::upwind;
    if (s == "centered") return Scheme::centered;
    throw UsageError("scheme must be upwind or centered, got '" + s + "'");
}

std::vector<double> build_initial(const std::string& kind, unsigned seed, int n) {
    std::vector<double> u0(static_cast<std::size_t>(n), 0.0);
    if (kind == "zero") return u0;
    if (kind == "ones") {
        std::fill(u0.begin(), u0.end(), 1.0);
        return u0;
    }
    if (kind == "random") {
        // raw 32-bit stream scaled to [-1, 1): independent of library
        // distribution internals, so runs reproduce across toolchains
        std::mt19937 rng(seed);
        for (double& v : u0) v = static_cast<double>(rng()) * (2.0 / 4294967296.0) - 1.0;
        return u0;
    }
    throw UsageError("initial data must be zero, ones or random, got '" + kind + "'");
}

// double-precision evaluator of b over a bounded window, for scan targets
std::function<double(double)> make_b_eval(double reach) {
    unsigned w = 1;
    while (pow3_i64(w) < static_cast<std::int64_t>(std::ceil(reach)) + 2 && w < 12) ++w;
    auto table = std::make_shared<SigmaTable>(w);
    return [table](double x) {
        const double m = std::ceil(x) - 1.0;
        const std::int64_t cell = static_cast<std::int64_t>(m);
        const double sv = table->contains_cell(cell) ? to_double(table->cell(cell)) : 0.0;
        const double t = x - std::nearbyint(x);
        return sv * 2.0 * std::abs(t);
    };
}

double z_eval(double x) {
    const double t = x - std::nearbyint(x);
    return 2.0 * std::abs(t);
}

// ---- per-subcommand parameter blocks ----

struct VerifyApproxParams {
    unsigned n = 2;
    unsigned window = 4;
    CLI::Option *o_n{}, *o_window{};
};

struct VerifyIntfParams {
    long xmax = 6561;
    CLI::Option* o_xmax{};
};

struct VerifyIntnParams {
    unsigned n = 2;
    unsigned samples = 2;
    CLI::Option *o_n{}, *o_samples{};
};

struct VerifyBLowerParams {
    std::vector<double> xs;
    CLI::Option* o_xs{};
};

struct U2SweepParams {
    double xmax = 729.0;
    double step = 0.125;
    double tol = 1e-9;
    unsigned pairs = 100;
    CLI::Option *o_xmax{}, *o_step{}, *o_tol{}, *o_pairs{};
};

struct U2BoundParams {
    double tol = 1e-8;
    CLI::Option* o_tol{};
};

struct ApScanParams {
    std::string target = "b";
    double eps = 0.0;
    double tau_lo = 0.0, tau_hi = 100.0, tau_step = 1.0;
    double window_lo = -81.0, window_hi = 81.0, sample_step = 0.125;
    double tol = 1e-9;
    double gap_bound = -1.0;  // claim only when >= 0
    CLI::Option *o_target{}, *o_eps{}, *o_tau_lo{}, *o_tau_hi{}, *o_tau_step{},
        *o_window_lo{}, *o_window_hi{}, *o_sample_step{}, *o_tol{}, *o_gap{};
};

struct ApWitnessParams {
    std::vector<double> taus;
    double tol = 1e-9;
    CLI::Option *o_taus{}, *o_tol{};
};

struct ApBochnerParams {
    std::string target = "u2";
    std::vector<double> shifts;
    double compact_lo = -2.0, compact_hi = 2.0;
    double compact_tol = 0.05, full_sep = 0.1;
    double window_lo = -300.0, window_hi = 300.0, sample_step = 0.25;
    double tol = 1e-9;
    CLI::Option *o_target{}, *o_shifts{}, *o_clo{}, *o_chi{}, *o_ctol{}, *o_sep{},
        *o_wlo{}, *o_whi{}, *o_step{}, *o_tol{};
};

struct EigenCommonParams {
    int grid = 64;
    std::string scheme = "upwind";
    double tol = 1e-10;
    long max_iter = 2000000;
    CLI::Option *o_grid{}, *o_scheme{}, *o_tol{}, *o_iter{};
};

struct ShiftCheckParams {
    // The recovered eigenvalue quantizes at the ulp of the iteration shift
    // (~1.8e-12 on the default 64-node grid), so the default identity
    // tolerance sits safely above that floor.
    double gamma = -1.0;
    double tol = 1e-11;
    CLI::Option *o_gamma{}, *o_tol{};
};

struct RefineParams {
    std::vector<int> sizes = {32, 64, 128, 256};
    double tol = 1e-9;
    double order_bound = -1.0;
    CLI::Option *o_sizes{}, *o_tol{}, *o_order{};
};

struct RelaxParams {
    int grid = 64;
    double tol = 1e-9;
    double t_max = 200.0;
    std::string u0 = "zero";
    unsigned seed = 12345;
    double fit_lo = 10.0, fit_hi = 50.0;
    std::string time_scheme = "implicit-euler";
    CLI::Option *o_grid{}, *o_tol{}, *o_tmax{}, *o_u0{}, *o_seed{}, *o_flo{}, *o_fhi{},
        *o_ts{};
};

struct PeriodicParams {
    int grid = 64;
    double period_T = 1.0;
    double tol = 1e-9;
    int cycles_max = 400;
    std::string u0 = "zero";
    unsigned seed = 12345;
    CLI::Option *o_grid{}, *o_T{}, *o_tol{}, *o_cycles{}, *o_u0{}, *o_seed{};
};

struct TruncateParams {
    std::vector<double> radii = {8.0, 16.0, 32.0, 64.0};
    int resolution = 16;
    double tol = 1e-8;
    double final_bound = 1e-6;
    CLI::Option *o_r{}, *o_res{}, *o_tol{}, *o_final{};
};

struct DecayParams {
    int grid = 64;
    int runs = 3;
    unsigned seed = 424243;
    double t_final = 50.0;
    double fit_lo = 5.0, fit_hi = 20.0;
    double rel_tol = 0.05;
    double terminal_bound = 1e-8;
    CLI::Option *o_grid{}, *o_runs{}, *o_seed{}, *o_tfinal{}, *o_flo{}, *o_fhi{},
        *o_rel{}, *o_term{};
};

struct ApForcingParams {
    int grid = 64;
    double eps = 0.05;
    double tau_max = 500.0;
    double tau_step = 0.015625;
    double tol = 1e-8;
    double gap_bound = -1.0;
    CLI::Option *o_grid{}, *o_eps{}, *o_tmax{}, *o_tstep{}, *o_tol{}, *o_gap{};
};

std::vector<std::vector<std::string>> csv_rows_from_samples(
    const std::vector<SweepSample>& samples) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(samples.size());
    for (const SweepSample& s : samples)
        rows.push_back({format_full(s.x), format_full(s.u2), format_full(s.error_estimate)});
    return rows;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{
        "Verification laboratory for a limit-periodic drift construction and "
        "periodic principal-eigenvalue experiments"};
    app.require_subcommand(1);

    int exit_code = 0;
    std::function<void()> action;

    // ---------------- verify ----------------
    auto* verify = app.add_subcommand(
        "verify", "exact-arithmetic checks of the construction's inequalities");
    verify->require_subcommand(1);
    verify->fallthrough();
    auto verify_common = std::make_shared<CommonFlags>();
    add_common_options(verify, *verify_common);

    {
        auto p = std::make_shared<VerifyApproxParams>();
        auto* sub = verify->add_subcommand(
            "sigma-approx",
            "exact sup |sigma - phi_n| over (-3^w, 3^w] against the inverse-square "
            "tail bracket, plus the |b - psi_n| <= |sigma - phi_n| transfer");
        p->o_n = sub->add_option("--n", p->n, "approximant level (period 2*3^n)");
        p->o_window = sub->add_option("--window", p->window, "window exponent w >= n");
        sub->callback([p, verify_common, &action, &exit_code] {
            action = [p, verify_common, &exit_code] {
                ExperimentConfig cfg = verify_common->load_config();
                merge_unsigned(p->o_n, cfg, "n", p->n);
                merge_unsigned(p->o_window, cfg, "window", p->window);
                reject_unknown(cfg);
                InequalityReport r = verify_approximation(p->n, p->window);
                show(r);
                const Rational sup = sup_diff_sigma_phi(p->n, p->window);
                std::cout << "[info] exact sup |sigma - phi_n| = " << sup.get_str()
                          << " ~ " << format_full(to_double(sup)) << "\n";
                ordered_json j;
                j["experiment"] = "verify sigma-approx";
                j["n"] = p->n;
                j["window"] = p->window;
                j["sup_exact"] = sup.get_str();
                j["sup_double"] = to_double(sup);
                j["report"] = json_report(r);
                emit_json(*verify_common, j);
                exit_code = r.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<VerifyIntfParams>();
        auto* sub = verify->add_subcommand(
            "integral-lower-bound",
            "exact F(m) >= m / (2 (log3 m + 1)^2) at every integer in [1, xmax]");
        p->o_xmax = sub->add_option("--xmax", p->xmax, "top of the integer scan");
        sub->callback([p, verify_common, &action, &exit_code] {
            action = [p, verify_common, &exit_code] {
                ExperimentConfig cfg = verify_common->load_config();
                merge_long(p->o_xmax, cfg, "xmax", p->xmax);
                reject_unknown(cfg);
                InequalityReport r = verify_intf(p->xmax);
                show(r);
                ordered_json j;
                j["experiment"] = "verify integral-lower-bound";
                j["xmax"] = p->xmax;
                j["report"] = json_report(r);
                emit_json(*verify_common, j);
                exit_code = r.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<VerifyIntnParams>();
        auto* sub = verify->add_subcommand(
            "intn", "exact F(y) >= y / (2 n^2) on [0, 3^n] at cell endpoints and "
                    "interior samples");
        p->o_n = sub->add_option("--n", p->n, "level n >= 1");
        p->o_samples = sub->add_option("--samples-per-cell", p->samples,
                                       "interior rational samples per cell");
        sub->callback([p, verify_common, &action, &exit_code] {
            action = [p, verify_common, &exit_code] {
                ExperimentConfig cfg = verify_common->load_config();
                merge_unsigned(p->o_n, cfg, "n", p->n);
                merge_unsigned(p->o_samples, cfg, "samples-per-cell", p->samples);
                reject_unknown(cfg);
                InequalityReport r = verify_intn(p->n, p->samples);
                show(r);
                ordered_json j;
                j["experiment"] = "verify intn";
                j["n"] = p->n;
                j["samples_per_cell"] = p->samples;
                j["report"] = json_report(r);
                emit_json(*verify_common, j);
                exit_code = r.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<VerifyBLowerParams>();
        auto* sub = verify->add_subcommand(
            "b-lower-bound",
            "exact B(x) against (x-1)/(4 (log3 x + 1)^2) - ||b||, with the norm "
            "taken both as the global bracket and as the exact window sup");
        p->o_xs = sub->add_option("--x", p->xs, "evaluation points x >= 1 (repeatable)");
        sub->callback([p, verify_common, &action, &exit_code] {
            action = [p, verify_common, &exit_code] {
                ExperimentConfig cfg = verify_common->load_config();
                merge_double_list(p->o_xs, cfg, "x", p->xs);
                reject_unknown(cfg);
                if (p->xs.empty())
                    p->xs = {1, 2, 3, 9, 27, 81, 243, 729, 2187, 6561};
                BLowerBoundReport r = verify_b_integral_lower_bound(p->xs);
                show(r.global_norm);
                show(r.window_sup);
                ordered_json j;
                j["experiment"] = "verify b-lower-bound";
                j["x"] = p->xs;
                j["global_norm"] = json_report(r.global_norm);
                j["window_sup"] = json_report(r.window_sup);
                emit_json(*verify_common, j);
                exit_code = r.passed() ? 0 : 1;
            };
        });
    }

    // ---------------- counterexample ----------------
    auto* cx = app.add_subcommand(
        "counterexample",
        "the bounded increasing non-almost-periodic solution u2 of u'' + b u' = 0");
    cx->require_subcommand(1);
    cx->fallthrough();
    auto cx_common = std::make_shared<CommonFlags>();
    add_common_options(cx, *cx_common);

    {
        auto p = std::make_shared<U2SweepParams>();
        auto* sub = cx->add_subcommand(
            "u2-sweep", "sweep u2 on [0, xmax]: strict increase, oddness at mirrored "
                        "pairs, and sup below the explicit bound");
        p->o_xmax = sub->add_option("--xmax", p->xmax, "sweep end");
        p->o_step = sub->add_option("--step", p->step, "sweep step");
        p->o_tol = sub->add_option("--tol", p->tol, "quadrature tolerance");
        p->o_pairs = sub->add_option("--pairs", p->pairs, "mirrored oddness pairs");
        sub->callback([p, cx_common, &action, &exit_code] {
            action = [p, cx_common, &exit_code] {
                ExperimentConfig cfg = cx_common->load_config();
                merge_double(p->o_xmax, cfg, "xmax", p->xmax);
                merge_double(p->o_step, cfg, "step", p->step);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_unsigned(p->o_pairs, cfg, "pairs", p->pairs);
                reject_unknown(cfg);
                SweepResult r = u2_boundedness_sweep(p->xmax, p->step, p->tol, p->pairs);
                show(r.report);
                std::cout << "[info] max u2 = " << format_full(r.max_u2)
                          << ", upper bound = " << format_full(r.upper_bound) << "\n";
                if (!cx_common->out_csv.empty())
                    write_csv(cx_common->out_csv, {"x", "u2", "error_estimate"},
                              csv_rows_from_samples(r.samples));
                ordered_json j;
                j["experiment"] = "counterexample u2-sweep";
                j["xmax"] = p->xmax;
                j["step"] = p->step;
                j["tol"] = p->tol;
                j["pairs"] = p->pairs;
                j["max_u2"] = r.max_u2;
                j["upper_bound"] = r.upper_bound;
                j["report"] = json_report(r.report);
                emit_json(*cx_common, j);
                exit_code = r.report.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<U2BoundParams>();
        auto* sub = cx->add_subcommand(
            "u2-bound", "the explicit finite upper bound for sup u2 (1 on [0,1] plus "
                        "the certified truncation of the tail integral)");
        p->o_tol = sub->add_option("--tol", p->tol, "remainder certification tolerance");
        sub->callback([p, cx_common, &action, &exit_code] {
            action = [p, cx_common, &exit_code] {
                ExperimentConfig cfg = cx_common->load_config();
                merge_double(p->o_tol, cfg, "tol", p->tol);
                reject_unknown(cfg);
                const double bound = u2_upper_bound(p->tol);
                std::cout << "[info] sup u2 upper bound = " << format_full(bound)
                          << " (tol " << format_full(p->tol) << ")\n";
                ordered_json j;
                j["experiment"] = "counterexample u2-bound";
                j["tol"] = p->tol;
                j["upper_bound"] = bound;
                emit_json(*cx_common, j);
                exit_code = 0;
            };
        });
    }

    // ---------------- ap ----------------
    auto* ap = app.add_subcommand(
        "ap", "Bohr translation-number scanning and Bochner precompactness probes");
    ap->require_subcommand(1);
    ap->fallthrough();
    auto ap_common = std::make_shared<CommonFlags>();
    add_common_options(ap, *ap_common);

    {
        auto p = std::make_shared<ApScanParams>();
        auto* sub = ap->add_subcommand(
            "scan", "list eps-almost periods of a target function over a tau range "
                    "and report the largest gap (relative density probe)");
        p->o_target = sub->add_option("--target", p->target, "b | z | u2");
        p->o_eps = sub->add_option("--eps", p->eps, "translation threshold")->required();
        p->o_tau_lo = sub->add_option("--tau-lo", p->tau_lo, "scan start");
        p->o_tau_hi = sub->add_option("--tau-hi", p->tau_hi, "scan end");
        p->o_tau_step = sub->add_option("--tau-step", p->tau_step, "scan step");
        p->o_window_lo = sub->add_option("--window-lo", p->window_lo, "sampling window lo");
        p->o_window_hi = sub->add_option("--window-hi", p->window_hi, "sampling window hi");
        p->o_sample_step = sub->add_option("--sample-step", p->sample_step,
                                           "sampling grid step");
        p->o_tol = sub->add_option("--tol", p->tol, "u2 quadrature tolerance");
        p->o_gap = sub->add_option("--gap-bound", p->gap_bound,
                                   "when set, claim max gap <= this bound");
        sub->callback([p, ap_common, &action, &exit_code] {
            action = [p, ap_common, &exit_code] {
                ExperimentConfig cfg = ap_common->load_config();
                merge_string(p->o_target, cfg, "target", p->target);
                merge_double(p->o_eps, cfg, "eps", p->eps);
                merge_double(p->o_tau_lo, cfg, "tau-lo", p->tau_lo);
                merge_double(p->o_tau_hi, cfg, "tau-hi", p->tau_hi);
                merge_double(p->o_tau_step, cfg, "tau-step", p->tau_step);
                merge_double(p->o_window_lo, cfg, "window-lo", p->window_lo);
                merge_double(p->o_window_hi, cfg, "window-hi", p->window_hi);
                merge_double(p->o_sample_step, cfg, "sample-step", p->sample_step);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_double(p->o_gap, cfg, "gap-bound", p->gap_bound);
                reject_unknown(cfg);

                SampledFunction f;
                f.window_lo = p->window_lo;
                f.window_hi = p->window_hi;
                f.step = p->sample_step;
                if (p->target == "b") {
                    f.eval = make_b_eval(
                        std::max(std::abs(p->window_lo), std::abs(p->window_hi)) +
                        std::abs(p->tau_hi) + 1.0);
                    f.half_integer_kinks = true;
                } else if (p->target == "z") {
                    f.eval = [](double x) { return z_eval(x); };
                    f.half_integer_kinks = true;
                } else if (p->target == "u2") {
                    auto ev = std::make_shared<U2Evaluator>();
                    const double tol = p->tol;
                    f.eval = [ev, tol](double x) { return ev->value_at(x, tol).value; };
                    f.half_integer_kinks = false;
                } else {
                    throw UsageError("scan target must be b, z or u2");
                }
                AlmostPeriodReport r =
                    scan_almost_periods(f, p->eps, p->tau_lo, p->tau_hi, p->tau_step);
                std::cout << "[info] found " << r.taus_found.size()
                          << " almost periods, max gap " << format_full(r.max_gap)
                          << " over [" << format_full(p->tau_lo) << ", "
                          << format_full(p->tau_hi) << "]\n";
                InequalityReport gap_claim;
                gap_claim.claim_id = "largest almost-period gap within the stated bound";
                if (p->gap_bound >= 0.0) {
                    gap_claim.record(p->tau_hi, p->gap_bound, r.max_gap);
                    show(gap_claim);
                }
                if (!ap_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (double t : r.taus_found) rows.push_back({format_full(t)});
                    write_csv(ap_common->out_csv, {"tau"}, rows);
                }
                ordered_json j;
                j["experiment"] = "ap scan";
                j["target"] = p->target;
                j["eps"] = p->eps;
                j["tau_lo"] = p->tau_lo;
                j["tau_hi"] = p->tau_hi;
                j["tau_step"] = p->tau_step;
                j["taus_found"] = r.taus_found;
                j["max_gap"] = r.max_gap;
                if (p->gap_bound >= 0.0) j["gap_claim"] = json_report(gap_claim);
                emit_json(*ap_common, j);
                exit_code = (p->gap_bound >= 0.0 && !gap_claim.passed()) ? 1 : 0;
            };
        });
    }

    {
        auto p = std::make_shared<ApWitnessParams>();
        auto* sub = ap->add_subcommand(
            "witness", "the quantitative no-almost-period witness for u2: "
                       "2 u2(tau/2) >= 2 u2(1/2) for every tau >= 1");
        p->o_taus = sub->add_option("--tau", p->taus, "witness shifts (repeatable)");
        p->o_tol = sub->add_option("--tol", p->tol, "quadrature tolerance");
        sub->callback([p, ap_common, &action, &exit_code] {
            action = [p, ap_common, &exit_code] {
                ExperimentConfig cfg = ap_common->load_config();
                merge_double_list(p->o_taus, cfg, "tau", p->taus);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                reject_unknown(cfg);
                if (p->taus.empty()) p->taus = {1, 3, 9, 27, 81, 243};
                U2Evaluator u2;
                InequalityReport r = non_ap_witness_u2(u2, p->taus, p->tol);
                show(r);
                ordered_json j;
                j["experiment"] = "ap witness";
                j["tau"] = p->taus;
                j["tol"] = p->tol;
                j["report"] = json_report(r);
                emit_json(*ap_common, j);
                exit_code = r.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<ApBochnerParams>();
        auto* sub = ap->add_subcommand(
            "bochner", "pairwise translate distances over a compact window versus "
                       "the full window; flags local convergence without uniform");
        p->o_target = sub->add_option("--target", p->target, "b | u2");
        p->o_shifts = sub->add_option("--shift", p->shifts, "translates (repeatable)");
        p->o_clo = sub->add_option("--compact-lo", p->compact_lo, "compact window lo");
        p->o_chi = sub->add_option("--compact-hi", p->compact_hi, "compact window hi");
        p->o_ctol = sub->add_option("--compact-tol", p->compact_tol,
                                    "closeness threshold on the compact window");
        p->o_sep = sub->add_option("--full-sep", p->full_sep,
                                   "separation threshold on the full window");
        p->o_wlo = sub->add_option("--window-lo", p->window_lo, "sampling window lo");
        p->o_whi = sub->add_option("--window-hi", p->window_hi, "sampling window hi");
        p->o_step = sub->add_option("--sample-step", p->sample_step, "sampling step");
        p->o_tol = sub->add_option("--tol", p->tol, "u2 quadrature tolerance");
        sub->callback([p, ap_common, &action, &exit_code] {
            action = [p, ap_common, &exit_code] {
                ExperimentConfig cfg = ap_common->load_config();
                merge_string(p->o_target, cfg, "target", p->target);
                merge_double_list(p->o_shifts, cfg, "shift", p->shifts);
                merge_double(p->o_clo, cfg, "compact-lo", p->compact_lo);
                merge_double(p->o_chi, cfg, "compact-hi", p->compact_hi);
                merge_double(p->o_ctol, cfg, "compact-tol", p->compact_tol);
                merge_double(p->o_sep, cfg, "full-sep", p->full_sep);
                merge_double(p->o_wlo, cfg, "window-lo", p->window_lo);
                merge_double(p->o_whi, cfg, "window-hi", p->window_hi);
                merge_double(p->o_step, cfg, "sample-step", p->sample_step);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                reject_unknown(cfg);
                if (p->shifts.empty()) p->shifts = {-3, -9, -27, -81};

                SampledFunction f;
                f.window_lo = p->window_lo;
                f.window_hi = p->window_hi;
                f.step = p->sample_step;
                if (p->target == "b") {
                    double reach = std::max(std::abs(p->window_lo), std::abs(p->window_hi));
                    for (double s : p->shifts) reach += std::abs(s);
                    f.eval = make_b_eval(reach + 1.0);
                    f.half_integer_kinks = true;
                } else if (p->target == "u2") {
                    auto ev = std::make_shared<U2Evaluator>();
                    const double tol = p->tol;
                    f.eval = [ev, tol](double x) { return ev->value_at(x, tol).value; };
                } else {
                    throw UsageError("bochner target must be b or u2");
                }
                BochnerReport r = bochner_probe(f, p->shifts, p->compact_lo,
                                                p->compact_hi, p->compact_tol,
                                                p->full_sep);
                std::cout << "[info] min compact distance = "
                          << format_full(r.min_compact) << ", full distance there = "
                          << format_full(r.full_at_min_compact) << "\n";
                std::cout << (r.local_convergence_without_uniform
                                  ? "[info] translates converge locally but separate "
                                    "on the full window\n"
                                  : "[info] no local-vs-uniform separation detected\n");
                if (!ap_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (const BochnerPairDistance& d : r.pairs)
                        rows.push_back({format_full(p->shifts[d.i]),
                                        format_full(p->shifts[d.j]),
                                        format_full(d.compact), format_full(d.full)});
                    write_csv(ap_common->out_csv,
                              {"shift_i", "shift_j", "compact", "full"}, rows);
                }
                ordered_json j;
                j["experiment"] = "ap bochner";
                j["target"] = p->target;
                j["shifts"] = p->shifts;
                j["min_compact"] = r.min_compact;
                j["full_at_min_compact"] = r.full_at_min_compact;
                j["local_convergence_without_uniform"] =
                    r.local_convergence_without_uniform;
                emit_json(*ap_common, j);
                exit_code = 0;
            };
        });
    }

    // ---------------- eigen ----------------
    auto* eigen = app.add_subcommand(
        "eigen", "periodic principal eigenpair of -(a u'' + b u' + c u)");
    eigen->fallthrough();
    auto eigen_common = std::make_shared<CommonFlags>();
    add_common_options(eigen, *eigen_common);
    auto eigen_coeffs = std::make_shared<CoeffFlags>();
    add_coeff_options(eigen, *eigen_coeffs);
    auto eig_p = std::make_shared<EigenCommonParams>();
    eig_p->o_grid = eigen->add_option("--grid", eig_p->grid, "torus nodes");
    eig_p->o_scheme = eigen->add_option("--scheme", eig_p->scheme, "upwind | centered");
    eig_p->o_tol = eigen->add_option("--tol", eig_p->tol, "eigenvalue tolerance");
    eig_p->o_iter = eigen->add_option("--max-iter", eig_p->max_iter, "iteration cap");

    auto run_eigen_solve = [eig_p, eigen_coeffs, eigen_common, &exit_code] {
        ExperimentConfig cfg = eigen_common->load_config();
        merge_int(eig_p->o_grid, cfg, "grid", eig_p->grid);
        merge_string(eig_p->o_scheme, cfg, "scheme", eig_p->scheme);
        merge_double(eig_p->o_tol, cfg, "tol", eig_p->tol);
        merge_long(eig_p->o_iter, cfg, "max-iter", eig_p->max_iter);
        CoefficientField coeffs = resolve_coeffs(*eigen_coeffs, cfg);
        reject_unknown(cfg);

        TorusGrid grid(eig_p->grid, coeffs.period);
        DiscreteOperator op = discretize(coeffs, grid, parse_scheme(eig_p->scheme));
        if (op.peclet_warning)
            std::cout << "[warn] centered scheme with cell Peclet >= 2: positivity of "
                         "the eigenvector is not guaranteed\n";
        EigenPair e = principal_eigenpair(op, eig_p->tol,
                                          static_cast<int>(eig_p->max_iter));
        std::cout << "[info] lambda_p = " << format_full(e.lambda_p) << " (residual "
                  << format_full(e.residual) << ", iterations " << e.iterations
                  << ", bracket " << format_full(e.bracket_width) << ")\n";
        InequalityReport r;
        r.claim_id = "eigen residual within 10x the eigenvalue tolerance";
        r.record(0.0, 10.0 * eig_p->tol, e.residual);
        show(r);
        if (!eigen_common->out_csv.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (int i = 0; i < grid.n; ++i)
                rows.push_back({std::to_string(i), format_full(grid.node(i)),
                                format_full(e.phi_p[static_cast<std::size_t>(i)])});
            write_csv(eigen_common->out_csv, {"node", "x", "phi"}, rows);
        }
        ordered_json j;
        j["experiment"] = "eigen solve";
        j["grid"] = eig_p->grid;
        j["scheme"] = eig_p->scheme;
        j["tol"] = eig_p->tol;
        j["lambda_p"] = e.lambda_p;
        j["residual"] = e.residual;
        j["iterations"] = e.iterations;
        j["bracket_width"] = e.bracket_width;
        j["peclet_warning"] = op.peclet_warning;
        emit_json(*eigen_common, j);
        exit_code = r.passed() ? 0 : 1;
    };

    auto* eigen_solve = eigen->add_subcommand("solve", "compute the eigenpair "
                                                       "(also the default action)");
    eigen_solve->callback([run_eigen_solve, &action] { action = run_eigen_solve; });

    {
        auto p = std::make_shared<ShiftCheckParams>();
        auto* sub = eigen->add_subcommand(
            "shift-check", "diagonal shift identity lambda_p(c + gamma) = "
                           "lambda_p(c) - gamma, plus positivity when c <= 0, c != 0");
        p->o_gamma = sub->add_option("--gamma", p->gamma, "diagonal shift");
        p->o_tol = sub->add_option("--tol", p->tol, "identity tolerance");
        sub->callback([p, eig_p, eigen_coeffs, eigen_common, &action, &exit_code] {
            action = [p, eig_p, eigen_coeffs, eigen_common, &exit_code] {
                ExperimentConfig cfg = eigen_common->load_config();
                merge_int(eig_p->o_grid, cfg, "grid", eig_p->grid);
                merge_double(p->o_gamma, cfg, "gamma", p->gamma);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                CoefficientField coeffs = resolve_coeffs(*eigen_coeffs, cfg);
                reject_unknown(cfg);
                TorusGrid grid(eig_p->grid, coeffs.period);
                ShiftCheckReport r = shift_invariance_check(coeffs, p->gamma, grid, p->tol);
                std::cout << "[info] lambda_p(c) = " << format_full(r.lambda_base)
                          << ", lambda_p(c + gamma) = " << format_full(r.lambda_shifted)
                          << ", identity error = " << format_full(r.identity_error)
                          << "\n";
                show(r.report);
                ordered_json j;
                j["experiment"] = "eigen shift-check";
                j["grid"] = eig_p->grid;
                j["gamma"] = p->gamma;
                j["tol"] = p->tol;
                j["lambda_base"] = r.lambda_base;
                j["lambda_shifted"] = r.lambda_shifted;
                j["identity_error"] = r.identity_error;
                j["c_nonpositive"] = r.c_nonpositive;
                j["c_not_identically_zero"] = r.c_not_identically_zero;
                j["report"] = json_report(r.report);
                emit_json(*eigen_common, j);
                exit_code = r.report.passed() ? 0 : 1;
            };
        });
    }

    {
        auto p = std::make_shared<RefineParams>();
        auto* sub = eigen->add_subcommand(
            "refine", "lambda_p across increasing grids with empirical order from "
                      "successive differences");
        p->o_sizes = sub->add_option("--size", p->sizes, "grid sizes (repeatable)");
        p->o_tol = sub->add_option("--tol", p->tol, "eigenvalue tolerance");
        p->o_order = sub->add_option("--order-bound", p->order_bound,
                                     "when set, claim final observed order >= bound");
        sub->callback([p, eig_p, eigen_coeffs, eigen_common, &action, &exit_code] {
            action = [p, eig_p, eigen_coeffs, eigen_common, &exit_code] {
                ExperimentConfig cfg = eigen_common->load_config();
                merge_int_list(p->o_sizes, cfg, "size", p->sizes);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_double(p->o_order, cfg, "order-bound", p->order_bound);
                merge_string(eig_p->o_scheme, cfg, "scheme", eig_p->scheme);
                CoefficientField coeffs = resolve_coeffs(*eigen_coeffs, cfg);
                reject_unknown(cfg);
                std::vector<RefinementRow> rows = refinement_study(
                    coeffs, p->sizes, p->tol, parse_scheme(eig_p->scheme));
                for (const RefinementRow& r : rows)
                    std::cout << "[info] n = " << r.n
                              << ", lambda_p = " << format_full(r.lambda)
                              << ", diff = " << format_full(r.diff_prev)
                              << ", order = " << format_full(r.observed_order) << "\n";
                InequalityReport claim;
                claim.claim_id = "observed refinement order meets the stated bound";
                if (p->order_bound >= 0.0 && rows.size() >= 3) {
                    claim.record(rows.back().n, rows.back().observed_order,
                                 p->order_bound);
                    show(claim);
                }
                if (!eigen_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> csv;
                    for (const RefinementRow& r : rows)
                        csv.push_back({std::to_string(r.n), format_full(r.lambda),
                                       format_full(r.diff_prev),
                                       format_full(r.observed_order)});
                    write_csv(eigen_common->out_csv, {"n", "lambda_p", "diff", "order"},
                              csv);
                }
                ordered_json j;
                j["experiment"] = "eigen refine";
                j["scheme"] = eig_p->scheme;
                j["tol"] = p->tol;
                ordered_json table = ordered_json::array();
                for (const RefinementRow& r : rows) {
                    ordered_json row;
                    row["n"] = r.n;
                    row["lambda_p"] = r.lambda;
                    row["diff"] = r.diff_prev;
                    row["order"] = r.observed_order;
                    table.push_back(row);
                }
                j["table"] = table;
                emit_json(*eigen_common, j);
                exit_code =
                    (p->order_bound >= 0.0 && !claim.passed()) ? 1 : 0;
            };
        });
    }

    // ---------------- entire ----------------
    auto* entire = app.add_subcommand(
        "entire", "time-stepping experiments: relaxation, truncation, decay, and "
                  "the almost periodic forcing response");
    entire->require_subcommand(1);
    entire->fallthrough();
    auto entire_common = std::make_shared<CommonFlags>();
    add_common_options(entire, *entire_common);
    auto entire_coeffs = std::make_shared<CoeffFlags>();
    add_coeff_options(entire, *entire_coeffs);
    auto entire_forcing = std::make_shared<ForcingFlags>();
    add_forcing_options(entire, *entire_forcing);

    {
        auto p = std::make_shared<RelaxParams>();
        auto* sub = entire->add_subcommand(
            "relax", "step a time-independent problem to its stationary state; "
                     "non-convergence (exit 3) is expected when lambda_p = 0 and the "
                     "forcing has nonzero mean");
        p->o_grid = sub->add_option("--grid", p->grid, "torus nodes");
        p->o_tol = sub->add_option("--tol", p->tol, "unit-time difference tolerance");
        p->o_tmax = sub->add_option("--t-max", p->t_max, "time horizon");
        p->o_u0 = sub->add_option("--u0", p->u0, "initial data: zero | ones | random");
        p->o_seed = sub->add_option("--seed", p->seed, "random initial data seed");
        p->o_flo = sub->add_option("--fit-lo", p->fit_lo, "mean-slope window start");
        p->o_fhi = sub->add_option("--fit-hi", p->fit_hi, "mean-slope window end");
        p->o_ts = sub->add_option("--time-scheme", p->time_scheme,
                                  "implicit-euler | crank-nicolson");
        sub->callback([p, entire_coeffs, entire_forcing, entire_common, &action,
                       &exit_code] {
            action = [p, entire_coeffs, entire_forcing, entire_common, &exit_code] {
                ExperimentConfig cfg = entire_common->load_config();
                merge_int(p->o_grid, cfg, "grid", p->grid);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_double(p->o_tmax, cfg, "t-max", p->t_max);
                merge_string(p->o_u0, cfg, "u0", p->u0);
                merge_unsigned(p->o_seed, cfg, "seed", p->seed);
                merge_double(p->o_flo, cfg, "fit-lo", p->fit_lo);
                merge_double(p->o_fhi, cfg, "fit-hi", p->fit_hi);
                merge_string(p->o_ts, cfg, "time-scheme", p->time_scheme);
                CoefficientField coeffs = resolve_coeffs(*entire_coeffs, cfg);
                ForcingField f = resolve_forcing(*entire_forcing, cfg, coeffs.period);
                reject_unknown(cfg);

                TimeScheme ts;
                if (p->time_scheme == "implicit-euler")
                    ts = TimeScheme::implicit_euler;
                else if (p->time_scheme == "crank-nicolson")
                    ts = TimeScheme::crank_nicolson;
                else
                    throw UsageError("time scheme must be implicit-euler or "
                                     "crank-nicolson");

                TorusGrid grid(p->grid, coeffs.period);
                DiscreteOperator op = discretize(coeffs, grid);
                bool c_nonpos = true;
                for (double cv : op.c_values)
                    if (cv > 0.0) c_nonpos = false;
                double hint = std::numeric_limits<double>::quiet_NaN();
                if (!c_nonpos)
                    hint = principal_eigenpair(op, 1e-10, 4000000).lambda_p;
                RelaxResult r = relax_to_stationary(op, f, build_initial(p->u0, p->seed,
                                                                         p->grid),
                                                    p->tol, p->t_max, hint, p->fit_lo,
                                                    p->fit_hi, ts);
                std::cout << (r.converged ? "[info] converged" : "[info] NOT converged")
                          << ": last unit-time diff = " << format_full(r.last_diff)
                          << ", residual = " << format_full(r.residual)
                          << ", mean slope = " << format_full(r.mean_slope) << "\n";
                if (!entire_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (std::size_t k = 0; k < r.mean_times.size(); ++k)
                        rows.push_back({format_full(r.mean_times[k]),
                                        format_full(r.mean_values[k])});
                    write_csv(entire_common->out_csv, {"t", "mean"}, rows);
                }
                ordered_json j;
                j["experiment"] = "entire relax";
                j["grid"] = p->grid;
                j["tol"] = p->tol;
                j["t_max"] = p->t_max;
                j["converged"] = r.converged;
                j["last_diff"] = r.last_diff;
                j["residual"] = r.residual;
                j["mean_slope"] = r.mean_slope;
                emit_json(*entire_common, j);
                exit_code = r.converged ? 0 : 3;
            };
        });
    }

    {
        auto p = std::make_shared<PeriodicParams>();
        auto* sub = entire->add_subcommand(
            "periodic", "iterate the period map of a time-periodic forcing to its "
                        "attracting periodic orbit (lambda_p > 0 required)");
        p->o_grid = sub->add_option("--grid", p->grid, "torus nodes");
        p->o_T = sub->add_option("--period-T", p->period_T, "forcing time period");
        p->o_tol = sub->add_option("--tol", p->tol, "period-map tolerance");
        p->o_cycles = sub->add_option("--cycles-max", p->cycles_max, "cycle cap");
        p->o_u0 = sub->add_option("--u0", p->u0, "initial data: zero | ones | random");
        p->o_seed = sub->add_option("--seed", p->seed, "random initial data seed");
        sub->callback([p, entire_coeffs, entire_forcing, entire_common, &action,
                       &exit_code] {
            action = [p, entire_coeffs, entire_forcing, entire_common, &exit_code] {
                ExperimentConfig cfg = entire_common->load_config();
                merge_int(p->o_grid, cfg, "grid", p->grid);
                merge_double(p->o_T, cfg, "period-T", p->period_T);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_int(p->o_cycles, cfg, "cycles-max", p->cycles_max);
                merge_string(p->o_u0, cfg, "u0", p->u0);
                merge_unsigned(p->o_seed, cfg, "seed", p->seed);
                CoefficientField coeffs = resolve_coeffs(*entire_coeffs, cfg);
                ForcingField f = resolve_forcing(*entire_forcing, cfg, coeffs.period);
                reject_unknown(cfg);

                TorusGrid grid(p->grid, coeffs.period);
                DiscreteOperator op = discretize(coeffs, grid);
                const EigenPair e = principal_eigenpair(op, 1e-10, 4000000);
                PeriodicOrbitResult r = relax_to_time_periodic(
                    op, f, p->period_T, build_initial(p->u0, p->seed, p->grid), p->tol,
                    p->cycles_max, grid.h(), e.lambda_p);
                std::cout << "[info] converged after " << r.cycles
                          << " cycles; orbit closure = " << format_full(r.closure_error)
                          << ", worst late contraction ratio = "
                          << format_full(r.contraction_ratio_max) << "\n";
                if (!entire_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (std::size_t k = 0; k < r.cycle_diffs.size(); ++k)
                        rows.push_back({std::to_string(k + 1),
                                        format_full(r.cycle_diffs[k])});
                    write_csv(entire_common->out_csv, {"cycle", "diff"}, rows);
                }
                ordered_json j;
                j["experiment"] = "entire periodic";
                j["grid"] = p->grid;
                j["period_T"] = p->period_T;
                j["tol"] = p->tol;
                j["lambda_p"] = e.lambda_p;
                j["cycles"] = r.cycles;
                j["closure_error"] = r.closure_error;
                j["contraction_ratio_max"] = r.contraction_ratio_max;
                emit_json(*entire_common, j);
                exit_code = 0;
            };
        });
    }

    {
        auto p = std::make_shared<TruncateParams>();
        auto* sub = entire->add_subcommand(
            "truncate", "zero-data Dirichlet problems on expanding intervals; core "
                        "convergence plus the supersolution domination bound");
        p->o_r = sub->add_option("--r", p->radii, "interval radii (repeatable)");
        p->o_res = sub->add_option("--resolution", p->resolution, "nodes per period");
        p->o_tol = sub->add_option("--tol", p->tol, "transient depth tolerance");
        p->o_final = sub->add_option("--final-bound", p->final_bound,
                                     "claimed bound for the last core difference");
        sub->callback([p, entire_coeffs, entire_forcing, entire_common, &action,
                       &exit_code] {
            action = [p, entire_coeffs, entire_forcing, entire_common, &exit_code] {
                ExperimentConfig cfg = entire_common->load_config();
                merge_double_list(p->o_r, cfg, "r", p->radii);
                merge_int(p->o_res, cfg, "resolution", p->resolution);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_double(p->o_final, cfg, "final-bound", p->final_bound);
                CoefficientField coeffs = resolve_coeffs(*entire_coeffs, cfg);
                ForcingField f = resolve_forcing(*entire_forcing, cfg, coeffs.period);
                reject_unknown(cfg);

                TruncationResult r =
                    dirichlet_truncation(coeffs, f, p->radii, p->resolution, p->tol);
                std::cout << "[info] lambda_p = " << format_full(r.lambda_p)
                          << ", supersolution factor = " << format_full(r.factor)
                          << ", t_final = " << format_full(r.t_final) << "\n";
                for (std::size_t k = 0; k < r.successive_diffs.size(); ++k)
                    std::cout << "[info] core diff r=" << format_full(r.r_values[k])
                              << " -> r=" << format_full(r.r_values[k + 1]) << " : "
                              << format_full(r.successive_diffs[k]) << "\n";
                InequalityReport final_claim;
                final_claim.claim_id = "last core difference within the stated bound";
                final_claim.record(r.r_values.back(), p->final_bound,
                                   r.successive_diffs.back());
                show(r.domination);
                show(r.diffs_decreasing);
                show(final_claim);
                if (!entire_common->out_csv.empty()) {
                    std::vector<std::string> header = {"x"};
                    for (double rr : r.r_values)
                        header.push_back("u_r" + format_full(rr));
                    std::vector<std::vector<std::string>> rows;
                    for (std::size_t jn = 0; jn < r.core_nodes.size(); ++jn) {
                        std::vector<std::string> row = {format_full(r.core_nodes[jn])};
                        for (const auto& cv : r.core_values)
                            row.push_back(format_full(cv[jn]));
                        rows.push_back(row);
                    }
                    write_csv(entire_common->out_csv, header, rows);
                }
                ordered_json j;
                j["experiment"] = "entire truncate";
                j["r"] = r.r_values;
                j["resolution"] = p->resolution;
                j["lambda_p"] = r.lambda_p;
                j["factor"] = r.factor;
                j["t_final"] = r.t_final;
                j["successive_diffs"] = r.successive_diffs;
                j["domination_slack"] = r.domination_slack;
                j["domination"] = json_report(r.domination);
                j["diffs_decreasing"] = json_report(r.diffs_decreasing);
                j["final_claim"] = json_report(final_claim);
                emit_json(*entire_common, j);
                exit_code = (r.domination.passed() && r.diffs_decreasing.passed() &&
                             final_claim.passed())
                                ? 0
                                : 1;
            };
        });
    }

    {
        auto p = std::make_shared<DecayParams>();
        auto* sub = entire->add_subcommand(
            "decay", "homogeneous decay from random bounded data; the fitted rate "
                     "must match lambda_p (c <= 0, c not identically 0)");
        p->o_grid = sub->add_option("--grid", p->grid, "torus nodes");
        p->o_runs = sub->add_option("--runs", p->runs, "number of initial data");
        p->o_seed = sub->add_option("--seed", p->seed, "seed for the initial data");
        p->o_tfinal = sub->add_option("--t-final", p->t_final, "terminal time");
        p->o_flo = sub->add_option("--fit-lo", p->fit_lo, "rate fit window start");
        p->o_fhi = sub->add_option("--fit-hi", p->fit_hi, "rate fit window end");
        p->o_rel = sub->add_option("--rel-tol", p->rel_tol,
                                   "allowed relative rate mismatch");
        p->o_term = sub->add_option("--terminal-bound", p->terminal_bound,
                                    "claimed bound for the terminal sup norm");
        sub->callback([p, entire_coeffs, entire_common, &action, &exit_code] {
            action = [p, entire_coeffs, entire_common, &exit_code] {
                ExperimentConfig cfg = entire_common->load_config();
                merge_int(p->o_grid, cfg, "grid", p->grid);
                merge_int(p->o_runs, cfg, "runs", p->runs);
                merge_unsigned(p->o_seed, cfg, "seed", p->seed);
                merge_double(p->o_tfinal, cfg, "t-final", p->t_final);
                merge_double(p->o_flo, cfg, "fit-lo", p->fit_lo);
                merge_double(p->o_fhi, cfg, "fit-hi", p->fit_hi);
                merge_double(p->o_rel, cfg, "rel-tol", p->rel_tol);
                merge_double(p->o_term, cfg, "terminal-bound", p->terminal_bound);
                CoefficientField coeffs = resolve_coeffs(*entire_coeffs, cfg);
                reject_unknown(cfg);

                if (entire_coeffs->preset.empty() && entire_coeffs->c_terms.empty())
                    throw UsageError(
                        "decay needs c <= 0 with c not identically 0: pass --preset or "
                        "--c-term");
                TorusGrid grid(p->grid, coeffs.period);
                DecayReport r = liouville_decay(coeffs, grid, p->runs, p->seed,
                                                p->t_final, p->fit_lo, p->fit_hi,
                                                p->rel_tol);
                std::cout << "[info] lambda_p = " << format_full(r.lambda_p) << "\n";
                InequalityReport terminal;
                terminal.claim_id = "terminal sup norm within the stated bound";
                for (std::size_t k = 0; k < r.rates.size(); ++k) {
                    std::cout << "[info] run " << k << ": rate = "
                              << format_full(r.rates[k]) << ", terminal sup = "
                              << format_full(r.terminal_sup[k]) << "\n";
                    terminal.record(static_cast<double>(k), p->terminal_bound,
                                    r.terminal_sup[k]);
                }
                InequalityReport maxp;
                maxp.claim_id = "sup norm nonincreasing at every step";
                maxp.record(0.0, r.max_principle_ok ? 1.0 : -1.0, 0.0);
                show(r.rate_within);
                show(terminal);
                show(maxp);
                if (!entire_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (std::size_t k = 0; k < r.rates.size(); ++k)
                        rows.push_back({std::to_string(k), format_full(r.rates[k]),
                                        format_full(r.terminal_sup[k])});
                    write_csv(entire_common->out_csv, {"run", "rate", "terminal_sup"},
                              rows);
                }
                ordered_json j;
                j["experiment"] = "entire decay";
                j["grid"] = p->grid;
                j["lambda_p"] = r.lambda_p;
                j["rates"] = r.rates;
                j["terminal_sup"] = r.terminal_sup;
                j["max_principle_ok"] = r.max_principle_ok;
                j["rate_report"] = json_report(r.rate_within);
                j["terminal_report"] = json_report(terminal);
                emit_json(*entire_common, j);
                exit_code = (r.rate_within.passed() && terminal.passed() &&
                             r.max_principle_ok)
                                ? 0
                                : 1;
            };
        });
    }

    {
        auto p = std::make_shared<ApForcingParams>();
        auto* sub = entire->add_subcommand(
            "ap-forcing", "response to almost periodic time forcing: boundedness, "
                          "almost periods near the predicted combinations, and the "
                          "gap structure of the tau scan");
        p->o_grid = sub->add_option("--grid", p->grid, "torus nodes");
        p->o_eps = sub->add_option("--eps", p->eps, "almost-period threshold");
        p->o_tmax = sub->add_option("--tau-max", p->tau_max, "scan end");
        p->o_tstep = sub->add_option("--tau-step", p->tau_step, "scan step");
        p->o_tol = sub->add_option("--tol", p->tol, "solver tolerance");
        p->o_gap = sub->add_option("--gap-bound", p->gap_bound,
                                   "when set, claim max gap <= this bound");
        sub->callback([p, entire_coeffs, entire_forcing, entire_common, &action,
                       &exit_code] {
            action = [p, entire_coeffs, entire_forcing, entire_common, &exit_code] {
                ExperimentConfig cfg = entire_common->load_config();
                merge_int(p->o_grid, cfg, "grid", p->grid);
                merge_double(p->o_eps, cfg, "eps", p->eps);
                merge_double(p->o_tmax, cfg, "tau-max", p->tau_max);
                merge_double(p->o_tstep, cfg, "tau-step", p->tau_step);
                merge_double(p->o_tol, cfg, "tol", p->tol);
                merge_double(p->o_gap, cfg, "gap-bound", p->gap_bound);
                CoefficientField coeffs = resolve_coeffs(*entire_coeffs, cfg);
                ForcingField f = resolve_forcing(*entire_forcing, cfg, coeffs.period);
                reject_unknown(cfg);

                TorusGrid grid(p->grid, coeffs.period);
                ApForcingReport r = ap_forcing_experiment(coeffs, f, grid, p->eps,
                                                          p->tau_max, p->tau_step,
                                                          p->tol);
                if (r.decayed) {
                    std::cout << "[info] zero forcing: response decayed to "
                              << format_full(r.response_sup) << "; scan skipped\n";
                    ordered_json j;
                    j["experiment"] = "entire ap-forcing";
                    j["decayed"] = true;
                    j["response_sup"] = r.response_sup;
                    emit_json(*entire_common, j);
                    exit_code = 0;
                    return;
                }
                std::cout << "[info] response sup = " << format_full(r.response_sup)
                          << " (bound " << format_full(r.response_bound)
                          << "), almost periods found = " << r.scan.taus_found.size()
                          << ", max gap = " << format_full(r.scan.max_gap) << "\n";
                std::cout << "[info] predicted almost periods matched: "
                          << r.predicted_matched << " of " << r.predicted.size()
                          << "\n";
                show(r.report);
                InequalityReport gap_claim;
                gap_claim.claim_id = "largest almost-period gap within the stated bound";
                if (p->gap_bound >= 0.0) {
                    gap_claim.record(p->tau_max, p->gap_bound, r.scan.max_gap);
                    show(gap_claim);
                }
                if (!entire_common->out_csv.empty()) {
                    std::vector<std::vector<std::string>> rows;
                    for (double t : r.scan.taus_found) rows.push_back({format_full(t)});
                    write_csv(entire_common->out_csv, {"tau"}, rows);
                }
                ordered_json j;
                j["experiment"] = "entire ap-forcing";
                j["grid"] = p->grid;
                j["eps"] = p->eps;
                j["tau_max"] = p->tau_max;
                j["tau_step"] = p->tau_step;
                j["lambda_p"] = r.lambda_p;
                j["response_sup"] = r.response_sup;
                j["response_bound"] = r.response_bound;
                j["taus_found"] = r.scan.taus_found;
                j["max_gap"] = r.scan.max_gap;
                j["predicted"] = r.predicted;
                j["predicted_matched"] = r.predicted_matched;
                j["report"] = json_report(r.report);
                if (p->gap_bound >= 0.0) j["gap_claim"] = json_report(gap_claim);
                emit_json(*entire_common, j);
                exit_code = (r.report.passed() &&
                             (p->gap_bound < 0.0 || gap_claim.passed()))
                                ? 0
                                : 1;
            };
        });
    }

    // ---------------- parse and dispatch ----------------
    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!action && eigen->parsed()) action = run_eigen_solve;
        if (!action) throw UsageError("no action selected");
        action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}

}  // namespace liouville
