#include "qmeas/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmeas/errors.hpp"
#include "qmeas/sweep.hpp"

namespace qmeas {

namespace {

struct Options {
    double v0 = 1.0;
    double delta_e = 1.0;
    std::optional<double> tau;
    std::optional<double> e_r;
    std::optional<double> lambda_t;
    double b = 0.75;
    double a_phase = 0.0;
    double b_phase = 0.0;
    std::optional<std::string> cut;
    std::optional<double> t_min, t_max, lt_min, lt_max, b_min, b_max, tau_min, tau_max;
    std::optional<std::size_t> t_steps, lt_steps, b_steps, tau_steps;
    bool ep_b_sweep = false;
    bool verify = false;
    std::string out;
};

// Per-command defaults; flags and the config file override them.
struct Defaults {
    double tau;
    Axis lambda_axis;
    Axis t_axis;
};

const Defaults kPassageDefaults{2.0, {"lambda_t", 0.1, 12.0, 120}, {"t", 0.0, 8.0, 81}};
const Defaults kProbabilityDefaults{8.0, {"lambda_t", 0.5, 8.0, 16}, {"t", 0.0, 8.0, 81}};
const Defaults kCorrelationDefaults{8.0, {"lambda_t", 0.1, 4.0, 50}, {"t", 0.0, 8.0, 81}};

Axis make_axis(const Axis& base, const std::optional<double>& lo, const std::optional<double>& hi,
               const std::optional<std::size_t>& steps) {
    Axis a = base;
    a.start = lo.value_or(a.start);
    a.stop = hi.value_or(a.stop);
    a.count = steps.value_or(a.count);
    a.validate();
    return a;
}

double tau_of(const Options& o, const Defaults& d) { return o.tau.value_or(d.tau); }

// A fixed --lambda-t or --e-r collapses the lambda_t axis to one value.
std::optional<double> fixed_lambda(const Options& o, double tau) {
    if (o.lambda_t) {
        if (!(*o.lambda_t >= 0.0)) {
            throw DomainError("--lambda-t must be non-negative");
        }
        return o.lambda_t;
    }
    if (o.e_r) {
        SystemConfig cfg;
        cfg.e2 = o.delta_e;
        cfg.omega = o.delta_e;
        cfg.v0 = o.v0;
        cfg.tau = tau;
        cfg.e_r = *o.e_r;
        return compute_rates(cfg).lambda_t;
    }
    return std::nullopt;
}

std::vector<double> lambda_values(const Options& o, const Defaults& d) {
    if (auto fixed = fixed_lambda(o, tau_of(o, d))) {
        return {*fixed};
    }
    return make_axis(d.lambda_axis, o.lt_min, o.lt_max, o.lt_steps).values();
}

std::vector<double> time_values(const Options& o, const Defaults& d) {
    const Axis axis = make_axis(d.t_axis, o.t_min, o.t_max, o.t_steps);
    if (axis.start < 0.0) {
        throw DomainError("time axis must start at t >= 0");
    }
    if (axis.stop > tau_of(o, d)) {
        throw DomainError("time axis must end at or before the measurement duration tau");
    }
    return axis.values();
}

std::vector<Cut> cuts_of(const std::string& name) {
    if (name == "s") {
        return {Cut::System};
    }
    if (name == "r") {
        return {Cut::Source};
    }
    if (name == "d") {
        return {Cut::Detector};
    }
    return {Cut::System, Cut::Source, Cut::Detector};
}

bool report_checks(const std::vector<Check>& checks, std::ostream& err) {
    bool ok = true;
    for (const Check& c : checks) {
        err << (c.passed() ? "PASS " : "FAIL ") << c.name << ": deviation " << format_number(c.deviation)
            << " (tolerance " << format_number(c.tolerance) << ")\n";
        ok = ok && c.passed();
    }
    return ok;
}

int emit(const std::string& text, const Options& o, std::ostream& out, std::ostream& err) {
    if (o.out.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
        err << "error: cannot open output file '" << o.out << "'\n";
        return kExitIo;
    }
    file << text;
    file.flush();
    if (!file) {
        err << "error: failed writing output file '" << o.out << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int finish(const ResultTable& table, bool verified_ok, const Options& o, std::ostream& out,
           std::ostream& err) {
    std::ostringstream csv;
    write_csv(csv, table);
    const int io = emit(csv.str(), o, out, err);
    if (io != kExitOk) {
        return io;
    }
    return verified_ok ? kExitOk : kExitVerifyFailed;
}

int cmd_passage_time(const Options& o, std::ostream& out, std::ostream& err) {
    const Defaults& d = kPassageDefaults;
    const std::vector<double> lambdas = [&] {
        if (auto fixed = fixed_lambda(o, tau_of(o, d))) {
            return std::vector<double>{*fixed};
        }
        return passage_time_grid(make_axis(d.lambda_axis, o.lt_min, o.lt_max, o.lt_steps), o.v0);
    }();
    const ResultTable table = passage_time_table(lambdas, o.v0);
    bool ok = true;
    if (o.verify) {
        ok = report_checks(verify_passage_times(lambdas, o.v0, o.delta_e, tau_of(o, d)), err);
    }
    return finish(table, ok, o, out, err);
}

int cmd_probabilities(const Options& o, std::ostream& out, std::ostream& err) {
    const Defaults& d = kProbabilityDefaults;
    const std::vector<double> times = time_values(o, d);
    const std::vector<double> lambdas = lambda_values(o, d);
    const ResultTable table = probability_table(times, lambdas, o.v0);
    bool ok = true;
    if (o.verify) {
        ok = report_checks(verify_probabilities(times, lambdas, o.v0, o.delta_e), err);
    }
    return finish(table, ok, o, out, err);
}

int cmd_correlations(const Options& o, std::ostream& out, std::ostream& err) {
    const Defaults& d = kCorrelationDefaults;
    CorrelationSweep sweep;
    sweep.v0 = o.v0;
    sweep.a_phase = o.a_phase;
    sweep.b_phase = o.b_phase;
    sweep.times = time_values(o, d);
    if (o.ep_b_sweep) {
        sweep.lambda_values = {4.0 * o.v0};
        sweep.b_values = make_axis({"b", 0.0, 1.0, 21}, o.b_min, o.b_max, o.b_steps).values();
        sweep.cuts = cuts_of(o.cut.value_or("d"));
    } else {
        sweep.lambda_values = lambda_values(o, d);
        sweep.b_values = {o.b};
        sweep.cuts = cuts_of(o.cut.value_or("all"));
    }
    for (double b : sweep.b_values) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw DomainError("b must lie in [0, 1]");
        }
    }
    const ResultTable table = correlation_table(sweep);
    bool ok = true;
    if (o.verify) {
        ok = report_checks(verify_correlations(sweep), err);
    }
    return finish(table, ok, o, out, err);
}

int cmd_ep_locate(const Options& o, std::ostream& out, std::ostream& err) {
    SystemConfig cfg;
    cfg.e2 = o.delta_e;
    cfg.omega = o.delta_e;
    cfg.v0 = o.v0;
    cfg.tau = o.tau.value_or(2.0);
    if (o.tau_min || o.tau_max || o.tau_steps) {
        const Axis axis = make_axis({"tau", 1.0, 10.0, 10}, o.tau_min, o.tau_max, o.tau_steps);
        if (!(axis.start > 0.0)) {
            throw DomainError("tau scan must stay positive");
        }
        return finish(critical_precision_scan(cfg, axis), true, o, out, err);
    }
    const double e_c = critical_precision(cfg);
    cfg.e_r = e_c;
    const MeasurementRates rates = compute_rates(cfg);
    const Regime regime = classify_regime(rates);
    std::ostringstream report;
    report << "delta_e=" << format_number(o.delta_e) << '\n'
           << "tau=" << format_number(cfg.tau) << '\n'
           << "v0=" << format_number(o.v0) << '\n'
           << "e_c=" << format_number(e_c) << '\n'
           << "lambda_t_at_e_c=" << format_number(rates.lambda_t) << '\n'
           << "four_v0=" << format_number(4.0 * o.v0) << '\n'
           << "regime_at_e_c=" << to_string(regime) << '\n';
    const int io = emit(report.str(), o, out, err);
    if (io != kExitOk) {
        return io;
    }
    if (o.verify && regime != Regime::ExceptionalPoint) {
        err << "FAIL e_c does not land on the exceptional point\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const bool ok = report_checks(run_verification_suite(o.v0), out);
    return ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measured two-level system: probabilities, passage times and correlations", "qmeas"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "plain key=value file; flags override it");

    Options o;
    app.add_option("--v0", o.v0, "coupling amplitude V0")->capture_default_str();
    app.add_option("--delta-e", o.delta_e, "level splitting E2 - E1")->capture_default_str();
    app.add_option("--tau", o.tau, "measurement duration");
    auto* e_r = app.add_option("--e-r", o.e_r, "measurement precision (fixes lambda_t)");
    auto* lt = app.add_option("--lambda-t", o.lambda_t, "fixed lambda_t instead of a sweep");
    lt->excludes(e_r);
    app.add_option("--b", o.b, "initial amplitude of |11>, real")->capture_default_str();
    app.add_option("--a-phase", o.a_phase, "phase of a in radians");
    app.add_option("--b-phase", o.b_phase, "phase of b in radians");
    app.add_option("--cut", o.cut, "pair cut: s, r, d or all")->check(CLI::IsMember({"s", "r", "d", "all"}));
    app.add_option("--t-min", o.t_min);
    app.add_option("--t-max", o.t_max);
    app.add_option("--t-steps", o.t_steps);
    app.add_option("--lt-min", o.lt_min);
    app.add_option("--lt-max", o.lt_max);
    app.add_option("--lt-steps", o.lt_steps);
    app.add_option("--b-min", o.b_min, "b axis of --ep-b-sweep");
    app.add_option("--b-max", o.b_max);
    app.add_option("--b-steps", o.b_steps);
    app.add_option("--tau-min", o.tau_min, "ep-locate scan over tau");
    app.add_option("--tau-max", o.tau_max);
    app.add_option("--tau-steps", o.tau_steps);
    app.add_flag("--ep-b-sweep", o.ep_b_sweep, "correlations at the exceptional point lambda_t = 4 V0 over b x t");
    app.add_flag("--verify", o.verify, "re-check results against the numerical oracles");
    app.add_option("--out", o.out, "output path (default stdout)");

    auto* passage = app.add_subcommand("passage-time", "passage time versus lambda_t");
    auto* probabilities = app.add_subcommand("probabilities", "P11, P10 over t x lambda_t");
    auto* correlations = app.add_subcommand("correlations", "concurrence and Q per pair cut");
    auto* ep_locate = app.add_subcommand("ep-locate", "critical precision of the exceptional point");
    auto* verify = app.add_subcommand("verify", "run every oracle comparison");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!(o.v0 > 0.0)) {
            throw DomainError("--v0 must be positive");
        }
        if (o.tau && !(*o.tau > 0.0)) {
            throw DomainError("--tau must be positive");
        }
        if (*passage) {
            return cmd_passage_time(o, out, err);
        }
        if (*probabilities) {
            return cmd_probabilities(o, out, err);
        }
        if (*correlations) {
            return cmd_correlations(o, out, err);
        }
        if (*ep_locate) {
            return cmd_ep_locate(o, out, err);
        }
        if (*verify) {
            return cmd_verify(o, out);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace qmeas
