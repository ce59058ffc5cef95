#include "qmeas/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <numbers>
#include <cmath>
#include <ostream>
#include <random>
#include <system_error>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

struct MaxDeviation {
    double value = 0.0;
    void update(double d) { value = std::max(value, std::isnan(d) ? std::numeric_limits<double>::infinity() : d); }
};

std::string lambda_label(double lt) { return "lambda_t=" + format_number(lt); }

} // namespace

void Axis::validate() const {
    if (count < 2) {
        throw DomainError("axis '" + name + "' needs at least 2 points");
    }
    if (!(std::isfinite(start) && std::isfinite(stop) && start < stop)) {
        throw DomainError("axis '" + name + "' needs finite start < stop");
    }
}

std::vector<double> Axis::values() const {
    validate();
    std::vector<double> v(count);
    const double span = stop - start;
    for (std::size_t i = 0; i < count; ++i) {
        v[i] = start + span * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    v.back() = stop;
    return v;
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf.data(), end);
}

void write_csv(std::ostream& os, const ResultTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                os << ',';
            }
            std::visit(
                [&os](const auto& v) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
                        os << format_number(v);
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
}

std::vector<double> passage_time_grid(const Axis& lambda_axis, double v0) {
    std::vector<double> values = lambda_axis.values();
    const double ep = 4.0 * v0;
    if (ep >= lambda_axis.start && ep <= lambda_axis.stop) {
        // A grid point within roundoff of 4 v0 is snapped onto it rather than duplicated.
        const auto near = std::find_if(values.begin(), values.end(),
                                       [ep](double v) { return std::abs(v - ep) <= 1e-12 * ep; });
        if (near != values.end()) {
            *near = ep;
        } else {
            values.insert(std::upper_bound(values.begin(), values.end(), ep), ep);
        }
    }
    return values;
}

ResultTable passage_time_table(std::span<const double> lambda_values, double v0) {
    ResultTable table{{"lambda_t", "tau_p", "regime"}, {}};
    for (double lt : lambda_values) {
        const MeasurementRates rates = resonant_rates(lt, v0);
        table.rows.push_back({lt, passage_time(rates), std::string(to_string(classify_regime(rates)))});
    }
    return table;
}

ResultTable probability_table(std::span<const double> times, std::span<const double> lambda_values,
                              double v0) {
    ResultTable table{{"t", "lambda_t", "p11", "p10", "p_detector", "regime"}, {}};
    std::vector<MeasurementRates> rates;
    rates.reserve(lambda_values.size());
    for (double lt : lambda_values) {
        rates.push_back(resonant_rates(lt, v0));
    }
    for (double t : times) {
        for (const MeasurementRates& r : rates) {
            const TransitionProbabilities p = transition_probabilities(r, t);
            table.rows.push_back(
                {t, r.lambda_t, p.p11, p.p10, p.lost(), std::string(to_string(classify_regime(r)))});
        }
    }
    return table;
}

ResultTable correlation_table(const CorrelationSweep& sweep) {
    ResultTable table{{"t", "lambda_t", "b"}, {}};
    for (Cut cut : sweep.cuts) {
        table.header.push_back("Q_" + std::string(cut_tag(cut)));
        table.header.push_back("C_" + std::string(cut_tag(cut)));
    }
    std::vector<MeasurementRates> rates;
    for (double lt : sweep.lambda_values) {
        rates.push_back(resonant_rates(lt, sweep.v0));
    }
    for (double b : sweep.b_values) {
        const InitialPair pair = InitialPair::from_b(b, sweep.a_phase, sweep.b_phase);
        for (double t : sweep.times) {
            for (const MeasurementRates& r : rates) {
                const TriAmplitudes amp = tripartite_amplitudes(r, t);
                std::vector<Cell> row{t, r.lambda_t, b};
                for (Cut cut : sweep.cuts) {
                    const cplx a = amplitude_for(amp, cut);
                    row.emplace_back(quantum_correlation_closed_form(pair, a));
                    row.emplace_back(concurrence_closed_form(pair, a));
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

ResultTable critical_precision_scan(const SystemConfig& cfg, const Axis& tau_axis) {
    ResultTable table{{"tau", "e_c"}, {}};
    for (double tau : tau_axis.values()) {
        SystemConfig c = cfg;
        c.tau = tau;
        table.rows.push_back({tau, critical_precision(c)});
    }
    return table;
}

std::vector<Check> verify_probabilities(std::span<const double> times, std::span<const double> lambda_values,
                                        double v0, double delta_e, const IntegratorSettings& settings) {
    std::vector<Check> checks;
    if (times.empty()) {
        return checks;
    }
    const double tau = std::max(1.0, *std::max_element(times.begin(), times.end()));
    for (double lt : lambda_values) {
        const SystemConfig cfg = SystemConfig::with_lambda_t(lt, v0, delta_e, tau);
        const MeasurementRates rates = resonant_rates(lt, v0);
        const auto traj = ode_integrate_amplitudes(cfg, AmplitudePair{}, times, settings);
        MaxDeviation dev;
        for (const AmplitudeSample& s : traj) {
            const TransitionProbabilities p = transition_probabilities(rates, s.t);
            dev.update(std::abs(p.p11 - s.p11()));
            dev.update(std::abs(p.p10 - s.p10()));
        }
        checks.push_back({"probabilities vs ODE, " + lambda_label(lt), dev.value, 1e-8});
    }
    return checks;
}

std::vector<Check> verify_passage_times(std::span<const double> lambda_values, double v0, double delta_e,
                                        double tau, const IntegratorSettings& settings) {
    std::vector<Check> checks;
    for (double lt : lambda_values) {
        const SystemConfig cfg = SystemConfig::with_lambda_t(lt, v0, delta_e, tau);
        double dev = std::numeric_limits<double>::infinity();
        try {
            dev = std::abs(passage_time(resonant_rates(lt, v0)) - passage_time_root_find(cfg, settings));
        } catch (const NoRootError&) {
        }
        checks.push_back({"passage time vs root finder, " + lambda_label(lt), dev, 1e-8});
    }
    return checks;
}

std::vector<Check> verify_correlations(const CorrelationSweep& sweep, const DiscordSettings& settings) {
    std::vector<Check> checks;
    std::vector<MeasurementRates> rates;
    for (double lt : sweep.lambda_values) {
        rates.push_back(resonant_rates(lt, sweep.v0));
    }
    for (Cut cut : sweep.cuts) {
        MaxDeviation conc;
        MaxDeviation disc;
        for (double b : sweep.b_values) {
            const InitialPair pair = InitialPair::from_b(b, sweep.a_phase, sweep.b_phase);
            for (double t : sweep.times) {
                for (const MeasurementRates& r : rates) {
                    const cplx a = amplitude_for(tripartite_amplitudes(r, t), cut);
                    const TwoQubitDensity rho = reduced_density(pair, a);
                    conc.update(std::abs(concurrence_closed_form(pair, a) - wootters_concurrence(rho)));
                    disc.update(std::abs(quantum_correlation_closed_form(pair, a) -
                                         discord_brute_force(rho, settings).quantum));
                }
            }
        }
        const std::string tag(cut_tag(cut));
        checks.push_back({"concurrence closed form vs spin-flip, cut " + tag, conc.value, 1e-10});
        checks.push_back({"Q closed form vs measurement search, cut " + tag, disc.value, 1e-3});
    }
    return checks;
}

std::vector<Check> run_verification_suite(double v0) {
    std::vector<Check> checks;

    const std::vector<double> lambdas{0.0, 0.5, 2.0, 4.0 * v0, 6.0, 8.0};
    const std::vector<double> times = Axis{"t", 0.0, 8.0, 200}.values();
    for (auto& c : verify_probabilities(times, lambdas, v0, 1.0)) {
        checks.push_back(std::move(c));
    }

    const std::vector<double> passage_lambdas{0.5, 2.0, 4.0 * v0, 6.0, 8.0};
    for (auto& c : verify_passage_times(passage_lambdas, v0, 1.0, 2.0)) {
        checks.push_back(std::move(c));
    }

    // Random initial pairs and amplitudes, concurrence only (cheap).
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    MaxDeviation conc;
    for (int i = 0; i < 1000; ++i) {
        const InitialPair pair = InitialPair::from_b(unit(rng), angle(rng), angle(rng));
        const cplx amp = std::polar(std::sqrt(unit(rng)), angle(rng));
        conc.update(std::abs(concurrence_closed_form(pair, amp) -
                             wootters_concurrence(reduced_density(pair, amp))));
    }
    checks.push_back({"concurrence closed form vs spin-flip, 1000 random states", conc.value, 1e-10});

    MaxDeviation q_dev;
    MaxDeviation i_dev;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const InitialPair pair = InitialPair::from_b(0.1 * i);
            const cplx amp = std::sqrt(0.1 * j);
            const double q = quantum_correlation_closed_form(pair, amp);
            const DiscordResult d = discord_brute_force(reduced_density(pair, amp));
            q_dev.update(std::abs(q - d.quantum));
            i_dev.update(std::abs(2.0 * q - d.mutual_information));
        }
    }
    checks.push_back({"Q closed form vs measurement search, 10x10 grid", q_dev.value, 1e-3});
    checks.push_back({"mutual information vs 2Q, 10x10 grid", i_dev.value, 1e-3});
    return checks;
}

} // namespace qmeas
