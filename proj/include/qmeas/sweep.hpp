#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qmeas/correlations.hpp"
#include "qmeas/dynamics.hpp"
#include "qmeas/oracles.hpp"

namespace qmeas {

/// Linearly spaced sweep axis; both end points are included.
struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;

    /// Throws DomainError unless count >= 2 and start < stop.
    void validate() const;
    std::vector<double> values() const;
};

using Cell = std::variant<double, std::string>;

struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// Comma separated, header first, '\n' line endings.
void write_csv(std::ostream& os, const ResultTable& table);

/// Lambda_t values of the passage-time sweep, with 4 v0 spliced in when it
/// lies inside the axis and is not already a grid point.
std::vector<double> passage_time_grid(const Axis& lambda_axis, double v0);

/// Columns: lambda_t, tau_p, regime.
ResultTable passage_time_table(std::span<const double> lambda_values, double v0);

/// Columns: t, lambda_t, p11, p10, p_detector, regime. Rows iterate t
/// (outer) then lambda_t.
ResultTable probability_table(std::span<const double> times, std::span<const double> lambda_values,
                              double v0);

/// Columns: t, lambda_t, b, then Q_<cut>, C_<cut> for every requested cut.
/// Rows iterate b (outer), t, then lambda_t.
struct CorrelationSweep {
    std::vector<double> times;
    std::vector<double> lambda_values;
    std::vector<double> b_values;
    std::vector<Cut> cuts{Cut::System, Cut::Source, Cut::Detector};
    double v0 = 1.0;
    double a_phase = 0.0;
    double b_phase = 0.0;
};

ResultTable correlation_table(const CorrelationSweep& sweep);

/// Columns: tau, e_c.
ResultTable critical_precision_scan(const SystemConfig& cfg, const Axis& tau_axis);

/// Outcome of one oracle comparison.
struct Check {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;

    bool passed() const noexcept { return deviation <= tolerance; }
};

/// Closed-form P11, P10 against the integrated amplitudes, one check per lambda_t.
std::vector<Check> verify_probabilities(std::span<const double> times, std::span<const double> lambda_values,
                                        double v0, double delta_e, const IntegratorSettings& settings = {});

/// Closed-form passage times against the root finder, one check per lambda_t.
std::vector<Check> verify_passage_times(std::span<const double> lambda_values, double v0, double delta_e,
                                        double tau, const IntegratorSettings& settings = {});

/// Concurrence against the spin-flip construction (1e-10) and Q against the
/// measurement search (1e-3) for every row of the sweep.
std::vector<Check> verify_correlations(const CorrelationSweep& sweep, const DiscordSettings& settings = {});

/// The combined oracle suite behind the `verify` subcommand.
std::vector<Check> run_verification_suite(double v0);

} // namespace qmeas
