#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmeas/correlations.hpp"
#include "qmeas/dynamics.hpp"

namespace qmeas {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.05;

    void validate() const;
};

struct AmplitudeSample {
    double t = 0.0;
    AmplitudePair amp;

    double p11() const noexcept { return std::norm(amp.excited); }
    double p10() const noexcept { return std::norm(amp.ground); }
    double norm() const noexcept { return p11() + p10(); }
};

/// Integrates the lab-frame equation
///   i dA/dt = [[e1 - i lambda1/2, v0 e^{i omega t}], [v0 e^{-i omega t}, e2 - i lambda2/2]] A
/// with an adaptive Dormand-Prince 5(4) stepper and samples it at `times`
/// (ascending, inside [0, tau]). Throws IntegrationError on stepper failure.
std::vector<AmplitudeSample> ode_integrate_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0,
                                                      std::span<const double> times,
                                                      const IntegratorSettings& settings = {});

/// Same, sampled at `samples` evenly spaced times over [0, t_end].
std::vector<AmplitudeSample> ode_integrate_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0,
                                                      double t_end, const IntegratorSettings& settings = {},
                                                      std::size_t samples = 101);

/// Earliest zero of P11 on the integrated trajectory started in |1>.
/// Minima of P11 are bracketed by a sign change of dP11/dt, bisected to
/// 1e-10 in t, and accepted once P11 there is below 1e-12. Throws
/// NoRootError if none is found on [0, 10 tau].
double passage_time_root_find(const SystemConfig& cfg, const IntegratorSettings& settings = {});

struct DiscordSettings {
    int grid = 64;          ///< points per angle in the coarse scan
    double angle_tol = 1e-6;
};

struct DiscordResult {
    double classical = 0.0;
    double quantum = 0.0;
    double mutual_information = 0.0;
    double theta = 0.0; ///< optimal measurement direction on qubit 2
    double phi = 0.0;
};

/// Classical correlation maximized over projective measurements on the
/// second qubit, and Q = I - C.
DiscordResult discord_brute_force(const TwoQubitDensity& rho, const DiscordSettings& settings = {});

} // namespace qmeas
