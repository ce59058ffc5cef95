#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace qmeas {

using cplx = std::complex<double>;

/// Amplitudes on the two levels: `ground` is |0> (energy e1), `excited` is |1>.
struct AmplitudePair {
    cplx ground{0.0, 0.0};
    cplx excited{1.0, 0.0};
};

/// Physical parameters of a driven two-level system under continuous energy
/// measurement. Units have hbar = 1.
///
/// `e_r` may be +infinity, which is the unmeasured (weak-measurement) limit.
struct SystemConfig {
    double e1 = 0.0;
    double e2 = 1.0;
    double v0 = 1.0;
    double omega = 1.0;
    double tau = 2.0;
    double e_r = std::numeric_limits<double>::infinity();
    std::optional<double> e_meas; ///< measured energy E; defaults to e1

    double delta_e() const noexcept { return e2 - e1; }
    double measured_energy() const noexcept { return e_meas.value_or(e1); }

    /// Throws DomainError unless v0 > 0, tau > 0, e_r > 0 and every field is
    /// a number.
    void validate() const;

    /// Resonant configuration (omega = delta_e) whose precision e_r yields
    /// the requested lambda_t for the given duration.
    static SystemConfig with_lambda_t(double lambda_t, double v0 = 1.0, double delta_e = 1.0,
                                      double tau = 2.0);
};

/// Measurement-induced decay rates and the complex parameters of the
/// two-level propagator.
struct MeasurementRates {
    double lambda1 = 0.0;   ///< decay rate of |0>
    double lambda2 = 0.0;   ///< decay rate of |1>
    double lambda_t = 0.0;  ///< delta_e^2 / (2 tau e_r^2)
    double omega_cap = 0.0; ///< lambda2 - lambda1
    double v0 = 1.0;
    double detuning = 0.0;  ///< omega - delta_e
    cplx q;                 ///< (detuning + i omega_cap / 2) / 2
    cplx kappa;             ///< principal sqrt(q^2 + v0^2)
    cplx cos_theta;         ///< q / kappa; not finite when kappa == 0
    double kappa0 = 0.0;    ///< sqrt|v0^2 - (lambda_t/4)^2|, the resonant rate
};

enum class Regime { Coherent, Incoherent, ExceptionalPoint };

std::string_view to_string(Regime regime) noexcept;

/// Half-width of the band around lambda_t = 4 v0 treated as the exceptional point.
double exceptional_band(double v0) noexcept;

MeasurementRates compute_rates(const SystemConfig& cfg);

/// Rates for the resonant default model (E = e1, omega = delta_e) specified
/// directly by lambda_t. Exact in lambda_t, unlike a round trip through e_r.
MeasurementRates resonant_rates(double lambda_t, double v0 = 1.0);

Regime classify_regime(const MeasurementRates& rates) noexcept;
Regime classify_regime(double lambda_t, double v0) noexcept;

/// Measurement precision at which lambda_t equals 4 v0:
/// |delta_e| / (2 sqrt(2 tau v0)).
double critical_precision(const SystemConfig& cfg);

struct TransitionProbabilities {
    double p11 = 1.0; ///< stays in |1>
    double p10 = 0.0; ///< transferred to |0>

    double lost() const noexcept { return 1.0 - p11 - p10; }
};

/// Real regime-matched amplitude factors at resonance, starting from |1>.
/// The physical rotating-frame amplitudes are `survival` on |1> and
/// `-i * transfer` on |0>.
struct ResonantAmplitudes {
    double survival = 1.0;
    double transfer = 0.0;
};

/// Closed-form amplitudes for the three regimes. Requires resonance and
/// lambda1 == 0; throws DomainError otherwise or for negative t.
ResonantAmplitudes resonant_amplitudes(const MeasurementRates& rates, double t);

TransitionProbabilities transition_probabilities(const MeasurementRates& rates, double t);

/// P11 - P10.
double population_difference(const MeasurementRates& rates, double t);

/// The 2x2 rotating-frame propagator
///   cos(kt) I - i sin(kt)/k [[q, V], [V, -q]],  k = sqrt(q^2 + V^2),
/// evaluated without dividing by k so it stays finite at k = 0.
Eigen::Matrix2cd propagator_matrix(cplx q, cplx coupling, double t);

/// Rotating-frame coefficients (C1(t), C2(t)) for any detuning.
AmplitudePair general_propagator(const MeasurementRates& rates, const AmplitudePair& c0, double t);

/// Lab-frame amplitudes: the rotating-frame coefficients times
/// exp(-i (Ebar - i (lambda1 + lambda2)/4) t) and exp(+-i omega t / 2).
AmplitudePair physical_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0, double t);

/// First time at which P11 vanishes. Returns pi / (2 v0) when lambda_t == 0.
double passage_time(const MeasurementRates& rates);

} // namespace qmeas
