#include "qmeas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

constexpr cplx kI{0.0, 1.0};

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw DomainError(message);
    }
}

// Closed forms are derived for omega = delta_e and a measured energy E = e1.
void require_resonant_default(const MeasurementRates& rates) {
    require(std::abs(rates.detuning) <= 1e-12,
            "closed-form dynamics require resonance (omega == delta_e); use general_propagator");
    require(rates.lambda1 == 0.0,
            "closed-form dynamics require the measured energy to equal e1 (lambda1 == 0)");
}

MeasurementRates build_rates(double lambda1, double lambda2, double lambda_t, double detuning,
                             double v0) {
    MeasurementRates r;
    r.lambda1 = lambda1;
    r.lambda2 = lambda2;
    r.lambda_t = lambda_t;
    r.omega_cap = lambda2 - lambda1;
    r.v0 = v0;
    r.detuning = detuning;
    r.q = 0.5 * cplx(detuning, 0.5 * r.omega_cap);
    r.kappa = std::sqrt(r.q * r.q + v0 * v0);
    r.cos_theta = r.q / r.kappa;
    const double quarter = 0.25 * lambda_t;
    r.kappa0 = std::sqrt(std::abs(v0 - quarter) * (v0 + quarter));
    return r;
}

} // namespace

void SystemConfig::validate() const {
    require(std::isfinite(e1) && std::isfinite(e2), "energies must be finite");
    require(std::isfinite(omega), "drive frequency must be finite");
    require(std::isfinite(v0) && v0 > 0.0, "coupling v0 must be positive");
    require(std::isfinite(tau) && tau > 0.0, "measurement duration tau must be positive");
    require(!std::isnan(e_r) && e_r > 0.0, "measurement precision e_r must be positive");
    require(!e_meas || std::isfinite(*e_meas), "measured energy must be finite");
}

SystemConfig SystemConfig::with_lambda_t(double lambda_t, double v0, double delta_e, double tau) {
    require(std::isfinite(lambda_t) && lambda_t >= 0.0, "lambda_t must be non-negative");
    require(std::isfinite(tau) && tau > 0.0, "measurement duration tau must be positive");
    SystemConfig cfg;
    cfg.e1 = 0.0;
    cfg.e2 = delta_e;
    cfg.v0 = v0;
    cfg.omega = delta_e;
    cfg.tau = tau;
    cfg.e_r = lambda_t == 0.0 ? std::numeric_limits<double>::infinity()
                              : std::abs(delta_e) / std::sqrt(2.0 * tau * lambda_t);
    cfg.validate();
    return cfg;
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
    case Regime::Coherent:
        return "coherent";
    case Regime::Incoherent:
        return "incoherent";
    case Regime::ExceptionalPoint:
        return "exceptional";
    }
    return "unknown";
}

double exceptional_band(double v0) noexcept { return 1e-9 * std::max(1.0, 4.0 * v0); }

MeasurementRates compute_rates(const SystemConfig& cfg) {
    cfg.validate();
    const double denom = 2.0 * cfg.tau * cfg.e_r * cfg.e_r;
    const double e = cfg.measured_energy();
    auto rate = [&](double de) { return std::isinf(denom) ? 0.0 : de * de / denom; };
    return build_rates(rate(cfg.e1 - e), rate(cfg.e2 - e), rate(cfg.delta_e()),
                       cfg.omega - cfg.delta_e(), cfg.v0);
}

MeasurementRates resonant_rates(double lambda_t, double v0) {
    require(std::isfinite(lambda_t) && lambda_t >= 0.0, "lambda_t must be non-negative");
    require(std::isfinite(v0) && v0 > 0.0, "coupling v0 must be positive");
    return build_rates(0.0, lambda_t, lambda_t, 0.0, v0);
}

Regime classify_regime(double lambda_t, double v0) noexcept {
    const double gap = 4.0 * v0 - lambda_t;
    if (std::abs(gap) <= exceptional_band(v0)) {
        return Regime::ExceptionalPoint;
    }
    return gap > 0.0 ? Regime::Coherent : Regime::Incoherent;
}

Regime classify_regime(const MeasurementRates& rates) noexcept {
    return classify_regime(rates.lambda_t, rates.v0);
}

double critical_precision(const SystemConfig& cfg) {
    require(std::isfinite(cfg.tau) && cfg.tau > 0.0, "measurement duration tau must be positive");
    require(std::isfinite(cfg.v0) && cfg.v0 > 0.0, "coupling v0 must be positive");
    require(std::isfinite(cfg.delta_e()), "energies must be finite");
    return std::abs(cfg.delta_e()) / (2.0 * std::sqrt(2.0 * cfg.tau * cfg.v0));
}

ResonantAmplitudes resonant_amplitudes(const MeasurementRates& rates, double t) {
    require(std::isfinite(t) && t >= 0.0, "time must be non-negative");
    require_resonant_default(rates);

    const double g = 0.25 * rates.lambda_t;
    const double k = rates.kappa0;
    ResonantAmplitudes amp;
    switch (classify_regime(rates)) {
    case Regime::Coherent: {
        const double env = std::exp(-g * t);
        const double s = std::sin(k * t) / k;
        amp.survival = env * (std::cos(k * t) - g * s);
        amp.transfer = env * rates.v0 * s;
        break;
    }
    case Regime::ExceptionalPoint: {
        const double env = std::exp(-g * t);
        amp.survival = env * (1.0 - g * t);
        amp.transfer = env * g * t;
        break;
    }
    case Regime::Incoherent: {
        // e^{-gt} cosh, sinh rewritten over the slow exponent (k - g) < 0 so
        // nothing overflows for large lambda_t * t.
        const double slow = -rates.v0 * rates.v0 / (k + g);
        const double damp = std::expm1(-2.0 * k * t);
        const double env = std::exp(slow * t);
        amp.survival = 0.5 * env * (2.0 + (1.0 + g / k) * damp);
        amp.transfer = -rates.v0 / (2.0 * k) * env * damp;
        break;
    }
    }
    return amp;
}

TransitionProbabilities transition_probabilities(const MeasurementRates& rates, double t) {
    const ResonantAmplitudes amp = resonant_amplitudes(rates, t);
    return {amp.survival * amp.survival, amp.transfer * amp.transfer};
}

double population_difference(const MeasurementRates& rates, double t) {
    const TransitionProbabilities p = transition_probabilities(rates, t);
    return p.p11 - p.p10;
}

Eigen::Matrix2cd propagator_matrix(cplx q, cplx coupling, double t) {
    const cplx kappa = std::sqrt(q * q + coupling * coupling);
    const cplx z = kappa * t;
    // sin(kappa t) / kappa = t * sinc(z)
    const cplx sinc = std::abs(z) < 1e-4 ? 1.0 - z * z / 6.0 + z * z * z * z / 120.0 : std::sin(z) / z;
    const cplx f = t * sinc;
    const cplx c = std::cos(z);
    Eigen::Matrix2cd u;
    u << c - kI * f * q, -kI * f * coupling,
         -kI * f * coupling, c + kI * f * q;
    return u;
}

AmplitudePair general_propagator(const MeasurementRates& rates, const AmplitudePair& c0, double t) {
    const Eigen::Matrix2cd u = propagator_matrix(rates.q, rates.v0, t);
    const Eigen::Vector2cd out = u * Eigen::Vector2cd(c0.ground, c0.excited);
    return {out(0), out(1)};
}

AmplitudePair physical_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0, double t) {
    const MeasurementRates rates = compute_rates(cfg);
    const AmplitudePair c = general_propagator(rates, c0, t);
    const cplx mean_level(0.5 * (cfg.e1 + cfg.e2), -0.25 * (rates.lambda1 + rates.lambda2));
    const cplx common = std::exp(-kI * mean_level * t);
    const cplx half_drive = std::exp(kI * (0.5 * cfg.omega * t));
    return {common * half_drive * c.ground, common / half_drive * c.excited};
}

double passage_time(const MeasurementRates& rates) {
    require_resonant_default(rates);
    const double lt = rates.lambda_t;
    const double k = rates.kappa0;
    if (lt == 0.0) {
        return std::numbers::pi / (2.0 * rates.v0);
    }
    switch (classify_regime(rates)) {
    case Regime::Coherent:
        return std::atan2(4.0 * k, lt) / k;
    case Regime::ExceptionalPoint:
        return 4.0 / lt;
    case Regime::Incoherent: {
        // artanh(x) with 1 - x = 16 v0^2 / (lt (lt + 4k)) computed without cancellation
        const double x = 4.0 * k / lt;
        const double one_minus_x = 16.0 * rates.v0 * rates.v0 / (lt * (lt + 4.0 * k));
        return 0.5 * (std::log1p(x) - std::log(one_minus_x)) / k;
    }
    }
    return 0.0;
}

} // namespace qmeas
