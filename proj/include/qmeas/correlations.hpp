#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Core>

#include "qmeas/dynamics.hpp"

namespace qmeas {

/// Single-excitation amplitudes of system (xi), source (eta) and detector (chi).
struct TriAmplitudes {
    cplx xi{1.0, 0.0};
    cplx eta{0.0, 0.0};
    cplx chi{0.0, 0.0};
};

/// Pair cut: system-system, source-source or detector-detector.
enum class Cut { System, Source, Detector };

std::string_view to_string(Cut cut) noexcept;
/// One-letter tag used in CSV headers: "s", "r", "d".
std::string_view cut_tag(Cut cut) noexcept;

cplx amplitude_for(const TriAmplitudes& amp, Cut cut) noexcept;

/// Initial pair state a|00> + b|11>.
class InitialPair {
public:
    /// Throws DomainError unless |a|^2 + |b|^2 = 1 to 1e-12.
    InitialPair(cplx a, cplx b);

    /// Real non-negative b in [0, 1], a = sqrt(1 - b^2).
    static InitialPair from_b(double b, double a_phase = 0.0, double b_phase = 0.0);

    cplx a() const noexcept { return a_; }
    cplx b() const noexcept { return b_; }

private:
    cplx a_;
    cplx b_;
};

/// Two-qubit density matrix in the basis {|00>, |01>, |10>, |11>}.
struct TwoQubitDensity {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
};

/// Deviations of a density matrix from the physical-state conditions.
struct DensityDiagnostics {
    double hermiticity_error = 0.0; ///< max |m - m^dagger|
    double trace_error = 0.0;       ///< |tr m - 1|
    double min_eigenvalue = 0.0;
    double x_sparsity_error = 0.0;  ///< max modulus of the entries an X-state keeps at zero

    bool physical(double tol = 1e-12, double psd_tol = 1e-10) const noexcept {
        return hermiticity_error <= tol && trace_error <= tol && min_eigenvalue >= -psd_tol;
    }
};

DensityDiagnostics diagnose(const TwoQubitDensity& rho);

/// Throws DomainError if `rho` is not Hermitian, unit-trace and PSD.
void require_physical(const TwoQubitDensity& rho);

/// Closed-form (xi, eta, chi) at resonance; chi is taken real and non-negative.
TriAmplitudes tripartite_amplitudes(const MeasurementRates& rates, double t);

/// The X-state obtained by tracing the evolved two-pair state down to one cut,
/// with `amp` the single-party amplitude of that cut.
TwoQubitDensity reduced_density(const InitialPair& pair, cplx amp);

/// 2|b||amp|^2 (|a| - |b|(1 - |amp|^2)) before clamping at zero.
double concurrence_raw(const InitialPair& pair, cplx amp) noexcept;
double concurrence_closed_form(const InitialPair& pair, cplx amp) noexcept;

/// Wootters concurrence by the spin-flip construction, valid for any
/// two-qubit state.
double wootters_concurrence(const TwoQubitDensity& rho);

/// Binary Shannon entropy in bits; H(0) = H(1) = 0.
double binary_entropy(double x) noexcept;

double quantum_correlation_closed_form(const InitialPair& pair, cplx amp) noexcept;

/// Von Neumann entropy in bits of a Hermitian matrix; eigenvalues below
/// 1e-14 contribute nothing.
double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXcd>& rho);

/// Single-qubit marginals: `marginal_first` traces out qubit 2, `marginal_second` qubit 1.
Eigen::Matrix2cd marginal_first(const TwoQubitDensity& rho);
Eigen::Matrix2cd marginal_second(const TwoQubitDensity& rho);

struct EntropyReport {
    double s_joint = 0.0;
    double s_left = 0.0;
    double s_right = 0.0;
    double mutual_information = 0.0;
};

EntropyReport entropies_and_mutual_information(const TwoQubitDensity& rho);

} // namespace qmeas
