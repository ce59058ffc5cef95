#include "qmeas/correlations.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kZeroEigen = 1e-14;

// sigma_y (x) sigma_y, which is real.
Eigen::Matrix4cd spin_flip() {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

} // namespace

std::string_view to_string(Cut cut) noexcept {
    switch (cut) {
    case Cut::System:
        return "system";
    case Cut::Source:
        return "source";
    case Cut::Detector:
        return "detector";
    }
    return "unknown";
}

std::string_view cut_tag(Cut cut) noexcept {
    switch (cut) {
    case Cut::System:
        return "s";
    case Cut::Source:
        return "r";
    case Cut::Detector:
        return "d";
    }
    return "?";
}

cplx amplitude_for(const TriAmplitudes& amp, Cut cut) noexcept {
    switch (cut) {
    case Cut::System:
        return amp.xi;
    case Cut::Source:
        return amp.eta;
    case Cut::Detector:
        return amp.chi;
    }
    return {};
}

InitialPair::InitialPair(cplx a, cplx b) : a_(a), b_(b) {
    const double norm = std::norm(a) + std::norm(b);
    if (!(std::abs(norm - 1.0) <= kNormTol)) {
        throw DomainError("initial pair is not normalized: |a|^2 + |b|^2 = " + std::to_string(norm));
    }
}

InitialPair InitialPair::from_b(double b, double a_phase, double b_phase) {
    if (!(b >= 0.0 && b <= 1.0)) {
        throw DomainError("initial amplitude b must lie in [0, 1]");
    }
    const double a = std::sqrt(std::max(0.0, 1.0 - b * b));
    return InitialPair(std::polar(a, a_phase), std::polar(b, b_phase));
}

DensityDiagnostics diagnose(const TwoQubitDensity& rho) {
    const Eigen::Matrix4cd& m = rho.m;
    DensityDiagnostics d;
    d.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(m.trace() - 1.0);
    const Eigen::Matrix4cd herm = 0.5 * (m + m.adjoint());
    d.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(herm, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j && i + j != 3) {
                d.x_sparsity_error = std::max(d.x_sparsity_error, std::abs(m(i, j)));
            }
        }
    }
    return d;
}

void require_physical(const TwoQubitDensity& rho) {
    const DensityDiagnostics d = diagnose(rho);
    if (!d.physical()) {
        throw DomainError("non-physical density matrix: hermiticity error " +
                          std::to_string(d.hermiticity_error) + ", trace error " +
                          std::to_string(d.trace_error) + ", min eigenvalue " +
                          std::to_string(d.min_eigenvalue));
    }
}

TriAmplitudes tripartite_amplitudes(const MeasurementRates& rates, double t) {
    const ResonantAmplitudes r = resonant_amplitudes(rates, t);
    TriAmplitudes amp;
    amp.xi = r.survival;
    amp.eta = cplx(0.0, -r.transfer);
    const double rest = 1.0 - std::norm(amp.xi) - std::norm(amp.eta);
    amp.chi = std::sqrt(std::max(0.0, rest));
    return amp;
}

TwoQubitDensity reduced_density(const InitialPair& pair, cplx amp) {
    const double aa = std::norm(pair.a());
    const double bb = std::norm(pair.b());
    const double x = std::norm(amp);
    TwoQubitDensity rho;
    auto& m = rho.m;
    m(0, 0) = aa + bb * (1.0 - x) * (1.0 - x);
    m(1, 1) = bb * x * (1.0 - x);
    m(2, 2) = m(1, 1);
    m(3, 3) = bb * x * x;
    m(0, 3) = pair.a() * std::conj(pair.b()) * std::conj(amp) * std::conj(amp);
    m(3, 0) = std::conj(pair.a()) * pair.b() * amp * amp;
    return rho;
}

double concurrence_raw(const InitialPair& pair, cplx amp) noexcept {
    const double x = std::norm(amp);
    const double b = std::abs(pair.b());
    return 2.0 * b * x * (std::abs(pair.a()) - b * (1.0 - x));
}

double concurrence_closed_form(const InitialPair& pair, cplx amp) noexcept {
    return std::max(0.0, concurrence_raw(pair, amp));
}

double wootters_concurrence(const TwoQubitDensity& rho) {
    require_physical(rho);
    // With rho = F F^dagger, the square roots of the eigenvalues of
    // rho (Y rho* Y) are the singular values of F^T Y F. Working with singular
    // values avoids square roots of tiny, noisy eigenvalues.
    const Eigen::Matrix4cd herm = 0.5 * (rho.m + rho.m.adjoint());
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(herm);
    const Eigen::Vector4d weights = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd f = eig.eigenvectors() * weights.asDiagonal();
    const Eigen::Matrix4cd w = f.transpose() * spin_flip() * f;
    const Eigen::Vector4d s = Eigen::JacobiSVD<Eigen::Matrix4cd>(w).singularValues(); // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double binary_entropy(double x) noexcept {
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double quantum_correlation_closed_form(const InitialPair& pair, cplx amp) noexcept {
    const double x = std::norm(amp);
    const double bx = std::norm(pair.b()) * x;
    const double disc = std::max(0.0, 1.0 - 4.0 * bx * (1.0 - x));
    // Never negative analytically; clamp the roundoff.
    return std::clamp(binary_entropy(bx) - binary_entropy(0.5 * (1.0 + std::sqrt(disc))), 0.0, 1.0);
}

double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
    double s = 0.0;
    for (double p : ev) {
        if (p > kZeroEigen) {
            s -= p * std::log2(p);
        }
    }
    return s;
}

Eigen::Matrix2cd marginal_first(const TwoQubitDensity& rho) {
    Eigen::Matrix2cd r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = rho.m(2 * i, 2 * j) + rho.m(2 * i + 1, 2 * j + 1);
        }
    }
    return r;
}

Eigen::Matrix2cd marginal_second(const TwoQubitDensity& rho) {
    Eigen::Matrix2cd r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = rho.m(i, j) + rho.m(2 + i, 2 + j);
        }
    }
    return r;
}

EntropyReport entropies_and_mutual_information(const TwoQubitDensity& rho) {
    require_physical(rho);
    EntropyReport r;
    r.s_joint = von_neumann_entropy(rho.m);
    r.s_left = von_neumann_entropy(marginal_first(rho));
    r.s_right = von_neumann_entropy(marginal_second(rho));
    r.mutual_information = r.s_left + r.s_right - r.s_joint;
    return r;
}

} // namespace qmeas
