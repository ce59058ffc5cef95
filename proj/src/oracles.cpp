#include "qmeas/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

namespace odeint = boost::numeric::odeint;

// Re A1, Re A2, Im A1, Im A2
using State = std::array<double, 4>;
using Stepper = odeint::runge_kutta_dopri5<State>;

constexpr cplx kI{0.0, 1.0};

State to_state(const AmplitudePair& a) {
    return {a.ground.real(), a.excited.real(), a.ground.imag(), a.excited.imag()};
}

AmplitudePair from_state(const State& x) { return {{x[0], x[2]}, {x[1], x[3]}}; }

struct SchrodingerRhs {
    cplx level1;
    cplx level2;
    double v0;
    double omega;

    explicit SchrodingerRhs(const SystemConfig& cfg) {
        const MeasurementRates rates = compute_rates(cfg);
        level1 = cplx(cfg.e1, -0.5 * rates.lambda1);
        level2 = cplx(cfg.e2, -0.5 * rates.lambda2);
        v0 = cfg.v0;
        omega = cfg.omega;
    }

    AmplitudePair derivative(const AmplitudePair& a, double t) const {
        const cplx drive = std::polar(v0, omega * t);
        return {-kI * (level1 * a.ground + drive * a.excited),
                -kI * (std::conj(drive) * a.ground + level2 * a.excited)};
    }

    void operator()(const State& x, State& dxdt, double t) const {
        dxdt = to_state(derivative(from_state(x), t));
    }

    double dp11_dt(const State& x, double t) const {
        const AmplitudePair a = from_state(x);
        return 2.0 * std::real(std::conj(a.excited) * derivative(a, t).excited);
    }
};

void check_finite(const State& x, double t) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw IntegrationError("non-finite amplitude", t);
        }
    }
}

std::vector<State> sample(const SchrodingerRhs& rhs, State x, std::span<const double> times,
                          const IntegratorSettings& s) {
    std::vector<State> out;
    out.reserve(times.size());
    if (times.empty()) {
        return out;
    }
    double last_t = times.front();
    double widest_gap = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        widest_gap = std::max(widest_gap, times[i] - times[i - 1]);
    }
    const auto max_steps = static_cast<int>(std::min(1e8, 10000.0 + 100.0 * widest_gap / s.max_step));
    auto observer = [&](const State& st, double t) {
        check_finite(st, t);
        out.push_back(st);
        last_t = t;
    };
    const double dt0 = std::min(s.max_step, 1e-3);
    try {
        odeint::integrate_times(odeint::make_dense_output(s.abs_tol, s.rel_tol, s.max_step, Stepper()),
                                std::ref(rhs), x, times.begin(), times.end(), dt0, observer,
                                odeint::max_step_checker(max_steps));
    } catch (const odeint::odeint_error& e) {
        throw IntegrationError(std::string("integration failed: ") + e.what(), last_t);
    }
    return out;
}

State advance(const SchrodingerRhs& rhs, State x, double from, double to, const IntegratorSettings& s) {
    if (to <= from) {
        return x;
    }
    try {
        odeint::integrate_adaptive(odeint::make_controlled(s.abs_tol, s.rel_tol, s.max_step, Stepper()),
                                   std::ref(rhs), x, from, to, std::min(s.max_step, (to - from) / 4.0));
    } catch (const odeint::odeint_error& e) {
        throw IntegrationError(std::string("integration failed: ") + e.what(), from);
    }
    check_finite(x, to);
    return x;
}

// Conditional states of qubit 1 after a projective measurement of qubit 2
// along (theta, phi); returns S(rho_1) minus the average conditional entropy.
class ClassicalCorrelation {
public:
    explicit ClassicalCorrelation(const TwoQubitDensity& rho)
        : rho_(rho.m), s_first_(von_neumann_entropy(marginal_first(rho))) {}

    double operator()(double theta, double phi) const {
        const cplx n_minus(std::sin(theta) * std::cos(phi), -std::sin(theta) * std::sin(phi));
        const double nz = std::cos(theta);
        double conditional = 0.0;
        for (double sign : {1.0, -1.0}) {
            Eigen::Matrix2cd proj;
            proj << 1.0 + sign * nz, sign * n_minus, sign * std::conj(n_minus), 1.0 - sign * nz;
            proj *= 0.5;
            Eigen::Matrix2cd cond = Eigen::Matrix2cd::Zero();
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    for (int k = 0; k < 2; ++k) {
                        for (int l = 0; l < 2; ++l) {
                            cond(i, j) += rho_(2 * i + k, 2 * j + l) * proj(l, k);
                        }
                    }
                }
            }
            const double p = cond.trace().real();
            if (p > 1e-15) {
                conditional += p * entropy2(cond / p);
            }
        }
        return s_first_ - conditional;
    }

private:
    static double entropy2(const Eigen::Matrix2cd& m) {
        const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
        const double half_diff = 0.5 * (m(0, 0).real() - m(1, 1).real());
        const double r = std::hypot(half_diff, std::abs(m(0, 1)));
        double s = 0.0;
        for (double p : {mean + r, mean - r}) {
            if (p > 1e-14) {
                s -= p * std::log2(p);
            }
        }
        return s;
    }

    Eigen::Matrix4cd rho_;
    double s_first_;
};

struct Candidate {
    double value;
    double theta;
    double phi;
};

Candidate refine(const ClassicalCorrelation& f, Candidate c, double step_theta, double step_phi,
                 double tol) {
    while (std::max(step_theta, step_phi) > tol) {
        bool moved = false;
        const std::array<std::array<double, 2>, 4> moves{
            {{step_theta, 0.0}, {-step_theta, 0.0}, {0.0, step_phi}, {0.0, -step_phi}}};
        for (const auto& mv : moves) {
            const double th = c.theta + mv[0];
            const double ph = c.phi + mv[1];
            const double v = f(th, ph);
            if (v > c.value) {
                c = {v, th, ph};
                moved = true;
            }
        }
        if (!moved) {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    return c;
}

} // namespace

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && max_step > 0.0)) {
        throw DomainError("integrator tolerances and max_step must be positive");
    }
}

std::vector<AmplitudeSample> ode_integrate_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0,
                                                      std::span<const double> times,
                                                      const IntegratorSettings& settings) {
    settings.validate();
    const SchrodingerRhs rhs(cfg);
    const double slack = 1e-12 * std::max(1.0, cfg.tau);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0 && times[i] <= cfg.tau + slack)) {
            throw DomainError("sample times must lie in [0, tau]");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw DomainError("sample times must be strictly ascending");
        }
    }
    if (times.empty()) {
        return {};
    }
    // odeint starts at the first sample; reach it first when it is not 0.
    const State start = advance(rhs, to_state(c0), 0.0, times.front(), settings);
    const std::vector<State> states = sample(rhs, start, times, settings);
    std::vector<AmplitudeSample> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.push_back({times[i], from_state(states[i])});
    }
    return out;
}

std::vector<AmplitudeSample> ode_integrate_amplitudes(const SystemConfig& cfg, const AmplitudePair& c0,
                                                      double t_end, const IntegratorSettings& settings,
                                                      std::size_t samples) {
    if (samples < 2) {
        throw DomainError("need at least two samples");
    }
    if (!(t_end > 0.0)) {
        throw DomainError("t_end must be positive");
    }
    std::vector<double> times(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        times[i] = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    return ode_integrate_amplitudes(cfg, c0, times, settings);
}

double passage_time_root_find(const SystemConfig& cfg, const IntegratorSettings& settings) {
    settings.validate();
    const SchrodingerRhs rhs(cfg);
    const MeasurementRates rates = compute_rates(cfg);

    const double window = 10.0 * cfg.tau;
    const double rate_scale = 0.25 * (rates.lambda1 + rates.lambda2) + cfg.v0 + std::abs(rates.detuning);
    const double h = std::min({settings.max_step, 0.01, 0.1 / rate_scale});
    const auto n = static_cast<std::size_t>(std::ceil(window / h));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = window * static_cast<double>(i) / static_cast<double>(n);
    }
    const std::vector<State> states = sample(rhs, to_state(AmplitudePair{}), grid, settings);

    constexpr double kThreshold = 1e-12;
    double prev = rhs.dp11_dt(states[0], grid[0]);
    for (std::size_t i = 1; i < states.size(); ++i) {
        const double cur = rhs.dp11_dt(states[i], grid[i]);
        if (prev < 0.0 && cur >= 0.0) {
            double lo = grid[i - 1];
            double hi = grid[i];
            const State base = states[i - 1];
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const State x = advance(rhs, base, grid[i - 1], mid, settings);
                (rhs.dp11_dt(x, mid) < 0.0 ? lo : hi) = mid;
            }
            const double root = 0.5 * (lo + hi);
            const AmplitudePair a = from_state(advance(rhs, base, grid[i - 1], root, settings));
            if (std::norm(a.excited) <= kThreshold) {
                return root;
            }
        }
        prev = cur;
    }
    throw NoRootError("P11 stays above " + std::to_string(kThreshold) + " on [0, " +
                      std::to_string(window) + "]");
}

DiscordResult discord_brute_force(const TwoQubitDensity& rho, const DiscordSettings& settings) {
    if (settings.grid < 4 || !(settings.angle_tol > 0.0)) {
        throw DomainError("discord search needs grid >= 4 and a positive angle tolerance");
    }
    const EntropyReport entropies = entropies_and_mutual_information(rho);
    const ClassicalCorrelation f(rho);

    const int n = settings.grid;
    const double d_theta = std::numbers::pi / (n - 1);
    const double d_phi = 2.0 * std::numbers::pi / n;
    std::vector<Candidate> scan;
    scan.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double th = i * d_theta;
            const double ph = j * d_phi;
            scan.push_back({f(th, ph), th, ph});
        }
    }
    constexpr std::size_t kSeeds = 4;
    const std::size_t seeds = std::min(kSeeds, scan.size());
    std::partial_sort(scan.begin(), scan.begin() + static_cast<std::ptrdiff_t>(seeds), scan.end(),
                      [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

    Candidate best = scan.front();
    for (std::size_t k = 0; k < seeds; ++k) {
        const Candidate c = refine(f, scan[k], d_theta, d_phi, settings.angle_tol);
        if (c.value > best.value) {
            best = c;
        }
    }
    DiscordResult out;
    out.classical = best.value;
    out.mutual_information = entropies.mutual_information;
    out.quantum = entropies.mutual_information - best.value;
    out.theta = best.theta;
    out.phi = best.phi;
    return out;
}

} // namespace qmeas
