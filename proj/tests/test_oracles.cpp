#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qmeas/errors.hpp"
#include "qmeas/oracles.hpp"
#include "qmeas/sweep.hpp"

using namespace qmeas;

namespace {

// Frozen from tests/reference/generate_reference.py.
constexpr double kTauLambda8 = 0.760345996300951;
constexpr double kQMid = 0.201090874455657;   // b = 0.75, |amp|^2 = 0.5
constexpr double kIMid = 0.402181748911314;
constexpr double kQLow = 0.263322961324816;   // b = 0.3, |amp|^2 = 0.8
constexpr double kILow = 0.526645922649631;

TwoQubitDensity state(double b, double x) { return reduced_density(InitialPair::from_b(b), std::sqrt(x)); }

} // namespace

TEST_CASE("settings validation") {
    CHECK_NOTHROW(IntegratorSettings{}.validate());
    CHECK_THROWS_AS((IntegratorSettings{0.0, 1e-12, 0.05}.validate()), DomainError);
    CHECK_THROWS_AS((IntegratorSettings{1e-10, -1.0, 0.05}.validate()), DomainError);
    CHECK_THROWS_AS((IntegratorSettings{1e-10, 1e-12, 0.0}.validate()), DomainError);
}

TEST_CASE("sample times are checked") {
    const SystemConfig cfg = SystemConfig::with_lambda_t(1.0, 1.0, 1.0, 2.0);
    const std::vector<double> beyond{0.0, 2.5};
    const std::vector<double> negative{-0.1, 1.0};
    const std::vector<double> unsorted{1.0, 0.5};
    CHECK_THROWS_AS(ode_integrate_amplitudes(cfg, AmplitudePair{}, beyond), DomainError);
    CHECK_THROWS_AS(ode_integrate_amplitudes(cfg, AmplitudePair{}, negative), DomainError);
    CHECK_THROWS_AS(ode_integrate_amplitudes(cfg, AmplitudePair{}, unsorted), DomainError);
    CHECK_THROWS_AS(ode_integrate_amplitudes(cfg, AmplitudePair{}, 3.0), DomainError);
    CHECK_THROWS_AS(ode_integrate_amplitudes(cfg, AmplitudePair{}, 1.0, {}, 1), DomainError);
}

TEST_CASE("Rabi oscillation without measurement") {
    for (double v0 : {0.5, 1.0, 2.0}) {
        const SystemConfig cfg = SystemConfig::with_lambda_t(0.0, v0, 1.0, 8.0);
        const auto traj = ode_integrate_amplitudes(cfg, AmplitudePair{}, 8.0, {}, 161);
        for (const AmplitudeSample& s : traj) {
            const double c = std::cos(v0 * s.t);
            CHECK(std::abs(s.p11() - c * c) <= 1e-9);
            CHECK(std::abs(s.norm() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("exceptional point at t = 1") {
    const SystemConfig cfg = SystemConfig::with_lambda_t(4.0, 1.0, 1.0, 2.0);
    const std::vector<double> times{1.0};
    const auto traj = ode_integrate_amplitudes(cfg, AmplitudePair{}, times);
    REQUIRE(traj.size() == 1);
    CHECK(traj[0].t == 1.0);
    CHECK(traj[0].p11() <= 1e-8);
    CHECK(std::abs(traj[0].p10() - std::exp(-2.0)) <= 1e-8);
}

TEST_CASE("integrated probabilities match the closed forms") {
    const std::vector<double> times = Axis{"t", 0.0, 8.0, 200}.values();
    for (double lt : {0.5, 2.0, 4.0, 8.0}) {
        const SystemConfig cfg = SystemConfig::with_lambda_t(lt, 1.0, 1.0, 8.0);
        const MeasurementRates rates = resonant_rates(lt);
        double worst = 0.0;
        for (const AmplitudeSample& s : ode_integrate_amplitudes(cfg, AmplitudePair{}, times)) {
            const TransitionProbabilities p = transition_probabilities(rates, s.t);
            worst = std::max({worst, std::abs(p.p11 - s.p11()), std::abs(p.p10 - s.p10())});
        }
        INFO("lambda_t = " << lt);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("norm never grows under measurement") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        SystemConfig cfg;
        cfg.e1 = 0.0;
        cfg.e2 = 0.5 + 1.5 * u(rng);
        cfg.v0 = 0.2 + 2.0 * u(rng);
        cfg.omega = cfg.e2 * (0.5 + u(rng));
        cfg.tau = 4.0;
        cfg.e_r = 0.1 + u(rng);
        cfg.e_meas = cfg.e2 * (1.5 * u(rng) - 0.25);
        const AmplitudePair c0{std::polar(0.6, 6.0 * u(rng)), std::polar(0.8, 6.0 * u(rng))};
        const auto traj = ode_integrate_amplitudes(cfg, c0, 4.0, {}, 201);
        for (std::size_t k = 1; k < traj.size(); ++k) {
            CHECK(traj[k].norm() <= traj[k - 1].norm() + 1e-12);
        }
    }
}

TEST_CASE("off-resonant closed propagator agrees with integration") {
    SystemConfig cfg;
    cfg.e1 = 0.0;
    cfg.e2 = 1.0;
    cfg.v0 = 0.7;
    cfg.omega = 1.3;
    cfg.tau = 5.0;
    cfg.e_r = 0.6;
    cfg.e_meas = 0.3;
    const AmplitudePair c0{std::polar(0.6, 0.4), std::polar(0.8, -1.1)};
    for (const AmplitudeSample& s : ode_integrate_amplitudes(cfg, c0, 5.0, {}, 51)) {
        const AmplitudePair closed = physical_amplitudes(cfg, c0, s.t);
        CHECK(std::abs(closed.ground - s.amp.ground) <= 1e-8);
        CHECK(std::abs(closed.excited - s.amp.excited) <= 1e-8);
    }
}

TEST_CASE("passage time root finder") {
    SUBCASE("exceptional point") {
        CHECK(std::abs(passage_time_root_find(SystemConfig::with_lambda_t(4.0)) - 1.0) <= 1e-8);
    }
    SUBCASE("weak measurement limit") {
        CHECK(std::abs(passage_time_root_find(SystemConfig::with_lambda_t(1e-6)) - std::numbers::pi / 2) <= 1e-6);
        CHECK(std::abs(passage_time_root_find(SystemConfig::with_lambda_t(0.0)) - std::numbers::pi / 2) <= 1e-8);
    }
    SUBCASE("incoherent side") {
        const double t = passage_time_root_find(SystemConfig::with_lambda_t(8.0));
        CHECK(std::abs(t - kTauLambda8) <= 1e-6);
        CHECK(std::abs(t - passage_time(resonant_rates(8.0))) <= 1e-8);
    }
    SUBCASE("agrees with the closed form across regimes") {
        for (double lt : {0.3, 1.0, 2.5, 3.9, 4.1, 6.0, 12.0}) {
            INFO("lambda_t = " << lt);
            CHECK(std::abs(passage_time_root_find(SystemConfig::with_lambda_t(lt)) -
                           passage_time(resonant_rates(lt))) <= 1e-8);
        }
    }
    SUBCASE("strong measurement") {
        CHECK(std::abs(passage_time_root_find(SystemConfig::with_lambda_t(1e3)) - 0.02485861526263751) <= 1e-8);
    }
    SUBCASE("detuned drive never empties the initial level") {
        SystemConfig cfg = SystemConfig::with_lambda_t(1.0);
        cfg.omega = 1.8;
        CHECK_THROWS_AS(passage_time_root_find(cfg), NoRootError);
    }
}

TEST_CASE("measurement search on known states") {
    SUBCASE("Bell state") {
        const DiscordResult d = discord_brute_force(state(1.0 / std::numbers::sqrt2, 1.0));
        CHECK(d.classical == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(d.quantum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(d.mutual_information == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("product state") {
        const DiscordResult d = discord_brute_force(state(0.75, 0.0));
        CHECK(std::abs(d.classical) <= 1e-12);
        CHECK(std::abs(d.quantum) <= 1e-12);
    }
    SUBCASE("frozen references") {
        const DiscordResult mid = discord_brute_force(state(0.75, 0.5));
        CHECK(std::abs(mid.quantum - kQMid) <= 1e-6);
        CHECK(std::abs(mid.classical - kQMid) <= 1e-6);
        CHECK(std::abs(mid.mutual_information - kIMid) <= 1e-10);
        const DiscordResult low = discord_brute_force(state(0.3, 0.8));
        CHECK(std::abs(low.quantum - kQLow) <= 1e-6);
        CHECK(std::abs(low.mutual_information - kILow) <= 1e-10);
    }
    SUBCASE("closed form within 1e-3") {
        const InitialPair pair = InitialPair::from_b(0.75);
        const double q = quantum_correlation_closed_form(pair, std::sqrt(0.5));
        CHECK(std::abs(discord_brute_force(state(0.75, 0.5)).quantum - q) <= 1e-3);
    }
    SUBCASE("rejects bad input") {
        TwoQubitDensity bad;
        bad.m(0, 0) = 2.0;
        CHECK_THROWS_AS(discord_brute_force(bad), DomainError);
        CHECK_THROWS_AS(discord_brute_force(state(0.5, 0.5), DiscordSettings{2, 1e-6}), DomainError);
        CHECK_THROWS_AS(discord_brute_force(state(0.5, 0.5), DiscordSettings{64, 0.0}), DomainError);
    }
}

TEST_CASE("doubling the measurement grid leaves C unchanged") {
    for (double b : {0.2, 0.5, 0.75, 0.95}) {
        for (double x : {0.1, 0.5, 0.9}) {
            const TwoQubitDensity rho = state(b, x);
            const double coarse = discord_brute_force(rho, {64, 1e-6}).classical;
            const double fine = discord_brute_force(rho, {128, 1e-6}).classical;
            INFO("b = " << b << ", x = " << x);
            CHECK(std::abs(coarse - fine) < 1e-6);
        }
    }
}

TEST_CASE("verification helpers report per-lambda checks") {
    const std::vector<double> times = Axis{"t", 0.0, 2.0, 21}.values();
    const std::vector<double> lambdas{1.0, 4.0};
    const auto probs = verify_probabilities(times, lambdas, 1.0, 1.0);
    REQUIRE(probs.size() == 2);
    for (const Check& c : probs) {
        CHECK(c.passed());
        CHECK(c.tolerance == 1e-8);
    }
    const auto passages = verify_passage_times(lambdas, 1.0, 1.0, 2.0);
    REQUIRE(passages.size() == 2);
    CHECK(passages[0].passed());
    CHECK(passages[1].passed());
    CHECK_FALSE((Check{"x", 2e-8, 1e-8}.passed()));
    CHECK_FALSE((Check{"x", std::nan(""), 1e-8}.passed()));
}
