#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/hermite.hpp"
#include "qosc/market.hpp"
#include "qosc/spectral.hpp"

using namespace qosc;

namespace {

const MarketParams kFigParams = make_market_params(0.25, 0.03);

SpectralSolution default_call_solution(int n_terms, const PricingBasis& basis) {
    const OptionSpec call = make_option_spec(OptionKind::Call, 1.0, 5.0);
    return build_solution(call, kFigParams, basis, default_domain(1.0), n_terms);
}

} // namespace

TEST_CASE("epsilon_n: anchor value, mode spacing, vanishing-shift case") {
    CHECK(std::abs(epsilon_n(kFigParams, 0.5) - 0.06126250) < 1e-9);
    for (int n = 0; n < 6; ++n) {
        const double spacing =
            epsilon_n(kFigParams, n + 1.5) - epsilon_n(kFigParams, n + 0.5);
        CHECK(std::abs(spacing - 0.25 * 0.25) < 1e-12);
    }
    // gamma = -1 (r = -sigma^2/2) kills the shift term: eps_n = sigma^2 (n+1/2).
    const MarketParams drift_free = unchecked_market_params(0.4, -0.08);
    CHECK(std::abs(gamma_of(drift_free) + 1.0) < 1e-15);
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(epsilon_n(drift_free, n + 0.5) - 0.16 * (n + 0.5)) < 1e-12);
    }
}

TEST_CASE("PricingBasis wraps both families behind one surface") {
    const PricingBasis osc = PricingBasis::oscillator(5);
    CHECK(osc.kind() == BasisKind::Oscillator);
    CHECK(!osc.alpha().has_value());
    const HermiteBasis hermite(5);
    CHECK(osc.eval(3, 0.7) == hermite.psi(3, 0.7));
    const std::vector<double> all = osc.eval_all(0.7);
    REQUIRE(all.size() == 6);
    CHECK(all[3] == osc.eval(3, 0.7));

    const PricingBasis partner = PricingBasis::susy(make_susy_params(1.5), 5);
    CHECK(partner.kind() == BasisKind::Susy);
    CHECK(partner.alpha().has_value());
    CHECK(*partner.alpha() == 1.5);
    CHECK(partner.eval_all(0.7)[2] == partner.eval(2, 0.7));
    CHECK_THROWS_AS(osc.eval(6, 0.0), DomainError);
}

TEST_CASE("project_payoff: zero payoff gives identically zero coefficients") {
    const PricingBasis basis = PricingBasis::oscillator(3);
    const std::vector<double> b =
        project_payoff([](double) { return 0.0; }, basis, -0.02, 0.0, 6.0, 4, 64, 16);
    REQUIRE(b.size() == 4);
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("project_payoff recovers a pure Psi_0 component") {
    const PricingBasis basis = PricingBasis::oscillator(5);
    const double gamma = gamma_of(kFigParams);
    const HermiteBasis hermite(0);
    const auto payoff = [&](double s) {
        return std::pow(s, -gamma) * hermite.psi(0, std::log(s));
    };
    const std::vector<double> b =
        project_payoff(payoff, basis, gamma, -8.0, 8.0, 6, 64, 16);
    CHECK(std::abs(b[0] - 1.0) < 1e-8);
    for (std::size_t n = 1; n < b.size(); ++n) CHECK(std::abs(b[n]) < 1e-8);
}

TEST_CASE("project_payoff is stable under a 10x finer quadrature") {
    const PricingBasis basis = PricingBasis::oscillator(7);
    const double gamma = -0.02;
    const auto payoff = [](double s) { return std::max(s - 1.0, 0.0); };
    const std::vector<double> coarse =
        project_payoff(payoff, basis, gamma, 0.0, 6.0, 8, 64, 16);
    const std::vector<double> fine =
        project_payoff(payoff, basis, gamma, 0.0, 6.0, 8, 640, 16);
    CHECK(std::abs(coarse[0] - fine[0]) < 1e-7);
}

TEST_CASE("project_payoff propagates evaluation failures and bad lengths") {
    const PricingBasis basis = PricingBasis::oscillator(3);
    CHECK_THROWS_AS(project_payoff([](double) { return std::nan(""); }, basis, 0.0,
                                   0.0, 1.0, 2, 4, 8),
                    EvaluationError);
    CHECK_THROWS_AS(
        project_payoff([](double) { return 0.0; }, basis, 0.0, 0.0, 1.0, 0, 4, 8),
        DomainError);
    CHECK_THROWS_AS(
        project_payoff([](double) { return 0.0; }, basis, 0.0, 0.0, 1.0, 5, 4, 8),
        DomainError);
}

TEST_CASE("build_solution invariants on the chart-compatible setup") {
    const double strike = std::exp(8.0 * std::sqrt(2.0 * 3.14159265358979323846 / 21.0));
    const OptionSpec call = make_option_spec(OptionKind::Call, strike, 5.0);
    const PricingBasis basis = PricingBasis::oscillator(47);
    const SpectralSolution sol =
        build_solution(call, kFigParams, basis, default_domain(strike), 48);
    CHECK(sol.basis_kind == BasisKind::Oscillator);
    CHECK(sol.truncation == 48);
    REQUIRE(sol.coefficients.size() == 48);
    REQUIRE(sol.epsilons.size() == 48);
    for (std::size_t n = 0; n < 48; ++n) {
        CHECK(std::isfinite(sol.coefficients[n]));
        CHECK(sol.epsilons[n] > 0.0);
        if (n > 0) CHECK(sol.epsilons[n] > sol.epsilons[n - 1]);
    }
    CHECK(std::isfinite(price(sol, strike, 3.0)));
}

TEST_CASE("a strike at the upper band edge prices to zero everywhere") {
    const LogDomain domain = make_log_domain(std::exp(-6.0), std::exp(6.0));
    const OptionSpec call = make_option_spec(OptionKind::Call, domain.b, 1.0);
    const PricingBasis basis = PricingBasis::oscillator(7);
    const SpectralSolution sol = build_solution(call, kFigParams, basis, domain, 8);
    for (double v : sol.coefficients) CHECK(v == 0.0);
    for (double S : {0.5, 1.0, 10.0}) {
        CHECK(price(sol, S, 0.5) == 0.0);
        CHECK(price(sol, S, 1.0) == 0.0);
    }
    // A strike beyond the band is still rejected.
    const OptionSpec outside = make_option_spec(OptionKind::Call, 2.0 * domain.b, 1.0);
    CHECK_THROWS_AS(build_solution(outside, kFigParams, basis, domain, 8), DomainError);
}

TEST_CASE("swapping to the large-alpha partner basis barely moves the solution") {
    const OptionSpec call = make_option_spec(OptionKind::Call, 1.0, 1.0);
    const LogDomain domain = default_domain(1.0);
    const PricingBasis osc = PricingBasis::oscillator(7);
    const PricingBasis partner = PricingBasis::susy(make_susy_params(1e6), 7);
    const SpectralSolution a = build_solution(call, kFigParams, osc, domain, 8);
    const SpectralSolution b = build_solution(call, kFigParams, partner, domain, 8);
    for (std::size_t n = 0; n < 8; ++n) {
        CHECK(std::abs(a.coefficients[n] - b.coefficients[n]) <
              1e-3 * (1.0 + std::abs(a.coefficients[n])));
    }
    for (double S : {0.8, 1.0, 1.3}) {
        const double va = price(a, S, 0.0);
        const double vb = price(b, S, 0.0);
        CHECK(std::abs(va - vb) < 1e-3 * (1.0 + std::abs(va)));
    }
}

TEST_CASE("terminal projection sharpens monotonically with the truncation") {
    const OptionSpec call = make_option_spec(OptionKind::Call, 1.0, 5.0);
    const LogDomain domain = default_domain(1.0);
    const PricingBasis basis = PricingBasis::oscillator(31);
    const double res8 =
        terminal_residual(build_solution(call, kFigParams, basis, domain, 8), call,
                          domain, 50);
    const double res16 =
        terminal_residual(build_solution(call, kFigParams, basis, domain, 16), call,
                          domain, 50);
    const double res32 =
        terminal_residual(build_solution(call, kFigParams, basis, domain, 32), call,
                          domain, 50);
    CHECK(res8 > res16);
    CHECK(res16 > res32);
}

TEST_CASE("terminal_residual is zero when every coefficient vanishes") {
    const LogDomain domain = make_log_domain(std::exp(-6.0), std::exp(6.0));
    const OptionSpec call = make_option_spec(OptionKind::Call, domain.b, 1.0);
    const PricingBasis basis = PricingBasis::oscillator(7);
    const SpectralSolution sol = build_solution(call, kFigParams, basis, domain, 8);
    // The call payoff is nonzero only at S = b itself, which the midpoint grid
    // never samples, so the degenerate solution reconstructs it exactly.
    CHECK(terminal_residual(sol, call, domain, 50) == 0.0);
}

TEST_CASE("a pure Psi_0 payoff is reproduced exactly by one term") {
    const double gamma = gamma_of(kFigParams);
    const HermiteBasis hermite(0);
    const auto payoff = [&](double s) {
        return std::pow(s, -gamma) * hermite.psi(0, std::log(s));
    };
    const PricingBasis basis = PricingBasis::oscillator(0);
    const std::vector<double> b =
        project_payoff(payoff, basis, gamma, -8.0, 8.0, 1, 64, 16);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = -8.0 + (i + 0.5) * (16.0 / 50.0);
        const double S = std::exp(x);
        const double reconstructed = std::pow(S, -gamma) * b[0] * hermite.psi(0, x);
        worst = std::max(worst, std::abs(reconstructed - payoff(S)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("series tail is negligible at N = 48 one year from maturity") {
    const MarketParams wide = make_market_params(1.0, 0.03);
    const OptionSpec call = make_option_spec(OptionKind::Call, 1.0, 2.0);
    const LogDomain domain = default_domain(1.0);
    const PricingBasis basis = PricingBasis::oscillator(47);
    const SpectralSolution sol = build_solution(call, wide, basis, domain, 48);
    for (double S : {0.5, 1.0, 2.0}) {
        const double v = price(sol, S, 1.0);
        CHECK(std::isfinite(v));
        const double x = std::log(S);
        const double last = std::exp(sol.epsilons[47] * (1.0 - sol.maturity)) *
                            basis.eval(47, x) * sol.coefficients[47] *
                            std::pow(S, -sol.gamma);
        CHECK(std::abs(last) < 1e-10 * (1.0 + std::abs(v)));
    }
}

TEST_CASE("price rejects spots outside the band and times past maturity") {
    const PricingBasis basis = PricingBasis::oscillator(7);
    const SpectralSolution sol = default_call_solution(8, basis);
    CHECK_THROWS_AS(price(sol, sol.domain.a * 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(price(sol, sol.domain.b, 0.0), DomainError);
    CHECK_THROWS_AS(price(sol, 1.0, sol.maturity + 0.1), DomainError);
    CHECK(std::isfinite(price(sol, 1.0, sol.maturity)));
}

TEST_CASE("pricing is linear in the payoff") {
    const OptionSpec call = make_option_spec(OptionKind::Call, 1.0, 2.0);
    const OptionSpec put = make_option_spec(OptionKind::Put, 1.0, 2.0);
    const LogDomain domain = default_domain(1.0);
    const PricingBasis basis = PricingBasis::oscillator(15);
    const SpectralSolution cs = build_solution(call, kFigParams, basis, domain, 16);
    const SpectralSolution ps = build_solution(put, kFigParams, basis, domain, 16);

    SpectralSolution combined = cs;
    for (std::size_t n = 0; n < combined.coefficients.size(); ++n) {
        combined.coefficients[n] += ps.coefficients[n];
    }
    for (double S : {0.6, 1.0, 1.7}) {
        for (double t : {0.0, 1.0, 2.0}) {
            const double sum = price(cs, S, t) + price(ps, S, t);
            CHECK(std::abs(price(combined, S, t) - sum) < 1e-10);
        }
    }
}

TEST_CASE("every series term is damped backward from maturity") {
    const PricingBasis basis = PricingBasis::oscillator(15);
    const SpectralSolution sol = default_call_solution(16, basis);
    const double S = 1.3;
    const double x = std::log(S);
    const std::vector<double> values = basis.eval_all(x);
    const double t = sol.maturity - 0.7;
    for (int n = 0; n < sol.truncation; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        const double at_T = std::abs(values[k] * sol.coefficients[k]);
        const double at_t = std::abs(std::exp(sol.epsilons[k] * (t - sol.maturity)) *
                                     values[k] * sol.coefficients[k]);
        CHECK(at_t <= at_T);
        if (at_T > 0.0) CHECK(at_t < at_T);
    }
}

TEST_CASE("call payoff projected over the put-side support vanishes") {
    const PricingBasis basis = PricingBasis::oscillator(7);
    const auto call_payoff = [](double s) { return std::max(s - 1.0, 0.0); };
    // Support [ln a, ln K] = [-6, 0]: the call integrand is identically zero.
    const std::vector<double> b =
        project_payoff(call_payoff, basis, -0.02, -6.0, 0.0, 8, 64, 16);
    for (double v : b) CHECK(v == 0.0);
}
