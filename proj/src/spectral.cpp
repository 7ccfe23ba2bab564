#include "qosc/spectral.hpp"

#include <cmath>
#include <string>

#include "qosc/errors.hpp"
#include "qosc/numerics.hpp"

namespace qosc {

PricingBasis::PricingBasis(BasisKind kind, int max_n) : kind_(kind), max_n_(max_n) {
    if (max_n < 0) {
        throw DomainError("basis order must be nonnegative");
    }
}

PricingBasis PricingBasis::oscillator(int max_n) {
    PricingBasis basis(BasisKind::Oscillator, max_n);
    basis.hermite_.emplace(max_n);
    return basis;
}

PricingBasis PricingBasis::susy(SusyParams params, int max_n) {
    PricingBasis basis(BasisKind::Susy, max_n);
    basis.susy_.emplace(params, max_n);
    return basis;
}

std::optional<double> PricingBasis::alpha() const {
    if (kind_ == BasisKind::Susy) {
        return susy_->params().alpha;
    }
    return std::nullopt;
}

double PricingBasis::eval(int n, double x) const {
    if (kind_ == BasisKind::Oscillator) {
        return hermite_->psi(n, x);
    }
    return susy_->phi(n, x);
}

std::vector<double> PricingBasis::eval_all(double x) const {
    if (kind_ == BasisKind::Oscillator) {
        return hermite_->psi_all(x);
    }
    return susy_->phi_all(x);
}

double epsilon_n(const MarketParams& params, double lambda_n) {
    const double s2 = params.sigma * params.sigma;
    const double g1 = gamma_of(params) + 1.0;
    return s2 * lambda_n + 0.5 * s2 * g1 * g1;
}

std::vector<double> project_payoff(const std::function<double(double)>& payoff,
                                   const PricingBasis& basis, double gamma,
                                   double lo_x, double hi_x, int n_terms,
                                   int panels, int order) {
    if (n_terms <= 0) {
        throw DomainError("number of expansion terms must be positive");
    }
    if (n_terms - 1 > basis.max_n()) {
        throw DomainError("basis order too small for requested expansion length");
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n_terms), 0.0);
    if (!(lo_x < hi_x)) {
        return coeffs; // empty support: all coefficients vanish
    }
    const QuadratureRule rule = composite_rule(order, panels, lo_x, hi_x);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        const double f = payoff(std::exp(x));
        if (!std::isfinite(f)) {
            throw EvaluationError("payoff evaluated to a non-finite value", x);
        }
        const double common = rule.weights[i] * f * std::exp(gamma * x);
        const std::vector<double> values = basis.eval_all(x);
        for (int n = 0; n < n_terms; ++n) {
            coeffs[static_cast<std::size_t>(n)] += common * values[static_cast<std::size_t>(n)];
        }
    }
    return coeffs;
}

SpectralSolution build_solution(const OptionSpec& spec, const MarketParams& params,
                                const PricingBasis& basis, const LogDomain& domain,
                                int n_terms, int panels, int order) {
    if (spec.maturity <= 0.0) {
        throw DomainError("maturity must be positive");
    }
    const double gamma = gamma_of(params);
    const double log_a = std::log(domain.a);
    const double log_b = std::log(domain.b);
    const double log_k = std::log(spec.strike);
    // A strike at a band edge is allowed: the truncated payoff support is then
    // empty on one side and every coefficient vanishes.
    if (!(log_a <= log_k && log_k <= log_b)) {
        throw DomainError("strike must lie inside the price band");
    }

    // The truncated payoff is supported on one side of the strike only, so the
    // projection integrates over that side alone.
    const double lo_x = (spec.kind == OptionKind::Call) ? log_k : log_a;
    const double hi_x = (spec.kind == OptionKind::Call) ? log_b : log_k;
    const auto payoff = [&spec, &domain](double S) {
        return payoff_truncated(S, spec, domain);
    };

    SpectralSolution solution{basis.kind(),
                              basis.alpha(),
                              gamma,
                              project_payoff(payoff, basis, gamma, lo_x, hi_x, n_terms,
                                             panels, order),
                              {},
                              spec.maturity,
                              n_terms,
                              domain,
                              basis};
    solution.epsilons.reserve(static_cast<std::size_t>(n_terms));
    for (int n = 0; n < n_terms; ++n) {
        // Both bases carry the spectrum n + 1/2: the partner potential is
        // isospectral to the oscillator, its extra ground state sitting at
        // the same lowest level.
        solution.epsilons.push_back(epsilon_n(params, n + 0.5));
    }
    return solution;
}

double price(const SpectralSolution& solution, double S, double t) {
    if (!(S > solution.domain.a && S < solution.domain.b)) {
        throw DomainError("spot price must lie strictly inside the band (" +
                          std::to_string(solution.domain.a) + ", " +
                          std::to_string(solution.domain.b) + ")");
    }
    if (t > solution.maturity) {
        throw DomainError("valuation time must not exceed maturity");
    }
    const double x = std::log(S);
    const std::vector<double> values = solution.basis.eval_all(x);
    double sum = 0.0;
    for (int n = 0; n < solution.truncation; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        // e^{eps_n (t-T)} <= 1: each mode is damped backward from maturity.
        const double damping = std::exp(solution.epsilons[k] * (t - solution.maturity));
        sum += damping * values[k] * solution.coefficients[k];
    }
    return std::pow(S, -solution.gamma) * sum;
}

double terminal_residual(const SpectralSolution& solution, const OptionSpec& spec,
                         const LogDomain& domain, int grid_size) {
    if (grid_size <= 0) {
        throw DomainError("grid size must be positive");
    }
    const double log_a = std::log(domain.a);
    const double log_b = std::log(domain.b);
    const double step = (log_b - log_a) / grid_size;
    double worst = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        // Midpoints avoid the band edges, where price() is undefined, and the
        // strike kink when the grid is even.
        const double x = log_a + (i + 0.5) * step;
        const double S = std::exp(x);
        const double err =
            std::abs(price(solution, S, solution.maturity) - payoff_truncated(S, spec, domain));
        worst = std::max(worst, err);
    }
    return worst;
}

} // namespace qosc
