#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qosc/hermite.hpp"
#include "qosc/market.hpp"
#include "qosc/susy.hpp"

namespace qosc {

enum class BasisKind { Oscillator, Susy };

/// Handle over the expansion basis used by the continuous-spectrum pricer:
/// either the oscillator eigenbasis Psi_n or a partner basis Phi_n.
class PricingBasis {
public:
    static PricingBasis oscillator(int max_n);
    static PricingBasis susy(SusyParams params, int max_n);

    BasisKind kind() const { return kind_; }
    int max_n() const { return max_n_; }
    std::optional<double> alpha() const;

    /// n-th basis function at x.
    double eval(int n, double x) const;

    /// All basis functions 0..max_n at x in one pass.
    std::vector<double> eval_all(double x) const;

private:
    PricingBasis(BasisKind kind, int max_n);

    BasisKind kind_;
    int max_n_;
    std::optional<HermiteBasis> hermite_;
    std::optional<SusyBasis> susy_;
};

/// Decay rate of the n-th separated mode: eps = sigma^2 lambda + (sigma^2/2)(gamma+1)^2,
/// with lambda_n = n + 1/2 on the oscillator spectrum.
double epsilon_n(const MarketParams& params, double lambda_n);

/// Expansion coefficients of a payoff against the basis, in the log variable:
///   b_n = int_{lo}^{hi} payoff(e^x) e^{gamma x} basis_n(x) dx,
/// where [lo, hi] is the payoff's support interval in x = ln S.
std::vector<double> project_payoff(const std::function<double(double)>& payoff,
                                   const PricingBasis& basis, double gamma,
                                   double lo_x, double hi_x, int n_terms,
                                   int panels, int order);

/// Assembled series solution of the potential-extended pricing equation.
/// Coefficients are stored time-free (b_n); the terminal-condition
/// coefficient would be c_n = e^{-eps_n T} b_n, but forming it eagerly
/// overflows e^{eps_n T} for large n*T, so the price combines exponents as
/// e^{eps_n (t-T)} <= 1 directly.
struct SpectralSolution {
    BasisKind basis_kind;
    std::optional<double> alpha;
    double gamma = 0.0;
    std::vector<double> coefficients;
    std::vector<double> epsilons;
    double maturity = 0.0;
    int truncation = 0;
    LogDomain domain{1.0, 2.0};
    PricingBasis basis;
};

/// Builds the N-term solution for the contract: projects the truncated payoff
/// over its support (call: [ln K, ln b]; put: [ln a, ln K]) and pairs each
/// coefficient with its decay rate.
SpectralSolution build_solution(const OptionSpec& spec, const MarketParams& params,
                                const PricingBasis& basis, const LogDomain& domain,
                                int n_terms, int panels = 64, int order = 16);

/// Truncated-series price
///   V(S, t) = S^{-gamma} sum_n e^{eps_n (t-T)} basis_n(ln S) b_n
/// for S strictly inside the band and t <= T.  Every term is damped for
/// t < T since eps_n > 0.
double price(const SpectralSolution& solution, double S, double t);

/// Max over a midpoint log-grid of |price(S, T) - payoff_truncated(S)| —
/// the truncation quality of the expansion at maturity.
double terminal_residual(const SpectralSolution& solution, const OptionSpec& spec,
                         const LogDomain& domain, int grid_size);

} // namespace qosc
