#pragma once

#include <utility>

#include "qosc/errors.hpp"

namespace qosc {

/// Market constants of the pricing model: volatility per sqrt(time) and
/// risk-free rate per unit time.
struct MarketParams {
    double sigma;
    double r;
};

/// Validating factory: sigma > 0, r >= 0, both finite.
MarketParams make_market_params(double sigma, double r);

/// Test-support factory that skips the r >= 0 check (some property tests use
/// deliberately negative rates, e.g. r = -sigma^2/2 to zero out the drift
/// exponent).  sigma must still be positive and finite.
MarketParams unchecked_market_params(double sigma, double r);

enum class OptionKind { Call, Put };

/// European option contract: kind, strike K > 0, maturity T > 0.
struct OptionSpec {
    OptionKind kind;
    double strike;
    double maturity;
};

OptionSpec make_option_spec(OptionKind kind, double strike, double maturity);

/// Price band (a, b) onto which payoffs are truncated; 0 < a < b, and for a
/// given contract a < K < b.
struct LogDomain {
    double a;
    double b;
};

LogDomain make_log_domain(double a, double b);

/// Default truncation band around a strike: a = K e^{-6}, b = K e^{6}.  Six
/// log-units cover the Gaussian weight of the expansion basis beyond 1e-7.
LogDomain default_domain(double strike);

/// The exponent constant gamma = r/sigma^2 - 1/2 of the power substitution
/// V = e^{eps t} S^{-gamma} phi(ln S).
double gamma_of(const MarketParams& params);

/// Standard normal CDF, computed as 1/2 + gaussian_integral(z/sqrt(2))/sqrt(pi)
/// so the only error model involved is the quadrature's (absolute accuracy
/// better than 1e-10).
double norm_cdf(double z);

/// The (d1, d2) pair of the closed-form formulas:
///   d1 = [ln(S/K) + (r + sigma^2/2)(T-t)] / (sigma sqrt(T-t)),  d2 = d1 - sigma sqrt(T-t).
/// Requires t < T; the closed form is undefined at zero time-to-maturity.
std::pair<double, double> d_one_two(double S, const OptionSpec& spec,
                                    const MarketParams& params, double t);

/// Closed-form European option value.  At t = T returns the exact payoff;
/// otherwise S Phi(d1) - K e^{-r(T-t)} Phi(d2) for calls and
/// K e^{-r(T-t)} Phi(-d2) - S Phi(-d1) for puts.  Never negative.
double bs_price(double S, double t, const OptionSpec& spec, const MarketParams& params);

/// Payoff truncated to the band:
///   call: 0 for S < K,  S - K on [K, b],  0 for S > b
///   put:  0 for S < a,  K - S on [a, K],  0 for S > K.
/// Requires a < K < b.
double payoff_truncated(double S, const OptionSpec& spec, const LogDomain& domain);

/// Reference price by direct lognormal expectation,
///   e^{-r (T-t)} E[payoff(S_T)],  ln S_T ~ N(ln S + (r - sigma^2/2)(T-t), sigma^2 (T-t)),
/// evaluated with composite quadrature over the standard normal density on
/// [-10, 10] (omitted tail mass ~1e-23).  Method-independent of the closed
/// form; the validation suite checks bs_price against it.
double bs_price_quadrature(double S, double t, const OptionSpec& spec,
                           const MarketParams& params);

} // namespace qosc
