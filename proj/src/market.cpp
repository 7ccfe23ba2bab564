#include "qosc/market.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qosc/numerics.hpp"

namespace qosc {

MarketParams make_market_params(double sigma, double r) {
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw DomainError("sigma must be positive and finite");
    if (!std::isfinite(r) || r < 0.0)
        throw DomainError("r must be non-negative and finite");
    return MarketParams{sigma, r};
}

MarketParams unchecked_market_params(double sigma, double r) {
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw DomainError("sigma must be positive and finite");
    if (!std::isfinite(r)) throw DomainError("r must be finite");
    return MarketParams{sigma, r};
}

OptionSpec make_option_spec(OptionKind kind, double strike, double maturity) {
    if (!std::isfinite(strike) || strike <= 0.0)
        throw DomainError("strike must be positive and finite");
    if (!std::isfinite(maturity) || maturity <= 0.0)
        throw DomainError("maturity must be positive and finite");
    return OptionSpec{kind, strike, maturity};
}

LogDomain make_log_domain(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || !(a < b))
        throw DomainError("price band must satisfy 0 < a < b");
    return LogDomain{a, b};
}

LogDomain default_domain(double strike) {
    return make_log_domain(strike * std::exp(-6.0), strike * std::exp(6.0));
}

double gamma_of(const MarketParams& params) {
    return params.r / (params.sigma * params.sigma) - 0.5;
}

double norm_cdf(double z) {
    if (!std::isfinite(z)) throw DomainError("norm_cdf requires finite z");
    const double value = 0.5 + gaussian_integral(z / std::numbers::sqrt2) /
                                   std::sqrt(std::numbers::pi);
    // The quadrature is accurate to ~1e-13; clip the residual noise so the
    // result stays inside [0, 1].
    return std::clamp(value, 0.0, 1.0);
}

std::pair<double, double> d_one_two(double S, const OptionSpec& spec,
                                    const MarketParams& params, double t) {
    if (!std::isfinite(S) || S <= 0.0) throw DomainError("spot must be positive and finite");
    if (!(t < spec.maturity))
        throw DomainError("closed form requires t < T; terminal payoff is handled separately");
    const double tau = spec.maturity - t;
    const double vol = params.sigma * std::sqrt(tau);
    const double d1 =
        (std::log(S / spec.strike) + (params.r + 0.5 * params.sigma * params.sigma) * tau) / vol;
    return {d1, d1 - vol};
}

double bs_price(double S, double t, const OptionSpec& spec, const MarketParams& params) {
    if (!std::isfinite(S) || S <= 0.0) throw DomainError("spot must be positive and finite");
    if (!std::isfinite(t) || t > spec.maturity)
        throw DomainError("valuation time must be finite and <= maturity");
    if (t == spec.maturity) {
        const double intrinsic = spec.kind == OptionKind::Call ? S - spec.strike
                                                               : spec.strike - S;
        return std::max(intrinsic, 0.0);
    }
    const auto [d1, d2] = d_one_two(S, spec, params, t);
    const double discounted_strike = spec.strike * std::exp(-params.r * (spec.maturity - t));
    const double value = spec.kind == OptionKind::Call
                             ? S * norm_cdf(d1) - discounted_strike * norm_cdf(d2)
                             : discounted_strike * norm_cdf(-d2) - S * norm_cdf(-d1);
    return std::max(value, 0.0);
}

double bs_price_quadrature(double S, double t, const OptionSpec& spec,
                           const MarketParams& params) {
    if (!std::isfinite(S) || S <= 0.0) throw DomainError("spot must be positive and finite");
    if (!std::isfinite(t) || t > spec.maturity)
        throw DomainError("valuation time must be finite and <= maturity");
    const double tau = spec.maturity - t;
    if (tau == 0.0) {
        const double intrinsic = spec.kind == OptionKind::Call ? S - spec.strike
                                                               : spec.strike - S;
        return std::max(intrinsic, 0.0);
    }
    const double drift = (params.r - 0.5 * params.sigma * params.sigma) * tau;
    const double spread = params.sigma * std::sqrt(tau);
    const double density_scale = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const auto integrand = [&](double z) {
        const double terminal_spot = S * std::exp(drift + spread * z);
        const double payoff = spec.kind == OptionKind::Call
                                  ? std::max(terminal_spot - spec.strike, 0.0)
                                  : std::max(spec.strike - terminal_spot, 0.0);
        return payoff * density_scale * std::exp(-0.5 * z * z);
    };
    // Integrate over the payoff's support only: the kink at S_T = K would
    // otherwise destroy the quadrature's spectral accuracy.
    const double z_strike = (std::log(spec.strike / S) - drift) / spread;
    const double lo = spec.kind == OptionKind::Call ? std::max(-10.0, z_strike) : -10.0;
    const double hi = spec.kind == OptionKind::Call ? 10.0 : std::min(10.0, z_strike);
    if (!(lo < hi)) return 0.0;
    return std::exp(-params.r * tau) * integrate(integrand, lo, hi, 40, 16);
}

double payoff_truncated(double S, const OptionSpec& spec, const LogDomain& domain) {
    // A strike at a band edge is the degenerate-but-legal case: the truncated
    // payoff is then identically zero on the band.
    if (!(domain.a <= spec.strike && spec.strike <= domain.b))
        throw DomainError("strike must lie inside the price band");
    if (spec.kind == OptionKind::Call) {
        if (S < spec.strike || S > domain.b) return 0.0;
        return S - spec.strike;
    }
    if (S < domain.a || S > spec.strike) return 0.0;
    return spec.strike - S;
}

} // namespace qosc
