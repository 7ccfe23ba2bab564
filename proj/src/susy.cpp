#include "qosc/susy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qosc/numerics.hpp"

namespace qosc {

namespace {

constexpr double kAdmissibilityMargin = 1e-9;

double sqrt_pi_over_two() { return 0.5 * std::sqrt(std::numbers::pi); }

} // namespace

SusyParams make_susy_params(double alpha) {
    if (!std::isfinite(alpha))
        throw DomainError("alpha must be finite");
    if (!(std::abs(alpha) > sqrt_pi_over_two() + kAdmissibilityMargin))
        throw DomainError("alpha must satisfy |alpha| > sqrt(pi)/2 (~0.8862269255); "
                          "the partner potential denominator vanishes otherwise");
    return SusyParams{alpha};
}

double g_alpha(const SusyParams& params, double x) {
    return std::exp(-x * x) / (params.alpha + gaussian_integral(x));
}

double u_alpha(const SusyParams& params, double x) {
    const double g = g_alpha(params, x);
    return 0.5 * x * x + 2.0 * x * g + g * g;
}

double phi_zero(const SusyParams& params, double x) {
    const double inner = integrate_to_tol(
        [&params](double u) { return g_alpha(params, u); }, 0.0, x, 1e-10);
    return std::exp(-0.5 * x * x) * std::exp(-inner);
}

double apply_A(const SusyParams& params, int n, double x) {
    if (n < 0) throw DomainError("function order must be non-negative");
    const HermiteBasis basis(n + 1);
    const double value =
        -basis.psi_derivative(n, x) + (x + g_alpha(params, x)) * basis.psi(n, x);
    return value / std::numbers::sqrt2;
}

SusyBasis::SusyBasis(SusyParams params, int max_n)
    : params_(params), max_n_(max_n), hermite_(max_n > 0 ? max_n : 1) {
    if (max_n < 0) throw DomainError("basis order must be non-negative");

    // Norms by quadrature: the band [-12, 12] holds the Gaussian mass of
    // every member up to the orders used here, and 48 panels of order 16
    // resolve their oscillations.
    const QuadratureRule rule = composite_rule(16, 48, -12.0, 12.0);
    std::vector<double> accum(static_cast<std::size_t>(max_n_) + 1, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::vector<double> values = unnormalized_all(rule.nodes[i]);
        for (std::size_t n = 0; n < values.size(); ++n)
            accum[n] += rule.weights[i] * values[n] * values[n];
    }
    norms_.resize(accum.size());
    for (std::size_t n = 0; n < accum.size(); ++n) {
        norms_[n] = std::sqrt(accum[n]);
        if (!(norms_[n] > 1e-12) || !std::isfinite(norms_[n]))
            throw NumericalError("degenerate basis member at order " + std::to_string(n));
    }
}

std::vector<double> SusyBasis::unnormalized_all(double x) const {
    std::vector<double> out(static_cast<std::size_t>(max_n_) + 1);
    out[0] = phi_zero(params_, x);
    if (max_n_ == 0) return out;

    const std::vector<double> psis = hermite_.psi_all(x);
    const double g = g_alpha(params_, x);
    for (int n = 0; n + 1 <= max_n_; ++n) {
        const double lowered = n >= 1 ? std::sqrt(0.5 * n) * psis[n - 1] : 0.0;
        const double dpsi = lowered - std::sqrt(0.5 * (n + 1.0)) * psis[n + 1];
        out[n + 1] = (-dpsi + (x + g) * psis[n]) / std::numbers::sqrt2;
    }
    return out;
}

double SusyBasis::phi(int n, double x) const {
    if (n < 0 || n > max_n_)
        throw DomainError("function order " + std::to_string(n) +
                          " outside basis range [0, " + std::to_string(max_n_) + "]");
    const double raw = n == 0 ? phi_zero(params_, x) : apply_A(params_, n - 1, x);
    return raw / norms_[static_cast<std::size_t>(n)];
}

std::vector<double> SusyBasis::phi_all(double x) const {
    std::vector<double> out = unnormalized_all(x);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] /= norms_[n];
    return out;
}

double susy_phi(const SusyBasis& basis, int n, double x) { return basis.phi(n, x); }

} // namespace qosc
