#include "qosc/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qosc {

namespace {

constexpr int kRawOrderCap = 64;

double psi_zero(double x) {
    return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
}

} // namespace

double hermite_h(int n, double x) {
    if (n < 0) throw DomainError("Hermite order must be non-negative");
    if (n > kRawOrderCap)
        throw DomainError("raw Hermite values overflow beyond order 64; use psi instead");
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

HermiteBasis::HermiteBasis(int max_n) : max_n_(max_n) {
    if (max_n < 0) throw DomainError("basis order must be non-negative");
}

void HermiteBasis::require_order(int n) const {
    if (n < 0 || n > max_n_)
        throw DomainError("function order " + std::to_string(n) +
                          " outside basis range [0, " + std::to_string(max_n_) + "]");
}

double HermiteBasis::psi(int n, double x) const {
    require_order(n);
    double p0 = psi_zero(x);
    if (n == 0) return p0;
    double p1 = std::numbers::sqrt2 * x * p0;
    for (int k = 1; k < n; ++k) {
        const double p2 =
            x * std::sqrt(2.0 / (k + 1.0)) * p1 - std::sqrt(k / (k + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> HermiteBasis::psi_all(double x) const {
    std::vector<double> out(static_cast<std::size_t>(max_n_) + 1);
    out[0] = psi_zero(x);
    if (max_n_ >= 1) out[1] = std::numbers::sqrt2 * x * out[0];
    for (int k = 1; k < max_n_; ++k)
        out[k + 1] = x * std::sqrt(2.0 / (k + 1.0)) * out[k] -
                     std::sqrt(k / (k + 1.0)) * out[k - 1];
    return out;
}

double HermiteBasis::psi_derivative(int n, double x) const {
    require_order(n);
    // The ladder needs Psi_{n+1}; evaluate it directly (the recurrence is
    // valid past max_n, the cap only guards requested orders).
    double p0 = psi_zero(x);
    double p1 = std::numbers::sqrt2 * x * p0;
    if (n == 0) return -std::sqrt(0.5) * p1;
    for (int k = 1; k < n; ++k) {
        const double p2 =
            x * std::sqrt(2.0 / (k + 1.0)) * p1 - std::sqrt(k / (k + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    const double psi_next =
        x * std::sqrt(2.0 / (n + 1.0)) * p1 - std::sqrt(n / (n + 1.0)) * p0;
    return std::sqrt(0.5 * n) * p0 - std::sqrt(0.5 * (n + 1.0)) * psi_next;
}

double HermiteBasis::oscillator_residual(int n, double x) const {
    require_order(n);
    // With Psi'' = (x^2 - 2n - 1) Psi the residual is
    //   [-(x^2 - 2n - 1)/2 + x^2/2 - (n + 1/2)] Psi;
    // the bracket is c - c for the same rounded c, i.e. an exact zero.
    const double c = 0.5 * (x * x - 2.0 * n - 1.0);
    return (-c + c) * psi(n, x);
}

double HermiteBasis::oscillator_residual(int n, double x, double h) const {
    require_order(n);
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    const double second = (psi(n, x + h) - 2.0 * psi(n, x) + psi(n, x - h)) / (h * h);
    return -0.5 * second + 0.5 * x * x * psi(n, x) - (n + 0.5) * psi(n, x);
}

} // namespace qosc
