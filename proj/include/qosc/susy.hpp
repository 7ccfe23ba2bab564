#pragma once

#include <vector>

#include "qosc/errors.hpp"
#include "qosc/hermite.hpp"

namespace qosc {

/// Parameter of the partner-potential family.  Admissible range is
/// |alpha| > sqrt(pi)/2 (with a 1e-9 guard margin) so the denominator
/// alpha + int_0^x e^{-u^2} du is bounded away from zero for all x.
struct SusyParams {
    double alpha;
};

SusyParams make_susy_params(double alpha);

/// g_alpha(x) = e^{-x^2} / (alpha + int_0^x e^{-u^2} du).
double g_alpha(const SusyParams& params, double x);

/// Partner potential U_alpha(x) = x^2/2 - g_alpha'(x) with the closed-form
/// derivative g' = -2x g - g^2, i.e. U_alpha = x^2/2 + 2x g + g^2.
double u_alpha(const SusyParams& params, double x);

/// Unnormalized ground state of U_alpha:
///   phi_0(x) = e^{-x^2/2} exp(-int_0^x g_alpha(u) du),
/// the solution of (d/dx + x + g_alpha) phi_0 = 0.  The inner integral is
/// evaluated by accuracy-controlled quadrature (1e-10).
double phi_zero(const SusyParams& params, double x);

/// The raising-type first-order operator applied to the oscillator basis:
///   phi_{n+1}(x) = (A Psi_n)(x)
///                = (1/sqrt(2)) (-Psi_n'(x) + x Psi_n(x) + g_alpha(x) Psi_n(x)),
/// an (unnormalized) eigenfunction of U_alpha with eigenvalue n + 3/2.
double apply_A(const SusyParams& params, int n, double x);

/// Orthonormal partner basis Phi_n = phi_n / ||phi_n||, with the norms
/// computed once by quadrature over [-12, 12] (48 panels, order 16).
class SusyBasis {
public:
    SusyBasis(SusyParams params, int max_n);

    const SusyParams& params() const { return params_; }
    int max_n() const { return max_n_; }
    const std::vector<double>& norms() const { return norms_; }

    /// Normalized Phi_n(x); requires 0 <= n <= max_n.
    double phi(int n, double x) const;

    /// All of Phi_0(x), ..., Phi_{max_n}(x) sharing one recurrence pass and a
    /// single g_alpha evaluation.
    std::vector<double> phi_all(double x) const;

private:
    std::vector<double> unnormalized_all(double x) const;

    SusyParams params_;
    int max_n_;
    HermiteBasis hermite_;
    std::vector<double> norms_;
};

/// Op-style accessor mirroring the free-function surface of the module.
double susy_phi(const SusyBasis& basis, int n, double x);

} // namespace qosc
