#pragma once

#include <vector>

#include "qosc/errors.hpp"

namespace qosc {

/// Physicists' Hermite polynomial H_n(x) by the raw recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}.  Raw values overflow quickly, so n is
/// capped at 64; higher orders must go through HermiteBasis::psi, whose
/// normalized recurrence folds the Gaussian weight in.
double hermite_h(int n, double x);

/// Orthonormal Hermite-Gauss functions Psi_n (Hermite polynomial times
/// Gaussian, unit L2 norm) evaluated by the normalized three-term recurrence
///   Psi_{n+1}(x) = x sqrt(2/(n+1)) Psi_n(x) - sqrt(n/(n+1)) Psi_{n-1}(x),
///   Psi_0(x) = pi^{-1/4} e^{-x^2/2},
/// which never overflows for |x| <= 40, n <= 512.
class HermiteBasis {
public:
    explicit HermiteBasis(int max_n);

    int max_n() const { return max_n_; }

    /// Psi_n(x); requires 0 <= n <= max_n.
    double psi(int n, double x) const;

    /// All of Psi_0(x), ..., Psi_{max_n}(x) in one recurrence pass.
    std::vector<double> psi_all(double x) const;

    /// Psi_n'(x) by the ladder identity
    ///   Psi_n' = sqrt(n/2) Psi_{n-1} - sqrt((n+1)/2) Psi_{n+1}
    /// (first term absent at n = 0); exact coefficients, no step size.
    double psi_derivative(int n, double x) const;

    /// Residual of the oscillator eigenvalue equation
    ///   -1/2 Psi_n'' + (x^2/2) Psi_n - (n + 1/2) Psi_n
    /// with Psi_n'' taken from the analytic identity
    /// Psi_n'' = (x^2 - 2n - 1) Psi_n.  Substituting the identity cancels
    /// every term, so this returns an exact zero; it exists as the baseline
    /// for the finite-difference probe below.
    double oscillator_residual(int n, double x) const;

    /// Same residual with Psi_n'' estimated by the central second difference
    /// of step h — the self-consistency probe of the eigenvalue equation.
    double oscillator_residual(int n, double x, double h) const;

private:
    void require_order(int n) const;

    int max_n_;
};

} // namespace qosc
