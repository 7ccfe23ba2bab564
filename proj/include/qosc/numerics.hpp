#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "qosc/errors.hpp"

namespace qosc {

/// Dense row-major matrix of doubles with a fixed shape.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Maximum absolute entry.
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Nodes and weights of a (possibly composite) Gauss-Legendre rule on a
/// bounded interval.  Weights are positive and sum to the interval length;
/// a rule with p panels of order q integrates any polynomial of degree
/// 2q-1 exactly on each panel.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = 0.0;
    double hi = 0.0;
    int panels = 0;
    int order = 0;
};

/// Gauss-Legendre rule of the given order mapped onto [lo, hi] (one panel).
/// Nodes are computed by Newton iteration on the Legendre polynomial, so any
/// order >= 1 is available without tables.
QuadratureRule gauss_legendre(int order, double lo, double hi);

/// Composite rule: `panels` equal subdivisions of [lo, hi], each carrying a
/// Gauss-Legendre rule of the given order.
QuadratureRule composite_rule(int order, int panels, double lo, double hi);

/// Composite Gauss-Legendre approximation of the integral of f over [lo, hi].
/// Throws EvaluationError (with the offending abscissa) if f produces a
/// non-finite value at any node.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 int panels, int order);

/// Repeatedly doubles the panel count (starting from `panels`) until two
/// successive composite approximations agree to `tol` absolutely, then
/// returns the finer one.  Throws NumericalError if agreement is not reached
/// within the doubling cap.
double integrate_to_tol(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int order = 16, int panels = 1);

/// The Gaussian integral  int_0^x e^{-u^2} du, accurate to 1e-12 absolutely.
/// Computed by composite quadrature with automatic panel doubling (1e-13
/// self-consistency target), odd in x and bounded by +-sqrt(pi)/2.
double gaussian_integral(double x);

/// Full spectrum of a real symmetric matrix: eigenvalues in ascending order,
/// eigenvector j stored as column j of `eigenvectors`, orthonormal.
struct SymmetricEigenSystem {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Eigendecomposition by cyclic Jacobi rotations.  Accepts matrices that are
/// symmetric to 1e-12 (max |M - M^T| entry); throws DomainError otherwise and
/// NumericalError if the off-diagonal Frobenius norm has not fallen below
/// 1e-14 (relative to the matrix scale) after 100 sweeps.
SymmetricEigenSystem sym_eigen(const Matrix& m);

} // namespace qosc
