#include "qosc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qosc {

namespace {

/// Legendre polynomial P_n(x) and its derivative, by the three-term
/// recurrence (k+1)P_{k+1} = (2k+1)x P_k - k P_{k-1}.
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) return {p0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

/// Nodes and weights of the order-n Gauss-Legendre rule on [-1, 1].
/// Roots of P_n found by Newton iteration from the Chebyshev-like initial
/// guess; only the lower half is iterated, the rest follows by symmetry.
void reference_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, d] = legendre_with_derivative(n, z);
            dp = d;
            const double dz = p / d;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // One clean-up evaluation so the weight uses the converged root.
        const auto [p_final, d_final] = legendre_with_derivative(n, z);
        (void)p_final;
        dp = d_final;
        const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if (n % 2 == 1) x[n / 2] = 0.0; // the middle root is exactly zero
}

void require_interval(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("quadrature interval must be finite");
    if (!(lo < hi))
        throw DomainError("quadrature interval must satisfy lo < hi");
}

} // namespace

QuadratureRule gauss_legendre(int order, double lo, double hi) {
    if (order < 1) throw DomainError("quadrature order must be >= 1");
    require_interval(lo, hi);

    std::vector<double> x, w;
    reference_rule(order, x, w);

    QuadratureRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.panels = 1;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mid = 0.5 * (lo + hi);
    const double halfwidth = 0.5 * (hi - lo);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = mid + halfwidth * x[i];
        rule.weights[i] = halfwidth * w[i];
    }
    return rule;
}

QuadratureRule composite_rule(int order, int panels, double lo, double hi) {
    if (panels < 1) throw DomainError("panel count must be >= 1");
    require_interval(lo, hi);

    QuadratureRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.panels = panels;
    rule.order = order;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
    rule.weights.reserve(static_cast<std::size_t>(panels) * order);
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double b = (p + 1 == panels) ? hi : lo + (p + 1) * width;
        const QuadratureRule panel = gauss_legendre(order, a, b);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 int panels, int order) {
    const QuadratureRule rule = composite_rule(order, panels, lo, hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double fx = f(rule.nodes[i]);
        if (!std::isfinite(fx))
            throw EvaluationError("integrand returned a non-finite value at x = " +
                                      std::to_string(rule.nodes[i]),
                                  rule.nodes[i]);
        sum += rule.weights[i] * fx;
    }
    return sum;
}

double integrate_to_tol(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int order, int panels) {
    // lo > hi is accepted with the usual sign flip so accumulation-style
    // integrals (lower limit above the upper one) work directly.
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }

    constexpr int kMaxDoublings = 16;
    double coarse = integrate(f, lo, hi, panels, order);
    for (int round = 0; round < kMaxDoublings; ++round) {
        panels *= 2;
        const double fine = integrate(f, lo, hi, panels, order);
        if (std::abs(fine - coarse) < tol) return sign * fine;
        coarse = fine;
    }
    throw NumericalError("panel doubling did not reach the requested tolerance");
}

double gaussian_integral(double x) {
    if (!std::isfinite(x)) throw DomainError("gaussian_integral requires finite x");
    if (x == 0.0) return 0.0;
    // Odd integrand: reduce to x > 0 so the doubling loop sees one shape.
    const double sign = x > 0.0 ? 1.0 : -1.0;
    const double ax = std::abs(x);
    const double value = integrate_to_tol([](double u) { return std::exp(-u * u); },
                                          0.0, ax, 1e-13);
    return sign * value;
}

SymmetricEigenSystem sym_eigen(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw DomainError("sym_eigen requires a square matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12)
                throw DomainError("sym_eigen requires a symmetric matrix");

    Matrix a = m;
    Matrix v = Matrix::identity(n);

    // Scale reference for the convergence threshold: Frobenius norm of M.
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
    frob = std::sqrt(frob);
    const double threshold = 1e-14 * std::max(1.0, frob);

    constexpr int kMaxSweeps = 100;
    bool converged = false;
    double off = 0.0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        off = std::sqrt(2.0 * off);
        if (off < threshold) {
            converged = true;
            break;
        }

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Classic Jacobi rotation annihilating a(p,q).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }
    if (!converged)
        throw NumericalError("Jacobi eigensolver did not converge; off-diagonal norm " +
                             std::to_string(off));

    // Sort ascending, carrying the eigenvector columns along.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&a](std::size_t l, std::size_t r) { return a(l, l) < a(r, r); });

    SymmetricEigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(idx[j], idx[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, idx[j]);
    }
    return out;
}

} // namespace qosc
