#include "qosc/finite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qosc/errors.hpp"
#include "qosc/hermite.hpp"

namespace qosc {

namespace {

constexpr double kPi = std::numbers::pi;

/// Unit complex number e^{-2 pi i m / d} with m reduced modulo d exactly,
/// so kernel phases for huge index products lose no precision.
std::complex<double> root_of_unity(long long m, int d) {
    const long long r = ((m % d) + d) % d;
    const double angle = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

CVec fourier_impl(const CVec& v, bool conjugate) {
    const int d = static_cast<int>(v.size());
    if (d < 3 || d % 2 == 0) {
        throw DomainError("centered Fourier transform requires odd length >= 3");
    }
    const int ell = (d - 1) / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    CVec out(v.size());
    for (int n = -ell; n <= ell; ++n) {
        std::complex<double> sum{0.0, 0.0};
        for (int k = -ell; k <= ell; ++k) {
            std::complex<double> kernel =
                root_of_unity(static_cast<long long>(n) * static_cast<long long>(k), d);
            if (conjugate) kernel = std::conj(kernel);
            sum += kernel * v[static_cast<std::size_t>(k + ell)];
        }
        out[static_cast<std::size_t>(n + ell)] = scale * sum;
    }
    return out;
}

} // namespace

FiniteGrid build_grid(int d) {
    if (d < 3 || d % 2 == 0) {
        throw DomainError("grid dimension must be an odd integer >= 3");
    }
    FiniteGrid grid;
    grid.d = d;
    grid.ell = (d - 1) / 2;
    grid.kappa = 2.0 * kPi / static_cast<double>(d);
    const double step = std::sqrt(grid.kappa);
    grid.points.reserve(static_cast<std::size_t>(d));
    for (int q = -grid.ell; q <= grid.ell; ++q) {
        grid.points.push_back(static_cast<double>(q) * step);
    }
    return grid;
}

CVec finite_fourier(const CVec& v) { return fourier_impl(v, false); }

CVec finite_fourier_adjoint(const CVec& v) { return fourier_impl(v, true); }

CVec finite_d2(const FiniteGrid& grid, const CVec& v) {
    const std::size_t d = static_cast<std::size_t>(grid.d);
    if (v.size() != d) {
        throw DomainError("vector length must match the grid dimension");
    }
    CVec out(d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t up = (j + 1) % d;
        const std::size_t dn = (j + d - 1) % d;
        out[j] = (v[up] - 2.0 * v[j] + v[dn]) / grid.kappa;
    }
    return out;
}

Matrix build_hamiltonian(const FiniteGrid& grid) {
    const int d = grid.d;
    const std::size_t n = static_cast<std::size_t>(d);
    const double c = static_cast<double>(d) / (4.0 * kPi);
    Matrix h(n, n);
    for (int i = 0; i < d; ++i) {
        const int ni = i - grid.ell;
        const double angle = 2.0 * kPi * static_cast<double>(ni) / static_cast<double>(d);
        h(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) =
            -c * 2.0 * (std::cos(angle) - 2.0);
    }
    for (int i = 0; i < d; ++i) {
        const int j = (i + 1) % d;
        h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = -c;
        h(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = -c;
    }
    return h;
}

int alternation_count(const std::vector<double>& v) {
    if (v.empty()) {
        throw DomainError("alternation count of an empty vector is undefined");
    }
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    const double threshold = 1e-9 * peak;
    if (peak == 0.0) {
        throw DomainError("alternation count undefined: all entries are negligible");
    }
    int count = 0;
    int prev_sign = 0;
    bool any = false;
    for (double x : v) {
        if (std::abs(x) < threshold) continue; // too small to carry a reliable sign
        any = true;
        const int sign = (x > 0.0) ? 1 : -1;
        if (prev_sign != 0 && sign != prev_sign) ++count;
        prev_sign = sign;
    }
    if (!any) {
        throw DomainError("alternation count undefined: all entries are negligible");
    }
    return count;
}

FiniteOscillator diagonalize(int d) {
    FiniteOscillator osc;
    osc.grid = build_grid(d);
    osc.hamiltonian = build_hamiltonian(osc.grid);
    const SymmetricEigenSystem sys = sym_eigen(osc.hamiltonian);

    const std::size_t n = static_cast<std::size_t>(d);

    // The assignment below needs a simple spectrum; degeneracies would make
    // the Fourier classification of individual eigenvectors ill-posed.
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (sys.eigenvalues[j + 1] - sys.eigenvalues[j] <= 1e-10) {
            throw ConsistencyError("oscillator spectrum has a near-degenerate pair at level " +
                                   std::to_string(j));
        }
    }

    // Classify each eigenvector by its Fourier phase: H commutes with F, so
    // F v = (-i)^f v for some f in {0..3} up to rounding.
    std::vector<int> fourier_class(n, -1);
    const std::complex<double> minus_i{0.0, -1.0};
    for (std::size_t j = 0; j < n; ++j) {
        CVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = sys.eigenvectors(i, j);
        const CVec fv = finite_fourier(v);
        int best_f = -1;
        double best_dev = 1e300;
        std::complex<double> phase{1.0, 0.0};
        for (int f = 0; f < 4; ++f) {
            double dev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dev = std::max(dev, std::abs(fv[i] - phase * v[i]));
            }
            if (dev < best_dev) {
                best_dev = dev;
                best_f = f;
            }
            phase *= minus_i;
        }
        if (best_dev > 1e-8) {
            throw ConsistencyError(
                "eigenvector " + std::to_string(j) +
                " is not a Fourier eigenvector (deviation " + std::to_string(best_dev) + ")");
        }
        fourier_class[j] = best_f;
    }

    // Mode number: f plus four times the energy rank within the class,
    // mirroring the continuum relation (Fourier phase of mode m) = (-i)^m.
    std::vector<int> mode(n, -1);
    std::vector<int> seen_in_class(4, 0);
    for (std::size_t j = 0; j < n; ++j) { // ascending energy order
        const int f = fourier_class[j];
        mode[j] = f + 4 * seen_in_class[static_cast<std::size_t>(f)];
        ++seen_in_class[static_cast<std::size_t>(f)];
    }
    std::vector<bool> hit(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const int m = mode[j];
        if (m < 0 || m >= d || hit[static_cast<std::size_t>(m)]) {
            throw ConsistencyError("mode numbers do not form a permutation of 0..d-1");
        }
        hit[static_cast<std::size_t>(m)] = true;
    }

    // Reorder columns by mode number.
    osc.eigenvalues.assign(n, 0.0);
    osc.harpers = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = static_cast<std::size_t>(mode[j]);
        osc.eigenvalues[m] = sys.eigenvalues[j];
        for (std::size_t i = 0; i < n; ++i) {
            osc.harpers(i, m) = sys.eigenvectors(i, j);
        }
    }

    // Fix each column's overall sign against the continuum eigenfunction
    // sampled on the grid; when the overlap is too small to trust, make the
    // largest-magnitude component positive instead.
    HermiteBasis hermite(d - 1);
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<double> sampled(n);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sampled[i] = hermite.psi(static_cast<int>(m), osc.grid.points[i]);
            norm2 += sampled[i] * sampled[i];
        }
        double inner = 0.0;
        for (std::size_t i = 0; i < n; ++i) inner += sampled[i] * osc.harpers(i, m);
        bool flip = false;
        if (norm2 > 0.0 && std::abs(inner) / std::sqrt(norm2) > 1e-6) {
            flip = inner < 0.0;
        } else {
            std::size_t arg = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(osc.harpers(i, m)) > best) {
                    best = std::abs(osc.harpers(i, m));
                    arg = i;
                }
            }
            flip = osc.harpers(arg, m) < 0.0;
        }
        if (flip) {
            for (std::size_t i = 0; i < n; ++i) osc.harpers(i, m) = -osc.harpers(i, m);
        }
    }

    // Sign-change counts must equal the mode number wherever the count is
    // numerically meaningful: everywhere for small d, and on the lower half
    // of the spectrum in general (high modes of large grids have genuine
    // components below sign precision).
    osc.alternations.assign(n, 0);
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = osc.harpers(i, m);
        osc.alternations[m] = alternation_count(column);
        const bool must_match = (d <= 33) || (static_cast<int>(m) <= osc.grid.ell);
        if (must_match && osc.alternations[m] != static_cast<int>(m)) {
            throw ConsistencyError("mode " + std::to_string(m) + " has " +
                                   std::to_string(osc.alternations[m]) +
                                   " sign changes; expected " + std::to_string(m));
        }
    }

    return osc;
}

} // namespace qosc
