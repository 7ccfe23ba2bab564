#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/finite.hpp"
#include "qosc/hermite.hpp"

using namespace qosc;

namespace {

constexpr double kPi = 3.14159265358979323846;

CVec unit_cvec(int d, int position) {
    CVec v(static_cast<std::size_t>(d), {0.0, 0.0});
    v[static_cast<std::size_t>(position)] = {1.0, 0.0};
    return v;
}

CVec random_cvec(int d, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CVec v(static_cast<std::size_t>(d));
    for (auto& z : v) z = {dist(gen), dist(gen)};
    return v;
}

// Unit-norm sample of Psi_m on the grid, for overlap and sign checks.
std::vector<double> sampled_mode(const FiniteGrid& grid, int m) {
    const HermiteBasis basis(m);
    std::vector<double> v(grid.points.size());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = basis.psi(m, grid.points[i]);
        norm_sq += v[i] * v[i];
    }
    const double norm = std::sqrt(norm_sq);
    for (double& x : v) x /= norm;
    return v;
}

// Complex d x d matrix of the finite Fourier transform, built column by column.
std::vector<CVec> fourier_columns(int d) {
    std::vector<CVec> cols;
    cols.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) cols.push_back(finite_fourier(unit_cvec(d, k)));
    return cols;
}

} // namespace

TEST_CASE("build_grid: shape, symmetry, and parity validation") {
    const FiniteGrid g3 = build_grid(3);
    CHECK(g3.ell == 1);
    REQUIRE(g3.points.size() == 3);
    const double step3 = std::sqrt(2.0 * kPi / 3.0);
    CHECK(std::abs(g3.points[0] + step3) < 1e-15);
    CHECK(g3.points[1] == 0.0);
    CHECK(std::abs(g3.points[2] - step3) < 1e-15);

    CHECK_THROWS_AS(build_grid(4), DomainError);
    CHECK_THROWS_AS(build_grid(1), DomainError);
    CHECK_THROWS_AS(build_grid(-5), DomainError);

    const FiniteGrid g21 = build_grid(21);
    CHECK(g21.ell == 10);
    CHECK(std::abs(g21.kappa * 21.0 - 2.0 * kPi) < 1e-15);
    REQUIRE(g21.points.size() == 21);
    const double step21 = std::sqrt(g21.kappa);
    CHECK(std::abs(g21.points[0] + 10.0 * step21) < 1e-12);
    CHECK(std::abs(g21.points[20] - 10.0 * step21) < 1e-12);
    for (std::size_t i = 0; i + 1 < g21.points.size(); ++i) {
        CHECK(g21.points[i] < g21.points[i + 1]);
        CHECK(std::abs(g21.points[i] + g21.points[20 - i]) < 1e-12);
    }
}

TEST_CASE("finite_fourier: centered delta maps to the flat vector") {
    const int d = 9;
    const CVec out = finite_fourier(unit_cvec(d, 4)); // grid index n = 0
    for (const auto& z : out) {
        CHECK(std::abs(z.real() - 1.0 / std::sqrt(9.0)) < 1e-15);
        CHECK(std::abs(z.imag()) < 1e-15);
    }
}

TEST_CASE("finite_fourier: constant vector maps to sqrt(d) times the centered delta") {
    const int d = 9;
    const CVec ones(static_cast<std::size_t>(d), {1.0, 0.0});
    const CVec out = finite_fourier(ones);
    for (int i = 0; i < d; ++i) {
        const std::complex<double> expected =
            (i == 4) ? std::complex<double>(3.0, 0.0) : std::complex<double>(0.0, 0.0);
        CHECK(std::abs(out[static_cast<std::size_t>(i)] - expected) < 1e-12);
    }
}

TEST_CASE("finite_fourier adjoint inverts the transform") {
    const CVec v = random_cvec(9, 5u);
    const CVec round = finite_fourier_adjoint(finite_fourier(v));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(round[i] - v[i]) < 1e-12);
}

TEST_CASE("finite_fourier columns are orthonormal and F^4 is the identity") {
    const int d = 5;
    const std::vector<CVec> cols = fourier_columns(d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            std::complex<double> dot = 0.0;
            for (int k = 0; k < d; ++k)
                dot += std::conj(cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]) *
                       cols[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
        }
    }

    CVec v = random_cvec(7, 9u);
    const CVec original = v;
    for (int k = 0; k < 4; ++k) v = finite_fourier(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(v[i] - original[i]) < 1e-12);
}

TEST_CASE("finite_fourier validates the vector length") {
    CHECK_THROWS_AS(finite_fourier(CVec(4)), DomainError);
    CHECK_THROWS_AS(finite_fourier(CVec(1)), DomainError);
    CHECK_THROWS_AS(finite_fourier_adjoint(CVec(0)), DomainError);
}

TEST_CASE("finite_d2: constant vectors, plane waves, and wraparound") {
    const FiniteGrid grid = build_grid(9);
    const CVec ones(9, {1.0, 0.0});
    for (const auto& z : finite_d2(grid, ones)) CHECK(std::abs(z) == 0.0);

    // Plane wave e^{2 pi i n j / d} is an eigenvector with the stencil symbol.
    const int j = 2;
    CVec wave(9);
    for (int i = 0; i < 9; ++i) {
        const double angle = 2.0 * kPi * (i - grid.ell) * j / 9.0;
        wave[static_cast<std::size_t>(i)] = {std::cos(angle), std::sin(angle)};
    }
    const double mu = (2.0 * std::cos(2.0 * kPi * j / 9.0) - 2.0) / grid.kappa;
    const CVec out = finite_d2(grid, wave);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(out[i] - mu * wave[i]) < 1e-12);

    // Delta at the last grid point leaks to the first through the wrap.
    const CVec edge = finite_d2(grid, unit_cvec(9, 8));
    CHECK(std::abs(edge[0] - 1.0 / grid.kappa) < 1e-15);
    CHECK(std::abs(edge[7] - 1.0 / grid.kappa) < 1e-15);
    CHECK(std::abs(edge[8] + 2.0 / grid.kappa) < 1e-15);
    for (std::size_t i = 1; i < 7; ++i) CHECK(std::abs(edge[i]) == 0.0);

    CHECK_THROWS_AS(finite_d2(grid, CVec(8)), DomainError);
}

TEST_CASE("build_hamiltonian: d=3 entries, symmetry, and the sparsity pattern") {
    const Matrix h3 = build_hamiltonian(build_grid(3));
    CHECK(std::abs(h3(0, 0) - 15.0 / (4.0 * kPi)) < 1e-12);
    CHECK(std::abs(h3(1, 1) - 3.0 / (2.0 * kPi)) < 1e-12);
    CHECK(std::abs(h3(2, 2) - 15.0 / (4.0 * kPi)) < 1e-12);

    const FiniteGrid g7 = build_grid(7);
    const Matrix h7 = build_hamiltonian(g7);
    const double off = -7.0 / (4.0 * kPi);
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            CHECK(h7(i, j) == h7(j, i));
            const int gap = std::abs(static_cast<int>(i) - static_cast<int>(j));
            if (gap == 1 || gap == 6) {
                CHECK(std::abs(h7(i, j) - off) < 1e-15);
            } else if (gap != 0) {
                CHECK(h7(i, j) == 0.0);
            }
        }
    }
    // Diagonal from the entry formula -(d/4pi) * 2 (cos(2 pi n / d) - 2).
    for (std::size_t i = 0; i < 7; ++i) {
        const int n = static_cast<int>(i) - g7.ell;
        const double expected =
            -(7.0 / (4.0 * kPi)) * 2.0 * (std::cos(2.0 * kPi * n / 7.0) - 2.0);
        CHECK(std::abs(h7(i, i) - expected) < 1e-14);
    }
}

TEST_CASE("the Hamiltonian equals -(D2 + F D2 F^+)/2") {
    const int d = 9;
    const FiniteGrid grid = build_grid(d);
    const Matrix h = build_hamiltonian(grid);
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
        const CVec e = unit_cvec(d, k);
        const CVec direct = finite_d2(grid, e);
        const CVec conjugated = finite_fourier(finite_d2(grid, finite_fourier_adjoint(e)));
        for (int i = 0; i < d; ++i) {
            const std::complex<double> combined =
                -0.5 * (direct[static_cast<std::size_t>(i)] +
                        conjugated[static_cast<std::size_t>(i)]);
            worst = std::max(worst, std::abs(combined - h(static_cast<std::size_t>(i),
                                                          static_cast<std::size_t>(k))));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("alternation_count follows the thresholded sign rule") {
    CHECK(alternation_count({1.0, 1.0, 1.0}) == 0);
    CHECK(alternation_count({1.0, -1.0, 1.0}) == 2);
    CHECK(alternation_count({1.0, 1e-15, -1.0}) == 1);
    CHECK(alternation_count({1.0, -1e-10, 1.0}) == 0); // below 1e-9 * max
    CHECK(alternation_count({-0.2, 0.4, -0.1, 0.3}) == 3);
    CHECK_THROWS_AS(alternation_count({0.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(alternation_count({}), DomainError);
}

TEST_CASE("diagonalize: residuals, Fourier eigenproperty, ordering, orthonormality") {
    for (int d : {5, 9, 21}) {
        const FiniteOscillator osc = diagonalize(d);
        const std::size_t n = static_cast<std::size_t>(d);
        REQUIRE(osc.eigenvalues.size() == n);
        REQUIRE(osc.alternations.size() == n);

        for (std::size_t m = 0; m < n; ++m) {
            // Eigen-residual in the sup norm.
            for (std::size_t i = 0; i < n; ++i) {
                double hv = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    hv += osc.hamiltonian(i, k) * osc.harpers(k, m);
                CHECK(std::abs(hv - osc.eigenvalues[m] * osc.harpers(i, m)) < 1e-10);
            }

            // F h_m = (-i)^m h_m.
            CVec hm(n);
            for (std::size_t i = 0; i < n; ++i) hm[i] = {osc.harpers(i, m), 0.0};
            const CVec fhm = finite_fourier(hm);
            const std::complex<double> minus_i(0.0, -1.0);
            const std::complex<double> phase = std::pow(minus_i, static_cast<int>(m));
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(fhm[i] - phase * hm[i]) < 1e-8);

            CHECK(osc.alternations[m] == static_cast<int>(m));
            CHECK(osc.eigenvalues[m] > 0.0);
            // Alternation order ascends through the bottom half of the
            // spectrum and within each Fourier class (step 4); adjacent
            // top-half levels interleave, so no global ascent is claimed.
            if (m > 0 && m <= static_cast<std::size_t>(osc.grid.ell))
                CHECK(osc.eigenvalues[m] - osc.eigenvalues[m - 1] > 1e-10);
            if (m >= 4) CHECK(osc.eigenvalues[m] - osc.eigenvalues[m - 4] > 1e-10);
        }
        CHECK(osc.alternations[0] == 0);

        // All levels are simple: the sorted spectrum has positive gaps.
        std::vector<double> sorted = osc.eigenvalues;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t m = 1; m < n; ++m)
            CHECK(sorted[m] - sorted[m - 1] > 1e-10);

        // Orthonormal harper columns.
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                double dot = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    dot += osc.harpers(k, a) * osc.harpers(k, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
            }
        }

        // Sign convention: positive overlap with the sampled continuum mode on
        // the lower half of the spectrum.
        for (int m = 0; m <= std::min(osc.grid.ell, 10); ++m) {
            const std::vector<double> target = sampled_mode(osc.grid, m);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += osc.harpers(i, static_cast<std::size_t>(m)) * target[i];
            CHECK(dot > 0.0);
        }
    }
}

TEST_CASE("the Hamiltonian commutes with the finite Fourier transform") {
    const int d = 9;
    const Matrix h = build_hamiltonian(build_grid(d));
    const std::vector<CVec> f = fourier_columns(d);
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            std::complex<double> fh = 0.0;
            std::complex<double> hf = 0.0;
            for (int k = 0; k < d; ++k) {
                // F columns hold F e_k, so F_{ik} = f[k][i].
                fh += f[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                      h(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
                hf += h(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) *
                      f[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
            worst = std::max(worst, std::abs(fh - hf));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("d = 63 modes overlap the continuum eigenfunctions beyond 0.99") {
    const FiniteOscillator osc = diagonalize(63);
    for (int m = 0; m <= 3; ++m) {
        const std::vector<double> target = sampled_mode(osc.grid, m);
        double dot = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i)
            dot += osc.harpers(i, static_cast<std::size_t>(m)) * target[i];
        CHECK(dot > 0.99);
    }
}

TEST_CASE("eigenvalues approach m + 1/2 from below at the quadratic rate") {
    const FiniteOscillator o21 = diagonalize(21);
    const FiniteOscillator o63 = diagonalize(63);
    for (int m = 0; m <= 5; ++m) {
        const std::size_t k = static_cast<std::size_t>(m);
        const double err21 = o21.eigenvalues[k] - (m + 0.5);
        const double err63 = o63.eigenvalues[k] - (m + 0.5);
        CHECK(err21 < 0.0);
        CHECK(err63 < 0.0);
        CHECK(std::abs(err63) < std::abs(err21));

        // Leading-order defect of the cosine symbol: -kappa (2m^2 + 2m + 1)/16.
        const double pred63 = -o63.grid.kappa * (2.0 * m * m + 2.0 * m + 1.0) / 16.0;
        CHECK(std::abs(err63 - pred63) < 0.10 * std::abs(pred63));
        if (m <= 3) {
            const double pred21 =
                -o21.grid.kappa * (2.0 * m * m + 2.0 * m + 1.0) / 16.0;
            CHECK(std::abs(err21 - pred21) < 0.15 * std::abs(pred21));
        }
    }
}
