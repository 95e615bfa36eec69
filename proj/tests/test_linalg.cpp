#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccrbudget/errors.hpp"
#include "ccrbudget/linalg.hpp"

using namespace ccrb;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("lyapunov: decoupled scalar case returns q scaled by the decay") {
    const CMatrix a = -0.5 * CMatrix::identity(2);
    const CMatrix w = solve_lyapunov(a, CMatrix::identity(2));
    CHECK(approx_equal(w, CMatrix::identity(2), 1e-14));
}

TEST_CASE("lyapunov: coupled beam-splitter drift") {
    const CMatrix a{{-0.5, -0.5 * I}, {-0.5 * I, -0.5}};
    const CMatrix q{{0.0, 0.0}, {0.0, 1.0}};
    const CMatrix w = solve_lyapunov(a, q);
    const CMatrix expected{{0.25, -0.25 * I}, {0.25 * I, 0.75}};
    CHECK(approx_equal(w, expected, 1e-14));
    CHECK(lyapunov_residual(a, w, q) < 1e-14);
}

TEST_CASE("lyapunov: diagonal drift") {
    const std::vector<double> d{-1.0, -2.0};
    const CMatrix a = CMatrix::diagonal(std::span<const double>(d));
    const CMatrix w = solve_lyapunov(a, CMatrix{{2.0, 0.0}, {0.0, 4.0}});
    CHECK(approx_equal(w, CMatrix::identity(2), 1e-14));
}

TEST_CASE("lyapunov: solver is reusable and output is Hermitian") {
    const CMatrix a{{-1.0, 2.0 * I, 0.3}, {0.5, -0.7 + 0.2 * I, 0.0}, {0.1 * I, -0.4, -2.0}};
    REQUIRE(is_stable(a));
    const LyapunovSolver solver(a);
    for (int k = 0; k < 3; ++k) {
        CMatrix q(3, 3);
        q(k, k) = 1.0 + k;
        q(0, 2) = 0.2 * I;
        q(2, 0) = -0.2 * I;
        const CMatrix w = solver.solve(q);
        CHECK(hermiticity_residual(w) == 0.0);
        CHECK(lyapunov_residual(a, w, q) < 1e-13);
    }
}

TEST_CASE("lyapunov: unstable drift names the eigenvalue") {
    const CMatrix a{{0.5, 0.0}, {0.0, -1.0}};
    try {
        solve_lyapunov(a, CMatrix::identity(2));
        FAIL("expected StabilityError");
    } catch (const StabilityError& e) {
        CHECK(e.eigenvalue().real() == doctest::Approx(0.5));
    }
}

TEST_CASE("eigenvalues: triangular, rotation and defective matrices") {
    const CMatrix t{{1.0, 5.0, 2.0}, {0.0, -3.0, 1.0}, {0.0, 0.0, 2.0}};
    const Spectrum s = eigenvalues(t);
    REQUIRE(s.size() == 3);
    CHECK(std::abs(s.eigenvalues[0] - cplx{2.0}) < 1e-12);
    CHECK(std::abs(s.eigenvalues[1] - cplx{1.0}) < 1e-12);
    CHECK(std::abs(s.eigenvalues[2] - cplx{-3.0}) < 1e-12);

    // Real rotation generator: eigenvalues -0.1 +- 2i.
    const CMatrix r{{-0.1, 2.0}, {-2.0, -0.1}};
    const Spectrum rs = eigenvalues(r);
    CHECK(std::abs(rs.eigenvalues[0].real() + 0.1) < 1e-12);
    CHECK(std::abs(std::abs(rs.eigenvalues[0].imag()) - 2.0) < 1e-12);

    // Jordan block: eigenvalue accuracy limited to sqrt(eps).
    const CMatrix j{{-1.0, 1.0}, {0.0, -1.0}};
    for (const auto& z : eigenvalues(j).eigenvalues) CHECK(std::abs(z + 1.0) < 1e-7);
}

TEST_CASE("eigenvalues: sum and product match trace and determinant") {
    const CMatrix m{{1.0 + I, 2.0, -0.5 * I, 0.1},
                    {0.3, -2.0, 1.0, I},
                    {-I, 0.7, 0.2, 0.0},
                    {1.5, 0.0, -0.3 * I, -1.0 + 2.0 * I}};
    const Spectrum s = eigenvalues(m);
    cplx sum = 0.0;
    cplx prod = 1.0;
    for (const auto& z : s.eigenvalues) {
        sum += z;
        prod *= z;
    }
    CHECK(std::abs(sum - m.trace()) < 1e-12);
    const CMatrix inv = inverse(m);
    CHECK(approx_equal(inv * m, CMatrix::identity(4), 1e-12));
    const CMatrix inv_inv = inverse(inv);
    CHECK(approx_equal(inv_inv, m, 1e-11));
    // Eigenvalues of the inverse are reciprocals.
    const Spectrum si = eigenvalues(inv);
    cplx prod_inv = 1.0;
    for (const auto& z : si.eigenvalues) prod_inv *= z;
    CHECK(std::abs(prod * prod_inv - 1.0) < 1e-10);
}

TEST_CASE("hermitian eigenvalues are ascending and real") {
    const CMatrix h{{2.0, I}, {-I, 2.0}};
    const auto e = hermitian_eigenvalues(h);
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("LU solve and singular detection") {
    const CMatrix a{{4.0, 1.0}, {2.0, 3.0}};
    const CMatrix b{{1.0}, {2.0}};
    const CMatrix x = solve(a, b);
    CHECK(x(0, 0).real() == doctest::Approx(0.1));
    CHECK(x(1, 0).real() == doctest::Approx(0.6));
    CHECK_THROWS_AS(solve(CMatrix{{1.0, 2.0}, {2.0, 4.0}}, b), NumericError);
    CHECK_THROWS_AS(solve(CMatrix(2, 3), b), DimensionError);
}

TEST_CASE("matrix algebra helpers") {
    const CMatrix m{{1.0, I}, {2.0, 3.0 * I}};
    CHECK(m.adjoint()(0, 1) == cplx{2.0, 0.0});
    CHECK(m.adjoint()(1, 1) == cplx{0.0, -3.0});
    CHECK(m.transpose()(1, 0) == I);
    CHECK(m.max_abs() == doctest::Approx(3.0));
    CHECK(hermiticity_residual(hermitian_part(m)) == 0.0);
    CMatrix big(4, 4);
    big.set_block(2, 2, m);
    CHECK(big.block(2, 2, 2, 2)(1, 1) == 3.0 * I);
    CHECK_THROWS_AS(m * CMatrix(3, 3), DimensionError);
}

TEST_CASE("spectrum quadrature: Lorentzian integrates to one") {
    auto f = [](double w) {
        CMatrix m(1, 1);
        m(0, 0) = 1.0 / (0.25 + w * w);
        return m;
    };
    const SpectrumIntegral r = integrate_spectrum(f);
    CHECK(std::abs(r.value(0, 0) - 1.0) < 1e-8);
    CHECK(r.error_estimate < 1e-8);
}

TEST_CASE("spectrum quadrature: zero integrand and narrow off-centre resonance") {
    auto zero = [](double) { return CMatrix(2, 2); };
    CHECK(integrate_spectrum(zero).value.max_abs() == 0.0);

    // Width 1e-3 at w = 40: (1/2pi) int eps/((w-40)^2 + eps^2/4) = 1.
    const double eps = 1e-3;
    auto narrow = [eps](double w) {
        CMatrix m(1, 1);
        m(0, 0) = eps / ((w - 40.0) * (w - 40.0) + 0.25 * eps * eps);
        return m;
    };
    SpectrumQuadrature opts;
    opts.scale = 40.0;
    opts.breakpoints = {40.0 - eps, 40.0, 40.0 + eps};
    CHECK(std::abs(integrate_spectrum(narrow, opts).value(0, 0) - 1.0) < 1e-8);
}

TEST_CASE("spectrum quadrature reports non-convergence") {
    auto f = [](double w) {
        CMatrix m(1, 1);
        m(0, 0) = 1.0 / (1e-6 + w * w);
        return m;
    };
    SpectrumQuadrature opts;
    opts.max_subdivisions = 3;
    opts.abs_tol = 1e-14;
    try {
        integrate_spectrum(f, opts);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(e.error_estimate() > 0.0);
        CHECK(e.iterations() == 3);
    }
}
