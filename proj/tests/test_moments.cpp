#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ccrbudget/errors.hpp"
#include "ccrbudget/moments.hpp"

using namespace ccrb;

TEST_CASE("vacuum noise matrix is half the identity") {
    const InputMoments v = InputMoments::vacuum(3);
    CHECK(approx_equal(v.noise_matrix(), 0.5 * CMatrix::identity(6), 0.0));
    CHECK(v.is_uncorrelated());
    CHECK(v.is_phase_insensitive());
    for (double theta : {0.0, 0.7, 2.0}) CHECK(v.quadrature_variance(1, theta) == 0.5);
}

TEST_CASE("thermal and squeezed channel variances") {
    const std::vector<double> n{2.0, 0.5};
    const std::vector<cplx> m{0.0, cplx{0.0, 0.5}};
    const InputMoments in = InputMoments::uncorrelated(n, m);
    CHECK(in.quadrature_variance(0, 0.3) == doctest::Approx(2.5));
    // Re(0.5 i e^{-2i theta}) = 0.5 sin(2 theta)
    CHECK(in.quadrature_variance(1, std::numbers::pi / 4) == doctest::Approx(1.5));
    CHECK(in.quadrature_variance(1, 3 * std::numbers::pi / 4) == doctest::Approx(0.5));
    CHECK(in.min_quadrature_variance(1) == doctest::Approx(0.5));
    CHECK_FALSE(in.is_phase_insensitive());
}

TEST_CASE("noise matrix round trip and Hermiticity") {
    CMatrix normal{{1.0, cplx{0.2, 0.1}}, {cplx{0.2, -0.1}, 0.5}};
    CMatrix anomalous{{cplx{0.3, 0.2}, 0.1}, {0.1, -0.4}};
    const InputMoments in(normal, anomalous);
    const CMatrix nm = in.noise_matrix();
    CHECK(hermiticity_residual(nm) == 0.0);
    const InputMoments back = InputMoments::from_noise_matrix(nm);
    CHECK(approx_equal(back.normal(), normal, 1e-15));
    CHECK(approx_equal(back.anomalous(), anomalous, 1e-15));
    CHECK_FALSE(in.is_uncorrelated());
}

TEST_CASE("physicality excess of single-mode channels") {
    const std::vector<double> n{0.0, 1.0};
    const std::vector<cplx> ok{0.0, std::sqrt(2.0)};
    CHECK(InputMoments::uncorrelated(n, ok).physicality_excess() == doctest::Approx(0.0).epsilon(1e-15));
    const std::vector<cplx> bad{0.1, 0.0};
    CHECK(InputMoments::uncorrelated(n, bad).physicality_excess() == doctest::Approx(0.01));
}

TEST_CASE("invalid correlator matrices are rejected") {
    CHECK_THROWS_AS(InputMoments(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, CMatrix(2, 2)), Error);
    CHECK_THROWS_AS(InputMoments(CMatrix(2, 2), CMatrix{{0.0, 1.0}, {0.0, 0.0}}), Error);
    CHECK_THROWS_AS(InputMoments(CMatrix(2, 2), CMatrix(3, 3)), DimensionError);
}
