#pragma once

// Dense complex linear algebra for the small (<= 16 mode) systems handled by
// the library: matrix storage, eigenvalues, continuous Lyapunov solves and
// frequency-domain quadrature.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace ccrb {

using cplx = std::complex<double>;

/// Default numeric tolerances shared by all modules.
struct Tolerances {
    static constexpr double lyapunov_residual = 1e-10;  // relative to max(1, |q|_max)
    static constexpr double hermitian = 1e-12;
    static constexpr double quadrature_abs = 1e-8;
    static constexpr double physical_realizability = 1e-12;
    static constexpr double psd = 1e-10;
    static constexpr double marginal_stability = 1e-12;  // relative to max(1, |a|_max)  // eigenvalue floor for PSD checks
    static constexpr std::size_t max_eigen_dimension = 64;
};

/// Row-major dense complex matrix.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const cplx> entries);
    static CMatrix diagonal(std::span<const double> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);

    /// Largest entry modulus.
    double max_abs() const noexcept;
    /// Largest imaginary-part modulus.
    double max_imag() const noexcept;
    cplx trace() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);

/// Entrywise comparison |a_ij - b_ij| <= tol; false on shape mismatch.
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol);

/// max |m - m^dagger| over entries.
double hermiticity_residual(const CMatrix& m);

/// (m + m^dagger) / 2
CMatrix hermitian_part(const CMatrix& m);

/// Eigenvalues sorted by real part, descending (ties broken by imaginary part).
struct Spectrum {
    std::vector<cplx> eigenvalues;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    double max_real() const;
    /// Eigenvalue with the largest real part.
    cplx leading() const;
};

/// Eigenvalues of a square matrix by Householder reduction to Hessenberg form
/// followed by Wilkinson-shifted complex QR iteration.
Spectrum eigenvalues(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix (imaginary parts dropped), ascending.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// True iff every eigenvalue satisfies Re(lambda) < -margin. Eigenvalues within
/// rounding of the imaginary axis are never counted as stable.
bool is_stable(const CMatrix& m, double margin = 0.0);

/// Throws StabilityError naming the leading eigenvalue unless m is stable.
void require_stable(const CMatrix& m, const char* context);

/// LU factorization with partial pivoting; reusable for many right-hand sides.
class LuFactorization {
public:
    explicit LuFactorization(CMatrix a);

    std::size_t size() const noexcept { return lu_.rows(); }
    /// Solves a x = b for one or more right-hand-side columns.
    CMatrix solve(const CMatrix& b) const;
    std::vector<cplx> solve(std::span<const cplx> b) const;

private:
    CMatrix lu_;
    std::vector<std::size_t> pivots_;
};

CMatrix solve(const CMatrix& a, const CMatrix& b);
CMatrix inverse(const CMatrix& a);

/// Solves a W + W a^dagger + q = 0 for a fixed stable drift a. The Kronecker
/// system is factored once so several right-hand sides share the cost.
class LyapunovSolver {
public:
    explicit LyapunovSolver(const CMatrix& a);

    const CMatrix& drift() const noexcept { return a_; }
    CMatrix solve(const CMatrix& q) const;

private:
    CMatrix a_;
    LuFactorization kron_;
};

CMatrix solve_lyapunov(const CMatrix& a, const CMatrix& q);

/// max |a W + W a^dagger + q|
double lyapunov_residual(const CMatrix& a, const CMatrix& w, const CMatrix& q);

/// Options for integrate_spectrum.
struct SpectrumQuadrature {
    double abs_tol = Tolerances::quadrature_abs;
    /// Frequency scale s of the map omega = s t / (1 - t^2).
    double scale = 1.0;
    /// Frequencies where the integrand has features (resonances, edges).
    std::vector<double> breakpoints;
    std::size_t max_subdivisions = 20000;
};

struct SpectrumIntegral {
    CMatrix value;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// (1 / 2 pi) \int_R f(omega) d omega for an entrywise absolutely integrable
/// matrix-valued f, by globally adaptive Gauss-Kronrod (7/15) on the compact
/// variable t in (-1, 1).
SpectrumIntegral integrate_spectrum(const std::function<CMatrix(double)>& f,
                                    const SpectrumQuadrature& options = {});

}  // namespace ccrb
