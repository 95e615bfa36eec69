#include "ccrbudget/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "ccrbudget/errors.hpp"

namespace ccrb {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("CMatrix: ragged initializer list");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> entries) {
    CMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> entries) {
    CMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
}

CMatrix CMatrix::transpose() const {
    CMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

CMatrix CMatrix::conjugate() const {
    CMatrix t = *this;
    for (auto& v : t.data_) v = std::conj(v);
    return t;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw DimensionError("CMatrix::block: out of range");
    }
    CMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
        throw DimensionError("CMatrix::set_block: out of range");
    }
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

double CMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::max_imag() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
}

cplx CMatrix::trace() const {
    if (!is_square()) throw DimensionError("CMatrix::trace: non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("CMatrix +=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("CMatrix -=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("CMatrix *: inner dimension mismatch");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        if (std::abs(a.data()[k] - b.data()[k]) > tol) return false;
    }
    return true;
}

double hermiticity_residual(const CMatrix& m) {
    if (!m.is_square()) throw DimensionError("hermiticity_residual: non-square matrix");
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
    return r;
}

CMatrix hermitian_part(const CMatrix& m) {
    CMatrix h = m + m.adjoint();
    h *= 0.5;
    return h;
}

// ---------------------------------------------------------------------------
// Eigenvalues

double Spectrum::max_real() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigenvalues) m = std::max(m, e.real());
    return m;
}

cplx Spectrum::leading() const {
    if (eigenvalues.empty()) throw DimensionError("Spectrum::leading: empty spectrum");
    return eigenvalues.front();
}

namespace {

// Householder reduction to upper Hessenberg form (similarity transform).
void reduce_to_hessenberg(CMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(h(i, k));
        const double tail = norm2 - std::norm(h(k + 1, k));
        if (tail <= 0.0) continue;
        const double norm = std::sqrt(norm2);
        const cplx x0 = h(k + 1, k);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
        const cplx alpha = -phase * norm;

        std::fill(v.begin(), v.end(), cplx{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;

        // h <- (I - beta v v^H) h
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        // h <- h (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

struct Givens {
    double c = 1.0;
    cplx s = 0.0;
};

// Rotation G = [[c, s], [-conj(s), c]] with G [x; y] = [r; 0].
Givens make_givens(cplx x, cplx y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {1.0, 0.0};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double r = std::hypot(ax, ay);
    return {ax / r, (x / ax) * std::conj(y) / r};
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx half = 0.5 * (a - d);
    const cplx disc = std::sqrt(half * half + b * c);
    const cplx mu1 = 0.5 * (a + d) + disc;
    const cplx mu2 = 0.5 * (a + d) - disc;
    return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

Spectrum eigenvalues(const CMatrix& m) {
    if (!m.is_square()) throw DimensionError("eigenvalues: matrix is not square");
    const std::size_t n = m.rows();
    if (n > Tolerances::max_eigen_dimension) {
        throw DimensionError("eigenvalues: dimension exceeds 64");
    }
    Spectrum spec;
    if (n == 0) return spec;

    CMatrix h = m;
    reduce_to_hessenberg(h);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const std::size_t max_iter_per_eigenvalue = 60;
    std::size_t total_iterations = 0;
    std::size_t iter = 0;
    std::vector<Givens> rot(n);

    std::size_t hi = n - 1;
    while (hi > 0) {
        // Locate the start of the active unreduced block.
        std::size_t lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (std::abs(h(lo, lo - 1)) <= eps * (scale > 0.0 ? scale : 1.0)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iter = 0;
            continue;
        }
        ++iter;
        ++total_iterations;
        if (iter > max_iter_per_eigenvalue) {
            std::ostringstream os;
            os << "eigenvalues: QR iteration did not converge after " << total_iterations
               << " iterations";
            throw NumericError(os.str(), total_iterations);
        }

        cplx shift;
        if (iter % 11 == 10) {
            // Exceptional shift to break cycles.
            shift = h(hi, hi) + cplx{std::abs(h(hi, hi - 1).real()), std::abs(h(hi, hi - 1).imag())};
        } else {
            shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;
        // QR sweep: rows.
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rot[k] = g;
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx x = h(k, j);
                const cplx y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        // RQ: columns.
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens& g = rot[k];
            const std::size_t last = std::min(k + 2, hi);
            for (std::size_t i = lo; i <= last; ++i) {
                const cplx x = h(i, k);
                const cplx y = h(i, k + 1);
                h(i, k) = x * g.c + y * std::conj(g.s);
                h(i, k + 1) = -x * g.s + y * g.c;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
    }

    spec.eigenvalues.reserve(n);
    for (std::size_t i = 0; i < n; ++i) spec.eigenvalues.push_back(h(i, i));
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return spec;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
    const Spectrum s = eigenvalues(hermitian_part(m));
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& e : s.eigenvalues) out.push_back(e.real());
    std::sort(out.begin(), out.end());
    return out;
}

bool is_stable(const CMatrix& m, double margin) {
    const double rounding = Tolerances::marginal_stability * std::max(1.0, m.max_abs());
    return eigenvalues(m).max_real() < -std::max(margin, rounding);
}

void require_stable(const CMatrix& m, const char* context) {
    const Spectrum s = eigenvalues(m);
    // Eigenvalues within rounding of the imaginary axis count as marginal.
    if (s.max_real() >= -Tolerances::marginal_stability * std::max(1.0, m.max_abs())) {
        std::ostringstream os;
        os.precision(12);
        os << context << ": drift is not stable, eigenvalue " << s.leading().real()
           << (s.leading().imag() < 0 ? " - " : " + ") << std::abs(s.leading().imag())
           << "i is not in the open left half-plane";
        throw StabilityError(os.str(), s.leading());
    }
}

// ---------------------------------------------------------------------------
// LU

LuFactorization::LuFactorization(CMatrix a) : lu_(std::move(a)) {
    if (!lu_.is_square()) throw DimensionError("LuFactorization: matrix is not square");
    const std::size_t n = lu_.rows();
    pivots_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        pivots_[k] = p;
        if (best == 0.0 || !std::isfinite(best)) {
            throw NumericError("LuFactorization: matrix is singular to working precision", k);
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        }
        const cplx inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx& lik = lu_(i, k);
            if (lik == cplx{}) continue;
            lik *= inv;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
        }
    }
}

std::vector<cplx> LuFactorization::solve(std::span<const cplx> b) const {
    const std::size_t n = size();
    if (b.size() != n) throw DimensionError("LuFactorization::solve: size mismatch");
    std::vector<cplx> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        cplx s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        cplx s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

CMatrix LuFactorization::solve(const CMatrix& b) const {
    if (b.rows() != size()) throw DimensionError("LuFactorization::solve: size mismatch");
    CMatrix x(b.rows(), b.cols());
    std::vector<cplx> col(b.rows());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t r = 0; r < b.rows(); ++r) col[r] = b(r, c);
        const auto sol = solve(std::span<const cplx>(col));
        for (std::size_t r = 0; r < b.rows(); ++r) x(r, c) = sol[r];
    }
    return x;
}

CMatrix solve(const CMatrix& a, const CMatrix& b) { return LuFactorization(a).solve(b); }

CMatrix inverse(const CMatrix& a) {
    return LuFactorization(a).solve(CMatrix::identity(a.rows()));
}

// ---------------------------------------------------------------------------
// Lyapunov

namespace {

// Column-major vectorization: vec(W)[i + j d] = W(i, j).
// vec(a W) = (I kron a) vec(W); vec(W a^H) = (conj(a) kron I) vec(W).
CMatrix kronecker_lyapunov_operator(const CMatrix& a) {
    const std::size_t d = a.rows();
    CMatrix op(d * d, d * d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t row = i + j * d;
            for (std::size_t k = 0; k < d; ++k) {
                op(row, k + j * d) += a(i, k);
                op(row, i + k * d) += std::conj(a(j, k));
            }
        }
    }
    return op;
}

CMatrix checked_lyapunov_operator(const CMatrix& a) {
    require_stable(a, "solve_lyapunov");
    return kronecker_lyapunov_operator(a);
}

CMatrix apply_lyapunov(const CMatrix& a, const CMatrix& w) {
    return a * w + w * a.adjoint();
}

}  // namespace

LyapunovSolver::LyapunovSolver(const CMatrix& a)
    : a_(a), kron_(checked_lyapunov_operator(a)) {}

CMatrix LyapunovSolver::solve(const CMatrix& q) const {
    const std::size_t d = a_.rows();
    if (q.rows() != d || q.cols() != d) throw DimensionError("solve_lyapunov: q has wrong shape");
    const double qscale = std::max(1.0, q.max_abs());
    if (hermiticity_residual(q) > Tolerances::hermitian * qscale) {
        throw Error("solve_lyapunov: q is not Hermitian");
    }

    std::vector<cplx> rhs(d * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) rhs[i + j * d] = -q(i, j);

    auto unvec = [d](const std::vector<cplx>& v) {
        CMatrix w(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) w(i, j) = v[i + j * d];
        return w;
    };

    CMatrix w = unvec(kron_.solve(std::span<const cplx>(rhs)));
    // One step of iterative refinement.
    CMatrix r = apply_lyapunov(a_, w) + q;
    std::vector<cplx> rv(d * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) rv[i + j * d] = -r(i, j);
    w += unvec(kron_.solve(std::span<const cplx>(rv)));
    w = hermitian_part(w);

    const double res = lyapunov_residual(a_, w, q);
    if (res > Tolerances::lyapunov_residual * qscale) {
        std::ostringstream os;
        os << "solve_lyapunov: residual " << res << " exceeds tolerance";
        throw NumericError(os.str(), 0, res);
    }
    return w;
}

CMatrix solve_lyapunov(const CMatrix& a, const CMatrix& q) {
    if (!a.is_square()) throw DimensionError("solve_lyapunov: drift is not square");
    return LyapunovSolver(a).solve(q);
}

double lyapunov_residual(const CMatrix& a, const CMatrix& w, const CMatrix& q) {
    return (apply_lyapunov(a, w) + q).max_abs();
}

}  // namespace ccrb
