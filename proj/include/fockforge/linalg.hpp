// linalg.hpp: dense complex matrices, transposes, determinants, polar parts, pairings

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

// --------------------------- Errors -----------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonSquare : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct DimensionOverflow : Error { using Error::Error; };
struct StatisticsMismatch : Error { using Error::Error; };
struct FermiDegenerate : Error { using Error::Error; };
struct KernelViolation : Error { using Error::Error; };
struct DegenerateOmega : Error { using Error::Error; };
struct NonPositiveEta : Error { using Error::Error; };
struct OddKernel : Error { using Error::Error; };
struct GeneralPositionViolated : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct SymmetryViolation : Error { using Error::Error; };
struct KindMismatch : Error { using Error::Error; };
struct NormViolation : Error { using Error::Error; };
struct SpectralViolation : Error { using Error::Error; };
struct CommutationViolation : Error { using Error::Error; };

// Default tolerances.
inline constexpr double tol_algebraic = 1e-10;
inline constexpr double tol_spectral = 1e-8;

template <class M>
inline void require_square(const M& A, const char* who) {
    if (A.rows() != A.cols())
        throw NonSquare(std::string(who) + ": matrix is " + std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()));
}

template <class M>
inline void require_shape(const M& A, Eigen::Index r, Eigen::Index c, const char* who) {
    if (A.rows() != r || A.cols() != c)
        throw ShapeError(std::string(who) + ": expected " + std::to_string(r) + "x" + std::to_string(c) +
                         ", got " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
}

// --------------------------- Transposes and symmetry ------------------------

// A# = conj(A)^*, i.e. the plain transpose.
inline Matrix transpose_sharp(const Matrix& A) { return A.transpose(); }

inline bool is_symmetric(const Matrix& A, double tol = tol_algebraic) {
    require_square(A, "is_symmetric");
    if (A.size() == 0) return true;
    return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_antisymmetric(const Matrix& A, double tol = tol_algebraic) {
    require_square(A, "is_antisymmetric");
    if (A.size() == 0) return true;
    return (A + A.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline double max_abs(const Matrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const RMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

// Operator norm (largest singular value).
inline double op_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

// --------------------------- Determinants -----------------------------------

// det(1 + a).
inline cplx fredholm_det(const Matrix& a) {
    require_square(a, "fredholm_det");
    if (a.rows() == 0) return 1.0;
    return (identity(a.rows()) + a).determinant();
}

// --------------------------- Hermitian functional calculus ------------------

inline Matrix hermitian_part(const Matrix& A) { return 0.5 * (A + A.adjoint()); }

// f(A) for Hermitian A via eigendecomposition.
inline Matrix hermitian_apply(const Matrix& A, const std::function<double(double)>& f) {
    require_square(A, "hermitian_apply");
    if (A.rows() == 0) return A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(A));
    if (es.info() != Eigen::Success) throw NumericalFailure("hermitian_apply: eigensolver failed");
    RVector ev = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

// Complex-valued spectral function, e.g. exp(i t A).
inline Matrix hermitian_apply_c(const Matrix& A, const std::function<cplx(double)>& f) {
    require_square(A, "hermitian_apply_c");
    if (A.rows() == 0) return A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(A));
    if (es.info() != Eigen::Success) throw NumericalFailure("hermitian_apply_c: eigensolver failed");
    Vector ev(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(es.eigenvalues()(i));
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double clamp_nonneg(double x) { return x < 0.0 ? 0.0 : x; }

inline Matrix sqrt_psd(const Matrix& A) {
    return hermitian_apply(A, [](double x) { return std::sqrt(clamp_nonneg(x)); });
}

inline Matrix inv_sqrt_pd(const Matrix& A) {
    return hermitian_apply(A, [](double x) {
        if (x <= 0.0) throw NumericalFailure("inv_sqrt_pd: non-positive eigenvalue");
        return 1.0 / std::sqrt(x);
    });
}

inline Matrix expm_hermitian(const Matrix& A, cplx factor) {
    return hermitian_apply_c(A, [factor](double x) { return std::exp(factor * x); });
}

inline RVector hermitian_eigenvalues(const Matrix& A) {
    require_square(A, "hermitian_eigenvalues");
    if (A.rows() == 0) return RVector();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(A), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("hermitian_eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

// Square root of a (possibly non-Hermitian) diagonalizable matrix; used for
// positive operators that are only Hermitian up to a similarity.
inline Matrix sqrtm_general(const Matrix& A) {
    require_square(A, "sqrtm_general");
    Eigen::ComplexEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) throw NumericalFailure("sqrtm_general: eigensolver failed");
    Vector ev = es.eigenvalues().unaryExpr([](cplx x) { return std::sqrt(x); });
    const Matrix& V = es.eigenvectors();
    return V * ev.asDiagonal() * V.inverse();
}

// --------------------------- Polar decomposition ----------------------------

template <class M>
struct Polar {
    M isometry;
    M positive;
};

// A = U|A| with U a partial isometry whose initial space is (Ker A)^perp.
// Singular values below kernel_rel * s_max count as zero.
template <class M>
inline Polar<M> polar_decompose(const M& A, double kernel_rel = 1e-12) {
    require_square(A, "polar_decompose");
    const Eigen::Index n = A.rows();
    if (n == 0) return {A, A};
    Eigen::JacobiSVD<M> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("polar_decompose: SVD failed");
    const auto& s = svd.singularValues();
    const double cut = kernel_rel * s(0);
    M U = M::Zero(n, n);
    M P = M::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        P += s(k) * svd.matrixV().col(k) * svd.matrixV().col(k).adjoint();
        if (s(k) > cut) U += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
    }
    return {U, P};
}

// --------------------------- Nullspace / range ------------------------------

// Orthonormal basis (columns) of the kernel of A; threshold relative to s_max.
template <class M>
inline M nullspace(const M& A, double rel = 1e-10) {
    const Eigen::Index n = A.cols();
    if (A.rows() == 0) return M::Identity(n, n);
    Eigen::JacobiSVD<M> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel * std::max(smax, 1e-300) && s(k) > 0.0) ++rank;
    if (smax == 0.0) rank = 0;
    return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis (columns) of the range of A.
template <class M>
inline M range_basis(const M& A, double rel = 1e-10) {
    if (A.cols() == 0 || A.rows() == 0) return M(A.rows(), 0);
    Eigen::JacobiSVD<M> svd(A, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (smax > 0.0 && s(k) > rel * smax) ++rank;
    return svd.matrixU().leftCols(rank);
}

// --------------------------- Pairings ---------------------------------------

struct Pairing {
    std::size_t m = 0;
    std::vector<std::size_t> map;  // 0-based; pairs (map[2j], map[2j+1])
    int sign = 1;
};

inline int permutation_sign(const std::vector<std::size_t>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

// All pairings of {0,...,2m-1}; first elements increasing, each pair ordered.
inline std::vector<Pairing> enumerate_pairings(std::size_t m) {
    std::vector<Pairing> out;
    std::vector<std::size_t> cur;
    std::vector<bool> used(2 * m, false);
    std::function<void()> rec = [&]() {
        if (cur.size() == 2 * m) {
            out.push_back({m, cur, permutation_sign(cur)});
            return;
        }
        std::size_t first = 0;
        while (used[first]) ++first;
        used[first] = true;
        cur.push_back(first);
        for (std::size_t second = first + 1; second < 2 * m; ++second) {
            if (used[second]) continue;
            used[second] = true;
            cur.push_back(second);
            rec();
            cur.pop_back();
            used[second] = false;
        }
        cur.pop_back();
        used[first] = false;
    };
    rec();
    return out;
}

inline std::size_t double_factorial_odd(std::size_t m) {
    std::size_t r = 1;
    for (std::size_t k = 1; k + 1 <= 2 * m; k += 2) r *= k;
    return r;
}

// --------------------------- Misc -------------------------------------------

inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

inline Matrix commutator(const Matrix& A, const Matrix& B) { return A * B - B * A; }
inline Matrix anticommutator(const Matrix& A, const Matrix& B) { return A * B + B * A; }

inline Matrix direct_sum(const Matrix& A, const Matrix& B) {
    Matrix S = Matrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
    S.topLeftCorner(A.rows(), A.cols()) = A;
    S.bottomRightCorner(B.rows(), B.cols()) = B;
    return S;
}

}  // namespace fockforge
