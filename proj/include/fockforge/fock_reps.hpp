// fock_reps.hpp: Fock representations of the CCR and CAR
//
// Field labels are doubled vectors y = (z1, z2bar) in C^d + conj(C^d). The
// field is complex linear in y:
//     field(y) = a*(z1) + a(conj(z2bar)),
// so for real labels y = (z, conj z) it is a*(z) + a(z). The forms on labels:
//     y1 omega y2 = -i (u1.x2 - u2.x1),    y1 alpha y2 = (u1.x2 + u2.x1) / 2,
// with x = z1, u = z2bar and "." the bilinear dot product.

#pragma once

#include "fock_space.hpp"

namespace fockforge {

// --------------------------- Labels and forms -------------------------------

struct DoubledVector {
    Vector z1;
    Vector z2bar;

    static DoubledVector real(const Vector& z) { return {z, z.conjugate()}; }
    static DoubledVector zero(Eigen::Index d) { return {Vector::Zero(d), Vector::Zero(d)}; }

    Eigen::Index modes() const { return z1.size(); }
    bool is_real(double tol = 1e-12) const { return (z2bar - z1.conjugate()).norm() <= tol; }

    DoubledVector operator+(const DoubledVector& o) const { return {z1 + o.z1, z2bar + o.z2bar}; }
    DoubledVector operator-(const DoubledVector& o) const { return {z1 - o.z1, z2bar - o.z2bar}; }
    DoubledVector operator*(cplx s) const { return {s * z1, s * z2bar}; }

    // Stacked (z1; z2bar) in C^{2d}.
    Vector stacked() const {
        Vector v(2 * z1.size());
        v << z1, z2bar;
        return v;
    }
    static DoubledVector from_stacked(const Vector& v) {
        const Eigen::Index d = v.size() / 2;
        return {v.head(d), v.tail(d)};
    }
};

inline cplx omega_form(const DoubledVector& y1, const DoubledVector& y2) {
    return -I_unit * (y1.z2bar.transpose() * y2.z1 - y2.z2bar.transpose() * y1.z1)(0, 0);
}

inline cplx alpha_form(const DoubledVector& y1, const DoubledVector& y2) {
    return 0.5 * (y1.z2bar.transpose() * y2.z1 + y2.z2bar.transpose() * y1.z1)(0, 0);
}

// --------------------------- Creation / annihilation ------------------------

inline Matrix create(const FockSpace& s, const Vector& w) {
    require_shape(w, s.modes(), 1, "create");
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k)
        for (int i = 0; i < s.modes(); ++i) {
            const auto& l = s.up(i, k);
            if (l.target >= 0) m(l.target, k) += w(i) * l.coeff;
        }
    return m;
}

inline Matrix annihilate(const FockSpace& s, const Vector& w) { return create(s, w).adjoint(); }

// Mode operators a*_i, a_i.
inline Matrix create_mode(const FockSpace& s, int i) { return create(s, Vector::Unit(s.modes(), i)); }
inline Matrix annihilate_mode(const FockSpace& s, int i) { return create_mode(s, i).adjoint(); }

inline Matrix field(const FockSpace& s, const DoubledVector& y) {
    require_shape(y.z1, s.modes(), 1, "field");
    require_shape(y.z2bar, s.modes(), 1, "field");
    return create(s, y.z1) + annihilate(s, y.z2bar.conjugate());
}

// Field of a one-particle vector under the usual identification:
// (a*(w) + a(w)) / sqrt 2 for bosons, a*(w) + a(w) for fermions.
inline Matrix field_of(const FockSpace& s, const Vector& w) {
    Matrix f = field(s, DoubledVector::real(w));
    return s.bose() ? Matrix(f / std::sqrt(2.0)) : f;
}

// --------------------------- Weyl operators ---------------------------------

inline Matrix weyl(const FockSpace& s, const DoubledVector& y) {
    if (!s.bose()) throw StatisticsMismatch("weyl: bosonic space required");
    if (!y.is_real(1e-12)) throw std::invalid_argument("weyl: label must be real, z2bar = conj(z1)");
    return expm_hermitian(field(s, y), I_unit);
}

// Weyl relation defect W(y1)W(y2) - exp(-i/2 y1 omega y2) W(y1+y2), measured on
// sectors N <= n_max/2 where truncation effects are smallest.
inline double weyl_defect(const FockSpace& s, const DoubledVector& y1, const DoubledVector& y2) {
    const Matrix lhs = weyl(s, y1) * weyl(s, y2);
    const Matrix rhs = std::exp(-0.5 * I_unit * omega_form(y1, y2)) * weyl(s, y1 + y2);
    return sub_cutoff_norm(s, lhs - rhs, s.n_max() / 2);
}

// --------------------------- Pair creation ----------------------------------

inline void check_kernel_symmetry(const FockSpace& s, const Matrix& c, const char* who) {
    require_shape(c, s.modes(), s.modes(), who);
    const double scale = std::max(1.0, max_abs(c));
    const double defect = s.bose() ? max_abs(Matrix(c - c.transpose())) : max_abs(Matrix(c + c.transpose()));
    if (defect > 1e-12 * scale)
        throw SymmetryViolation(std::string(who) + ": kernel must be " +
                                (s.bose() ? "symmetric" : "antisymmetric"));
}

// a*(c) = sum_ij c_ij a*_i a*_j
inline Matrix multi_create(const FockSpace& s, const Matrix& c) {
    check_kernel_symmetry(s, c, "multi_create");
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k)
        for (int j = 0; j < s.modes(); ++j) {
            const auto& lj = s.up(j, k);
            if (lj.target < 0) continue;
            for (int i = 0; i < s.modes(); ++i) {
                if (c(i, j) == cplx(0.0)) continue;
                const auto& li = s.up(i, lj.target);
                if (li.target >= 0) m(li.target, k) += c(i, j) * lj.coeff * li.coeff;
            }
        }
    return m;
}

inline Matrix multi_annihilate(const FockSpace& s, const Matrix& c) { return multi_create(s, c).adjoint(); }

// exp(A) for nilpotent A (pair creation or annihilation on a finite space): exact series.
inline Matrix exp_nilpotent(const Matrix& A) {
    Matrix sum = identity(A.rows());
    Matrix term = identity(A.rows());
    for (int k = 1; k <= A.rows(); ++k) {
        term = (term * A) / static_cast<double>(k);
        if (max_abs(term) == 0.0) break;
        sum += term;
    }
    return sum;
}

// Normalization of exp(a*(c)/2) Omega: det(1 - cc*)^{1/4} (Bose), det(1 + cc*)^{-1/4} (Fermi).
inline double gaussian_normalization(const FockSpace& s, const Matrix& c) {
    const Matrix cc = c * c.adjoint();
    if (s.bose()) return std::pow(std::real((identity(c.rows()) - cc).determinant()), 0.25);
    return std::pow(std::real((identity(c.rows()) + cc).determinant()), -0.25);
}

inline void require_contraction(const FockSpace& s, const Matrix& c, const char* who) {
    if (s.bose() && op_norm(c) >= 1.0)
        throw NormViolation(std::string(who) + ": bosonic kernel needs norm < 1");
}

// Omega_c = N_c exp(a*(c)/2) Omega; the series terminates on the truncated space.
inline Vector gaussian_vector(const FockSpace& s, const Matrix& c) {
    check_kernel_symmetry(s, c, "gaussian_vector");
    require_contraction(s, c, "gaussian_vector");
    const Matrix A = 0.5 * multi_create(s, c);
    Vector sum = vacuum(s);
    Vector term = vacuum(s);
    for (int k = 1; 2 * k <= s.n_max(); ++k) {
        term = A * term / static_cast<double>(k);
        sum += term;
    }
    return gaussian_normalization(s, c) * sum;
}

// (a(z) -/+ a*(c conj z)) Omega_c on sectors N <= n_max - 1; Bose uses -, Fermi uses +.
inline double gaussian_kernel_residual(const FockSpace& s, const Matrix& c, const Vector& z) {
    const Vector g = gaussian_vector(s, c);
    const double sgn = s.bose() ? -1.0 : 1.0;
    const Vector r = apply_annihilate(s, z, g) + sgn * apply_create(s, c * z.conjugate(), g);
    return restrict_to(r, sectors_up_to(s, s.n_max() - 1)).norm();
}

// Squeezer R_c: unitary with R_c Omega_c = Omega (Bose) and R_c Omega = Omega_c (Fermi).
//   Bose:  det(1-cc*)^{1/4}  e^{-a*(c)/2} Gamma((1-cc*)^{1/2})  e^{a(c)/2}
//   Fermi: det(1+cc*)^{-1/4} e^{+a*(c)/2} Gamma((1+cc*)^{1/2})  e^{-a(c)/2}
inline Matrix squeezer(const FockSpace& s, const Matrix& c) {
    check_kernel_symmetry(s, c, "squeezer");
    require_contraction(s, c, "squeezer");
    const Eigen::Index d = c.rows();
    const Matrix cc = c * c.adjoint();
    const double sgn = s.bose() ? -1.0 : 1.0;
    const Matrix one_pm = identity(d) + sgn * cc;
    const Matrix pair = multi_create(s, c);
    return gaussian_normalization(s, c) * exp_nilpotent(0.5 * sgn * pair) * gamma(s, sqrt_psd(one_pm)) *
           exp_nilpotent(-0.5 * sgn * Matrix(pair.adjoint()));
}

// --------------------------- Pauli / Jordan-Wigner --------------------------

inline Matrix pauli(int k) {
    Matrix m = Matrix::Zero(2, 2);
    switch (k) {
        case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
        case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 2: m(0, 1) = -I_unit; m(1, 0) = I_unit; break;
        case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw std::out_of_range("pauli: index must be 0..3");
    }
    return m;
}

// sigma_k acting on site j (0-based) of n qubits, with sigma_3 on sites before j
// when string is set.
inline Matrix site_operator(int n, int j, const Matrix& op, bool string) {
    Matrix out = Matrix::Identity(1, 1);
    for (int site = 0; site < n; ++site) {
        const Matrix f = site == j ? op : (string && site < j ? pauli(3) : pauli(0));
        out = kron(out, f);
    }
    return out;
}

// (s1^(1), s2^(1), I_1 s1^(2), I_1 s2^(2), ...), with I_j = s3^(1)...s3^(j);
// the optional extra element is I_n.
inline std::vector<Matrix> jordan_wigner(int n, bool with_parity = false) {
    if (n < 1) throw std::invalid_argument("jordan_wigner: n must be >= 1");
    std::vector<Matrix> out;
    for (int j = 0; j < n; ++j) {
        out.push_back(site_operator(n, j, pauli(1), true));
        out.push_back(site_operator(n, j, pauli(2), true));
    }
    if (with_parity) {
        Matrix parity = Matrix::Identity(1, 1);
        for (int j = 0; j < n; ++j) parity = kron(parity, pauli(3));
        out.push_back(parity);
    }
    return out;
}

// Q = i^{n(n-1)/2} field(y_1) ... field(y_n) for an alpha-orthonormal family.
inline Matrix q_operator(const FockSpace& s, const std::vector<DoubledVector>& ys, double tol = 1e-10) {
    if (!s.fermi()) throw StatisticsMismatch("q_operator: fermionic space required");
    const std::size_t n = ys.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(alpha_form(ys[i], ys[j]) - (i == j ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("q_operator: family is not alpha-orthonormal");
    Matrix q = identity(s.dim());
    for (const auto& y : ys) q = q * field(s, y);
    const long e = static_cast<long>(n * (n - 1) / 2) % 4;
    static const cplx powers[4] = {1.0, I_unit, -1.0, -I_unit};
    return powers[e] * q;
}

// Oriented basis (w_1, conj w_1), (-i w_1, conj(-i w_1)), ... for the standard basis w_j = e_j.
inline std::vector<DoubledVector> canonical_real_basis(int d) {
    std::vector<DoubledVector> ys;
    for (int j = 0; j < d; ++j) {
        const Vector e = Vector::Unit(d, j);
        ys.push_back(DoubledVector::real(e));
        ys.push_back(DoubledVector::real(-I_unit * e));
    }
    return ys;
}

}  // namespace fockforge
