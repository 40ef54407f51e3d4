// bogolubov.hpp: symplectic / orthogonal block analysis and Fock implementers
//
// A Bogolubov map acts on doubled labels as
//     r (z1, z2bar) = (p z1 + q z2bar,  conj(q) z1 + conj(p) z2bar),
// so that U field(y) U* = field(r y) and U a*(z) U* = a*(p z) + a(q conj z).

#pragma once

#include "fock_reps.hpp"
#include "random.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <optional>

namespace fockforge {

enum class BlockKind { Symplectic, Orthogonal };

inline const char* to_string(BlockKind k) { return k == BlockKind::Symplectic ? "symplectic" : "orthogonal"; }

inline BlockKind kind_for(Statistics s) {
    return s == Statistics::Bose ? BlockKind::Symplectic : BlockKind::Orthogonal;
}

struct BogolubovBlocks {
    Matrix p;
    Matrix q;
    BlockKind kind = BlockKind::Symplectic;

    Eigen::Index modes() const { return p.rows(); }

    static BogolubovBlocks identity(Eigen::Index d, BlockKind kind) {
        return {Matrix::Identity(d, d), Matrix::Zero(d, d), kind};
    }

    // [[p, q], [conj q, conj p]]
    Matrix full() const {
        const Eigen::Index d = modes();
        Matrix r(2 * d, 2 * d);
        r << p, q, q.conjugate(), p.conjugate();
        return r;
    }

    static BogolubovBlocks from_full(const Matrix& r, BlockKind kind) {
        const Eigen::Index d = r.rows() / 2;
        return {r.topLeftCorner(d, d), r.topRightCorner(d, d), kind};
    }

    DoubledVector apply(const DoubledVector& y) const {
        return {p * y.z1 + q * y.z2bar, q.conjugate() * y.z1 + p.conjugate() * y.z2bar};
    }

    BogolubovBlocks operator*(const BogolubovBlocks& o) const {
        return {p * o.p + q * o.q.conjugate(), p * o.q + q * o.p.conjugate(), kind};
    }

    BogolubovBlocks inverse() const { return from_full(full().inverse(), kind); }
};

// --------------------------- Block relations --------------------------------

struct BlockDiagnostics {
    double r1 = 0.0;  // p*p -/+ q#conj(q) - 1
    double r2 = 0.0;  // p#conj(q) -/+ q*p
    double r3 = 0.0;  // pp* -/+ qq* - 1
    double r4 = 0.0;  // pq# -/+ qp#
    double pp_excess = 0.0;  // smallest eigenvalue of pp* - 1 (symplectic only)
    double pp_norm = 0.0;    // Hilbert-Schmidt norms, recorded for completeness
    double q_hs_norm = 0.0;

    double max_residual() const { return std::max({r1, r2, r3, r4}); }
    bool ok(double tol = 1e-9) const { return max_residual() <= tol && pp_excess >= -tol; }
};

inline BlockDiagnostics validate_blocks(const BogolubovBlocks& b) {
    const Matrix& p = b.p;
    const Matrix& q = b.q;
    require_square(p, "validate_blocks");
    require_shape(q, p.rows(), p.cols(), "validate_blocks");
    const double s = b.kind == BlockKind::Symplectic ? -1.0 : 1.0;
    const Matrix one = Matrix::Identity(p.rows(), p.rows());
    BlockDiagnostics out;
    out.r1 = max_abs(Matrix(p.adjoint() * p + s * q.transpose() * q.conjugate() - one));
    out.r2 = max_abs(Matrix(p.transpose() * q.conjugate() + s * q.adjoint() * p));
    out.r3 = max_abs(Matrix(p * p.adjoint() + s * q * q.adjoint() - one));
    out.r4 = max_abs(Matrix(p * q.transpose() + s * q * p.transpose()));
    if (b.kind == BlockKind::Symplectic && p.rows() > 0)
        out.pp_excess = hermitian_eigenvalues(Matrix(p * p.adjoint() - one)).minCoeff();
    out.pp_norm = (p * p.adjoint()).norm();
    out.q_hs_norm = q.norm();
    return out;
}

// --------------------------- c, d kernels -----------------------------------

struct CDPair {
    Matrix c;       // p^{-1} q
    Matrix d;       // q conj(p)^{-1}
    double c_forms_gap = 0.0;     // between the two expressions for c
    double d_forms_gap = 0.0;     // between the two expressions for d
    double symmetry_defect = 0.0; // c, d symmetric (Bose) / antisymmetric (Fermi)
    double reconstruction = 0.0;  // factorization vs full r
};

inline bool is_degenerate(const BogolubovBlocks& b, double rel = 1e-8) {
    if (b.modes() == 0) return false;
    Eigen::JacobiSVD<Matrix> svd(b.p);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) <= rel * std::max(1.0, s(0));
}

inline CDPair blocks_to_cd(const BogolubovBlocks& b) {
    if (is_degenerate(b))
        throw FermiDegenerate("blocks_to_cd: p has a kernel, the map is j-degenerate");
    const Eigen::Index n = b.modes();
    const double s = b.kind == BlockKind::Symplectic ? 1.0 : -1.0;
    const Matrix pinv = b.p.inverse();
    CDPair out;
    out.c = pinv * b.q;
    out.d = b.q * b.p.conjugate().inverse();
    const Matrix c2 = s * b.q.transpose() * b.p.transpose().inverse();
    const Matrix d2 = s * b.p.adjoint().inverse() * b.q.transpose();
    out.c_forms_gap = max_abs(Matrix(out.c - c2));
    out.d_forms_gap = max_abs(Matrix(out.d - d2));
    out.symmetry_defect = std::max(max_abs(Matrix(out.c - s * out.c.transpose())),
                                   max_abs(Matrix(out.d - s * out.d.transpose())));
    // r = [[1, d], [0, 1]] [[(p*)^{-1}, 0], [0, conj p]] [[1, 0], [conj c, 1]]
    const Matrix one = Matrix::Identity(n, n), zero = Matrix::Zero(n, n);
    Matrix left(2 * n, 2 * n), mid(2 * n, 2 * n), right(2 * n, 2 * n);
    left << one, out.d, zero, one;
    mid << b.p.adjoint().inverse(), zero, zero, b.p.conjugate();
    right << one, zero, out.c.conjugate(), one;
    out.reconstruction = max_abs(Matrix(left * mid * right - b.full()));
    return out;
}

// --------------------------- Implementers -----------------------------------

inline void require_kind(const FockSpace& s, const BogolubovBlocks& b, const char* who) {
    if (kind_for(s.statistics()) != b.kind)
        throw KindMismatch(std::string(who) + ": " + to_string(b.kind) + " blocks on a " +
                           to_string(s.statistics()) + " space");
    require_shape(b.p, s.modes(), s.modes(), who);
    require_shape(b.q, s.modes(), s.modes(), who);
}

// e^{-/+ a*(d)/2} Gamma((p*)^{-1}) e^{+/- a(c)/2}, without the scalar prefactor.
inline Matrix implementer_core(const FockSpace& s, const BogolubovBlocks& b) {
    const CDPair cd = blocks_to_cd(b);
    const double sgn = s.bose() ? -1.0 : 1.0;
    // Clean rounding so the kernel symmetry checks are exact.
    const double t = s.bose() ? 1.0 : -1.0;
    const Matrix c = 0.5 * (cd.c + t * cd.c.transpose());
    const Matrix d = 0.5 * (cd.d + t * cd.d.transpose());
    return exp_nilpotent(0.5 * sgn * multi_create(s, d)) * gamma(s, b.p.adjoint().inverse()) *
           exp_nilpotent(-0.5 * sgn * Matrix(multi_create(s, c).adjoint()));
}

// The implementer with positive vacuum expectation:
//   Bose  |det pp*|^{-1/4} e^{-a*(d)/2} Gamma((p*)^{-1}) e^{a(c)/2}
//   Fermi |det pp*|^{+1/4} e^{+a*(d)/2} Gamma((p*)^{-1}) e^{-a(c)/2}
inline Matrix shale_implementer(const FockSpace& s, const BogolubovBlocks& b) {
    require_kind(s, b, "shale_implementer");
    const double det = std::abs((b.p * b.p.adjoint()).determinant());
    const double pref = std::pow(det, s.bose() ? -0.25 : 0.25);
    return pref * implementer_core(s, b);
}

// The pair +/- (det p*)^{-/+1/2} e^{...} Gamma((p*)^{-1}) e^{...}, principal branch.
inline std::pair<Matrix, Matrix> metaplectic_pair(const FockSpace& s, const BogolubovBlocks& b) {
    require_kind(s, b, "metaplectic_pair");
    const cplx det = b.p.adjoint().determinant();
    const cplx pref = s.bose() ? 1.0 / std::sqrt(det) : std::sqrt(det);
    const Matrix u = pref * implementer_core(s, b);
    return {u, -u};
}

// Mean particle number of U_r Omega, Tr(q q*).
inline double expected_excitation(const BogolubovBlocks& b) { return b.q.squaredNorm(); }

inline std::optional<std::string> truncation_warning(const FockSpace& s, const BogolubovBlocks& b) {
    if (s.bose() && s.n_max() < 2.0 * expected_excitation(b))
        return std::string("cutoff ") + std::to_string(s.n_max()) + " is below twice the mean excitation " +
               std::to_string(expected_excitation(b));
    return std::nullopt;
}

// --------------------------- Positive maps from kernels ---------------------

inline BogolubovBlocks positive_symplectic_from_c(const Matrix& c) {
    require_square(c, "positive_symplectic_from_c");
    if (max_abs(Matrix(c - c.transpose())) > 1e-12 * std::max(1.0, max_abs(c)))
        throw SymmetryViolation("positive_symplectic_from_c: c must be symmetric");
    if (op_norm(c) >= 1.0) throw NormViolation("positive_symplectic_from_c: needs norm < 1");
    const Matrix p = inv_sqrt_pd(identity(c.rows()) - c * c.adjoint());
    return {p, p * c, BlockKind::Symplectic};
}

inline BogolubovBlocks positive_orthogonal_from_c(const Matrix& c) {
    require_square(c, "positive_orthogonal_from_c");
    if (max_abs(Matrix(c + c.transpose())) > 1e-12 * std::max(1.0, max_abs(c)))
        throw SymmetryViolation("positive_orthogonal_from_c: c must be antisymmetric");
    const Matrix p = inv_sqrt_pd(identity(c.rows()) + c * c.adjoint());
    return {p, p * c, BlockKind::Orthogonal};
}

// --------------------------- Random maps ------------------------------------

// exp of [[a, b], [conj b, conj a]] with a anti-Hermitian and b symmetric (symplectic)
// or antisymmetric (orthogonal).
inline BogolubovBlocks random_blocks(Rng& rng, Eigen::Index d, BlockKind kind, double scale) {
    Matrix a = rng.matrix(d, d);
    a = (0.5 * scale * (a - a.adjoint())).eval();
    Matrix b = kind == BlockKind::Symplectic ? rng.symmetric(d) : rng.antisymmetric(d);
    b *= scale;
    Matrix gen(2 * d, 2 * d);
    gen << a, b, b.conjugate(), a.conjugate();
    const Matrix r = gen.exp();
    return BogolubovBlocks::from_full(r, kind);
}

// One-mode squeeze p = cosh t, q = sinh t on mode `mode` of d.
inline BogolubovBlocks one_mode_squeeze(Eigen::Index d, Eigen::Index mode, double t) {
    BogolubovBlocks b = BogolubovBlocks::identity(d, BlockKind::Symplectic);
    b.p(mode, mode) = std::cosh(t);
    b.q(mode, mode) = std::sinh(t);
    return b;
}

// --------------------------- Degenerate fermionic maps ----------------------

// Map implemented by the field of (e_k, e_k): y -> -y + 2 alpha(y_k, y) y_k.
inline BogolubovBlocks mode_reflection(Eigen::Index d, Eigen::Index k) {
    BogolubovBlocks b = BogolubovBlocks::identity(d, BlockKind::Orthogonal);
    b.p = -b.p;
    b.p(k, k) = 0.0;
    b.q(k, k) = 1.0;
    return b;
}

struct ReflectedImplementer {
    Matrix U;
    std::vector<int> reflected_modes;
};

// U_r for an orthogonal r whose p may have a kernel: find the first set S of modes
// (by size, then lexicographically) such that r s is j-nondegenerate, s the product of
// the reflections of S, and return U_{r s} times the product of the reflecting fields.
inline ReflectedImplementer implementer_with_reflections(const FockSpace& s, const BogolubovBlocks& b) {
    require_kind(s, b, "implementer_with_reflections");
    if (!s.fermi()) throw StatisticsMismatch("implementer_with_reflections: fermionic space required");
    const int d = s.modes();
    for (int size = 0; size <= d; ++size) {
        std::vector<int> pick(static_cast<std::size_t>(size));
        std::function<std::optional<ReflectedImplementer>(int, int)> rec =
            [&](int pos, int start) -> std::optional<ReflectedImplementer> {
            if (pos == size) {
                BogolubovBlocks refl = BogolubovBlocks::identity(d, BlockKind::Orthogonal);
                Matrix fields = identity(s.dim());
                for (int k : pick) {
                    refl = refl * mode_reflection(d, k);
                    fields = fields * field(s, DoubledVector::real(Vector::Unit(d, k)));
                }
                const BogolubovBlocks shifted = b * refl;
                if (is_degenerate(shifted)) return std::nullopt;
                return ReflectedImplementer{shale_implementer(s, shifted) * fields, pick};
            }
            for (int k = start; k < d; ++k) {
                pick[static_cast<std::size_t>(pos)] = k;
                if (auto r = rec(pos + 1, k + 1)) return r;
            }
            return std::nullopt;
        };
        if (auto r = rec(0, 0)) return *r;
    }
    throw NumericalFailure("implementer_with_reflections: no nondegenerate reflection found");
}

// --------------------------- Diagnostics ------------------------------------

// || U field(y) U* - field(r y) ||, restricted to N <= n_max - 1 for bosons via the
// intertwining form U field(y) - field(r y) U, which is exact there.
inline double intertwining_residual(const FockSpace& s, const BogolubovBlocks& b, const Matrix& U,
                                    const DoubledVector& y) {
    if (s.fermi()) return (U * field(s, y) * U.adjoint() - field(s, b.apply(y))).norm();
    return sub_cutoff_norm(s, Matrix(U * field(s, y) - field(s, b.apply(y)) * U), s.n_max() - 1);
}

// Distance to the nearer of +B and -B.
inline double sign_ambiguous_gap(const Matrix& A, const Matrix& B) {
    return std::min((A - B).norm(), (A + B).norm());
}

}  // namespace fockforge
