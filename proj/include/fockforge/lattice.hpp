// lattice.hpp: real subspaces of C^d, their lattice operations and the
// fermionic field algebras they generate
//
// A vector z in C^d is stored through its real coordinates (Re z; Im z) in
// R^{2d}. Real-linear maps are 2d x 2d real matrices; multiplication by i is
// i_mult(d) = [[0, -1], [1, 0]]. The real part of the inner product is the
// Euclidean product of the coordinates.

#pragma once

#include "fock_reps.hpp"
#include "fock_space.hpp"
#include "linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <vector>

namespace fockforge {

// Singular values below lattice_zero (relative to max(s_max, 1)) count as zero;
// values inside (lattice_gray_lo, lattice_gray_hi) make the rank ambiguous.
inline constexpr double lattice_zero = 1e-10;
inline constexpr double lattice_gray_lo = 1e-12;
inline constexpr double lattice_gray_hi = 1e-8;

struct RankFlag {
    bool gray = false;
    double worst = 0.0;  // gray singular value seen, 0 if none

    void note(double s) {
        if (s > lattice_gray_lo && s < lattice_gray_hi) {
            gray = true;
            worst = worst == 0.0 ? s : std::min(worst, s);
        }
    }
    void merge(const RankFlag& o) {
        if (o.gray) note(o.worst);
    }
};

namespace detail {

struct RankCut {
    RMatrix range;   // orthonormal basis of Ran A
    RMatrix kernel;  // orthonormal basis of Ker A
};

inline RankCut rank_cut(const RMatrix& A, RankFlag* flag) {
    const Eigen::Index r = A.rows(), c = A.cols();
    if (c == 0) return {RMatrix(r, 0), RMatrix(0, 0)};
    if (r == 0) return {RMatrix(0, 0), RMatrix::Identity(c, c)};
    Eigen::JacobiSVD<RMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double scale = std::max(s(0), 1.0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (flag) flag->note(s(k) / scale);
        if (s(k) > lattice_zero * scale) ++rank;
    }
    return {svd.matrixU().leftCols(rank), svd.matrixV().rightCols(c - rank)};
}

}  // namespace detail

inline RMatrix i_mult(int d) {
    RMatrix j = RMatrix::Zero(2 * d, 2 * d);
    j.topRightCorner(d, d) = -RMatrix::Identity(d, d);
    j.bottomLeftCorner(d, d) = RMatrix::Identity(d, d);
    return j;
}

inline RVector real_coords(const Vector& z) {
    RVector x(2 * z.size());
    x << z.real(), z.imag();
    return x;
}

inline Vector complex_coords(const RVector& x) {
    const Eigen::Index d = x.size() / 2;
    return x.head(d).cast<cplx>() + I_unit * x.tail(d).cast<cplx>();
}

// --------------------------- Real subspaces ---------------------------------

struct RealSubspace {
    int ambient = 0;  // complex dimension d
    RMatrix basis;    // 2d x k, orthonormal columns

    int dim() const { return static_cast<int>(basis.cols()); }
    RMatrix projection() const { return basis * basis.transpose(); }
    bool complex() const;
};

inline RealSubspace make_subspace(int d, const RMatrix& spanning, RankFlag* flag = nullptr) {
    require_shape(spanning, 2 * d, spanning.cols(), "make_subspace");
    return {d, detail::rank_cut(spanning, flag).range};
}

// Real span of the columns of a complex d x k matrix.
inline RealSubspace real_span(const Matrix& vectors) {
    const int d = static_cast<int>(vectors.rows());
    RMatrix x(2 * d, vectors.cols());
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) x.col(k) = real_coords(vectors.col(k));
    return make_subspace(d, x);
}

inline RealSubspace complex_span(const Matrix& vectors) {
    Matrix both(vectors.rows(), 2 * vectors.cols());
    both << vectors, I_unit * vectors;
    return real_span(both);
}

inline RealSubspace whole_space(int d) { return {d, RMatrix::Identity(2 * d, 2 * d)}; }
inline RealSubspace zero_space(int d) { return {d, RMatrix(2 * d, 0)}; }

inline RealSubspace times_i(const RealSubspace& v) { return {v.ambient, i_mult(v.ambient) * v.basis}; }

inline RealSubspace perp(const RealSubspace& v, RankFlag* flag = nullptr) {
    const int n = 2 * v.ambient;
    if (v.dim() == 0) return whole_space(v.ambient);
    return {v.ambient, detail::rank_cut(RMatrix(v.basis.transpose()), flag).kernel.leftCols(n - v.dim())};
}

// iV^perp: the vectors z with Im(z|v) = 0 for all v in V.
inline RealSubspace symplectic_complement(const RealSubspace& v, RankFlag* flag = nullptr) {
    return times_i(perp(v, flag));
}

inline RealSubspace join(const std::vector<RealSubspace>& vs, RankFlag* flag = nullptr) {
    if (vs.empty()) throw std::invalid_argument("join: empty list");
    const int d = vs.front().ambient;
    Eigen::Index cols = 0;
    for (const auto& v : vs) {
        if (v.ambient != d) throw ShapeError("join: ambient dimensions differ");
        cols += v.dim();
    }
    RMatrix all(2 * d, cols);
    Eigen::Index at = 0;
    for (const auto& v : vs) {
        all.middleCols(at, v.dim()) = v.basis;
        at += v.dim();
    }
    return make_subspace(d, all, flag);
}

inline RealSubspace meet(const std::vector<RealSubspace>& vs, RankFlag* flag = nullptr) {
    if (vs.empty()) throw std::invalid_argument("meet: empty list");
    RealSubspace acc = vs.front();
    for (std::size_t k = 1; k < vs.size(); ++k) {
        if (vs[k].ambient != acc.ambient) throw ShapeError("meet: ambient dimensions differ");
        if (acc.dim() == 0) break;
        const RMatrix off = (RMatrix::Identity(2 * acc.ambient, 2 * acc.ambient) - vs[k].projection()) * acc.basis;
        const RMatrix coeff = detail::rank_cut(off, flag).kernel;
        acc = make_subspace(acc.ambient, RMatrix(acc.basis * coeff), flag);
    }
    return acc;
}

// Largest distance from a unit vector of `inner` to `outer`.
inline double containment_defect(const RealSubspace& inner, const RealSubspace& outer) {
    if (inner.dim() == 0) return 0.0;
    const RMatrix off = inner.basis - outer.projection() * inner.basis;
    return Eigen::JacobiSVD<RMatrix>(off).singularValues()(0);
}

inline double subspace_distance(const RealSubspace& a, const RealSubspace& b) {
    if (a.dim() != b.dim()) return 1.0;
    return max_abs(RMatrix(a.projection() - b.projection()));
}

inline bool RealSubspace::complex() const {
    return containment_defect(times_i(*this), *this) <= lattice_zero;
}

// --------------------------- Position of a real subspace --------------------

struct PositionSplit {
    RealSubspace w_plus;   // V and iV
    RealSubspace w_zero;   // where V sits in general position
    RealSubspace w_one;    // V cap iV^perp + iV cap V^perp
    RealSubspace w_minus;  // V^perp and iV^perp
    RealSubspace v_zero;
    RealSubspace v_one;
    double decomposition_defect = 0.0;  // orthogonality, complexity, V reassembly
    double kernel_gap_m = 0.0;          // smallest |p + q - 1| on W_0
    double kernel_gap_n = 0.0;          // smallest |p - q| on W_0
    bool general_position = false;
    RankFlag rank;
};

namespace detail {

inline double smallest_singular(const RMatrix& A) {
    if (A.size() == 0) return 1.0;
    return Eigen::JacobiSVD<RMatrix>(A).singularValues().minCoeff();
}

}  // namespace detail

inline PositionSplit general_position_split(const RealSubspace& v, double tol = lattice_zero) {
    PositionSplit out;
    RankFlag* f = &out.rank;
    const int d = v.ambient;
    const RealSubspace iv = times_i(v);
    const RealSubspace vp = perp(v, f);
    const RealSubspace ivp = times_i(vp);

    out.w_plus = meet({v, iv}, f);
    out.w_minus = meet({vp, ivp}, f);
    out.v_one = meet({v, ivp}, f);
    out.w_one = join({out.v_one, meet({iv, vp}, f)}, f);
    out.w_zero = perp(join({out.w_plus, out.w_one, out.w_minus}, f), f);
    out.v_zero = meet({v, out.w_zero}, f);

    double defect = 0.0;
    const std::vector<const RealSubspace*> parts = {&out.w_plus, &out.w_zero, &out.w_one, &out.w_minus};
    int total = 0;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        total += parts[a]->dim();
        defect = std::max(defect, containment_defect(times_i(*parts[a]), *parts[a]));
        for (std::size_t b = a + 1; b < parts.size(); ++b)
            if (parts[a]->dim() && parts[b]->dim())
                defect = std::max(defect, max_abs(RMatrix(parts[a]->basis.transpose() * parts[b]->basis)));
    }
    if (total != 2 * d) defect = std::max(defect, 1.0);
    const RealSubspace rebuilt = join({out.w_plus, out.v_zero, out.v_one}, f);
    defect = std::max(defect, subspace_distance(rebuilt, v));
    out.decomposition_defect = defect;

    // p and q compressed to W_0
    const RMatrix p = out.v_zero.projection();
    const RMatrix jm = i_mult(d);
    const RMatrix q = jm * p * jm.transpose();
    const RMatrix& b0 = out.w_zero.basis;
    const RMatrix one = RMatrix::Identity(b0.cols(), b0.cols());
    out.kernel_gap_m = detail::smallest_singular(RMatrix(b0.transpose() * (p + q) * b0 - one));
    out.kernel_gap_n = detail::smallest_singular(RMatrix(b0.transpose() * (p - q) * b0));
    out.general_position = defect <= tol && out.kernel_gap_m > tol && out.kernel_gap_n > tol;
    return out;
}

// --------------------------- Angle decomposition ----------------------------

struct HalmosData {
    RealSubspace z;       // positive spectral subspace of m = p + q - 1
    RMatrix epsilon;      // antiunitary involution, sign part of n = p - q
    RMatrix chi;          // (1 - m)/2 on Z, zero on eps Z
    RMatrix rho;          // chi (1 - 2 chi)^{-1} on Z, zero on eps Z
    RVector chi_values;   // eigenvalues of chi on Z, one per complex dimension
    double range_defect = 0.0;       // isometry image vs V
    double dual_range_defect = 0.0;  // swapped legs vs iV^perp
    double isometry_defect = 0.0;
};

inline HalmosData halmos_angles(const RealSubspace& v, double tol = lattice_zero) {
    const int d = v.ambient;
    const Eigen::Index n2 = 2 * d;
    const RMatrix jm = i_mult(d);
    const RMatrix p = v.projection();
    const RMatrix q = jm * p * jm.transpose();
    const RMatrix one = RMatrix::Identity(n2, n2);
    const RMatrix m = p + q - one;
    const RMatrix n = p - q;

    Eigen::SelfAdjointEigenSolver<RMatrix> em(m);
    const RVector& lam = em.eigenvalues();
    for (Eigen::Index k = 0; k < n2; ++k)
        if (std::abs(lam(k)) <= tol || std::abs(lam(k)) >= 1.0 - tol)
            throw GeneralPositionViolated("halmos_angles: p + q - 1 or p - q has a kernel");

    Eigen::SelfAdjointEigenSolver<RMatrix> en(n);
    const RVector sgn = en.eigenvalues().unaryExpr([](double x) { return x > 0.0 ? 1.0 : -1.0; });
    HalmosData out;
    out.epsilon = en.eigenvectors() * sgn.asDiagonal() * en.eigenvectors().transpose();

    std::vector<Eigen::Index> pos;
    for (Eigen::Index k = 0; k < n2; ++k)
        if (lam(k) > 0.0) pos.push_back(k);
    const auto nz = static_cast<Eigen::Index>(pos.size());
    RMatrix bz(n2, nz);
    RVector chis(nz);
    for (Eigen::Index k = 0; k < nz; ++k) {
        bz.col(k) = em.eigenvectors().col(pos[static_cast<std::size_t>(k)]);
        chis(k) = 0.5 * (1.0 - lam(pos[static_cast<std::size_t>(k)]));
    }
    out.z = {d, bz};

    const auto on_z = [&](auto f) {
        RVector vals = chis.unaryExpr(f);
        return RMatrix(bz * vals.asDiagonal() * bz.transpose());
    };
    out.chi = on_z([](double c) { return c; });
    out.rho = on_z([](double c) { return c / (1.0 - 2.0 * c); });
    const RMatrix near = on_z([](double c) { return std::sqrt(1.0 - c); });
    const RMatrix far = on_z([](double c) { return std::sqrt(c); });

    // chi commutes with i, so each complex dimension appears twice
    std::vector<double> sorted(chis.data(), chis.data() + nz);
    std::sort(sorted.begin(), sorted.end());
    out.chi_values.resize(nz / 2);
    for (Eigen::Index k = 0; k < nz / 2; ++k) out.chi_values(k) = sorted[static_cast<std::size_t>(2 * k)];

    const RMatrix iso = (near + out.epsilon * far) * bz;
    const RMatrix dual = (far + out.epsilon * near) * bz;
    out.isometry_defect = max_abs(RMatrix(iso.transpose() * iso - RMatrix::Identity(nz, nz)));
    out.range_defect = subspace_distance(make_subspace(d, iso), v);
    out.dual_range_defect = subspace_distance(make_subspace(d, dual), symplectic_complement(v));
    return out;
}

// --------------------------- Operator spans ---------------------------------

// A linear space of operators on C^n, stored as Hilbert-Schmidt-orthonormal
// column-major vectorizations.
struct OperatorSpan {
    Eigen::Index n = 0;
    Matrix vecs;  // n^2 x k

    int dim() const { return static_cast<int>(vecs.cols()); }
    Matrix element(Eigen::Index k) const { return vecs.col(k).reshaped(n, n); }
    std::vector<Matrix> elements() const {
        std::vector<Matrix> out;
        for (Eigen::Index k = 0; k < vecs.cols(); ++k) out.push_back(element(k));
        return out;
    }
};

inline constexpr Eigen::Index max_commutant_dim = 128;

namespace detail {

inline void require_operator_dim(Eigen::Index n, const char* who) {
    if (n > max_commutant_dim) throw DimensionOverflow(std::string(who) + ": space dimension above 128");
}

inline Matrix orthonormal_columns(const Matrix& cols) {
    if (cols.cols() == 0) return cols;
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const RVector& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(0) > 0.0 && s(k) > lattice_zero * s(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

inline Matrix kernel_columns(const Matrix& A) {
    const Eigen::Index c = A.cols();
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(0) > 0.0 && s(k) > lattice_zero * s(0)) ++rank;
    return svd.matrixV().rightCols(c - rank);
}

}  // namespace detail

inline OperatorSpan operator_span(Eigen::Index n, const std::vector<Matrix>& ops) {
    Matrix cols(n * n, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k) {
        require_shape(ops[k], n, n, "operator_span");
        cols.col(static_cast<Eigen::Index>(k)) = ops[k].reshaped();
    }
    return {n, detail::orthonormal_columns(cols)};
}

// {X : [A, X] = 0 = [A*, X] for every generator A}
inline OperatorSpan commutant(Eigen::Index n, const std::vector<Matrix>& generators) {
    detail::require_operator_dim(n, "commutant");
    const Eigen::Index n2 = n * n;
    const Matrix one = Matrix::Identity(n, n);
    std::vector<Matrix> gens;
    for (const auto& a : generators) {
        require_shape(a, n, n, "commutant");
        gens.push_back(a);
        if (max_abs(Matrix(a - a.adjoint())) > 0.0) gens.push_back(a.adjoint());
    }
    if (gens.empty()) return {n, Matrix::Identity(n2, n2)};
    Matrix stacked(n2 * static_cast<Eigen::Index>(gens.size()), n2);
    for (std::size_t k = 0; k < gens.size(); ++k)
        stacked.middleRows(static_cast<Eigen::Index>(k) * n2, n2) =
            kron(one, gens[k]) - kron(gens[k].transpose(), one);
    return {n, detail::kernel_columns(stacked)};
}

// Unital *-algebra generated by the operators, closed under products.
inline OperatorSpan generated_algebra(Eigen::Index n, const std::vector<Matrix>& generators) {
    detail::require_operator_dim(n, "generated_algebra");
    std::vector<Matrix> gens;
    for (const auto& a : generators) {
        gens.push_back(a);
        gens.push_back(a.adjoint());
    }
    std::vector<Matrix> seed = gens;
    seed.push_back(Matrix::Identity(n, n));
    OperatorSpan span = operator_span(n, seed);
    for (;;) {
        std::vector<Matrix> next = span.elements();
        for (const auto& x : span.elements())
            for (const auto& g : gens) next.push_back(g * x);
        OperatorSpan grown = operator_span(n, next);
        if (grown.dim() == span.dim()) return grown;
        span = std::move(grown);
    }
}

inline OperatorSpan conjugate_span(const OperatorSpan& s, const Matrix& u) {
    std::vector<Matrix> out;
    for (const auto& x : s.elements()) out.push_back(u * x * u.adjoint());
    return operator_span(s.n, out);
}

inline OperatorSpan intersect(const OperatorSpan& a, const OperatorSpan& b) {
    if (a.dim() == 0 || b.dim() == 0) return {a.n, Matrix(a.n * a.n, 0)};
    const Matrix off = a.vecs - b.vecs * (b.vecs.adjoint() * a.vecs);
    const Matrix coeff = detail::kernel_columns(off);
    return {a.n, detail::orthonormal_columns(a.vecs * coeff)};
}

// Largest Hilbert-Schmidt distance from a unit element of `inner` to `outer`.
inline double containment_defect(const OperatorSpan& inner, const OperatorSpan& outer) {
    if (inner.dim() == 0) return 0.0;
    const Matrix off = inner.vecs - outer.vecs * (outer.vecs.adjoint() * inner.vecs);
    return Eigen::JacobiSVD<Matrix>(off).singularValues()(0);
}

struct SpanComparison {
    int dim_a = 0;
    int dim_b = 0;
    double defect = 0.0;  // max of both containment defects

    bool equal(double tol) const { return dim_a == dim_b && defect <= tol; }
};

inline SpanComparison compare_spans(const OperatorSpan& a, const OperatorSpan& b) {
    return {a.dim(), b.dim(), std::max(containment_defect(a, b), containment_defect(b, a))};
}

// --------------------------- Fermionic field algebras -----------------------

inline std::vector<Matrix> subspace_fields(const FockSpace& s, const RealSubspace& v) {
    if (!s.fermi()) throw StatisticsMismatch("subspace_fields: fermionic space required");
    if (s.modes() != v.ambient) throw ShapeError("subspace_fields: ambient dimension differs from the mode count");
    std::vector<Matrix> out;
    for (Eigen::Index k = 0; k < v.basis.cols(); ++k) out.push_back(field_of(s, complex_coords(v.basis.col(k))));
    return out;
}

inline OperatorSpan field_algebra(const FockSpace& s, const RealSubspace& v) {
    return generated_algebra(s.dim(), subspace_fields(s, v));
}

struct DualityReport {
    int hilbert_dim = 0;
    int algebra_dim = 0;    // M(V)
    int center_dim = 0;     // M(V) cap M(V)'
    SpanComparison duality; // M(V)' against Lambda M(iV^perp) Lambda
    bool pass = false;
};

inline DualityReport fermionic_duality_check(const RealSubspace& v, double tol = 1e-8) {
    if (v.ambient > 3) throw DimensionOverflow("fermionic_duality_check: at most 3 modes");
    const FockSpace s = build_space(Statistics::Fermi, v.ambient);
    const Eigen::Index n = s.dim();
    const OperatorSpan alg = field_algebra(s, v);
    const OperatorSpan comm = commutant(n, subspace_fields(s, v));
    const OperatorSpan dual = conjugate_span(field_algebra(s, symplectic_complement(v)), lambda_op(s));

    DualityReport r;
    r.hilbert_dim = static_cast<int>(n);
    r.algebra_dim = alg.dim();
    r.center_dim = intersect(alg, comm).dim();
    r.duality = compare_spans(comm, dual);
    r.pass = r.duality.equal(tol);
    return r;
}

// M(V1 cap V2) against M(V1) cap M(V2).
inline SpanComparison meet_morphism_check(const FockSpace& s, const RealSubspace& v1, const RealSubspace& v2) {
    return compare_spans(field_algebra(s, meet({v1, v2})), intersect(field_algebra(s, v1), field_algebra(s, v2)));
}

}  // namespace fockforge
