// quasifree.hpp: Wick sums, quasi-free tests and covariance reduction
//
// Covariances live on a real phase space R^m. For a quasi-free vector Psi the
// two-point function is
//     (Psi| phi(y1) phi(y2) Psi) = y1 (S + i/2 omega) y2,
// with S = eta (Bose) or alpha (Fermi). The reduction produces a complex
// structure j, a chart R^m -> C^n and the one-particle density.

#pragma once

#include <functional>

#include "fock_reps.hpp"

namespace fockforge {

// --------------------------- Wick sums --------------------------------------

// Sum over pairings of products of two-point values; Fermi terms carry the
// pairing sign. Slots are 0-based. Odd n gives 0, n = 0 gives 1.
inline cplx wick_npoint(const std::function<cplx(std::size_t, std::size_t)>& two_point, std::size_t n,
                        Statistics kind) {
    if (n % 2) return 0.0;
    cplx total = 0.0;
    for (const auto& p : enumerate_pairings(n / 2)) {
        cplx term = kind == Statistics::Fermi ? cplx(p.sign) : cplx(1.0);
        for (std::size_t j = 0; j < p.m; ++j) term *= two_point(p.map[2 * j], p.map[2 * j + 1]);
        total += term;
    }
    return total;
}

struct QuasifreeReport {
    double max_defect = 0.0;
    int worst_order = 0;
    std::size_t checked = 0;
    bool pass = false;
};

// Compares (Psi| phi(y_i1) ... phi(y_in) Psi) with the Wick sum of the
// measured two-point matrix, for all ordered tuples from `ys` with n <= max_order.
inline QuasifreeReport verify_quasifree(const FockSpace& s, const Vector& psi, const std::vector<DoubledVector>& ys,
                                        int max_order = 6, double tol = tol_algebraic) {
    require_shape(psi, s.dim(), 1, "verify_quasifree");
    std::vector<Matrix> fields;
    for (const auto& y : ys) fields.push_back(field(s, y));
    const std::size_t m = ys.size();
    Matrix two(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) two(i, j) = psi.dot(fields[i] * (fields[j] * psi));

    QuasifreeReport rep;
    std::vector<std::size_t> slots;
    // Depth-first over tuples, building phi(y_ik)...phi(y_in) Psi from the right.
    std::function<void(const Vector&, int)> rec = [&](const Vector& w, int order) {
        if (order > 0) {
            std::vector<std::size_t> tuple(slots.rbegin(), slots.rend());
            const cplx measured = psi.dot(w);
            const cplx wick = wick_npoint([&](std::size_t a, std::size_t b) { return two(tuple[a], tuple[b]); },
                                          tuple.size(), s.statistics());
            const double defect = std::abs(measured - wick);
            ++rep.checked;
            if (defect > rep.max_defect) {
                rep.max_defect = defect;
                rep.worst_order = order;
            }
        }
        if (order == max_order) return;
        for (std::size_t i = 0; i < m; ++i) {
            slots.push_back(i);
            rec(fields[i] * w, order + 1);
            slots.pop_back();
        }
    };
    rec(psi, 0);
    rep.pass = rep.max_defect <= tol;
    return rep;
}

// --------------------------- Covariance data --------------------------------

struct CovarianceData {
    Statistics kind = Statistics::Bose;
    RMatrix symmetric_form;  // eta (Bose) or alpha (Fermi)
    RMatrix omega;
};

// Two-point matrix S + i/2 omega.
inline Matrix two_point_matrix(const CovarianceData& cov) {
    return cov.symmetric_form.cast<cplx>() + 0.5 * I_unit * cov.omega.cast<cplx>();
}

// Validates shapes, symmetry, positivity and the Cauchy-Schwarz bound
// |y1 omega y2| <= 2 |y1 S y1|^{1/2} |y2 S y2|^{1/2}, which is positivity of
// S + i/2 omega.
inline CovarianceData make_covariance(Statistics kind, const RMatrix& sym, const RMatrix& omega,
                                      double tol = tol_algebraic) {
    require_square(sym, "make_covariance");
    require_shape(omega, sym.rows(), sym.cols(), "make_covariance");
    if (max_abs(RMatrix(sym - sym.transpose())) > tol)
        throw SymmetryViolation("make_covariance: symmetric form is not symmetric");
    if (max_abs(RMatrix(omega + omega.transpose())) > tol)
        throw SymmetryViolation("make_covariance: omega is not antisymmetric");
    CovarianceData cov{kind, 0.5 * (sym + sym.transpose()), 0.5 * (omega - omega.transpose())};
    const double scale = std::max(1.0, op_norm(cov.symmetric_form.cast<cplx>()));
    if (hermitian_eigenvalues(cov.symmetric_form.cast<cplx>()).minCoeff() < -tol * scale)
        throw NonPositiveEta("make_covariance: symmetric form is not positive");
    if (hermitian_eigenvalues(two_point_matrix(cov)).minCoeff() < -tol * scale)
        throw NormViolation("make_covariance: omega violates the Cauchy-Schwarz bound");
    return cov;
}

// Covariance of the Araki-Woods (Bose) or Araki-Wyss (Fermi) vacuum with
// one-particle density `density` on C^n, in real coordinates (Re z, Im z).
inline CovarianceData thermal_covariance(Statistics kind, const Matrix& density) {
    require_square(density, "thermal_covariance");
    const Eigen::Index n = density.rows();
    Matrix chart(n, 2 * n);
    chart << identity(n), I_unit * identity(n);
    // real-bilinear forms of (z1|H z2)
    const auto form = [&](const Matrix& H) { return Matrix(chart.adjoint() * H * chart); };
    if (kind == Statistics::Bose) {
        const Matrix sym = form(identity(n) + 2.0 * density);
        return make_covariance(kind, 0.5 * sym.real(), form(identity(n)).imag());
    }
    return make_covariance(kind, form(identity(n)).real(), 2.0 * form(identity(n) - 2.0 * density).imag());
}

// --------------------------- Reduction --------------------------------------

struct ReducedRepData {
    Statistics kind = Statistics::Bose;
    Eigen::Index complex_dim = 0;
    RMatrix j;              // complex structure on the real space, j^2 = -1
    Matrix chart;           // n x m: y -> complex coordinates, -j acting as i
    RVector moduli;         // singular values of mu, one per complex direction
    Matrix density;         // Bose: rho = |mu|^{-1} - 1; Fermi: chi = (1 - |mu|)/2
    Matrix aw_density;      // density in Araki-Woods / Araki-Wyss normalization
    Matrix gamma;           // Bose rho(1+rho)^{-1}; Fermi chi(1-chi)^{-1}
};

namespace detail {

// Orthonormal pairs (u_k, v_k) with mu u_k = -s_k v_k, mu v_k = s_k u_k for a
// real antisymmetric mu; kernel vectors are paired in order.
struct AntisymmetricFrame {
    RMatrix u, v;
    RVector s;
};

inline AntisymmetricFrame antisymmetric_frame(const RMatrix& mu, double zero_tol, double cluster_tol) {
    const Eigen::Index m = mu.rows();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(-(mu * mu));
    const RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const RMatrix vecs = es.eigenvectors();

    AntisymmetricFrame out;
    out.u.resize(m, m / 2);
    out.v.resize(m, m / 2);
    out.s.resize(m / 2);
    Eigen::Index pairs = 0;
    // eigenvalues ascending; walk clusters from the largest modulus down
    Eigen::Index hi = m;
    while (hi > 0) {
        Eigen::Index lo = hi - 1;
        while (lo > 0 && std::abs(ev(lo - 1) - ev(hi - 1)) <= cluster_tol) --lo;
        RMatrix block = vecs.middleCols(lo, hi - lo);
        const double sv = ev.segment(lo, hi - lo).mean();
        const bool kernel = sv <= zero_tol;
        if ((hi - lo) % 2) throw OddKernel("reduction: odd-dimensional spectral subspace of |mu|");
        // Pair directions inside the cluster, peeling off (u, v) each time.
        while (block.cols() > 0) {
            const RVector u = block.col(0).normalized();
            RVector v = kernel ? RVector(block.col(1)) : RVector(-mu * u / sv);
            v -= u.dot(v) * u;
            v.normalize();
            out.u.col(pairs) = u;
            out.v.col(pairs) = v;
            out.s(pairs) = kernel ? 0.0 : sv;
            ++pairs;
            if (block.cols() == 2) break;
            const RMatrix rest = block - u * (u.transpose() * block) - v * (v.transpose() * block);
            block = range_basis(rest, 1e-8);
            if (block.cols() % 2) throw NumericalFailure("reduction: cluster pairing lost a direction");
        }
        hi = lo;
    }
    return out;
}

inline RMatrix sym_power(const RMatrix& A, double p) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(A);
    return es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() *
           es.eigenvectors().transpose();
}

inline ReducedRepData reduce(const CovarianceData& cov, double tol) {
    const RMatrix& S = cov.symmetric_form;
    const Eigen::Index m = S.rows();
    if (m % 2) throw OddKernel("reduction: odd real dimension");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(S);
    if (es.eigenvalues().minCoeff() <= tol * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw NonPositiveEta("reduction: symmetric form is not positive definite");
    const RMatrix half = sym_power(S, 0.5), inv_half = sym_power(S, -0.5);
    // mu = S^{-1} omega / 2; in S-orthonormal coordinates it is antisymmetric
    RMatrix mu_t = 0.5 * inv_half * cov.omega * inv_half;
    mu_t = 0.5 * (mu_t - mu_t.transpose()).eval();
    const auto frame = antisymmetric_frame(mu_t, 1e-6, 1e-7);
    const Eigen::Index n = m / 2;
    if (frame.s.maxCoeff() > 1.0 + 1e-9) throw NormViolation("reduction: |mu| exceeds 1");

    ReducedRepData r;
    r.kind = cov.kind;
    r.complex_dim = n;
    r.moduli = frame.s;
    RMatrix j_t = RMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        j_t += -frame.v.col(k) * frame.u.col(k).transpose() + frame.u.col(k) * frame.v.col(k).transpose();
    }
    r.j = inv_half * j_t * half;

    // z_k = w_k (u_k + i v_k) . (S^{1/2} y); Bose weights normalize S|mu|
    r.chart.resize(n, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double w = cov.kind == Statistics::Bose ? std::sqrt(frame.s(k)) : 1.0;
        r.chart.row(k) = w * (frame.u.col(k).cast<cplx>() + I_unit * frame.v.col(k).cast<cplx>()).transpose() *
                         half.cast<cplx>();
    }
    Vector dens(n), aw(n), gam(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double s = frame.s(k);
        if (cov.kind == Statistics::Bose) {
            dens(k) = 1.0 / s - 1.0;
            aw(k) = 0.5 * dens(k).real();
            gam(k) = aw(k).real() / (1.0 + aw(k).real());
        } else {
            dens(k) = 0.5 * (1.0 - s);
            aw(k) = dens(k);
            gam(k) = dens(k).real() / (1.0 - dens(k).real());
        }
    }
    r.density = dens.asDiagonal();
    r.aw_density = aw.asDiagonal();
    r.gamma = gam.asDiagonal();
    return r;
}

}  // namespace detail

// eta positive definite, omega nondegenerate.
inline ReducedRepData reduce_bose(const CovarianceData& cov, double tol = tol_algebraic) {
    if (cov.kind != Statistics::Bose) throw KindMismatch("reduce_bose: fermionic covariance");
    const RMatrix& S = cov.symmetric_form;
    if (S.rows() % 2 || nullspace(cov.omega, 1e-9).cols() > 0)
        throw DegenerateOmega("reduce_bose: omega is degenerate");
    return detail::reduce(cov, tol);
}

// alpha positive definite; Ker omega must be even dimensional.
inline ReducedRepData reduce_fermi(const CovarianceData& cov, double tol = tol_algebraic) {
    if (cov.kind != Statistics::Fermi) throw KindMismatch("reduce_fermi: bosonic covariance");
    const Eigen::Index m = cov.symmetric_form.rows();
    const Eigen::Index kernel = nullspace(cov.omega, 1e-9).cols();
    if (kernel % 2 || m % 2) throw OddKernel("reduce_fermi: Ker omega has odd dimension");
    return detail::reduce(cov, tol);
}

// Two-point matrix rebuilt from the reduced data on the real basis:
//   Bose  (y1|y2) + Re(y1|rho y2),   Fermi (y1|y2) - 2i Im(y1|chi y2).
inline Matrix reduced_two_point(const ReducedRepData& r) {
    const Matrix& C = r.chart;
    const Matrix base = C.adjoint() * C;
    const Matrix dens = C.adjoint() * r.density * C;
    if (r.kind == Statistics::Bose) return base + Matrix(dens.real().cast<cplx>());
    return base - 2.0 * I_unit * Matrix(dens.imag().cast<cplx>());
}

inline double reduction_residual(const CovarianceData& cov, const ReducedRepData& r) {
    return max_abs(Matrix(two_point_matrix(cov) - reduced_two_point(r)));
}

}  // namespace fockforge
