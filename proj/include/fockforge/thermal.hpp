// thermal.hpp: Araki-Woods / Araki-Wyss representations and the confined gas
//
// A thermal representation lives on the Fock space over Z + conj(Z) with d
// modes for Z followed by d modes for conj(Z). A doubled label (z1, conj z2) is
// stored as the C^{2d} vector (z1; conj(z2)).
//
// Bose, with rho = gamma (1 - gamma)^{-1}:
//     phi_l(z)     = phi((1+rho)^{1/2} z, conj(rho^{1/2} z))
//     phi_r(zbar)  = phi(rho^{1/2} z, conj((1+rho)^{1/2} z))
// Fermi, with chi = gamma (1 + gamma)^{-1}:
//     phi_l(z)     = phi((1-chi)^{1/2} z, conj(chi^{1/2} z))
//     phi_r(zbar)  = Lambda phi(chi^{1/2} z, conj((1-chi)^{1/2} z)) Lambda
//
// Bosonic operator identities hold below the cutoff only; residuals are taken on
// the sectors N <= n_max / 2 of the doubled space.

#pragma once

#include <optional>

#include "fock_reps.hpp"
#include "random.hpp"

namespace fockforge {

enum class Side { Left, Right };

// --------------------------- Parameters -------------------------------------

struct ThermalParams {
    Statistics kind = Statistics::Bose;
    Matrix gamma;
    Matrix density;  // rho (Bose) or chi (Fermi)
    std::optional<Matrix> h;
    std::optional<double> beta;

    Eigen::Index modes() const { return gamma.rows(); }
};

inline ThermalParams make_thermal_params(Statistics kind, const Matrix& gamma, std::optional<Matrix> h = std::nullopt,
                                         std::optional<double> beta = std::nullopt) {
    require_square(gamma, "thermal params");
    if (max_abs(Matrix(gamma - gamma.adjoint())) > tol_algebraic)
        throw SymmetryViolation("thermal params: gamma is not Hermitian");
    const Matrix g = hermitian_part(gamma);
    const RVector ev = hermitian_eigenvalues(g);
    if (ev.minCoeff() < -tol_algebraic) throw SpectralViolation("thermal params: gamma is not positive");
    if (kind == Statistics::Bose && ev.maxCoeff() >= 1.0 - 1e-12)
        throw SpectralViolation("thermal params: bosonic gamma needs spectrum in [0, 1)");
    if (h) {
        require_shape(*h, g.rows(), g.cols(), "thermal params");
        if (max_abs(commutator(*h, g)) > tol_algebraic)
            throw CommutationViolation("thermal params: h does not commute with gamma");
    }
    ThermalParams p{kind, g, Matrix(), std::move(h), beta};
    p.density = kind == Statistics::Bose ? hermitian_apply(g, [](double x) { return x / (1.0 - x); })
                                         : hermitian_apply(g, [](double x) { return x / (1.0 + x); });
    return p;
}

// gamma = exp(-beta h)
inline ThermalParams gibbs_params(Statistics kind, const Matrix& h, double beta) {
    return make_thermal_params(kind, expm_hermitian(h, -beta), h, beta);
}

struct DoubledRep {
    ThermalParams params;
    FockSpace single;   // Gamma(Z)
    FockSpace conj;     // Gamma(conj Z)
    FockSpace doubled;  // Gamma(Z + conj Z)
    Matrix exp_map;     // Gamma(Z) (x) Gamma(conj Z) -> Gamma(Z + conj Z)

    Statistics kind() const { return params.kind; }
    Eigen::Index modes() const { return params.modes(); }
    bool bose() const { return params.kind == Statistics::Bose; }
};

// Bosonic doubled cutoff is twice the single cutoff, so pair states fit.
inline DoubledRep make_doubled_rep(const ThermalParams& p, int single_cutoff = 0) {
    const int d = static_cast<int>(p.modes());
    DoubledRep r{p, build_space(p.kind, d, single_cutoff), build_space(p.kind, d, single_cutoff),
                 build_space(p.kind, 2 * d, 2 * single_cutoff), Matrix()};
    r.exp_map = exp_law(r.single, r.conj, r.doubled);
    return r;
}

inline Vector doubled_label(const Vector& z1, const Vector& z2) {
    Vector w(z1.size() + z2.size());
    w << z1, z2.conjugate();
    return w;
}

// Residual of an operator identity: exact for Fermi, sub-cutoff for Bose.
inline double operator_residual(const FockSpace& s, const Matrix& A) {
    return s.fermi() ? A.norm() : sub_cutoff_norm(s, A, s.n_max() / 2);
}

// --------------------------- Thermal fields ---------------------------------

namespace detail {

struct ThermalLegs {
    Matrix near, far;  // left: (near z, conj(far z)); right: (far z, conj(near z))
};

inline ThermalLegs thermal_legs(const DoubledRep& r) {
    const Matrix& n = r.params.density;
    if (r.bose())
        return {hermitian_apply(n, [](double x) { return std::sqrt(1.0 + x); }), sqrt_psd(n)};
    return {hermitian_apply(n, [](double x) { return std::sqrt(clamp_nonneg(1.0 - x)); }), sqrt_psd(n)};
}

inline Vector thermal_label(const DoubledRep& r, const Vector& z, Side side) {
    require_shape(z, r.modes(), 1, "thermal field");
    const auto legs = thermal_legs(r);
    return side == Side::Left ? doubled_label(legs.near * z, legs.far * z) : doubled_label(legs.far * z, legs.near * z);
}

inline Matrix lambda_dress(const DoubledRep& r, const Matrix& A, Side side) {
    if (r.bose() || side == Side::Left) return A;
    const Matrix L = lambda_op(r.doubled);
    return L * A * L;
}

}  // namespace detail

inline Matrix thermal_field(const DoubledRep& r, const Vector& z, Side side) {
    return detail::lambda_dress(r, field_of(r.doubled, detail::thermal_label(r, z, side)), side);
}

// Left: a*((near) z, 0) + a(0, conj(far z)). Right (labelled by conj z):
// a(far z, 0) + a*(0, conj(near z)), Lambda-dressed for Fermi.
inline Matrix thermal_create(const DoubledRep& r, const Vector& z, Side side) {
    require_shape(z, r.modes(), 1, "thermal_create");
    const auto legs = detail::thermal_legs(r);
    const Vector zero = Vector::Zero(r.modes());
    const Matrix A =
        side == Side::Left
            ? Matrix(create(r.doubled, doubled_label(legs.near * z, zero)) +
                     annihilate(r.doubled, doubled_label(zero, legs.far * z)))
            : Matrix(annihilate(r.doubled, doubled_label(legs.far * z, zero)) +
                     create(r.doubled, doubled_label(zero, legs.near * z)));
    return detail::lambda_dress(r, A, side);
}

inline Matrix thermal_annihilate(const DoubledRep& r, const Vector& z, Side side) {
    return thermal_create(r, z, side).adjoint();
}

inline void require_kind(const DoubledRep& r, Statistics k, const char* who) {
    if (r.kind() != k) throw KindMismatch(std::string(who) + ": wrong statistics for this representation");
}

inline Matrix aw_left_field(const DoubledRep& r, const Vector& z) {
    require_kind(r, Statistics::Bose, "aw_left_field");
    return thermal_field(r, z, Side::Left);
}
inline Matrix aw_right_field(const DoubledRep& r, const Vector& z) {
    require_kind(r, Statistics::Bose, "aw_right_field");
    return thermal_field(r, z, Side::Right);
}
inline Matrix awy_left_field(const DoubledRep& r, const Vector& z) {
    require_kind(r, Statistics::Fermi, "awy_left_field");
    return thermal_field(r, z, Side::Left);
}
inline Matrix awy_right_field(const DoubledRep& r, const Vector& z) {
    require_kind(r, Statistics::Fermi, "awy_right_field");
    return thermal_field(r, z, Side::Right);
}

// Closed-form left two-point values (Omega| a a* Omega) and (Omega| a* a Omega).
inline cplx closed_two_point_aa_star(const DoubledRep& r, const Vector& z1, const Vector& z2) {
    const Matrix& n = r.params.density;
    const double s = r.bose() ? 1.0 : -1.0;
    return z1.dot((identity(r.modes()) + s * n) * z2);
}
inline cplx closed_two_point_a_star_a(const DoubledRep& r, const Vector& z1, const Vector& z2) {
    return z2.dot(r.params.density * z1);
}
// (Omega| phi_l(z1) phi_l(z2) Omega): Bose (z1|z2)/2 + Re(z1|rho z2); Fermi (z1|z2) - 2i Im(z1|chi z2).
inline cplx closed_two_point_fields(const DoubledRep& r, const Vector& z1, const Vector& z2) {
    const cplx dens = z1.dot(r.params.density * z2);
    if (r.bose()) return 0.5 * z1.dot(z2) + dens.real();
    return z1.dot(z2) - 2.0 * I_unit * dens.imag();
}

// --------------------------- Modular data -----------------------------------

// Antiunitary J psi = unitary * conj(psi).
struct AntiUnitary {
    Matrix unitary;

    Vector apply(const Vector& v) const { return unitary * v.conjugate(); }
    Matrix conjugate(const Matrix& A) const { return unitary * A.conjugate() * unitary.adjoint(); }
    Matrix square() const { return unitary * unitary.conjugate(); }
};

struct ModularData {
    AntiUnitary J;
    Matrix Delta;
};

// Mode swap Z <-> conj Z on C^{2d}.
inline Matrix swap_modes(Eigen::Index d) {
    Matrix P = Matrix::Zero(2 * d, 2 * d);
    P.topRightCorner(d, d) = identity(d);
    P.bottomLeftCorner(d, d) = identity(d);
    return P;
}

// J_s = Gamma(epsilon), J_a = Lambda Gamma(epsilon), epsilon = swap o conj.
inline AntiUnitary modular_conjugation(const DoubledRep& r) {
    const Matrix G = gamma(r.doubled, swap_modes(r.modes()));
    return {r.bose() ? G : Matrix(lambda_op(r.doubled) * G)};
}

// Delta = Gamma(gamma + conj(gamma)^{-1}); needs Ker gamma = 0 (and Ker gamma^{-1} = 0).
inline ModularData modular_data(const DoubledRep& r, double tol = 1e-12) {
    const RVector ev = hermitian_eigenvalues(r.params.gamma);
    if (ev.minCoeff() <= tol) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(r.params.gamma);
        std::string msg = "modular_data: Ker gamma is nontrivial, spanned by";
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (ev(k) <= tol) {
                msg += " [";
                for (Eigen::Index i = 0; i < es.eigenvectors().rows(); ++i) {
                    const cplx c = es.eigenvectors()(i, k);
                    msg += (i ? ", " : "") + std::to_string(c.real()) + (c.imag() < 0 ? "-" : "+") +
                           std::to_string(std::abs(c.imag())) + "i";
                }
                msg += "]";
            }
        throw KernelViolation(msg);
    }
    const Matrix g = r.params.gamma;
    const Matrix ginv = hermitian_apply(g, [](double x) { return 1.0 / x; });
    return {modular_conjugation(r), gamma(r.doubled, direct_sum(g, Matrix(ginv.conjugate())))};
}

// Ordered monomials prod_{i in S} a*_{l,i} prod_{j in T} a_{l,j}; 4^d of them span
// the left Araki-Wyss algebra.
inline std::vector<Matrix> left_monomials(const DoubledRep& r) {
    const Eigen::Index d = r.modes();
    std::vector<Matrix> cr, an;
    for (Eigen::Index i = 0; i < d; ++i) {
        cr.push_back(thermal_create(r, Vector::Unit(d, i), Side::Left));
        an.push_back(cr.back().adjoint());
    }
    std::vector<Matrix> out;
    const unsigned subsets = 1u << d;
    for (unsigned S = 0; S < subsets; ++S)
        for (unsigned T = 0; T < subsets; ++T) {
            Matrix m = identity(r.doubled.dim());
            for (Eigen::Index i = 0; i < d; ++i)
                if (S >> i & 1u) m = m * cr[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < d; ++j)
                if (T >> j & 1u) m = m * an[static_cast<std::size_t>(j)];
            out.push_back(m);
        }
    return out;
}

// Independent route: S A Omega = A* Omega on the spanning monomials, then
// S = J Delta^{1/2}. With S = M conj(.), Delta = M^T conj(M) and J = M conj(Delta^{-1/2}) conj(.).
inline ModularData modular_from_s(const DoubledRep& r) {
    require_kind(r, Statistics::Fermi, "modular_from_s");
    const auto monos = left_monomials(r);
    const Eigen::Index n = r.doubled.dim();
    const Vector vac = vacuum(r.doubled);
    Matrix V(n, n), W(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        V.col(k) = monos[static_cast<std::size_t>(k)] * vac;
        W.col(k) = monos[static_cast<std::size_t>(k)].adjoint() * vac;
    }
    // M conj(V) = W, solved as conj(V)^T M^T = W^T
    Eigen::FullPivLU<Matrix> lu(Matrix(V.conjugate().transpose()));
    if (lu.rank() < n) throw KernelViolation("modular_from_s: vacuum is not cyclic for the left algebra");
    const Matrix Mx = lu.solve(Matrix(W.transpose())).transpose();
    const Matrix Delta = hermitian_part(Matrix(Mx.transpose() * Mx.conjugate()));
    const Matrix inv_half = inv_sqrt_pd(Delta);
    return {{Matrix(Mx * inv_half.conjugate())}, Delta};
}

// max over low monomials A of |J Delta^{1/2} A Omega - A* Omega|; monomials are
// products of at most `degree` left creation / annihilation operators.
inline double modular_relation_defect(const DoubledRep& r, const ModularData& m, int degree = 2) {
    const Eigen::Index d = r.modes();
    std::vector<Matrix> gens;
    for (Eigen::Index i = 0; i < d; ++i) {
        gens.push_back(thermal_create(r, Vector::Unit(d, i), Side::Left));
        gens.push_back(gens.back().adjoint());
    }
    const Matrix half = hermitian_apply(m.Delta, [](double x) { return std::sqrt(clamp_nonneg(x)); });
    const Vector vac = vacuum(r.doubled);
    double worst = 0.0;
    std::vector<Matrix> level = {identity(r.doubled.dim())};
    for (int k = 0; k <= degree; ++k) {
        for (const auto& A : level)
            worst = std::max(worst, (m.J.apply(half * (A * vac)) - A.adjoint() * vac).norm());
        if (k == degree) break;
        std::vector<Matrix> next;
        for (const auto& A : level)
            for (const auto& g : gens) next.push_back(A * g);
        level = std::move(next);
    }
    return worst;
}

// L = dGamma(h + (-conj h)); requires [h, gamma] = 0.
inline Matrix standard_liouvillean(const DoubledRep& r, const Matrix& h) {
    require_shape(h, r.modes(), r.modes(), "standard_liouvillean");
    if (max_abs(commutator(h, r.params.gamma)) > tol_algebraic)
        throw CommutationViolation("standard_liouvillean: h does not commute with gamma");
    return dgamma(r.doubled, direct_sum(h, Matrix(-h.conjugate())));
}

// --------------------------- Standard form of B(Gamma(Z)) -------------------

// Hilbert-Schmidt operator A on Gamma(Z) as a vector in Gamma(Z + conj Z); Fermi
// uses the order-reversing identification of the conjugate space (a Lambda).
inline Vector hs_vector(const DoubledRep& r, const Matrix& A) {
    require_shape(A, r.single.dim(), r.single.dim(), "hs_vector");
    const Matrix B = r.bose() ? A : Matrix(A * lambda_op(r.conj));
    Vector v(B.size());
    for (Eigen::Index k = 0; k < B.rows(); ++k)
        for (Eigen::Index l = 0; l < B.cols(); ++l) v(k * B.cols() + l) = B(k, l);
    return r.exp_map * v;
}

inline Matrix theta_left(const DoubledRep& r, const Matrix& A) {
    return r.exp_map * kron(A, identity(r.conj.dim())) * r.exp_map.adjoint();
}

// theta_r(conj A); Fermi conjugates by the reversal V = Lambda.
inline Matrix theta_right(const DoubledRep& r, const Matrix& A) {
    Matrix Ab = A.conjugate();
    if (!r.bose()) {
        const Matrix L = lambda_op(r.conj);
        Ab = L * Ab * L;
    }
    return r.exp_map * kron(identity(r.single.dim()), Ab) * r.exp_map.adjoint();
}

// --------------------------- Confined gas -----------------------------------

struct GibbsData {
    Matrix density;
    double trace = 0.0;
    double closed_form = 0.0;  // det(1 - gamma)^{-1} (Bose) or det(1 + gamma) (Fermi)
    double tail = 0.0;         // closed_form - trace
};

inline GibbsData confined_gibbs(const FockSpace& s, const Matrix& g) {
    require_shape(g, s.modes(), s.modes(), "confined_gibbs");
    const RVector ev = hermitian_eigenvalues(g);
    if (ev.minCoeff() < -tol_algebraic) throw SpectralViolation("confined_gibbs: gamma is not positive");
    if (s.bose() && ev.maxCoeff() >= 1.0) throw SpectralViolation("confined_gibbs: bosonic gamma needs sp in [0, 1)");
    const Matrix G = gamma(s, g);
    GibbsData out;
    out.trace = G.trace().real();
    out.density = G / out.trace;
    const Matrix id = identity(s.modes());
    out.closed_form = s.bose() ? 1.0 / (id - g).determinant().real() : (id + g).determinant().real();
    out.tail = out.closed_form - out.trace;
    return out;
}

// Pair kernel [[0, gamma^{1/2}], [+/- conj(gamma)^{1/2}, 0]] on Z + conj Z.
inline Matrix confined_kernel(const DoubledRep& r) {
    const Eigen::Index d = r.modes();
    const Matrix root = sqrt_psd(r.params.gamma);
    Matrix c = Matrix::Zero(2 * d, 2 * d);
    c.topRightCorner(d, d) = root;
    c.bottomLeftCorner(d, d) = (r.bose() ? 1.0 : -1.0) * root.conjugate();
    return c;
}

// Standard vector representative of the Gibbs state Gamma(gamma) / Tr Gamma(gamma).
inline Vector omega_gamma(const DoubledRep& r) { return gaussian_vector(r.doubled, confined_kernel(r)); }

// Unitary with R Omega_gamma = Omega, carrying the Fock left/right fields to the thermal ones.
inline Matrix r_gamma(const DoubledRep& r) {
    const Matrix R = squeezer(r.doubled, confined_kernel(r));
    return r.bose() ? R : Matrix(R.adjoint());
}

struct ConfinedReport {
    double vacuum = 0.0;         // |R* Omega - Omega_gamma|
    double left_field = 0.0;     // R phi(z, 0) R* vs phi_l(z)
    double right_field = 0.0;    // R theta_r(conj phi(z)) R* vs phi_r(zbar)
    double theta_left = 0.0;     // theta_l(phi(z)) vs phi(z, 0)
    double theta_right = 0.0;    // theta_r(conj phi(z)) vs phi(0, zbar), Lambda-dressed for Fermi
    double liouvillean = 0.0;    // [R, dGamma(h + -conj h)]
    double expectation = 0.0;    // (Omega_gamma| theta_l(A) Omega_gamma) vs Tr(Gamma(gamma) A)/Tr
    double max() const {
        return std::max({vacuum, left_field, right_field, theta_left, theta_right, liouvillean, expectation});
    }
};

inline ConfinedReport confined_equivalence_check(const DoubledRep& r, const Matrix& h) {
    const Eigen::Index d = r.modes();
    const Matrix R = r_gamma(r);
    const Vector og = omega_gamma(r);
    const FockSpace& D = r.doubled;
    const Vector vac = vacuum(D);
    const Vector zero = Vector::Zero(d);
    const Matrix L = lambda_op(D);
    ConfinedReport rep;
    rep.vacuum = (R.adjoint() * vac - og).norm();

    const auto gibbs = confined_gibbs(r.single, r.params.gamma);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (cplx phase : {cplx(1.0), I_unit}) {
            const Vector z = phase * Vector::Unit(d, i);
            const Matrix left = field_of(D, doubled_label(z, zero));
            Matrix right = field_of(D, doubled_label(zero, z));
            if (D.fermi()) right = L * right * L;
            rep.left_field = std::max(rep.left_field, operator_residual(D, Matrix(R * left - thermal_field(r, z, Side::Left) * R)));
            rep.right_field = std::max(rep.right_field, operator_residual(D, Matrix(R * right - thermal_field(r, z, Side::Right) * R)));
            const Matrix phi = field_of(r.single, z);
            rep.theta_left = std::max(rep.theta_left, operator_residual(D, Matrix(theta_left(r, phi) - left)));
            rep.theta_right = std::max(rep.theta_right, operator_residual(D, Matrix(theta_right(r, phi) - right)));
            const Matrix A = create(r.single, z) * annihilate(r.single, Vector::Unit(d, (i + 1) % d)) + phi;
            const cplx lhs = og.dot(theta_left(r, A) * og);
            const cplx rhs = (gibbs.density * A).trace();
            rep.expectation = std::max(rep.expectation, std::abs(lhs - rhs));
        }
    }
    const Matrix Lv = dgamma(D, direct_sum(h, Matrix(-h.conjugate())));
    rep.liouvillean = operator_residual(D, commutator(R, Lv));
    return rep;
}

// --------------------------- KMS --------------------------------------------

// |omega(A tau^{t + i beta}(B)) - omega(tau^t(B) A)| for omega = Tr(Gamma(gamma) .)/Tr,
// tau^s(B) = e^{isH} B e^{-isH}, H = dGamma(h), continued to complex s spectrally.
inline double kms_check(const FockSpace& s, const Matrix& g, const Matrix& h, double beta, const Matrix& A,
                        const Matrix& B, double t) {
    const Matrix rho = confined_gibbs(s, g).density;
    Eigen::SelfAdjointEigenSolver<Matrix> es(dgamma(s, h));
    const Matrix& V = es.eigenvectors();
    const RVector& E = es.eigenvalues();
    const Matrix Bp = V.adjoint() * B * V;
    const auto evolve = [&](cplx time) {
        Matrix X = Bp;
        for (Eigen::Index m = 0; m < X.rows(); ++m)
            for (Eigen::Index n = 0; n < X.cols(); ++n) X(m, n) *= std::exp(I_unit * time * (E(m) - E(n)));
        return Matrix(V * X * V.adjoint());
    };
    const cplx lhs = (rho * A * evolve(cplx(t, beta))).trace();
    const cplx rhs = (rho * evolve(cplx(t, 0.0)) * A).trace();
    return std::abs(lhs - rhs);
}

struct KmsResult {
    double defect = 0.0;
    Matrix witness_a, witness_b;
    double witness_t = 0.0;
};

// Largest defect over random operator pairs (normalized to unit Frobenius norm).
inline KmsResult kms_scan(const FockSpace& s, const Matrix& g, const Matrix& h, double beta, Rng& rng, int trials = 8) {
    KmsResult out;
    for (int k = 0; k < trials; ++k) {
        Matrix A = rng.matrix(s.dim(), s.dim()), B = rng.matrix(s.dim(), s.dim());
        A /= A.norm();
        B /= B.norm();
        const double t = rng.uniform(-1.0, 1.0);
        const double defect = kms_check(s, g, h, beta, A, B, t);
        if (k == 0 || defect > out.defect) out = {defect, A, B, t};
    }
    return out;
}

// --------------------------- Tracial representation -------------------------

// On Gamma_a of the complexified real space: left phi(v), right Lambda phi(v) Lambda.
inline Matrix tracial_field(const FockSpace& s, const RVector& v, Side side) {
    if (!s.fermi()) throw KindMismatch("tracial_field: fermionic space required");
    const Matrix f = field_of(s, v.cast<cplx>());
    if (side == Side::Left) return f;
    const Matrix L = lambda_op(s);
    return L * f * L;
}

}  // namespace fockforge
