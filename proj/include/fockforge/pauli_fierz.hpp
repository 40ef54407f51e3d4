// pauli_fierz.hpp: a finite system K coupled linearly to a truncated boson
// field, at zero and positive density
//
// A coupling q in B(K, K (x) Z) is a (dim K * d) x dim K matrix with the K
// index major: q(k * d + i, l) = (e_k (x) e_i | q e_l). The same layout is used
// for B(K, K (x) conj Z) in the basis conj(e_i). Operators on K (x) Gamma and
// K (x) conj K (x) Gamma are Kronecker products with K outermost.

#pragma once

#include "fock_reps.hpp"
#include "fock_space.hpp"
#include "linalg.hpp"
#include "thermal.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace fockforge {

struct MissingGamma : Error { using Error::Error; };

inline constexpr int pf_max_system_dim = 8;
inline constexpr int pf_max_modes = 3;
inline constexpr int pf_max_cutoff = 16;

struct PauliFierzModel {
    Matrix system;    // K, Hermitian on C^{dim K}
    Matrix h;         // one-boson energy, positive on C^d
    Matrix coupling;  // v, (dim K * d) x dim K
    std::optional<ThermalParams> gamma;

    Eigen::Index dim_k() const { return system.rows(); }
    Eigen::Index modes() const { return h.rows(); }
};

inline PauliFierzModel make_pf_model(const Matrix& system, const Matrix& h, const Matrix& coupling,
                                     std::optional<Matrix> gamma = std::nullopt) {
    require_square(system, "pauli-fierz model");
    require_square(h, "pauli-fierz model");
    const Eigen::Index dk = system.rows(), d = h.rows();
    if (dk > pf_max_system_dim || d > pf_max_modes)
        throw DimensionOverflow("pauli-fierz model: at most 8 system levels and 3 boson modes");
    require_shape(coupling, dk * d, dk, "pauli-fierz coupling");
    if (max_abs(Matrix(system - system.adjoint())) > tol_algebraic)
        throw SymmetryViolation("pauli-fierz model: K is not Hermitian");
    if (max_abs(Matrix(h - h.adjoint())) > tol_algebraic)
        throw SymmetryViolation("pauli-fierz model: h is not Hermitian");
    if (hermitian_eigenvalues(hermitian_part(h)).minCoeff() <= 0.0)
        throw SpectralViolation("pauli-fierz model: h is not positive");
    PauliFierzModel m{hermitian_part(system), hermitian_part(h), coupling, std::nullopt};
    if (gamma) m.gamma = make_thermal_params(Statistics::Bose, *gamma, m.h);
    return m;
}

// --------------------------- Couplings --------------------------------------

// B_i with q = sum_i B_i (x) |e_i).
inline Matrix coupling_component(const Matrix& q, Eigen::Index dim_k, Eigen::Index i) {
    const Eigen::Index d = q.rows() / dim_k;
    Matrix b(dim_k, dim_k);
    for (Eigen::Index k = 0; k < dim_k; ++k) b.row(k) = q.row(k * d + i);
    return b;
}

// B (x) |w)
inline Matrix factor_coupling(const Matrix& b, const Vector& w) { return kron(b, Matrix(w)); }

// (1_K (x) x) q
inline Matrix leg_apply(const Matrix& x, const Matrix& q, Eigen::Index dim_k) {
    return kron(identity(dim_k), x) * q;
}

// (Phi (x) w | v Psi) = (v_star Phi | Psi (x) conj w)
inline Matrix v_star(const Matrix& v, Eigen::Index dim_k) {
    if (v.cols() != dim_k || v.rows() % dim_k) throw ShapeError("v_star: coupling must be (dim K * d) x dim K");
    const Eigen::Index d = v.rows() / dim_k;
    Matrix out(v.rows(), dim_k);
    for (Eigen::Index k = 0; k < dim_k; ++k)
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index l = 0; l < dim_k; ++l) out(k * d + i, l) = std::conj(v(l * d + i, k));
    return out;
}

// Coupling into Z + conj Z from its two legs.
inline Matrix join_legs(const Matrix& q1, const Matrix& q2, Eigen::Index dim_k) {
    if (q1.rows() != q2.rows() || q1.cols() != dim_k || q2.cols() != dim_k)
        throw ShapeError("join_legs: legs must share the (dim K * d) x dim K shape");
    const Eigen::Index d = q1.rows() / dim_k;
    Matrix q(2 * q1.rows(), dim_k);
    for (Eigen::Index k = 0; k < dim_k; ++k) {
        q.middleRows(2 * d * k, d) = q1.middleRows(d * k, d);
        q.middleRows(2 * d * k + d, d) = q2.middleRows(d * k, d);
    }
    return q;
}

// a*(q) = sum_i B_i (x) a*(e_i) on K (x) Gamma_s.
inline Matrix coupled_create(const FockSpace& s, const Matrix& q) {
    if (q.rows() % s.modes() || q.rows() / s.modes() != q.cols())
        throw ShapeError("coupled_create: coupling must be (dim K * d) x dim K");
    const Eigen::Index dk = q.cols();
    Matrix out = Matrix::Zero(dk * s.dim(), dk * s.dim());
    for (int i = 0; i < s.modes(); ++i) {
        const Matrix b = coupling_component(q, dk, i);
        if (b.cwiseAbs().maxCoeff() == 0.0) continue;
        out += kron(b, create_mode(s, i));
    }
    return out;
}

inline Matrix coupled_annihilate(const FockSpace& s, const Matrix& q) { return coupled_create(s, q).adjoint(); }

inline Matrix coupled_field(const FockSpace& s, const Matrix& q) {
    const Matrix c = coupled_create(s, q);
    return c + c.adjoint();
}

// conj(B) inserted as the middle leg: (theta^{-1} (x) 1)(conj B (x) A)(theta (x) 1).
inline Matrix check_middle(const Matrix& bbar, const Matrix& a, Eigen::Index dim_k) {
    require_square(bbar, "check_middle");
    if (a.rows() % dim_k || a.cols() % dim_k) throw ShapeError("check_middle: A must act on K (x) H");
    const Eigen::Index kb = bbar.rows(), h2 = a.rows() / dim_k, h1 = a.cols() / dim_k;
    Matrix out = Matrix::Zero(dim_k * kb * h2, dim_k * kb * h1);
    for (Eigen::Index k = 0; k < dim_k; ++k)
        for (Eigen::Index l = 0; l < dim_k; ++l) {
            const auto blk = a.block(k * h2, l * h1, h2, h1);
            for (Eigen::Index x = 0; x < kb; ++x)
                for (Eigen::Index y = 0; y < kb; ++y)
                    if (bbar(x, y) != 0.0)
                        out.block((k * kb + x) * h2, (l * kb + y) * h1, h2, h1) = bbar(x, y) * blk;
        }
    return out;
}

// --------------------------- Hamiltonian ------------------------------------

inline void require_cutoff(int cutoff, const char* who) {
    if (cutoff < 1 || cutoff > pf_max_cutoff) throw DimensionOverflow(std::string(who) + ": cutoff outside 1..16");
}

// H = K (x) 1 + 1 (x) dGamma(h) + a*(v) + a(v) on K (x) Gamma_s(Z), N <= cutoff.
inline Matrix hamiltonian(const PauliFierzModel& m, int cutoff) {
    const FockSpace s = build_space(Statistics::Bose, static_cast<int>(m.modes()), cutoff);
    const Eigen::Index dk = m.dim_k();
    return kron(m.system, identity(s.dim())) + kron(identity(dk), dgamma(s, m.h)) + coupled_field(s, m.coupling);
}

struct HypothesisNorms {
    double inverse_energy = 0.0;      // |h^{-1/2} v|
    double density = 0.0;             // |(1 + rho)^{1/2} v|
    double energy_density = 0.0;      // |(1 + h)(1 + rho)^{1/2} v|
};

inline HypothesisNorms hypothesis_norms(const PauliFierzModel& m) {
    const Eigen::Index dk = m.dim_k(), d = m.modes();
    const Matrix rho = m.gamma ? m.gamma->density : Matrix::Zero(d, d);
    const Matrix lift = hermitian_apply(rho, [](double x) { return std::sqrt(1.0 + x); });
    return {op_norm(leg_apply(inv_sqrt_pd(m.h), m.coupling, dk)), op_norm(leg_apply(lift, m.coupling, dk)),
            op_norm(leg_apply(Matrix((identity(d) + m.h) * lift), m.coupling, dk))};
}

// --------------------------- Liouvilleans -----------------------------------

inline const ThermalParams& require_gamma(const PauliFierzModel& m, const char* who) {
    if (!m.gamma) throw MissingGamma(std::string(who) + ": model has no density");
    return *m.gamma;
}

// ((1 + rho)^{1/2} v, conj(rho)^{1/2} v_star)
inline Matrix left_coupling(const PauliFierzModel& m) {
    const Matrix& rho = require_gamma(m, "left_coupling").density;
    const Eigen::Index dk = m.dim_k();
    const Matrix lift = hermitian_apply(rho, [](double x) { return std::sqrt(1.0 + x); });
    return join_legs(leg_apply(lift, m.coupling, dk), leg_apply(Matrix(sqrt_psd(rho).conjugate()), v_star(m.coupling, dk), dk),
                     dk);
}

// (rho^{1/2} conj(v_star), (1 + conj rho)^{1/2} conj v), acting on conj K.
inline Matrix right_coupling(const PauliFierzModel& m) {
    const Matrix& rho = require_gamma(m, "right_coupling").density;
    const Eigen::Index dk = m.dim_k();
    const Matrix lift = hermitian_apply(rho, [](double x) { return std::sqrt(1.0 + x); });
    return join_legs(leg_apply(sqrt_psd(rho), Matrix(v_star(m.coupling, dk).conjugate()), dk),
                     leg_apply(Matrix(lift.conjugate()), Matrix(m.coupling.conjugate()), dk), dk);
}

inline FockSpace liouvillean_space(const PauliFierzModel& m, int cutoff) {
    require_cutoff(cutoff, "liouvillean");
    return build_space(Statistics::Bose, 2 * static_cast<int>(m.modes()), cutoff);
}

inline Matrix doubled_energy(const PauliFierzModel& m) {
    return direct_sum(m.h, Matrix(-m.h.conjugate()));
}

// V_gamma on K (x) Gamma_s(Z + conj Z).
inline Matrix interaction(const PauliFierzModel& m, const FockSpace& doubled) {
    return coupled_field(doubled, left_coupling(m));
}

inline Matrix semi_liouvillean_free(const PauliFierzModel& m, const FockSpace& doubled) {
    const Eigen::Index dk = m.dim_k();
    return kron(m.system, identity(doubled.dim())) + kron(identity(dk), dgamma(doubled, doubled_energy(m)));
}

inline Matrix semi_liouvillean(const PauliFierzModel& m, int cutoff) {
    const FockSpace s = liouvillean_space(m, cutoff);
    return semi_liouvillean_free(m, s) + interaction(m, s);
}

inline Matrix standard_liouvillean_free(const PauliFierzModel& m, const FockSpace& doubled) {
    const Eigen::Index dk = m.dim_k();
    const Matrix one_f = identity(doubled.dim());
    return kron(kron(m.system, identity(dk)), one_f) - kron(kron(identity(dk), Matrix(m.system.conjugate())), one_f) +
           kron(identity(dk * dk), dgamma(doubled, doubled_energy(m)));
}

// J = J_K (x) Gamma(epsilon): the unitary part W with J = W conj.
inline Matrix pf_conjugation(Eigen::Index dim_k, const FockSpace& doubled) {
    Matrix swap_k = Matrix::Zero(dim_k * dim_k, dim_k * dim_k);
    for (Eigen::Index a = 0; a < dim_k; ++a)
        for (Eigen::Index b = 0; b < dim_k; ++b) swap_k(b * dim_k + a, a * dim_k + b) = 1.0;
    return kron(swap_k, gamma(doubled, swap_modes(doubled.modes() / 2)));
}

// J X J for J = W conj with W a real involution.
inline Matrix conjugate_by_j(const Matrix& w, const Matrix& x) { return w * x.conjugate() * w; }

inline Matrix standard_interaction(const PauliFierzModel& m, const FockSpace& doubled) {
    return check_middle(identity(m.dim_k()), interaction(m, doubled), m.dim_k());
}

// 1_K (x) a*(right coupling) + h.c.
inline Matrix right_interaction(const PauliFierzModel& m, const FockSpace& doubled) {
    return kron(identity(m.dim_k()), coupled_field(doubled, right_coupling(m)));
}

inline Matrix standard_liouvillean(const PauliFierzModel& m, int cutoff) {
    const FockSpace s = liouvillean_space(m, cutoff);
    const Matrix pv = standard_interaction(m, s);
    return standard_liouvillean_free(m, s) + pv - conjugate_by_j(pf_conjugation(m.dim_k(), s), pv);
}

struct LiouvilleanBundle {
    FockSpace doubled;
    Matrix semi_free, semi;
    Matrix standard_free, standard;
};

inline LiouvilleanBundle liouvilleans(const PauliFierzModel& m, int cutoff) {
    LiouvilleanBundle b;
    b.doubled = liouvillean_space(m, cutoff);
    b.semi_free = semi_liouvillean_free(m, b.doubled);
    b.semi = b.semi_free + interaction(m, b.doubled);
    b.standard_free = standard_liouvillean_free(m, b.doubled);
    const Matrix pv = standard_interaction(m, b.doubled);
    b.standard = b.standard_free + pv - conjugate_by_j(pf_conjugation(m.dim_k(), b.doubled), pv);
    return b;
}

// Indices of outer (x) Gamma with N <= n.
inline std::vector<Eigen::Index> composite_sectors(Eigen::Index outer, const FockSpace& s, int n) {
    const auto inner = sectors_up_to(s, n);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index o = 0; o < outer; ++o)
        for (auto i : inner) idx.push_back(o * s.dim() + i);
    return idx;
}

struct StandardStructure {
    double commutator = 0.0;       // [pi(V), J pi(V) J] on N <= cutoff - 2
    double right_closed_form = 0.0;  // J pi(V) J against the right-leg operator
    double hermiticity = 0.0;
};

inline StandardStructure standard_structure(const PauliFierzModel& m, int cutoff) {
    const FockSpace s = liouvillean_space(m, cutoff);
    const Eigen::Index dk = m.dim_k();
    const Matrix pv = standard_interaction(m, s);
    const Matrix jvj = conjugate_by_j(pf_conjugation(dk, s), pv);
    const auto low = composite_sectors(dk * dk, s, std::max(cutoff - 2, 0));
    StandardStructure out;
    out.commutator = op_norm(restrict_to(commutator(pv, jvj), low));
    out.right_closed_form = max_abs(Matrix(jvj - right_interaction(m, s)));
    const Matrix l = standard_liouvillean_free(m, s) + pv - jvj;
    out.hermiticity = max_abs(Matrix(l - l.adjoint()));
    return out;
}

// --------------------------- Confined equivalences ---------------------------

struct SpectralMatch {
    double deviation = 0.0;  // largest distance from a reference value to its partner
    double tail = 0.0;       // largest top-sector weight over simple reference values
    int matched = 0;
};

inline constexpr double pf_cluster_tol = 1e-7;

namespace detail {

// Each cluster of reference values (multiplicity m) takes the m nearest
// eigenvalues of the truncated operator. Degenerate clusters are skipped in the
// tail estimate: near-null vectors of the truncated operator are plentiful and
// the nearest ones may sit at the cutoff.
inline SpectralMatch match_spectrum(const Matrix& op, std::vector<double> reference,
                                    const std::vector<Eigen::Index>& top) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op);
    if (es.info() != Eigen::Success) throw NumericalFailure("match_spectrum: eigensolver failed");
    const RVector& ev = es.eigenvalues();
    std::sort(reference.begin(), reference.end());
    SpectralMatch out;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
    for (std::size_t a = 0; a < reference.size();) {
        std::size_t b = a + 1;
        while (b < reference.size() && reference[b] - reference[a] <= pf_cluster_tol) ++b;
        const double x = reference[a];
        const std::size_t mult = b - a;
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<Eigen::Index>(k);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(mult, order.size())),
                          order.end(), [&](Eigen::Index p, Eigen::Index q) {
                              return std::abs(ev(p) - x) < std::abs(ev(q) - x);
                          });
        for (std::size_t k = 0; k < mult && k < order.size(); ++k) {
            const Eigen::Index e = order[k];
            out.deviation = std::max(out.deviation, std::abs(ev(e) - x));
            double w = 0.0;
            for (auto t : top) w += std::norm(es.eigenvectors()(t, e));
            if (mult == 1) out.tail = std::max(out.tail, w);
            ++out.matched;
        }
        a = b;
    }
    return out;
}

inline std::vector<Eigen::Index> top_sector(Eigen::Index outer, const FockSpace& s) {
    const auto below = composite_sectors(outer, s, s.n_max() - 1);
    std::vector<Eigen::Index> top;
    std::size_t j = 0;
    for (Eigen::Index k = 0; k < outer * s.dim(); ++k) {
        if (j < below.size() && below[j] == k) {
            ++j;
            continue;
        }
        top.push_back(k);
    }
    return top;
}

}  // namespace detail

struct ConfinedPFOptions {
    int cutoff = 14;              // total boson number on Gamma_s(Z + conj Z)
    int reference_cutoff = 0;     // cutoff for the reference spectrum of H; 0 picks one
    int system_levels = 4;        // lowest eigenvalues of H used as references
    int boson_levels = 2;         // lowest eigenvalues of dGamma(h)
};

struct ConfinedPFReport {
    SpectralMatch semi;      // sp(L_semi) against E_i - F_j
    SpectralMatch standard;  // sp(L) against E_i - E_j
    int reference_cutoff = 0;

    double max() const { return std::max(semi.deviation, standard.deviation); }
};

inline int default_reference_cutoff(const PauliFierzModel& m) {
    int n = 60;
    while (n > 8 && m.dim_k() * binomial(n + static_cast<int>(m.modes()), static_cast<int>(m.modes())) > 2000) --n;
    return n;
}

inline std::vector<double> lowest_levels(const Matrix& op, int count) {
    const RVector ev = hermitian_eigenvalues(op);
    std::vector<double> out(ev.data(), ev.data() + std::min<Eigen::Index>(count, ev.size()));
    return out;
}

inline ConfinedPFReport confined_pf_check(const PauliFierzModel& m, const ConfinedPFOptions& opt = {}) {
    require_gamma(m, "confined_pf_check");
    const int ref_cut = opt.reference_cutoff > 0 ? opt.reference_cutoff : default_reference_cutoff(m);
    const auto energies = lowest_levels(hamiltonian(m, ref_cut), opt.system_levels);
    const FockSpace field = build_space(Statistics::Bose, static_cast<int>(m.modes()), opt.boson_levels);
    const auto bosons = lowest_levels(dgamma(field, Matrix(m.h.conjugate())), opt.boson_levels);

    std::vector<double> semi_ref, std_ref;
    for (double e : energies) {
        for (double f : bosons) semi_ref.push_back(e - f);
        for (double e2 : energies) std_ref.push_back(e - e2);
    }

    const auto b = liouvilleans(m, opt.cutoff);
    const Eigen::Index dk = m.dim_k();
    ConfinedPFReport r;
    r.reference_cutoff = ref_cut;
    r.semi = detail::match_spectrum(b.semi, semi_ref, detail::top_sector(dk, b.doubled));
    r.standard = detail::match_spectrum(b.standard, std_ref, detail::top_sector(dk * dk, b.doubled));
    return r;
}

// Spin-boson model: K = sigma_3, one mode of energy h, v = coupling * sigma_1 (x) |e).
inline PauliFierzModel spin_boson(double coupling, double energy = 1.0, std::optional<double> gamma = std::nullopt) {
    const Matrix k = pauli(3), x = pauli(1);
    std::optional<Matrix> g;
    if (gamma) g = Matrix::Constant(1, 1, *gamma);
    return make_pf_model(k, Matrix::Constant(1, 1, energy), factor_coupling(Matrix(coupling * x), Vector::Ones(1)), g);
}

}  // namespace fockforge
