// battery.hpp: the named verification checks behind `fockforge suite` and the acceptance run

#pragma once

#include "bogolubov.hpp"
#include "lattice.hpp"
#include "pauli_fierz.hpp"
#include "report.hpp"
#include "thermal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fockforge {

struct BatteryEntry {
    std::string name;
    int criterion = 0;
    bool smoke = false;  // included in the quick suite
    std::function<void(Report&, Rng&)> body;
};

// Runtime budget in seconds for each acceptance criterion.
inline double criterion_budget(int criterion) {
    switch (criterion) {
        case 1: case 2: return 1.0;
        case 3: return 2.0;
        case 4: return 30.0;
        case 5: case 6: case 8: return 10.0;
        case 7: return 20.0;
        case 9: return 60.0;
        case 10: return 120.0;
        default: return 0.0;
    }
}

struct UnknownSuite : Error { using Error::Error; };

namespace battery {

inline Matrix random_kernel(Rng& rng, const FockSpace& s, double norm) {
    Matrix c = s.bose() ? rng.symmetric(s.modes()) : rng.antisymmetric(s.modes());
    return c * (norm / op_norm(c));
}

inline DoubledVector random_label(Rng& rng, Eigen::Index d) { return DoubledVector::real(rng.vector(d)); }

// Sum over N > n of the number of d-mode occupations with N quanta times lambda^N.
inline double geometric_tail(int d, int n, double lambda) {
    double total = 0.0;
    for (int N = n + 1;; ++N) {
        const double term = binomial(N + d - 1, d - 1) * std::pow(lambda, N);
        total += term;
        if (term < 1e-18 * total || N > n + 100000) break;
    }
    return total;
}

// ---- 1: CAR ----

inline void car_exactness(Report& rep, Rng& rng, int d, int pairs = 100) {
    const auto s = build_space(Statistics::Fermi, d);
    const Matrix one = identity(s.dim());
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const DoubledVector y1 = random_label(rng, d), y2 = random_label(rng, d);
        const Matrix defect = anticommutator(field(s, y1), field(s, y2)) - 2.0 * alpha_form(y1, y2) * one;
        worst = std::max(worst, op_norm(defect));
    }
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
    rep.check("car.field_anticommutator", worst, 1e-12);
}

// ---- 2: CCR on the sub-cutoff sectors ----

inline void ccr_truncation(Report& rep, Rng& rng, int d, int cutoff = 10, int pairs = 4) {
    const auto s = build_space(Statistics::Bose, d, cutoff);
    const Matrix one = identity(s.dim());
    double ccr = 0.0, creators = 0.0, fields = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const Vector w1 = rng.vector(d), w2 = rng.vector(d);
        const Matrix defect = commutator(annihilate(s, w1), create(s, w2)) - w1.dot(w2) * one;
        ccr = std::max(ccr, sub_cutoff_norm(s, defect, cutoff - 1));
        creators = std::max(creators, max_abs(commutator(create(s, w1), create(s, w2))));
        const DoubledVector y1 = DoubledVector::real(w1), y2 = DoubledVector::real(w2);
        const Matrix heis = commutator(field(s, y1), field(s, y2)) - I_unit * omega_form(y1, y2) * one;
        fields = std::max(fields, sub_cutoff_norm(s, heis, cutoff - 1));
    }
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
    rep.check("ccr.annihilate_create", ccr, 1e-12);
    rep.check("ccr.create_create", creators, 1e-12);
    rep.check("ccr.field_commutator", fields, 1e-12);
}

// ---- 3: Gibbs traces ----

inline void fermi_traces(Report& rep, Rng& rng) {
    double worst = 0.0;
    for (int d = 1; d <= 4; ++d)
        for (int k = 0; k < 3; ++k) {
            const auto g = confined_gibbs(build_space(Statistics::Fermi, d), rng.hermitian_spectrum(d, 0.0, 3.0));
            worst = std::max(worst, std::abs(g.trace - g.closed_form) / g.closed_form);
        }
    rep.check("trace.fermi_determinant", worst, 1e-12);
}

inline void bose_traces(Report& rep, Rng& rng, int cutoff = 20) {
    for (int d = 1; d <= 2; ++d) {
        const Matrix g = rng.hermitian_spectrum(d, 0.0, 0.8);
        const auto gibbs = confined_gibbs(build_space(Statistics::Bose, d, cutoff), g);
        const double bound = geometric_tail(d, cutoff, hermitian_eigenvalues(g).maxCoeff());
        const std::string tag = "d" + std::to_string(d);
        // d = 1 meets the bound exactly, so allow rounding
        rep.check("trace.bose_within_tail." + tag, std::abs(gibbs.tail), bound * (1.0 + 1e-10));
        rep.check("trace.bose_tail_sign." + tag, std::max(0.0, -gibbs.tail), 0.0);
        rep.tail("bose_trace_tail." + tag, gibbs.tail);
        rep.tail("bose_trace_bound." + tag, bound);
    }
}

// ---- 4: Shale and metaplectic implementers ----

inline BogolubovBlocks nondegenerate_orthogonal(Rng& rng, Eigen::Index d) {
    for (;;) {
        auto r = random_blocks(rng, d, BlockKind::Orthogonal, 1.0);
        if (!is_degenerate(r, 1e-4)) return r;
    }
}

inline void pin_intertwining(Report& rep, Rng& rng, int count = 20) {
    double inter = 0.0, unit = 0.0;
    for (int k = 0; k < count; ++k) {
        const int d = 1 + k % 3;
        const auto s = build_space(Statistics::Fermi, d);
        const auto r = nondegenerate_orthogonal(rng, d);
        const Matrix U = shale_implementer(s, r);
        unit = std::max(unit, max_abs(Matrix(U.adjoint() * U - identity(s.dim()))));
        for (int j = 0; j < 3; ++j) inter = std::max(inter, intertwining_residual(s, r, U, random_label(rng, d)));
    }
    rep.check("shale.fermi_intertwining", inter, 1e-10);
    rep.check("shale.fermi_unitarity", unit, 1e-10);
}

inline void pin_composition(Report& rep, Rng& rng, int count = 10) {
    const auto s = build_space(Statistics::Fermi, 3);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto r1 = nondegenerate_orthogonal(rng, 3), r2 = nondegenerate_orthogonal(rng, 3);
        const auto r12 = r1 * r2;
        if (is_degenerate(r12, 1e-4)) continue;
        const Matrix u1 = metaplectic_pair(s, r1).first, u2 = metaplectic_pair(s, r2).first;
        worst = std::max(worst, sign_ambiguous_gap(u1 * u2, metaplectic_pair(s, r12).first));
    }
    rep.check("pin.composition_up_to_sign", worst, 1e-7);
}

inline void squeeze_intertwining(Report& rep, Rng& rng, int cutoff = 20) {
    const auto b = build_space(Statistics::Bose, 1, cutoff);
    double worst = 0.0;
    for (double t : {-0.3, -0.2, -0.1, 0.1, 0.2, 0.3}) {
        const auto r = one_mode_squeeze(1, 0, t);
        const Matrix U = shale_implementer(b, r);
        for (int j = 0; j < 3; ++j) worst = std::max(worst, intertwining_residual(b, r, U, random_label(rng, 1)));
    }
    rep.size("hilbert_dim", static_cast<double>(b.dim()));
    rep.check("shale.bose_squeeze_intertwining", worst, 1e-7);
}

// Compared on N <= 4, where the truncation of the cutoff-20 space does not reach.
inline void metaplectic_composition(Report& rep, Rng& rng, int cutoff = 20) {
    const auto b = build_space(Statistics::Bose, 1, cutoff);
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
        const double t1 = rng.uniform(-0.15, 0.15), t2 = rng.uniform(-0.15, 0.15);
        const auto r1 = one_mode_squeeze(1, 0, t1), r2 = one_mode_squeeze(1, 0, t2);
        const Matrix u1 = metaplectic_pair(b, r1).first, u2 = metaplectic_pair(b, r2).first;
        const Matrix u12 = metaplectic_pair(b, r1 * r2).first;
        const double gap = std::min(sub_cutoff_norm(b, Matrix(u1 * u2 - u12), 4),
                                    sub_cutoff_norm(b, Matrix(u1 * u2 + u12), 4));
        worst = std::max(worst, gap);
    }
    rep.check("metaplectic.composition_up_to_sign", worst, 1e-7);
}

// ---- 5: Gaussian kernels ----

inline void gaussian_kernels(Report& rep, Rng& rng, Statistics kind, int count = 20) {
    const int d = kind == Statistics::Bose ? 2 : 4;
    const auto s = build_space(kind, d, kind == Statistics::Bose ? 20 : 0);
    double worst = 0.0, norm = 0.0;
    for (int k = 0; k < count; ++k) {
        const Matrix c = random_kernel(rng, s, kind == Statistics::Bose ? rng.uniform(0.1, 0.5) : rng.uniform(0.2, 2.0));
        worst = std::max(worst, gaussian_kernel_residual(s, c, rng.vector(d)));
        if (s.fermi()) norm = std::max(norm, std::abs(gaussian_vector(s, c).norm() - 1.0));
    }
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
    if (s.bose()) {
        rep.check("gaussian.bose_kernel", worst, 1e-8);
    } else {
        rep.check("gaussian.fermi_kernel", worst, 1e-12);
        rep.check("gaussian.fermi_normalization", norm, 1e-12);
    }
}

// ---- 6: thermal two-point functions ----

inline void two_point(Report& rep, Rng& rng, Statistics kind) {
    const bool bose = kind == Statistics::Bose;
    double worst = 0.0;
    for (int d = 1; d <= 2; ++d)
        for (double beta : {0.5, 1.0, 2.0}) {
            const Matrix h = bose ? rng.hermitian_spectrum(d, 0.5, 2.0) : rng.hermitian_spectrum(d, -1.0, 1.5);
            const auto r = make_doubled_rep(gibbs_params(kind, h, beta), bose ? 6 : 0);
            const Vector v = vacuum(r.doubled);
            for (int k = 0; k < 3; ++k) {
                const Vector z1 = rng.vector(d), z2 = rng.vector(d);
                const Matrix a1 = thermal_create(r, z1, Side::Left), a2 = thermal_create(r, z2, Side::Left);
                // matrix-vector products only: the doubled Bose space has 1820 states at d = 2
                const Vector c1 = a1 * v, c2 = a2 * v, n1 = a1.adjoint() * v, n2 = a2.adjoint() * v;
                const double scale = bose ? 1.0 / std::sqrt(2.0) : 1.0;
                const Vector f1 = scale * (c1 + n1), f2 = scale * (c2 + n2);
                worst = std::max({worst, std::abs(c1.dot(c2) - closed_two_point_aa_star(r, z1, z2)),
                                  std::abs(n1.dot(n2) - closed_two_point_a_star_a(r, z1, z2)),
                                  std::abs(f1.dot(f2) - closed_two_point_fields(r, z1, z2)),
                                  std::abs(n1.dot(c2))});
            }
        }
    rep.check(bose ? "two_point.araki_woods" : "two_point.araki_wyss", worst, bose ? 1e-6 : 1e-10);
}

// ---- 7: modular data ----

inline void modular_oracle(Report& rep, Rng& rng) {
    double delta = 0.0, conj = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const auto r = make_doubled_rep(gibbs_params(Statistics::Fermi, rng.hermitian_spectrum(d, -1.0, 1.0), 1.3));
        const auto m = modular_data(r);
        const auto s = modular_from_s(r);
        delta = std::max(delta, max_abs(Matrix(m.Delta - s.Delta)));
        conj = std::max(conj, max_abs(Matrix(m.J.unitary - s.J.unitary)));
    }
    rep.check("modular.delta_vs_polar_s", delta, 1e-7);
    rep.check("modular.j_vs_polar_s", conj, 1e-7);
}

inline void modular_fields(Report& rep, Rng& rng) {
    double worst = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const auto r = make_doubled_rep(gibbs_params(Statistics::Fermi, rng.hermitian_spectrum(d, -1.0, 1.0), 1.0));
        const auto m = modular_data(r);
        for (int k = 0; k < 4; ++k) {
            const Vector z = rng.vector(d);
            worst = std::max(worst, operator_residual(r.doubled, Matrix(m.J.conjugate(thermal_field(r, z, Side::Left)) -
                                                                      thermal_field(r, z, Side::Right))));
        }
    }
    rep.check("modular.j_left_to_right_fermi", worst, 1e-10);
}

inline void modular_liouvillean(Report& rep, Rng& rng, int cutoff = 3) {
    const Matrix h = rng.hermitian_spectrum(2, -1.0, 1.0);
    for (auto kind : {Statistics::Fermi, Statistics::Bose}) {
        const Matrix hk = kind == Statistics::Bose ? Matrix(h + 1.5 * identity(2)) : h;
        const auto r = make_doubled_rep(gibbs_params(kind, hk, 1.0), cutoff);
        const Matrix L = standard_liouvillean(r, hk);
        const Matrix delta = modular_data(r).Delta;
        const double gap = max_abs(Matrix(delta - expm_hermitian(L, -1.0))) / max_abs(delta);
        rep.check(std::string("modular.delta_exp_liouvillean.") + to_string(kind), gap, 1e-9);
        rep.size(std::string("hilbert_dim.") + to_string(kind), static_cast<double>(r.doubled.dim()));
    }
}

// ---- 8: KMS ----

// The mismatch is recorded as 1e-4 / defect, which stays below 1 exactly when the defect exceeds 1e-4.
inline void kms(Report& rep, Rng& rng, Statistics kind, int cutoff = 5) {
    double matched = 0.0, separation = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const auto s = build_space(kind, d, cutoff);
        const Matrix h = rng.hermitian_spectrum(d, 0.3, 1.5);
        const double beta = 1.0;
        matched = std::max(matched, kms_scan(s, expm_hermitian(h, -beta), h, beta, rng).defect);
        const double bad = kms_scan(s, expm_hermitian(h, -2.0 * beta), h, beta, rng).defect;
        separation = std::max(separation, 1e-4 / bad);
    }
    rep.check("kms.gibbs_defect", matched, 1e-8);
    rep.check("kms.mismatch_separation", separation, 1.0);
}

// ---- 9: fermionic lattice duality ----

inline void lattice_duality(Report& rep, Rng& rng, int count = 10) {
    double defect = 0.0, dims = 0.0;
    for (int k = 0; k < count; ++k) {
        const int dim_v = 1 + k % 3;
        const auto v = make_subspace(2, rng.rmatrix(4, dim_v));
        const auto r = fermionic_duality_check(v);
        defect = std::max(defect, r.duality.defect);
        dims = std::max(dims, static_cast<double>(std::abs(r.duality.dim_a - r.duality.dim_b)));
    }
    rep.size("hilbert_dim", 16.0);
    rep.check("lattice.duality_containment", defect, 1e-8);
    rep.check("lattice.duality_dimension_gap", dims, 0.0);
}

// ---- 10: confined Pauli-Fierz ----

// Monotonicity is recorded as the largest ratio of consecutive deviations, which must stay below 1.
inline void pauli_fierz(Report& rep, Rng&) {
    const auto model = spin_boson(0.1, 1.0, 0.1);
    ConfinedPFOptions opt;
    std::vector<double> semi, standard;
    for (int cut : {8, 10, 12, 14}) {
        opt.cutoff = cut;
        const auto r = confined_pf_check(model, opt);
        semi.push_back(r.semi.deviation);
        standard.push_back(r.standard.deviation);
        const std::string tag = "cutoff" + std::to_string(cut);
        rep.tail("semi." + tag, r.semi.tail);
        rep.tail("standard." + tag, r.standard.tail);
        rep.size("reference_cutoff", r.reference_cutoff);
        if (cut == 14) {
            rep.check("pauli_fierz.semi_spectrum", r.semi.deviation, 1e-5);
            rep.check("pauli_fierz.standard_spectrum", r.standard.deviation, 1e-5);
        }
    }
    const auto ratio = [](const std::vector<double>& v) {
        double worst = 0.0;
        for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] / v[k - 1]);
        return worst;
    };
    rep.check("pauli_fierz.semi_monotone_ratio", ratio(semi), 1.0);
    rep.check("pauli_fierz.standard_monotone_ratio", ratio(standard), 1.0);
}

}  // namespace battery

inline std::vector<BatteryEntry> battery_entries() {
    using namespace battery;
    using S = Statistics;
    std::vector<BatteryEntry> out;
    for (int d = 1; d <= 6; ++d)
        out.push_back({"c01.car.d" + std::to_string(d), 1, true,
                       [d](Report& r, Rng& g) { car_exactness(r, g, d); }});
    for (int d = 1; d <= 3; ++d)
        out.push_back({"c02.ccr.d" + std::to_string(d), 2, true,
                       [d](Report& r, Rng& g) { ccr_truncation(r, g, d); }});
    out.push_back({"c03.trace.fermi", 3, true, fermi_traces});
    out.push_back({"c03.trace.bose", 3, true, [](Report& r, Rng& g) { bose_traces(r, g); }});
    out.push_back({"c04.pin.intertwining", 4, true, [](Report& r, Rng& g) { pin_intertwining(r, g); }});
    out.push_back({"c04.pin.composition", 4, false, [](Report& r, Rng& g) { pin_composition(r, g); }});
    out.push_back({"c04.metaplectic.squeeze", 4, false, [](Report& r, Rng& g) { squeeze_intertwining(r, g); }});
    out.push_back({"c04.metaplectic.composition", 4, false, [](Report& r, Rng& g) { metaplectic_composition(r, g); }});
    out.push_back({"c05.gaussian.bose", 5, false, [](Report& r, Rng& g) { gaussian_kernels(r, g, S::Bose); }});
    out.push_back({"c05.gaussian.fermi", 5, true, [](Report& r, Rng& g) { gaussian_kernels(r, g, S::Fermi); }});
    out.push_back({"c06.two_point.bose", 6, false, [](Report& r, Rng& g) { two_point(r, g, S::Bose); }});
    out.push_back({"c06.two_point.fermi", 6, true, [](Report& r, Rng& g) { two_point(r, g, S::Fermi); }});
    out.push_back({"c07.modular.polar", 7, false, modular_oracle});
    out.push_back({"c07.modular.conjugation", 7, true, modular_fields});
    out.push_back({"c07.modular.liouvillean", 7, false, [](Report& r, Rng& g) { modular_liouvillean(r, g); }});
    out.push_back({"c08.kms.fermi", 8, true, [](Report& r, Rng& g) { kms(r, g, S::Fermi); }});
    out.push_back({"c08.kms.bose", 8, false, [](Report& r, Rng& g) { kms(r, g, S::Bose); }});
    out.push_back({"c09.lattice.duality", 9, false, [](Report& r, Rng& g) { lattice_duality(r, g); }});
    out.push_back({"c10.pauli_fierz.confined", 10, false, pauli_fierz});
    return out;
}

inline std::vector<BatteryEntry> suite_entries(const std::string& name) {
    auto all = battery_entries();
    if (name == "full") return all;
    if (name == "smoke") {
        std::vector<BatteryEntry> out;
        for (auto& e : all)
            if (e.smoke) out.push_back(std::move(e));
        return out;
    }
    throw UnknownSuite("unknown suite '" + name + "' (expected smoke or full)");
}

inline Report run_entry(const BatteryEntry& e, std::uint64_t seed) {
    Report rep;
    rep.task = e.name;
    rep.seed = seed;
    rep.timing.emplace_back("criterion_budget_seconds", criterion_budget(e.criterion));
    Rng rng(seed, e.name);
    e.body(rep, rng);
    return rep;
}

// FOCKFORGE_THREADS caps the worker count; unset or invalid means hardware concurrency.
inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FOCKFORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs entries concurrently; results come back in entry order. The first exception
// (in entry order) is rethrown after all workers finish.
inline std::vector<Report> run_entries(const std::vector<BatteryEntry>& entries, std::uint64_t seed,
                                       const std::function<void(const BatteryEntry&, double)>& on_done = {}) {
    std::vector<Report> out(entries.size());
    std::vector<std::exception_ptr> errors(entries.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress;
    const auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < entries.size();) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                out[k] = run_entry(entries[k], seed);
            } catch (...) {
                errors[k] = std::current_exception();
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (on_done) {
                std::lock_guard<std::mutex> lock(progress);
                on_done(entries[k], secs);
            }
        }
    };
    const unsigned n = worker_count(entries.size());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace fockforge
