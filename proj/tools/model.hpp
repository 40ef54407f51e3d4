// model.hpp: model-file parsing and the per-task runners behind `fockforge run`

#pragma once

#include <fockforge/battery.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>

namespace fockforge::cli {

using json = nlohmann::json;

struct SchemaError : Error { using Error::Error; };

inline constexpr int schema_version = 1;

// --------------------------- Field access -----------------------------------

class Fields {
public:
    Fields(const json& obj, std::set<std::string> allowed) : obj_(obj) {
        allowed.insert({"schema_version", "task", "description", "tolerances"});
        for (const auto& [key, _] : obj.items())
            if (!allowed.count(key)) throw SchemaError("unknown field '" + key + "' for task " + task());
    }

    std::string task() const { return obj_.value("task", std::string("?")); }
    bool has(const char* key) const { return obj_.contains(key); }
    const json& raw(const char* key) const {
        if (!has(key)) throw SchemaError(std::string("missing field '") + key + "'");
        return obj_.at(key);
    }

    int integer(const char* key, int lo, int hi, std::optional<int> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            raw(key);
        }
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi)
            throw SchemaError(std::string("field '") + key + "' must lie in " + std::to_string(lo) + ".." +
                              std::to_string(hi));
        return static_cast<int>(x);
    }

    double number(const char* key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            raw(key);
        }
        const json& v = obj_.at(key);
        if (!v.is_number()) throw SchemaError(std::string("field '") + key + "' must be a number");
        return v.get<double>();
    }

    Statistics statistics() const {
        const json& v = raw("statistics");
        if (v == "bose") return Statistics::Bose;
        if (v == "fermi") return Statistics::Fermi;
        throw SchemaError("field 'statistics' must be \"bose\" or \"fermi\"");
    }

    std::string text(const char* key) const {
        const json& v = raw(key);
        if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
        return v.get<std::string>();
    }

    // Rows of [re, im] pairs.
    Matrix matrix(const char* key, std::optional<Eigen::Index> rows = std::nullopt,
                  std::optional<Eigen::Index> cols = std::nullopt) const {
        const json& v = raw(key);
        const std::string where = std::string("field '") + key + "'";
        if (!v.is_array() || v.empty()) throw SchemaError(where + " must be a non-empty array of rows");
        const std::size_t r = v.size();
        if (!v[0].is_array() || v[0].empty()) throw SchemaError(where + " must be a non-empty array of rows");
        const std::size_t c = v[0].size();
        Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (std::size_t i = 0; i < r; ++i) {
            if (!v[i].is_array() || v[i].size() != c) throw SchemaError(where + " has rows of unequal length");
            for (std::size_t j = 0; j < c; ++j) {
                const json& e = v[i][j];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw SchemaError(where + " entries must be [re, im] pairs");
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {e[0].get<double>(), e[1].get<double>()};
            }
        }
        if ((rows && m.rows() != *rows) || (cols && m.cols() != *cols))
            throw SchemaError(where + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                              ", expected " + (rows ? std::to_string(*rows) : std::string("*")) + "x" +
                              (cols ? std::to_string(*cols) : std::string("*")));
        return m;
    }

private:
    const json& obj_;
};

// The Bose cutoff is required; fermionic models must not carry one.
inline int cutoff_for(const Fields& f, Statistics kind, int hi) {
    if (kind == Statistics::Fermi) {
        if (f.has("cutoff")) throw SchemaError("field 'cutoff' applies to bosonic models only");
        return 0;
    }
    return f.integer("cutoff", 1, hi);
}

// --------------------------- Task runners -----------------------------------

inline void run_verify_car(const Fields& f, Report& rep, Rng& rng) {
    battery::car_exactness(rep, rng, f.integer("modes", 1, 8), f.integer("pairs", 1, 10000, 100));
}

inline void run_verify_ccr(const Fields& f, Report& rep, Rng& rng) {
    const int d = f.integer("modes", 1, 4);
    battery::ccr_truncation(rep, rng, d, f.integer("cutoff", 1, d <= 2 ? 40 : 12), f.integer("pairs", 1, 1000, 4));
}

inline void run_bogolubov(const Fields& f, Report& rep, Rng& rng) {
    const Statistics kind = f.statistics();
    const int d = f.integer("modes", 1, kind == Statistics::Fermi ? 8 : 3);
    const FockSpace s = build_space(kind, d, cutoff_for(f, kind, 40));
    const BogolubovBlocks b{f.matrix("p", d, d), f.matrix("q", d, d), kind_for(kind)};
    const auto diag = validate_blocks(b);
    rep.check("bogolubov.block_relations", diag.max_residual(), 1e-10);
    if (kind == Statistics::Bose) rep.check("bogolubov.pp_lower_bound", std::max(0.0, -diag.pp_excess), 1e-10);
    if (!diag.ok(1e-8)) return;  // implementers need a genuine Bogolubov map

    const int labels = f.integer("labels", 1, 1000, 5);
    Matrix U;
    if (kind == Statistics::Fermi) {
        U = is_degenerate(b) ? implementer_with_reflections(s, b).U : shale_implementer(s, b);
        rep.check("bogolubov.unitarity", max_abs(Matrix(U.adjoint() * U - identity(s.dim()))), 1e-10);
    } else {
        U = shale_implementer(s, b);
        rep.tail("expected_excitation", expected_excitation(b));
    }
    double worst = 0.0;
    for (int k = 0; k < labels; ++k)
        worst = std::max(worst, intertwining_residual(s, b, U, battery::random_label(rng, d)));
    rep.check("bogolubov.intertwining", worst, kind == Statistics::Fermi ? 1e-10 : 1e-7);
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
}

inline void run_gaussian(const Fields& f, Report& rep, Rng& rng) {
    const Statistics kind = f.statistics();
    const int d = f.integer("modes", 1, kind == Statistics::Fermi ? 8 : 3);
    const FockSpace s = build_space(kind, d, cutoff_for(f, kind, 40));
    const Matrix c = f.matrix("kernel", d, d);
    const Vector g = gaussian_vector(s, c);
    double worst = 0.0;
    for (int k = 0, n = f.integer("labels", 1, 1000, 5); k < n; ++k)
        worst = std::max(worst, gaussian_kernel_residual(s, c, rng.vector(d)));
    rep.check("gaussian.kernel", worst, kind == Statistics::Fermi ? 1e-12 : 1e-8);
    if (kind == Statistics::Fermi) rep.check("gaussian.normalization", std::abs(g.norm() - 1.0), 1e-12);
    else rep.tail("norm_deficit", 1.0 - g.squaredNorm());
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
}

inline void run_thermal(const Fields& f, Report& rep, Rng& rng) {
    const Statistics kind = f.statistics();
    const bool bose = kind == Statistics::Bose;
    const int d = f.integer("modes", 1, bose ? 2 : 3);
    const int cutoff = cutoff_for(f, kind, 6);
    const Matrix h = f.matrix("h", d, d);
    const double beta = f.number("beta");
    const auto r = make_doubled_rep(gibbs_params(kind, h, beta), cutoff);
    const Vector v = vacuum(r.doubled);
    double two_point = 0.0, conj = 0.0;
    const auto m = modular_data(r);
    for (int k = 0, n = f.integer("labels", 1, 100, 3); k < n; ++k) {
        const Vector z1 = rng.vector(d), z2 = rng.vector(d);
        const Vector c1 = thermal_create(r, z1, Side::Left) * v, c2 = thermal_create(r, z2, Side::Left) * v;
        const Vector n1 = thermal_annihilate(r, z1, Side::Left) * v, n2 = thermal_annihilate(r, z2, Side::Left) * v;
        two_point = std::max({two_point, std::abs(c1.dot(c2) - closed_two_point_aa_star(r, z1, z2)),
                              std::abs(n1.dot(n2) - closed_two_point_a_star_a(r, z1, z2))});
        conj = std::max(conj, operator_residual(r.doubled, Matrix(m.J.conjugate(thermal_field(r, z1, Side::Left)) -
                                                                  thermal_field(r, z1, Side::Right))));
    }
    rep.check("thermal.two_point", two_point, bose ? 1e-6 : 1e-10);
    rep.check("thermal.j_left_to_right", conj, bose ? 1e-8 : 1e-10);
    const Matrix L = standard_liouvillean(r, h);
    rep.check("thermal.delta_exp_liouvillean",
              max_abs(Matrix(m.Delta - expm_hermitian(L, -beta))) / max_abs(m.Delta), 1e-9);
    rep.check("thermal.delta_fixes_vacuum", (m.Delta * v - v).norm(), 1e-12);
    rep.size("hilbert_dim", static_cast<double>(r.doubled.dim()));
}

inline void run_kms(const Fields& f, Report& rep, Rng& rng) {
    const Statistics kind = f.statistics();
    const int d = f.integer("modes", 1, 3);
    const FockSpace s = build_space(kind, d, cutoff_for(f, kind, 8));
    const Matrix h = f.matrix("h", d, d);
    if (max_abs(Matrix(h - h.adjoint())) > tol_algebraic) throw SymmetryViolation("kms: h is not Hermitian");
    const double beta = f.number("beta");
    const Matrix g = f.has("gamma") ? f.matrix("gamma", d, d) : expm_hermitian(h, -beta);
    const auto res = kms_scan(s, g, h, beta, rng, f.integer("trials", 1, 1000, 8));
    rep.check("kms.defect", res.defect, 1e-8);
    rep.size("hilbert_dim", static_cast<double>(s.dim()));
}

inline void run_lattice(const Fields& f, Report& rep, Rng&) {
    const int d = f.integer("modes", 1, 3);
    const auto v = real_span(f.matrix("spanning", d));
    const auto r = fermionic_duality_check(v);
    rep.check("lattice.duality_containment", r.duality.defect, 1e-8);
    rep.check("lattice.duality_dimension_gap", std::abs(r.duality.dim_a - r.duality.dim_b), 0.0);
    rep.size("hilbert_dim", r.hilbert_dim);
    rep.size("algebra_dim", r.algebra_dim);
    rep.size("center_dim", r.center_dim);
}

inline void run_pauli_fierz(const Fields& f, Report& rep, Rng&) {
    const Matrix system = f.matrix("system");
    const Matrix h = f.matrix("h");
    const Eigen::Index dk = system.rows(), d = h.rows();
    const auto model = make_pf_model(system, h, f.matrix("coupling", dk * d, dk),
                                     f.has("gamma") ? std::optional<Matrix>(f.matrix("gamma", d, d)) : std::nullopt);
    require_gamma(model, "pauli-fierz task");
    ConfinedPFOptions opt;
    opt.cutoff = f.integer("cutoff", 2, pf_max_cutoff, 14);
    const auto st = standard_structure(model, opt.cutoff);
    rep.check("pauli_fierz.hermiticity", st.hermiticity, 1e-10);
    rep.check("pauli_fierz.standard_commutator", st.commutator, 1e-10);
    rep.check("pauli_fierz.right_closed_form", st.right_closed_form, 1e-10);
    const auto r = confined_pf_check(model, opt);
    rep.check("pauli_fierz.semi_spectrum", r.semi.deviation, 1e-5);
    rep.check("pauli_fierz.standard_spectrum", r.standard.deviation, 1e-5);
    rep.tail("semi", r.semi.tail);
    rep.tail("standard", r.standard.tail);
    const auto norms = hypothesis_norms(model);
    rep.size("reference_cutoff", r.reference_cutoff);
    rep.size("inverse_energy_norm", norms.inverse_energy);
    rep.size("density_norm", norms.density);
    rep.size("energy_density_norm", norms.energy_density);
}

// Every battery check of the named suite, gathered into one report.
inline void run_suite_task(const Fields& f, Report& rep, std::uint64_t seed) {
    std::vector<BatteryEntry> entries;
    try {
        entries = suite_entries(f.text("suite"));
    } catch (const UnknownSuite& e) {
        throw SchemaError(e.what());
    }
    for (const auto& sub : run_entries(entries, seed)) {
        for (auto c : sub.checks) {
            c.name = sub.task + "/" + c.name;
            rep.checks.push_back(std::move(c));
        }
        for (const auto& [k, v] : sub.tails) rep.tail(sub.task + "/" + k, v);
    }
}

// --------------------------- Dispatch ---------------------------------------

inline void apply_tolerances(const json& model, Report& rep) {
    if (!model.contains("tolerances")) return;
    const json& t = model.at("tolerances");
    if (!t.is_object()) throw SchemaError("field 'tolerances' must map check names to numbers");
    for (const auto& [name, value] : t.items()) {
        if (!value.is_number() || value.get<double>() < 0.0)
            throw SchemaError("tolerance for '" + name + "' must be a non-negative number");
        bool found = false;
        for (auto& c : rep.checks)
            if (c.name == name) {
                c.tolerance = value.get<double>();
                c.pass = std::isfinite(c.residual) && c.residual <= c.tolerance;
                found = true;
            }
        if (!found) throw SchemaError("tolerance given for unknown check '" + name + "'");
    }
}

inline Report run_model(const json& model, std::uint64_t seed) {
    if (!model.is_object()) throw SchemaError("model must be a JSON object");
    if (!model.contains("schema_version") || model.at("schema_version") != schema_version)
        throw SchemaError("field 'schema_version' must be " + std::to_string(schema_version));
    if (!model.contains("task") || !model.at("task").is_string()) throw SchemaError("missing field 'task'");
    const std::string task = model.at("task").get<std::string>();

    Report rep;
    rep.task = task;
    rep.seed = seed;
    Rng rng(seed, task);
    if (task == "verify-car") {
        run_verify_car(Fields(model, {"modes", "pairs"}), rep, rng);
    } else if (task == "verify-ccr") {
        run_verify_ccr(Fields(model, {"modes", "cutoff", "pairs"}), rep, rng);
    } else if (task == "bogolubov") {
        run_bogolubov(Fields(model, {"statistics", "modes", "cutoff", "p", "q", "labels"}), rep, rng);
    } else if (task == "gaussian") {
        run_gaussian(Fields(model, {"statistics", "modes", "cutoff", "kernel", "labels"}), rep, rng);
    } else if (task == "thermal") {
        run_thermal(Fields(model, {"statistics", "modes", "cutoff", "h", "beta", "labels"}), rep, rng);
    } else if (task == "kms") {
        run_kms(Fields(model, {"statistics", "modes", "cutoff", "h", "beta", "gamma", "trials"}), rep, rng);
    } else if (task == "lattice") {
        run_lattice(Fields(model, {"modes", "spanning"}), rep, rng);
    } else if (task == "pauli-fierz") {
        run_pauli_fierz(Fields(model, {"system", "h", "coupling", "gamma", "cutoff"}), rep, rng);
    } else if (task == "suite") {
        run_suite_task(Fields(model, {"suite"}), rep, seed);
    } else {
        throw SchemaError("unknown task '" + task + "'");
    }
    apply_tolerances(model, rep);
    return rep;
}

}  // namespace fockforge::cli
