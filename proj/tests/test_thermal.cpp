#include <catch_amalgamated.hpp>

#include <fockforge/thermal.hpp>

#include <unsupported/Eigen/MatrixFunctions>

using namespace fockforge;

namespace {

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

DoubledRep thermal_rep(Statistics kind, const Matrix& h, double beta, int cutoff = 0) {
    return make_doubled_rep(gibbs_params(kind, h, beta), cutoff);
}

}  // namespace

TEST_CASE("thermal parameters", "[thermal]") {
    const auto b = make_thermal_params(Statistics::Bose, scalar(0.5));
    CHECK(std::abs(b.density(0, 0) - 1.0) < 1e-15);
    const auto f = make_thermal_params(Statistics::Fermi, scalar(1.0));
    CHECK(std::abs(f.density(0, 0) - 0.5) < 1e-15);
    CHECK_THROWS_AS(make_thermal_params(Statistics::Bose, scalar(1.0)), SpectralViolation);
    CHECK_THROWS_AS(make_thermal_params(Statistics::Fermi, scalar(-0.1)), SpectralViolation);
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = h(1, 0) = 1.0;
    CHECK_THROWS_AS(make_thermal_params(Statistics::Fermi, Matrix(Vector::LinSpaced(2, 0.2, 0.6).asDiagonal()), h),
                    CommutationViolation);
}

TEST_CASE("thermal fields at zero density", "[thermal]") {
    for (auto kind : {Statistics::Bose, Statistics::Fermi}) {
        const auto r = make_doubled_rep(make_thermal_params(kind, Matrix::Zero(2, 2)), 3);
        const Vector z = Vector::LinSpaced(2, 0.3, -0.7) + I_unit * Vector::LinSpaced(2, 0.1, 0.4);
        CHECK(max_abs(Matrix(thermal_field(r, z, Side::Left) - field_of(r.doubled, doubled_label(z, Vector::Zero(2))))) ==
              0.0);
    }
    const auto b = make_doubled_rep(make_thermal_params(Statistics::Bose, Matrix::Zero(1, 1)), 2);
    CHECK_THROWS_AS(awy_left_field(b, Vector::Ones(1)), KindMismatch);
}

TEST_CASE("Araki-Woods two-point functions", "[thermal]") {
    // rho = 1, unit z: (Omega|a a* Omega) = 2 and (Omega|a* a Omega) = 1
    const auto r = make_doubled_rep(make_thermal_params(Statistics::Bose, scalar(0.5)), 4);
    const Vector e = Vector::Ones(1);
    const Vector vac = vacuum(r.doubled);
    const Matrix cr = thermal_create(r, e, Side::Left);
    CHECK(std::abs(vac.dot(cr.adjoint() * cr * vac) - 2.0) < 1e-14);
    CHECK(std::abs(vac.dot(cr * cr.adjoint() * vac) - 1.0) < 1e-14);

    Rng rng(41);
    for (double beta : {0.5, 1.0, 2.0}) {
        const Matrix h = rng.hermitian_spectrum(2, 0.5, 2.0);
        const auto rep = thermal_rep(Statistics::Bose, h, beta, 6);
        const Vector z1 = rng.vector(2), z2 = rng.vector(2);
        const Vector v = vacuum(rep.doubled);
        const Matrix a1 = thermal_create(rep, z1, Side::Left), a2 = thermal_create(rep, z2, Side::Left);
        CHECK(std::abs(v.dot(a1.adjoint() * (a2 * v)) - closed_two_point_aa_star(rep, z1, z2)) <= 1e-12);
        CHECK(std::abs(v.dot(a1 * (a2.adjoint() * v)) - closed_two_point_a_star_a(rep, z1, z2)) <= 1e-12);
        CHECK(std::abs(v.dot(a1 * (a2 * v))) <= 1e-14);
        const Matrix f1 = aw_left_field(rep, z1), f2 = aw_left_field(rep, z2);
        CHECK(std::abs(v.dot(f1 * (f2 * v)) - closed_two_point_fields(rep, z1, z2)) <= 1e-12);

        // operator identities on a smaller truncation
        const auto small = thermal_rep(Statistics::Bose, h, beta, 3);
        const Matrix g1 = aw_left_field(small, z1), g2 = aw_left_field(small, z2);
        // left and right commute below the cutoff
        CHECK(operator_residual(small.doubled, commutator(g1, aw_right_field(small, z2))) <= 1e-10);
        // CCR: [phi_l(z1), phi_l(z2)] = i Im(z1|z2)
        CHECK(operator_residual(small.doubled, Matrix(commutator(g1, g2) - I_unit * z1.dot(z2).imag() *
                                                                               identity(small.doubled.dim()))) <= 1e-10);
    }
}

TEST_CASE("Araki-Woods generating functional", "[thermal]") {
    const Matrix rho = scalar(0.4);
    const auto r = make_doubled_rep(make_thermal_params(Statistics::Bose, Matrix(rho * (identity(1) + rho).inverse())), 12);
    const Vector z = Vector::Constant(1, cplx(0.6, -0.3));
    const Matrix W = expm_hermitian(aw_left_field(r, z), I_unit);
    const Vector v = vacuum(r.doubled);
    const double expect = std::exp(-0.25 * z.squaredNorm() - 0.5 * z.dot(rho * z).real());
    CHECK(std::abs(v.dot(W * v) - expect) <= 1e-6);
}

TEST_CASE("Araki-Wyss fields", "[thermal]") {
    // chi = 1/2, unit z: (Omega|a a* Omega) = 1/2
    const auto r = make_doubled_rep(make_thermal_params(Statistics::Fermi, scalar(1.0)));
    const Vector e = Vector::Ones(1);
    const Vector vac = vacuum(r.doubled);
    const Matrix cr = thermal_create(r, e, Side::Left);
    CHECK(std::abs(vac.dot(cr.adjoint() * cr * vac) - 0.5) < 1e-15);

    Rng rng(42);
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto rep = thermal_rep(Statistics::Fermi, rng.hermitian_spectrum(2, -1.0, 1.5), beta);
        const Vector z1 = rng.vector(2), z2 = rng.vector(2);
        const Vector v = vacuum(rep.doubled);
        const Matrix l1 = awy_left_field(rep, z1), l2 = awy_left_field(rep, z2);
        const Matrix r1 = awy_right_field(rep, z1), r2 = awy_right_field(rep, z2);
        const Matrix one = identity(rep.doubled.dim());
        CHECK(max_abs(Matrix(anticommutator(l1, l2) - 2.0 * z1.dot(z2).real() * one)) <= 1e-12);
        CHECK(max_abs(Matrix(anticommutator(r1, r2) - 2.0 * z1.dot(z2).real() * one)) <= 1e-12);
        CHECK(max_abs(commutator(l1, r2)) <= 1e-12);
        CHECK(std::abs(v.dot(l1 * l2 * v) - closed_two_point_fields(rep, z1, z2)) <= 1e-12);
        const Matrix a1 = thermal_create(rep, z1, Side::Left), a2 = thermal_create(rep, z2, Side::Left);
        CHECK(std::abs(v.dot(a1.adjoint() * a2 * v) - closed_two_point_aa_star(rep, z1, z2)) <= 1e-12);
        CHECK(std::abs(v.dot(a1 * a2.adjoint() * v) - closed_two_point_a_star_a(rep, z1, z2)) <= 1e-12);
        CHECK(max_abs(Matrix(a1 + a1.adjoint() - l1)) <= 1e-12);
    }
}

TEST_CASE("modular data", "[thermal]") {
    // tracial gamma = 1: Delta = 1
    const auto tr = make_doubled_rep(make_thermal_params(Statistics::Fermi, identity(2)));
    CHECK(max_abs(Matrix(modular_data(tr).Delta - identity(tr.doubled.dim()))) <= 1e-14);

    Rng rng(43);
    const Matrix h = rng.hermitian_spectrum(2, -1.0, 1.0);
    for (auto kind : {Statistics::Fermi, Statistics::Bose}) {
        const Matrix hk = kind == Statistics::Bose ? Matrix(h + 1.5 * identity(2)) : h;
        const auto r = thermal_rep(kind, hk, 1.0, 3);
        const auto m = modular_data(r);
        const Matrix L = standard_liouvillean(r, hk);
        CHECK(max_abs(Matrix(m.Delta - expm_hermitian(L, -1.0))) <= 1e-9);
        const Vector vac = vacuum(r.doubled);
        CHECK((m.J.apply(vac) - vac).norm() <= 1e-14);
        CHECK((m.Delta * vac - vac).norm() <= 1e-14);
        CHECK(max_abs(Matrix(m.J.square() - identity(r.doubled.dim()))) <= 1e-14);
        const Matrix dinv = hermitian_apply(m.Delta, [](double x) { return 1.0 / x; });
        CHECK(max_abs(Matrix(m.J.conjugate(m.Delta) - dinv)) <= 1e-9 * max_abs(dinv));
        CHECK(modular_relation_defect(r, m, 2) <= 1e-10);
        const Vector z = rng.vector(2);
        CHECK(operator_residual(r.doubled, Matrix(m.J.conjugate(thermal_field(r, z, Side::Left)) -
                                                  thermal_field(r, z, Side::Right))) <= 1e-10);
        CHECK(operator_residual(r.doubled, Matrix(m.J.conjugate(thermal_create(r, z, Side::Left)) -
                                                  thermal_create(r, z, Side::Right))) <= 1e-10);
    }

    // polar decomposition of S
    for (int d = 1; d <= 2; ++d) {
        const auto r = thermal_rep(Statistics::Fermi, rng.hermitian_spectrum(d, -1.0, 1.0), 1.3);
        const auto m = modular_data(r);
        const auto s = modular_from_s(r);
        CHECK(max_abs(Matrix(m.Delta - s.Delta)) <= 1e-7);
        CHECK(max_abs(Matrix(m.J.unitary - s.J.unitary)) <= 1e-7);
    }

    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 0.3;
    CHECK_THROWS_AS(modular_data(make_doubled_rep(make_thermal_params(Statistics::Fermi, singular))), KernelViolation);
}

TEST_CASE("standard Liouvillean", "[thermal]") {
    const auto r0 = make_doubled_rep(make_thermal_params(Statistics::Fermi, scalar(0.3)));
    CHECK(max_abs(standard_liouvillean(r0, Matrix::Zero(1, 1))) == 0.0);

    Rng rng(44);
    const Matrix h = rng.hermitian_spectrum(2, 0.2, 1.4);
    for (auto kind : {Statistics::Fermi, Statistics::Bose}) {
        const auto r = thermal_rep(kind, h, 0.7, 4);
        const Matrix L = standard_liouvillean(r, h);
        CHECK((L * vacuum(r.doubled)).norm() == 0.0);
        const double t = 0.37;
        const Vector z = rng.vector(2);
        const Matrix U = expm_hermitian(L, I_unit * t);
        const Matrix lhs = U * thermal_field(r, z, Side::Left) * U.adjoint();
        const Matrix rhs = thermal_field(r, Matrix(expm_hermitian(h, I_unit * t)) * z, Side::Left);
        CHECK(operator_residual(r.doubled, Matrix(lhs - rhs)) <= 1e-8);
    }

    // d = 1: spectrum n1 w - n2 w, symmetric about zero
    const auto r1 = make_doubled_rep(make_thermal_params(Statistics::Bose, scalar(0.2), scalar(0.8)), 3);
    const RVector ev = hermitian_eigenvalues(standard_liouvillean(r1, scalar(0.8)));
    CHECK((ev + ev.reverse()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK_THROWS_AS(standard_liouvillean(make_doubled_rep(make_thermal_params(Statistics::Fermi, Matrix(Vector::LinSpaced(2, 0.2, 0.6).asDiagonal()))),
                                         Matrix::Ones(2, 2)),
                    CommutationViolation);
}

TEST_CASE("standard form of the confined algebra", "[thermal]") {
    Rng rng(45);
    for (auto kind : {Statistics::Fermi, Statistics::Bose}) {
        const auto r = thermal_rep(kind, rng.hermitian_spectrum(2, 0.4, 1.2), 1.0, 2);
        const Eigen::Index D = r.single.dim();
        const Matrix A = rng.matrix(D, D), B = rng.matrix(D, D);
        const auto J = modular_conjugation(r);
        CHECK((J.apply(hs_vector(r, A)) - hs_vector(r, A.adjoint())).norm() <= 1e-12);
        CHECK((theta_left(r, A) * hs_vector(r, B) - hs_vector(r, A * B)).norm() <= 1e-12);
        CHECK((theta_right(r, A) * hs_vector(r, B) - hs_vector(r, B * A.adjoint())).norm() <= 1e-12);
        CHECK(max_abs(Matrix(J.conjugate(theta_left(r, A)) - theta_right(r, A))) <= 1e-12);

        // Omega_gamma represents Gamma(gamma)^{1/2} / Tr^{1/2}
        const auto g = confined_gibbs(r.single, r.params.gamma);
        const Matrix root = gamma(r.single, sqrt_psd(r.params.gamma)) / std::sqrt(g.closed_form);
        CHECK((omega_gamma(r) - hs_vector(r, root)).norm() <= 1e-12);
    }
}

TEST_CASE("confined Gibbs traces", "[thermal]") {
    const auto g = confined_gibbs(build_space(Statistics::Bose, 1, 10), scalar(0.5));
    CHECK(std::abs(g.closed_form - 2.0) < 1e-15);
    CHECK(std::abs(g.trace - (2.0 - std::pow(2.0, -10))) < 1e-14);
    CHECK(std::abs(confined_gibbs(build_space(Statistics::Fermi, 1), scalar(0.5)).trace - 1.5) < 1e-15);
    for (auto kind : {Statistics::Bose, Statistics::Fermi}) {
        const auto z = confined_gibbs(build_space(kind, 2, 4), Matrix::Zero(2, 2));
        CHECK(z.trace == 1.0);
        CHECK(z.density(0, 0) == cplx(1.0));
    }
    Rng rng(46);
    for (int d = 1; d <= 4; ++d) {
        const auto f = confined_gibbs(build_space(Statistics::Fermi, d), rng.hermitian_spectrum(d, 0.0, 3.0));
        CHECK(std::abs(f.trace - f.closed_form) <= 1e-12 * f.closed_form);
    }
    const auto b = confined_gibbs(build_space(Statistics::Bose, 2, 20), rng.hermitian_spectrum(2, 0.0, 0.8));
    CHECK(b.tail >= 0.0);
    CHECK_THROWS_AS(confined_gibbs(build_space(Statistics::Bose, 1, 4), scalar(1.0)), SpectralViolation);
}

TEST_CASE("KMS condition", "[thermal]") {
    const auto s = build_space(Statistics::Fermi, 1);
    const Matrix h = scalar(1.0);
    const Matrix one = identity(s.dim());
    CHECK(kms_check(s, expm_hermitian(h, -1.0), h, 1.0, one, one, 0.3) <= 1e-15);

    Rng rng(47);
    for (auto kind : {Statistics::Fermi, Statistics::Bose}) {
        for (int d = 1; d <= 2; ++d) {
            const auto sp = build_space(kind, d, 5);
            const Matrix hd = rng.hermitian_spectrum(d, 0.3, 1.5);
            const double beta = 1.0;
            CHECK(kms_scan(sp, expm_hermitian(hd, -beta), hd, beta, rng).defect <= 1e-8);
            const auto bad = kms_scan(sp, expm_hermitian(hd, -2.0 * beta), hd, beta, rng);
            CHECK(bad.defect > 1e-4);
            CHECK(kms_check(sp, expm_hermitian(hd, -2.0 * beta), hd, beta, bad.witness_a, bad.witness_b, bad.witness_t) ==
                  bad.defect);
        }
    }
}

TEST_CASE("confined vector and intertwiner", "[thermal]") {
    for (auto kind : {Statistics::Bose, Statistics::Fermi}) {
        const auto r = make_doubled_rep(make_thermal_params(kind, Matrix::Zero(2, 2)), 2);
        CHECK((omega_gamma(r) - vacuum(r.doubled)).norm() == 0.0);
        CHECK(max_abs(Matrix(r_gamma(r) - identity(r.doubled.dim()))) <= 1e-15);
        CHECK(confined_equivalence_check(r, identity(2)).max() <= 1e-14);
    }

    // Fermi d = 1: Omega_gamma = (1+g)^{-1/2} (Omega + g^{1/2} a*_1 a*_2 Omega)
    const double g = 0.6;
    const auto f = make_doubled_rep(make_thermal_params(Statistics::Fermi, scalar(g)));
    Vector expect = vacuum(f.doubled);
    expect(f.doubled.index_of({1, 1})) = std::sqrt(g);
    expect /= std::sqrt(1.0 + g);
    CHECK((omega_gamma(f) - expect).norm() <= 1e-15);

    // Bose d = 1, gamma = 1/4: norm defect at doubled cutoff 24
    const auto b = make_doubled_rep(make_thermal_params(Statistics::Bose, scalar(0.25)), 12);
    CHECK(std::abs(omega_gamma(b).norm() - 1.0) <= 1e-6);

    Rng rng(48);
    const Matrix h2 = rng.hermitian_spectrum(2, 0.1, 1.0);
    const auto fr = thermal_rep(Statistics::Fermi, h2, 1.0);
    const auto rep = confined_equivalence_check(fr, h2);
    CHECK(rep.max() <= 1e-10);
    const Matrix R = r_gamma(fr);
    CHECK(max_abs(Matrix(R.adjoint() * R - identity(fr.doubled.dim()))) <= 1e-12);
    const auto J = modular_conjugation(fr);
    CHECK(max_abs(Matrix(J.conjugate(R) - R)) <= 1e-12);

    const auto br = make_doubled_rep(make_thermal_params(Statistics::Bose, scalar(0.25), scalar(1.0)), 10);
    CHECK(confined_equivalence_check(br, scalar(1.0)).max() <= 1e-6);
}

TEST_CASE("tracial representation", "[thermal]") {
    const auto s = build_space(Statistics::Fermi, 3);
    Rng rng(49);
    const RVector v1 = rng.rvector(3), v2 = rng.rvector(3);
    const Matrix l1 = tracial_field(s, v1, Side::Left), r2 = tracial_field(s, v2, Side::Right);
    CHECK(max_abs(commutator(l1, r2)) == 0.0);
    const Vector vac = vacuum(s);
    CHECK(std::abs(vac.dot(l1 * tracial_field(s, v2, Side::Left) * vac) - v1.dot(v2)) <= 1e-14);

    // trace property on monomials in the left fields of the basis vectors
    std::vector<Matrix> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(tracial_field(s, RVector::Unit(3, i), Side::Left));
    std::vector<Matrix> monos = {identity(s.dim())};
    for (const auto& g : gens) monos.push_back(g);
    for (const auto& g1 : gens)
        for (const auto& g2 : gens) monos.push_back(g1 * g2);
    double worst = 0.0;
    for (const auto& A : monos)
        for (const auto& B : monos) worst = std::max(worst, std::abs(vac.dot(A * B * vac) - vac.dot(B * A * vac)));
    CHECK(worst <= 1e-14);
    CHECK_THROWS_AS(tracial_field(build_space(Statistics::Bose, 1, 2), RVector::Ones(1), Side::Left), KindMismatch);
}
