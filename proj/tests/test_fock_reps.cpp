#include <catch_amalgamated.hpp>

#include <fockforge/fock_reps.hpp>
#include <fockforge/random.hpp>

using namespace fockforge;

namespace {

// Jordan-Wigner oracle for fermionic creation operators: qubit basis with |1> = occupied,
// permuted into the Fock basis.
Matrix jw_creation(const FockSpace& s, int i) {
    const int d = s.modes();
    Matrix plus = Matrix::Zero(2, 2);
    plus(1, 0) = 1.0;
    const Matrix q = site_operator(d, i, plus, true);
    Matrix perm = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
        Eigen::Index bits = 0;
        for (int j = 0; j < d; ++j) bits = 2 * bits + s.occupation(k)[static_cast<std::size_t>(j)];
        perm(k, bits) = 1.0;
    }
    return perm * q * perm.transpose();
}

Matrix random_kernel(Rng& rng, const FockSpace& s, double norm) {
    Matrix c = s.bose() ? rng.symmetric(s.modes()) : rng.antisymmetric(s.modes());
    return c * (norm / op_norm(c));
}

}  // namespace

TEST_CASE("creation and annihilation matrices", "[fock_reps]") {
    const auto b = build_space(Statistics::Bose, 1, 4);
    const Matrix ad = create(b, Vector::Ones(1));
    for (int n = 0; n < 4; ++n) CHECK(std::abs(ad(n + 1, n) - std::sqrt(n + 1.0)) < 1e-15);
    CHECK(std::abs(ad.squaredNorm() - (1 + 2 + 3 + 4)) < 1e-12);

    const auto f = build_space(Statistics::Fermi, 1);
    Matrix expect = Matrix::Zero(2, 2);
    expect(1, 0) = 1.0;
    CHECK(max_abs(Matrix(create(f, Vector::Ones(1)) - expect)) == 0.0);

    const auto f3 = build_space(Statistics::Fermi, 3);
    for (int i = 0; i < 3; ++i) CHECK(max_abs(Matrix(create_mode(f3, i) - jw_creation(f3, i))) == 0.0);

    Rng rng(1);
    for (auto stats : {Statistics::Bose, Statistics::Fermi}) {
        const auto s = build_space(stats, 3, 5);
        const Vector w = rng.vector(3);
        CHECK((annihilate(s, w) * vacuum(s)).norm() == 0.0);
        CHECK(max_abs(Matrix(annihilate(s, w) - create(s, w).adjoint())) == 0.0);
        const Vector v = rng.vector(s.dim());
        CHECK((apply_create(s, w, v) - create(s, w) * v).norm() < 1e-12);
        CHECK((apply_annihilate(s, w, v) - annihilate(s, w) * v).norm() < 1e-12);
    }
}

TEST_CASE("CAR hold exactly", "[fock_reps]") {
    Rng rng(2);
    for (int d = 1; d <= 6; ++d) {
        const auto s = build_space(Statistics::Fermi, d);
        for (int trial = 0; trial < 5; ++trial) {
            const Vector w1 = rng.vector(d), w2 = rng.vector(d);
            const Matrix a1 = annihilate(s, w1), c2 = create(s, w2), c1 = create(s, w1);
            CHECK(max_abs(Matrix(anticommutator(a1, c2) - w1.dot(w2) * identity(s.dim()))) <= 1e-13);
            CHECK(max_abs(anticommutator(c1, c2)) <= 1e-13);
            const DoubledVector y1 = DoubledVector::real(w1), y2 = DoubledVector::real(w2);
            const Matrix f1 = field(s, y1), f2 = field(s, y2);
            CHECK(max_abs(Matrix(anticommutator(f1, f2) - 2.0 * alpha_form(y1, y2) * identity(s.dim()))) <= 1e-12);
            CHECK(std::abs(alpha_form(y1, y2) - w1.dot(w2).real()) < 1e-13);
        }
    }
}

TEST_CASE("CCR on the sub-cutoff sectors", "[fock_reps]") {
    Rng rng(3);
    for (int d = 1; d <= 3; ++d)
        for (int cutoff : {4, 10}) {
            const auto s = build_space(Statistics::Bose, d, cutoff);
            const Vector w1 = rng.vector(d), w2 = rng.vector(d);
            const Matrix defect = commutator(annihilate(s, w1), create(s, w2)) - w1.dot(w2) * identity(s.dim());
            CHECK(sub_cutoff_norm(s, defect, cutoff - 1) <= 1e-12);
            CHECK(defect.norm() > 0.1);  // the top sector carries the truncation defect
            const Matrix cc = commutator(create(s, w1), create(s, w2));
            CHECK(max_abs(cc) <= 1e-12);

            const DoubledVector y1 = DoubledVector::real(w1), y2 = DoubledVector::real(w2);
            const Matrix heis = commutator(field(s, y1), field(s, y2)) - I_unit * omega_form(y1, y2) * identity(s.dim());
            CHECK(sub_cutoff_norm(s, heis, cutoff - 1) <= 1e-12);
            CHECK(std::abs(omega_form(y1, y2) - 2.0 * w1.dot(w2).imag()) < 1e-12);
        }
}

TEST_CASE("fields", "[fock_reps]") {
    Rng rng(4);
    const auto f = build_space(Statistics::Fermi, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const DoubledVector y{rng.vector(3), rng.vector(3)};
        CHECK(max_abs(Matrix(field(f, y) * field(f, y) - alpha_form(y, y) * identity(f.dim()))) <= 1e-12);
        const DoubledVector yr = DoubledVector::real(rng.vector(3));
        const Matrix phi = field(f, yr);
        CHECK(max_abs(Matrix(phi - phi.adjoint())) == 0.0);
        const RVector ev = hermitian_eigenvalues(phi);
        const double len = std::sqrt(alpha_form(yr, yr).real());
        for (Eigen::Index k = 0; k < ev.size(); ++k) CHECK(std::abs(std::abs(ev(k)) - len) <= 1e-12);
    }
    const RVector unit_ev = hermitian_eigenvalues(field(f, DoubledVector::real(Vector::Unit(3, 1))));
    CHECK(std::abs(unit_ev.minCoeff() + 1.0) < 1e-14);
    CHECK(std::abs(unit_ev.maxCoeff() - 1.0) < 1e-14);
    CHECK(max_abs(field(f, DoubledVector::zero(3))) == 0.0);

    const auto b = build_space(Statistics::Bose, 1, 6);
    const Vector w = rng.vector(1);
    const Matrix expect = (create(b, w) + annihilate(b, w)) / std::sqrt(2.0);
    CHECK(max_abs(Matrix(field_of(b, w) - expect)) <= 1e-15);
    CHECK(max_abs(Matrix(field(b, DoubledVector::real(w) * (1.0 / std::sqrt(2.0))) - expect)) <= 1e-15);

    // Lambda a*(z) Lambda = a*(z) I and Lambda a(z) Lambda = -a(z) I
    for (auto stats : {Statistics::Bose, Statistics::Fermi}) {
        const auto s = build_space(stats, 3, 5);
        const Vector z = rng.vector(3);
        const Matrix L = lambda_op(s), P = parity_op(s);
        CHECK(max_abs(Matrix(L * create(s, z) * L - create(s, z) * P)) == 0.0);
        CHECK(max_abs(Matrix(L * annihilate(s, z) * L + annihilate(s, z) * P)) == 0.0);
    }
}

TEST_CASE("twisted exponential law for fermions", "[fock_reps]") {
    const auto s1 = build_space(Statistics::Fermi, 2);
    const auto s2 = build_space(Statistics::Fermi, 1);
    const auto t = build_space(Statistics::Fermi, 3);
    const Matrix U = exp_law(s1, s2, t);
    Matrix twist = Matrix::Zero(U.cols(), U.cols());
    for (Eigen::Index k1 = 0; k1 < s1.dim(); ++k1)
        for (Eigen::Index k2 = 0; k2 < s2.dim(); ++k2)
            twist(k1 * s2.dim() + k2, k1 * s2.dim() + k2) = ((s1.number(k1) * s2.number(k2)) % 2) ? -1.0 : 1.0;
    const Matrix rhs = U * kron(lambda_op(s1), lambda_op(s2)) * twist;
    CHECK(max_abs(Matrix(lambda_op(t) * U - rhs)) == 0.0);
}

TEST_CASE("Weyl operators", "[fock_reps]") {
    const auto b = build_space(Statistics::Bose, 1, 12);
    CHECK(max_abs(Matrix(weyl(b, DoubledVector::zero(1)) - identity(b.dim()))) <= 1e-14);
    Rng rng(5);
    const DoubledVector y = DoubledVector::real(rng.unit_vector(1) * 0.1);
    const Matrix W = weyl(b, y);
    CHECK(max_abs(Matrix(W.adjoint() - weyl(b, y * -1.0))) <= 1e-14);
    CHECK(max_abs(Matrix(W.adjoint() * W - identity(b.dim()))) <= 1e-10);
    const DoubledVector y2 = DoubledVector::real(rng.unit_vector(1) * 0.1);
    const double defect = weyl_defect(b, y, y2);
    CHECK(defect <= 1e-8);
    CHECK_THROWS_AS(weyl(build_space(Statistics::Fermi, 1), y), StatisticsMismatch);
}

TEST_CASE("pair creation", "[fock_reps]") {
    const auto f = build_space(Statistics::Fermi, 2);
    CHECK(max_abs(multi_create(f, Matrix::Zero(2, 2))) == 0.0);
    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = 0.5;
    c(1, 0) = -0.5;
    const Vector two = apply_create(f, Vector::Unit(2, 0), apply_create(f, Vector::Unit(2, 1), vacuum(f)));
    CHECK((multi_create(f, c) * vacuum(f) - two).norm() < 1e-15);
    CHECK_THROWS_AS(multi_create(f, identity(2)), SymmetryViolation);

    Rng rng(6);
    for (auto stats : {Statistics::Bose, Statistics::Fermi}) {
        const auto s = build_space(stats, 3, 6);
        const Vector w1 = rng.vector(3), w2 = rng.vector(3);
        const double sgn = s.bose() ? 1.0 : -1.0;
        const Matrix cw = 0.5 * (w1 * w2.transpose() + sgn * w2 * w1.transpose());
        CHECK(max_abs(Matrix(multi_create(s, cw) - create(s, w1) * create(s, w2))) <= 1e-10);
        const Matrix A = multi_create(s, random_kernel(rng, s, 0.5));
        for (Eigen::Index k = 0; k < s.dim(); ++k)
            for (Eigen::Index m = 0; m < s.dim(); ++m)
                if (A(m, k) != cplx(0.0)) CHECK(s.number(m) == s.number(k) + 2);
    }

    // (a*(c))^n Omega for a single mode: c^n sqrt((2n)!) |2n>
    const auto b = build_space(Statistics::Bose, 1, 12);
    Matrix g(1, 1);
    g(0, 0) = 0.3;
    Vector v = vacuum(b);
    double fact = 1.0;
    for (int n = 1; n <= 6; ++n) {
        v = multi_create(b, g) * v;
        fact *= (2 * n - 1) * (2 * n);
        CHECK(std::abs(v(2 * n) - std::pow(0.3, n) * std::sqrt(fact)) <= 1e-12 * std::abs(v(2 * n)));
        CHECK(std::abs(v.norm() - std::abs(v(2 * n))) <= 1e-12 * v.norm());
    }
}

TEST_CASE("Gaussian vectors", "[fock_reps]") {
    for (auto stats : {Statistics::Bose, Statistics::Fermi}) {
        const auto s = build_space(stats, 2, 8);
        CHECK((gaussian_vector(s, Matrix::Zero(2, 2)) - vacuum(s)).norm() == 0.0);
    }
    const auto f = build_space(Statistics::Fermi, 2);
    const double t = 0.8;
    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = t;
    c(1, 0) = -t;
    CHECK(std::abs(gaussian_normalization(f, c) - 1.0 / std::sqrt(1.0 + t * t)) < 1e-15);
    const Vector g = gaussian_vector(f, c);
    CHECK(std::abs(g.norm() - 1.0) < 1e-14);
    CHECK(std::abs(g(0) - 1.0 / std::sqrt(1.0 + t * t)) < 1e-15);

    // series norm against the closed form for one bosonic mode
    const auto b = build_space(Statistics::Bose, 1, 20);
    Matrix cb(1, 1);
    cb(0, 0) = 0.5;
    double series = 0.0, tail_free = std::pow(1.0 - 0.25, -0.5);
    double term = 1.0;  // |coefficient of |2n>|^2 before normalization
    for (int n = 0; 2 * n <= 20; ++n) {
        if (n > 0) term *= 0.0625 * (2 * n - 1) * (2 * n) / (n * n);
        series += term;
    }
    const Vector gb = gaussian_vector(b, cb);
    CHECK(std::abs(gb.squaredNorm() - series / tail_free) < 1e-14);
    CHECK(std::abs(gb.norm() - 1.0) < 1e-2);
    CHECK(gb(0).real() > 0.0);
    CHECK(gaussian_kernel_residual(b, cb, Vector::Ones(1)) <= 1e-8);
    CHECK_THROWS_AS(gaussian_vector(b, Matrix::Identity(1, 1) * 1.2), NormViolation);

    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f4 = build_space(Statistics::Fermi, 4);
        const Matrix ca = random_kernel(rng, f4, 1.5);
        const Vector gf = gaussian_vector(f4, ca);
        CHECK(std::abs(gf.norm() - 1.0) <= 1e-12);
        CHECK(gaussian_kernel_residual(f4, ca, rng.vector(4)) <= 1e-12);
        // wrong sign is far from zero
        const Vector z = rng.vector(4);
        const Vector wrong = apply_annihilate(f4, z, gf) - apply_create(f4, ca * z.conjugate(), gf);
        CHECK(wrong.norm() > 1e-3);

        const auto b2 = build_space(Statistics::Bose, 2, 20);
        const Matrix cs = random_kernel(rng, b2, 0.5);
        CHECK(gaussian_kernel_residual(b2, cs, rng.vector(2)) <= 1e-8);
    }
}

TEST_CASE("squeezers", "[fock_reps]") {
    const auto f = build_space(Statistics::Fermi, 3);
    CHECK(max_abs(Matrix(squeezer(f, Matrix::Zero(3, 3)) - identity(f.dim()))) <= 1e-15);
    const auto b = build_space(Statistics::Bose, 1, 20);
    CHECK(max_abs(Matrix(squeezer(b, Matrix::Zero(1, 1)) - identity(b.dim()))) <= 1e-15);

    Rng rng(9);
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix c = random_kernel(rng, f, 0.9);
        const Matrix R = squeezer(f, c);
        CHECK(max_abs(Matrix(R.adjoint() * R - identity(f.dim()))) <= 1e-12);
        CHECK((R.adjoint() * gaussian_vector(f, c) - vacuum(f)).norm() <= 1e-12);
        // R a*(z) R* = a*(pz) + a(q conj z) with p = (1+cc*)^{-1/2}, q = p c
        const Matrix p = inv_sqrt_pd(identity(3) + c * c.adjoint());
        const Matrix q = p * c;
        const Vector z = rng.vector(3);
        const Matrix lhs = R * create(f, z) * R.adjoint();
        CHECK(max_abs(Matrix(lhs - create(f, p * z) - annihilate(f, q * z.conjugate()))) <= 1e-12);
    }

    Matrix c(1, 1);
    c(0, 0) = 0.3;
    const Matrix R = squeezer(b, c);
    // R_c Omega_c = Omega up to the part of Omega_c cut off above N = 20; the tail norm is
    // the exact bound. Four more sectors push the defect below 1e-7.
    const double tail = std::sqrt(1.0 - gaussian_vector(b, c).squaredNorm());
    CHECK((R * gaussian_vector(b, c) - vacuum(b)).norm() <= tail + 1e-12);
    CHECK(tail < 8e-7);
    const auto b24 = build_space(Statistics::Bose, 1, 24);
    CHECK((squeezer(b24, c) * gaussian_vector(b24, c) - vacuum(b24)).norm() <= 1e-7);
    // the adjoint maps Omega to the truncation of Omega_c exactly
    CHECK((R.adjoint() * vacuum(b) - gaussian_vector(b, c)).norm() <= 1e-14);
    // intertwining R a*(z) = (a*(pz) + a(q conj z)) R, exact below the cutoff
    const Matrix p = inv_sqrt_pd(identity(1) - c * c.adjoint());
    const Matrix q = p * c;
    const Vector z = Vector::Ones(1) * cplx(0.6, -0.2);
    const Matrix rhs = (create(b, p * z) + annihilate(b, q * z.conjugate())) * R;
    CHECK(sub_cutoff_norm(b, Matrix(R * create(b, z) - rhs), 19) <= 1e-12);
}

TEST_CASE("Jordan-Wigner and Q", "[fock_reps]") {
    const auto jw1 = jordan_wigner(1);
    REQUIRE(jw1.size() == 2);
    CHECK(max_abs(Matrix(jw1[0] - pauli(1))) == 0.0);
    CHECK(max_abs(Matrix(jw1[1] - pauli(2))) == 0.0);
    CHECK(max_abs(Matrix(pauli(1) * pauli(2) - I_unit * pauli(3))) == 0.0);
    CHECK(max_abs(Matrix(pauli(1) * pauli(2) + pauli(2) * pauli(1))) == 0.0);
    const auto jw2 = jordan_wigner(2);
    CHECK(max_abs(Matrix(jw2[2] - kron(pauli(3), pauli(1)))) == 0.0);
    for (int n = 1; n <= 4; ++n) {
        const auto ops = jordan_wigner(n, true);
        REQUIRE(ops.size() == static_cast<std::size_t>(2 * n + 1));
        const Matrix one = identity(ops[0].rows());
        for (int i = 0; i < 2 * n; ++i) {
            for (int j = 0; j < 2 * n; ++j)
                CHECK(max_abs(Matrix(anticommutator(ops[i], ops[j]) - (i == j ? 2.0 : 0.0) * one)) == 0.0);
            CHECK(max_abs(anticommutator(ops[i], ops.back())) == 0.0);
        }
    }

    const auto f = build_space(Statistics::Fermi, 3);
    auto ys = canonical_real_basis(3);
    const Matrix Q = q_operator(f, ys);
    CHECK(max_abs(Matrix(Q - parity_op(f))) <= 1e-14);
    std::swap(ys[1], ys[4]);
    CHECK(max_abs(Matrix(q_operator(f, ys) + parity_op(f))) <= 1e-14);

    const DoubledVector y1 = DoubledVector::real(Vector::Unit(3, 2));
    CHECK(max_abs(Matrix(q_operator(f, {y1}) - field(f, y1))) == 0.0);

    Rng rng(10);
    for (std::size_t n = 1; n <= 5; ++n) {
        const std::vector<DoubledVector> part(ys.begin(), ys.begin() + static_cast<long>(n));
        const Matrix q = q_operator(f, part);
        CHECK(max_abs(Matrix(q * q - identity(f.dim()))) <= 1e-13);
        CHECK(max_abs(Matrix(q - q.adjoint())) <= 1e-13);
        // fields of vectors alpha-orthogonal to the family pick up (-1)^n
        DoubledVector rest = DoubledVector::zero(3);
        for (std::size_t k = n; k < ys.size(); ++k) rest = rest + ys[k] * rng.normal();
        const Matrix phi = field(f, rest);
        const double sgn = (n % 2) ? -1.0 : 1.0;
        CHECK(max_abs(Matrix(q * phi - sgn * phi * q)) <= 1e-12);
    }
    const Matrix phi = field(f, DoubledVector::real(rng.vector(3)));
    // a full basis of even length 2d: Q is the parity, which anticommutes with every field
    CHECK(max_abs(Matrix(Q * phi + phi * Q)) <= 1e-12);
    CHECK_THROWS_AS(q_operator(f, {y1, y1}), std::invalid_argument);
}
