// random.hpp: seeded random matrices for property checks

#pragma once

#include "linalg.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace fockforge {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Stream derived from a global seed and a check name, so checks can run in any order.
    Rng(std::uint64_t seed, std::string_view stream) : eng_(mix(seed, stream)) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    cplx cnormal() { return {normal(), normal()}; }

    Vector vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
        return v;
    }
    Vector unit_vector(Eigen::Index n) {
        Vector v = vector(n);
        return v / v.norm();
    }
    RVector rvector(Eigen::Index n) {
        RVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
        return v;
    }
    Matrix matrix(Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cnormal();
        return m;
    }
    RMatrix rmatrix(Eigen::Index r, Eigen::Index c) {
        RMatrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal();
        return m;
    }
    Matrix hermitian(Eigen::Index n) {
        Matrix a = matrix(n, n);
        return 0.5 * (a + a.adjoint());
    }
    Matrix symmetric(Eigen::Index n) {
        Matrix a = matrix(n, n);
        return 0.5 * (a + a.transpose());
    }
    Matrix antisymmetric(Eigen::Index n) {
        Matrix a = matrix(n, n);
        return 0.5 * (a - a.transpose());
    }
    Matrix unitary(Eigen::Index n) {
        Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
        Matrix q = qr.householderQ();
        return q;
    }
    // Hermitian with spectrum drawn uniformly from [lo, hi].
    Matrix hermitian_spectrum(Eigen::Index n, double lo, double hi) {
        Matrix u = unitary(n);
        RVector ev(n);
        for (Eigen::Index i = 0; i < n; ++i) ev(i) = uniform(lo, hi);
        return u * ev.cast<cplx>().asDiagonal() * u.adjoint();
    }

    std::mt19937_64& engine() { return eng_; }

private:
    static std::uint64_t mix(std::uint64_t seed, std::string_view stream) {
        // FNV-1a over the stream name, then splitmix64 with the seed.
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char ch : stream) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL + h;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
};

}  // namespace fockforge
