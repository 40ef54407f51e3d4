// fock_space.hpp: bosonic (number-truncated) and fermionic Fock spaces over C^d
//
// Operators are plain dense matrices on the occupation basis of a FockSpace.
// Basis order: graded by total number N, then occupations in descending
// lexicographic order inside each sector, so the vacuum is index 0 and the
// one-particle sector lists e_1, ..., e_d at indices 1..d.

#pragma once

#include "linalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fockforge {

enum class Statistics { Bose, Fermi };

inline const char* to_string(Statistics s) { return s == Statistics::Bose ? "bose" : "fermi"; }

inline constexpr std::size_t max_fock_dim = 1000000;

using Occupation = std::vector<int>;

class FockSpace {
public:
    struct Ladder {
        Eigen::Index target = -1;  // -1: annihilated / beyond the cutoff
        double coeff = 0.0;
    };

    FockSpace() = default;

    Statistics statistics() const { return data_->stats; }
    bool bose() const { return data_->stats == Statistics::Bose; }
    bool fermi() const { return data_->stats == Statistics::Fermi; }
    int modes() const { return data_->d; }
    int n_max() const { return data_->n_max; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(data_->basis.size()); }

    const Occupation& occupation(Eigen::Index k) const { return data_->basis[static_cast<std::size_t>(k)]; }
    int number(Eigen::Index k) const { return data_->numbers[static_cast<std::size_t>(k)]; }

    Eigen::Index index_of(const Occupation& occ) const {
        auto it = data_->lookup.find(occ);
        return it == data_->lookup.end() ? -1 : it->second;
    }

    // a*_i |k>
    const Ladder& up(int mode, Eigen::Index k) const {
        return data_->up[static_cast<std::size_t>(mode)][static_cast<std::size_t>(k)];
    }
    // a_i |k>
    const Ladder& down(int mode, Eigen::Index k) const {
        return data_->down[static_cast<std::size_t>(mode)][static_cast<std::size_t>(k)];
    }

    // First basis index of sector n (sector n spans [sector_begin(n), sector_begin(n+1))).
    Eigen::Index sector_begin(int n) const {
        if (n <= 0) return 0;
        if (n > data_->n_max) return dim();
        return data_->sector_begin[static_cast<std::size_t>(n)];
    }

    friend FockSpace build_space(Statistics stats, int d, int n_max);

private:
    struct Data {
        Statistics stats = Statistics::Fermi;
        int d = 0;
        int n_max = 0;
        std::vector<Occupation> basis;
        std::vector<int> numbers;
        std::map<Occupation, Eigen::Index> lookup;
        std::vector<std::vector<Ladder>> up, down;
        std::vector<Eigen::Index> sector_begin;
    };
    std::shared_ptr<const Data> data_;
};

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Occupations of d modes with total n (each entry <= cap), descending lexicographic.
inline void enumerate_sector(int d, int n, int cap, std::vector<Occupation>& out) {
    Occupation cur(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == d - 1) {
            if (left <= cap) {
                cur[static_cast<std::size_t>(mode)] = left;
                out.push_back(cur);
            }
            return;
        }
        for (int k = std::min(left, cap); k >= 0; --k) {
            cur[static_cast<std::size_t>(mode)] = k;
            rec(mode + 1, left - k);
        }
        cur[static_cast<std::size_t>(mode)] = 0;
    };
    rec(0, n);
}

inline FockSpace build_space(Statistics stats, int d, int n_max = 0) {
    if (d < 1) throw std::invalid_argument("build_space: d must be >= 1");
    if (stats == Statistics::Fermi) n_max = d;
    if (n_max < 0) throw std::invalid_argument("build_space: n_max must be >= 0");
    const double expected = stats == Statistics::Fermi ? std::ldexp(1.0, d) : binomial(n_max + d, d);
    if (expected > static_cast<double>(max_fock_dim))
        throw DimensionOverflow("build_space: dimension " + std::to_string(expected) + " exceeds guard");

    auto data = std::make_shared<FockSpace::Data>();
    data->stats = stats;
    data->d = d;
    data->n_max = n_max;
    const int cap = stats == Statistics::Fermi ? 1 : n_max;
    data->sector_begin.assign(static_cast<std::size_t>(n_max) + 2, 0);
    for (int n = 0; n <= n_max; ++n) {
        data->sector_begin[static_cast<std::size_t>(n)] = static_cast<Eigen::Index>(data->basis.size());
        enumerate_sector(d, n, cap, data->basis);
    }
    data->sector_begin[static_cast<std::size_t>(n_max) + 1] = static_cast<Eigen::Index>(data->basis.size());

    const std::size_t dim = data->basis.size();
    data->numbers.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        int n = 0;
        for (int x : data->basis[k]) n += x;
        data->numbers[k] = n;
        data->lookup.emplace(data->basis[k], static_cast<Eigen::Index>(k));
    }

    data->up.assign(static_cast<std::size_t>(d), std::vector<FockSpace::Ladder>(dim));
    data->down.assign(static_cast<std::size_t>(d), std::vector<FockSpace::Ladder>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        const Occupation& occ = data->basis[k];
        int before = 0;  // particles in modes < i
        for (int i = 0; i < d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double sign = (stats == Statistics::Fermi && (before % 2)) ? -1.0 : 1.0;
            // creation
            if (data->numbers[k] < n_max && (stats == Statistics::Bose || occ[ui] == 0)) {
                Occupation t = occ;
                t[ui] += 1;
                const double c = stats == Statistics::Bose ? std::sqrt(static_cast<double>(occ[ui] + 1)) : sign;
                data->up[ui][k] = {data->lookup.at(t), c};
            }
            // annihilation
            if (occ[ui] > 0) {
                Occupation t = occ;
                t[ui] -= 1;
                const double c = stats == Statistics::Bose ? std::sqrt(static_cast<double>(occ[ui])) : sign;
                data->down[ui][k] = {data->lookup.at(t), c};
            }
            before += occ[ui];
        }
    }
    FockSpace s;
    s.data_ = std::move(data);
    return s;
}

// --------------------------- Vectors ----------------------------------------

inline Vector vacuum(const FockSpace& s) {
    Vector v = Vector::Zero(s.dim());
    v(0) = 1.0;
    return v;
}

inline Vector basis_vector(const FockSpace& s, const Occupation& occ) {
    const Eigen::Index k = s.index_of(occ);
    if (k < 0) throw std::out_of_range("basis_vector: occupation not in space");
    Vector v = Vector::Zero(s.dim());
    v(k) = 1.0;
    return v;
}

// a*(w) v, without forming the matrix.
inline Vector apply_create(const FockSpace& s, const Vector& w, const Vector& v) {
    require_shape(w, s.modes(), 1, "apply_create");
    Vector out = Vector::Zero(s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
        if (v(k) == cplx(0.0)) continue;
        for (int i = 0; i < s.modes(); ++i) {
            const auto& l = s.up(i, k);
            if (l.target >= 0) out(l.target) += w(i) * l.coeff * v(k);
        }
    }
    return out;
}

// a(w) v; antilinear in w.
inline Vector apply_annihilate(const FockSpace& s, const Vector& w, const Vector& v) {
    require_shape(w, s.modes(), 1, "apply_annihilate");
    Vector out = Vector::Zero(s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
        if (v(k) == cplx(0.0)) continue;
        for (int i = 0; i < s.modes(); ++i) {
            const auto& l = s.down(i, k);
            if (l.target >= 0) out(l.target) += std::conj(w(i)) * l.coeff * v(k);
        }
    }
    return out;
}

// --------------------------- Diagonal operators -----------------------------

inline Matrix number_op(const FockSpace& s) {
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) m(k, k) = s.number(k);
    return m;
}

// I = (-1)^N
inline Matrix parity_op(const FockSpace& s) {
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) m(k, k) = (s.number(k) % 2) ? -1.0 : 1.0;
    return m;
}

// Lambda = (-1)^{N(N-1)/2}
inline Matrix lambda_op(const FockSpace& s) {
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
        const long n = s.number(k);
        m(k, k) = ((n * (n - 1) / 2) % 2) ? -1.0 : 1.0;
    }
    return m;
}

// Basis indices with N <= n.
inline std::vector<Eigen::Index> sectors_up_to(const FockSpace& s, int n) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < s.dim(); ++k)
        if (s.number(k) <= n) idx.push_back(k);
    return idx;
}

inline Matrix restrict_to(const Matrix& A, const std::vector<Eigen::Index>& idx) {
    Matrix B(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A(idx[i], idx[j]);
    return B;
}

inline Vector restrict_to(const Vector& v, const std::vector<Eigen::Index>& idx) {
    Vector w(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) w(static_cast<Eigen::Index>(i)) = v(idx[i]);
    return w;
}

// Frobenius norm of P A P with P the projection onto N <= n.
inline double sub_cutoff_norm(const FockSpace& s, const Matrix& A, int n) {
    return restrict_to(A, sectors_up_to(s, n)).norm();
}

// --------------------------- Second quantization ----------------------------

// dGamma(h) = sum_ij h_ij a*_i a_j
inline Matrix dgamma(const FockSpace& s, const Matrix& h) {
    require_shape(h, s.modes(), s.modes(), "dgamma");
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k)
        for (int j = 0; j < s.modes(); ++j) {
            const auto& dn = s.down(j, k);
            if (dn.target < 0) continue;
            for (int i = 0; i < s.modes(); ++i) {
                if (h(i, j) == cplx(0.0)) continue;
                const auto& up = s.up(i, dn.target);
                if (up.target < 0) continue;
                m(up.target, k) += h(i, j) * dn.coeff * up.coeff;
            }
        }
    return m;
}

// Gamma(p), built column by column from |n> = a*_i |n - e_i> / coeff, i the first occupied mode.
inline Matrix gamma(const FockSpace& s, const Matrix& p) {
    require_shape(p, s.modes(), s.modes(), "gamma");
    const Eigen::Index dim = s.dim();
    Matrix G = Matrix::Zero(dim, dim);
    G(0, 0) = 1.0;
    for (Eigen::Index k = 1; k < dim; ++k) {
        const Occupation& occ = s.occupation(k);
        int i = 0;
        while (occ[static_cast<std::size_t>(i)] == 0) ++i;
        // a*_i |n - e_i> = sqrt(n_i) |n> (Bose) or |n> (Fermi, no modes before i occupied)
        const auto& dn = s.down(i, k);
        const double c = s.bose() ? dn.coeff : 1.0;
        Vector col = apply_create(s, p.col(i), G.col(dn.target)) / c;
        G.col(k) = col;
    }
    return G;
}

// --------------------------- Exponential law --------------------------------

// Isometry Gamma(Z1) (x) Gamma(Z2) -> Gamma(Z1 + Z2); tensor index k1*dim2 + k2.
inline Matrix exp_law(const FockSpace& s1, const FockSpace& s2, const FockSpace& target) {
    if (s1.statistics() != s2.statistics() || s1.statistics() != target.statistics())
        throw StatisticsMismatch("exp_law: statistics differ");
    if (target.modes() != s1.modes() + s2.modes())
        throw ShapeError("exp_law: target must have d1 + d2 modes");
    if (s1.bose() && target.n_max() < s1.n_max() + s2.n_max())
        throw std::invalid_argument("exp_law: target cutoff below n_max1 + n_max2");
    Matrix U = Matrix::Zero(target.dim(), s1.dim() * s2.dim());
    for (Eigen::Index k1 = 0; k1 < s1.dim(); ++k1)
        for (Eigen::Index k2 = 0; k2 < s2.dim(); ++k2) {
            Occupation occ = s1.occupation(k1);
            const Occupation& o2 = s2.occupation(k2);
            occ.insert(occ.end(), o2.begin(), o2.end());
            U(target.index_of(occ), k1 * s2.dim() + k2) = 1.0;
        }
    return U;
}

inline Matrix exp_law(const FockSpace& s1, const FockSpace& s2) {
    return exp_law(s1, s2, build_space(s1.statistics(), s1.modes() + s2.modes(), s1.n_max() + s2.n_max()));
}

}  // namespace fockforge
