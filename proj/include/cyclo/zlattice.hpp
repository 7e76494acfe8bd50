#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cyclo/rational.hpp"

namespace cyclo {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

namespace detail {

inline bool row_is_zero(const IntVec& r) {
    for (const Int& x : r)
        if (x != 0) return false;
    return true;
}

}  // namespace detail

/// Row-style Hermite normal form by integer row reduction.
///
/// Returns the echelon rows (pivots positive, entries above each pivot
/// reduced into [0, pivot)) with zero rows dropped. When `transform` is
/// given, it receives a matrix T with T * A = H row for row, so membership
/// queries can be turned into expansion certificates over the input rows.
inline IntMat hnf(const IntMat& a, IntMat* transform = nullptr) {
    IntMat h = a;
    size_t m = h.size();
    size_t ncols = m == 0 ? 0 : h[0].size();
    IntMat u;
    if (transform) {
        u.assign(m, IntVec(m, 0));
        for (size_t i = 0; i < m; ++i) u[i][i] = 1;
    }

    auto combine = [&](size_t i, size_t j, size_t c) {
        // Unimodular 2x2 transform putting gcd into row i, zero into row j at column c.
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[i][c].get_mpz_t(),
                   h[j][c].get_mpz_t());
        Int ai = h[i][c] / g, aj = h[j][c] / g;
        for (size_t k = 0; k < ncols; ++k) {
            Int hi = s * h[i][k] + t * h[j][k];
            Int hj = ai * h[j][k] - aj * h[i][k];
            h[i][k] = hi;
            h[j][k] = hj;
        }
        if (transform)
            for (size_t k = 0; k < m; ++k) {
                Int ui = s * u[i][k] + t * u[j][k];
                Int uj = ai * u[j][k] - aj * u[i][k];
                u[i][k] = ui;
                u[j][k] = uj;
            }
    };

    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m; ++c) {
        size_t piv = r;
        while (piv < m && h[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(h[r], h[piv]);
        if (transform) std::swap(u[r], u[piv]);
        for (size_t i = r + 1; i < m; ++i)
            if (h[i][c] != 0) combine(r, i, c);
        if (h[r][c] < 0) {
            for (size_t k = 0; k < ncols; ++k) h[r][k] = -h[r][k];
            if (transform)
                for (size_t k = 0; k < m; ++k) u[r][k] = -u[r][k];
        }
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h[i][c].get_mpz_t(), h[r][c].get_mpz_t());
            if (q != 0) {
                for (size_t k = 0; k < ncols; ++k) h[i][k] -= q * h[r][k];
                if (transform)
                    for (size_t k = 0; k < m; ++k) u[i][k] -= q * u[r][k];
            }
        }
        ++r;
    }

    h.resize(r);
    if (transform) {
        u.resize(r);
        *transform = std::move(u);
    }
    return h;
}

/// Precomputed HNF of a generator matrix, reusable across many membership
/// queries against the same lattice.
class HnfSystem {
public:
    explicit HnfSystem(IntMat a) : a_(std::move(a)) {
        if (!a_.empty()) h_ = hnf(a_, &u_);
    }

    /// Solves x * rows(a) = target over Z; nullopt when target is not in the lattice.
    std::optional<IntVec> solve(const IntVec& target) const {
        if (a_.empty())
            return detail::row_is_zero(target) ? std::optional<IntVec>(IntVec{}) : std::nullopt;
        size_t ncols = a_[0].size();
        if (target.size() != ncols) throw std::invalid_argument("HnfSystem: size mismatch");

        IntVec rest = target;
        IntVec y(h_.size(), 0);
        for (size_t i = 0; i < h_.size(); ++i) {
            size_t c = 0;
            while (c < ncols && h_[i][c] == 0) ++c;
            if (c == ncols) continue;
            if (rest[c] % h_[i][c] != 0) return std::nullopt;
            y[i] = rest[c] / h_[i][c];
            if (y[i] != 0)
                for (size_t k = 0; k < ncols; ++k) rest[k] -= y[i] * h_[i][k];
        }
        if (!detail::row_is_zero(rest)) return std::nullopt;

        IntVec x(a_.size(), 0);
        for (size_t i = 0; i < h_.size(); ++i)
            if (y[i] != 0)
                for (size_t k = 0; k < a_.size(); ++k) x[k] += y[i] * u_[i][k];
        return x;
    }

    const IntMat& echelon() const { return h_; }

private:
    IntMat a_, h_, u_;
};

/// One-shot membership solve; prefer HnfSystem when querying repeatedly.
inline std::optional<IntVec> lattice_solve(const IntMat& a, const IntVec& target) {
    return HnfSystem(a).solve(target);
}

inline bool lattice_member(const IntMat& a, const IntVec& target) {
    return lattice_solve(a, target).has_value();
}

/// Lattice equality as Z-spans: canonical HNFs agree.
inline bool lattice_equal(const IntMat& a, const IntMat& b) { return hnf(a) == hnf(b); }

/// Exact determinant by Bareiss fraction-free elimination.
inline Int det_bareiss(IntMat a) {
    size_t n = a.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t sw = k + 1;
            while (sw < n && a[sw][k] == 0) ++sw;
            if (sw == n) return 0;
            std::swap(a[k], a[sw]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// Exact LLL reduction (delta = 99/100) with rational Gram-Schmidt.
/// Rows of `basis` must be linearly independent.
inline IntMat lll_reduce(IntMat basis) {
    size_t n = basis.size();
    if (n == 0) return basis;
    size_t dim = basis[0].size();
    const Rat delta(99, 100);

    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, 0));
    std::vector<Rat> B(n, 0);  // squared lengths of Gram-Schmidt vectors

    // Recompute Gram-Schmidt data for row k against rows < k.
    std::vector<std::vector<Rat>> gs(n, std::vector<Rat>(dim, 0));
    auto update_gs = [&](size_t k) {
        for (size_t i = 0; i < dim; ++i) gs[k][i] = Rat(basis[k][i]);
        for (size_t j = 0; j < k; ++j) {
            Rat num = 0;
            for (size_t i = 0; i < dim; ++i) num += Rat(basis[k][i]) * gs[j][i];
            mu[k][j] = B[j] == 0 ? Rat(0) : Rat(num / B[j]);
            for (size_t i = 0; i < dim; ++i) gs[k][i] -= mu[k][j] * gs[j][i];
        }
        B[k] = 0;
        for (size_t i = 0; i < dim; ++i) B[k] += gs[k][i] * gs[k][i];
    };
    for (size_t k = 0; k < n; ++k) update_gs(k);

    auto size_reduce = [&](size_t k, size_t j) {
        // q = nearest integer to mu[k][j], via floor((2 num + den) / (2 den)).
        Int num(mu[k][j].get_num()), den(mu[k][j].get_den());
        Int q, t = 2 * num + den, d = 2 * den;
        mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t());
        if (q != 0)
            for (size_t i = 0; i < dim; ++i) basis[k][i] -= q * basis[j][i];
    };

    size_t k = 1;
    size_t guard = 0, guard_max = 100000;
    while (k < n) {
        if (++guard > guard_max) throw std::runtime_error("lll_reduce: iteration bound exceeded");
        update_gs(k);
        for (size_t j = k; j-- > 0;) {
            if (mu[k][j] > Rat(1, 2) || mu[k][j] < Rat(-1, 2)) {
                size_reduce(k, j);
                update_gs(k);
            }
        }
        Rat lhs = B[k];
        Rat rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            update_gs(k - 1);
            update_gs(k);
            k = k > 1 ? k - 1 : 1;
        }
    }
    return basis;
}

}  // namespace cyclo
