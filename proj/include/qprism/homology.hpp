#pragma once

// Exact linear algebra over principal ideal rings: Howell and Smith forms,
// kernels, subquotients and cohomology of finite complexes.
//
// Algorithms are generic over a ring policy. ZModPk covers Z/p^k (a local
// ring, so valuations drive pivoting); IntegerRing covers Z.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include "qprism/error.hpp"
#include "qprism/modular.hpp"

namespace qprism {

struct ZModPk {
    using value_type = std::uint64_t;

    std::uint64_t p = 2;
    int k = 1;
    std::uint64_t mod = 2;

    static ZModPk make(std::uint64_t p, int k) { return ZModPk{p, k, checked_pow(p, k)}; }

    [[nodiscard]] value_type zero() const { return 0; }
    [[nodiscard]] value_type one() const { return 1 % mod; }
    [[nodiscard]] bool is_zero(value_type a) const { return a == 0; }
    [[nodiscard]] value_type add(value_type a, value_type b) const { return add_mod(a, b, mod); }
    [[nodiscard]] value_type sub(value_type a, value_type b) const { return sub_mod(a, b, mod); }
    [[nodiscard]] value_type mul(value_type a, value_type b) const { return mul_mod(a, b, mod); }
    [[nodiscard]] value_type neg(value_type a) const { return a == 0 ? 0 : mod - a; }
    [[nodiscard]] value_type from_integer(const Integer& v) const { return reduce_integer(v, mod); }

    /// p-adic valuation, k for zero.
    [[nodiscard]] int valuation(value_type a) const {
        if (a == 0) return k;
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }

    [[nodiscard]] value_type p_power(int e) const { return e >= k ? 0 : checked_pow(p, e); }

    /// Unit u with u*a = p^v(a).
    [[nodiscard]] value_type normalizing_unit(value_type a) const {
        if (a == 0) return one();
        return inv_mod(a / p_power(valuation(a)), mod);
    }

    /// Generator of the annihilator ideal of a.
    [[nodiscard]] value_type annihilator(value_type a) const { return p_power(k - valuation(a)); }

    /// c with c*a = b, assuming v(a) <= v(b).
    [[nodiscard]] value_type exact_quotient(value_type b, value_type a) const {
        if (b == 0) return 0;
        const int va = valuation(a);
        const value_type b_scaled = b / p_power(va);
        return mul(b_scaled, inv_mod(a / p_power(va), mod));
    }

    [[nodiscard]] bool divides(value_type a, value_type b) const { return valuation(a) <= valuation(b); }

    /// Pivot size used for Smith pivot selection; smaller is better.
    [[nodiscard]] int size_rank(value_type a) const { return valuation(a); }

    /// (s, t, u, v) unimodular with s*a + t*b = g and u*a + v*b = 0.
    [[nodiscard]] std::array<value_type, 4> gcdx(value_type a, value_type b) const {
        if (b == 0) return {one(), 0, 0, one()};
        if (a != 0 && valuation(a) <= valuation(b)) return {one(), 0, neg(exact_quotient(b, a)), one()};
        return {0, one(), one(), neg(exact_quotient(a, b))};
    }

    /// Reduction of b modulo a normalized pivot a = p^v: returns the multiple c with b - c*a canonical.
    [[nodiscard]] value_type reduction_multiple(value_type b, value_type pivot) const {
        if (pivot == 0) return 0;
        return b / pivot;
    }
};

struct IntegerRing {
    using value_type = Integer;

    [[nodiscard]] value_type zero() const { return 0; }
    [[nodiscard]] value_type one() const { return 1; }
    [[nodiscard]] bool is_zero(const value_type& a) const { return a == 0; }
    [[nodiscard]] value_type add(const value_type& a, const value_type& b) const { return a + b; }
    [[nodiscard]] value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    [[nodiscard]] value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    [[nodiscard]] value_type neg(const value_type& a) const { return -a; }
    [[nodiscard]] value_type from_integer(const Integer& v) const { return v; }

    [[nodiscard]] value_type normalizing_unit(const value_type& a) const { return a < 0 ? -1 : 1; }
    [[nodiscard]] value_type annihilator(const value_type&) const { return 0; }
    [[nodiscard]] value_type exact_quotient(const value_type& b, const value_type& a) const { return b / a; }
    [[nodiscard]] bool divides(const value_type& a, const value_type& b) const {
        return a == 0 ? b == 0 : b % a == 0;
    }
    [[nodiscard]] Integer size_rank(const value_type& a) const { return a < 0 ? Integer(-a) : a; }

    [[nodiscard]] std::array<value_type, 4> gcdx(const value_type& a, const value_type& b) const {
        if (b == 0) return {1, 0, 0, 1};
        Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            Integer qt = old_r / r;
            Integer tmp = old_r - qt * r;
            old_r = r;
            r = tmp;
            tmp = old_s - qt * s;
            old_s = s;
            s = tmp;
            tmp = old_t - qt * t;
            old_t = t;
            t = tmp;
        }
        // old_r = old_s*a + old_t*b
        return {old_s, old_t, -b / old_r, a / old_r};
    }

    [[nodiscard]] value_type reduction_multiple(const value_type& b, const value_type& pivot) const {
        if (pivot == 0) return 0;
        Integer qt = b / pivot;
        if (b - qt * pivot < 0) qt -= 1;  // pivots are positive after normalization
        return qt;
    }
};

template <class R>
class Matrix {
public:
    using value_type = typename R::value_type;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const R& ring)
        : rows_(rows), cols_(cols), data_(rows * cols, ring.zero()) {}

    static Matrix identity(std::size_t n, const R& ring) {
        Matrix m(n, n, ring);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::vector<value_type> row(std::size_t i) const {
        return std::vector<value_type>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                       data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t;
        t.rows_ = cols_;
        t.cols_ = rows_;
        t.data_.resize(data_.size());
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
        }
        return t;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<value_type> data_;
};

using ModMatrix = Matrix<ZModPk>;
using IntMatrix = Matrix<IntegerRing>;

template <class R>
Matrix<R> multiply(const Matrix<R>& a, const Matrix<R>& b, const R& ring) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::RankMismatch, "matrix product dimension mismatch");
    Matrix<R> c(a.rows(), b.cols(), ring);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const auto& x = a(i, l);
            if (ring.is_zero(x)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (!ring.is_zero(b(l, j))) c(i, j) = ring.add(c(i, j), ring.mul(x, b(l, j)));
            }
        }
    }
    return c;
}

template <class R>
std::vector<typename R::value_type> apply(const Matrix<R>& a, const std::vector<typename R::value_type>& v,
                                          const R& ring) {
    if (a.cols() != v.size()) throw Error(ErrorKind::RankMismatch, "matrix-vector dimension mismatch");
    std::vector<typename R::value_type> out(a.rows(), ring.zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!ring.is_zero(a(i, j)) && !ring.is_zero(v[j])) out[i] = ring.add(out[i], ring.mul(a(i, j), v[j]));
        }
    }
    return out;
}

template <class R>
Matrix<R> from_rows(const std::vector<std::vector<typename R::value_type>>& rows, std::size_t cols, const R& ring) {
    Matrix<R> m(rows.size(), cols, ring);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

template <class R>
Matrix<R> hstack(const Matrix<R>& a, const Matrix<R>& b, const R& ring) {
    if (a.rows() != b.rows()) throw Error(ErrorKind::RankMismatch, "hstack row mismatch");
    Matrix<R> m(a.rows(), a.cols() + b.cols(), ring);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

template <class R>
Matrix<R> vstack(const Matrix<R>& a, const Matrix<R>& b, const R& ring) {
    if (a.cols() != b.cols()) throw Error(ErrorKind::RankMismatch, "vstack column mismatch");
    Matrix<R> m(a.rows() + b.rows(), a.cols(), ring);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(a.rows() + i, j) = b(i, j);
    }
    return m;
}

/// Row echelon basis with the Howell property: every element of the row span
/// whose first k entries vanish is a combination of the basis rows with that property.
template <class R>
struct HowellBasis {
    using value_type = typename R::value_type;
    std::size_t cols = 0;
    std::vector<std::vector<value_type>> rows;  // nonzero, strictly increasing pivot columns
    std::vector<std::size_t> pivots;
};

namespace detail {

template <class R, class V>
void combine_rows(std::vector<V>& r1, std::vector<V>& r2, const std::array<V, 4>& m, std::size_t from, const R& ring) {
    for (std::size_t j = from; j < r1.size(); ++j) {
        const V a = r1[j];
        const V b = r2[j];
        if (ring.is_zero(a) && ring.is_zero(b)) continue;
        r1[j] = ring.add(ring.mul(m[0], a), ring.mul(m[1], b));
        r2[j] = ring.add(ring.mul(m[2], a), ring.mul(m[3], b));
    }
}

template <class R, class V>
void axpy(std::vector<V>& target, const V& c, const std::vector<V>& source, std::size_t from, const R& ring) {
    if (ring.is_zero(c)) return;
    for (std::size_t j = from; j < target.size(); ++j) {
        if (!ring.is_zero(source[j])) target[j] = ring.add(target[j], ring.mul(c, source[j]));
    }
}

template <class R, class V>
bool is_zero_vector(const std::vector<V>& v, const R& ring) {
    return std::all_of(v.begin(), v.end(), [&](const V& x) { return ring.is_zero(x); });
}

}  // namespace detail

template <class R>
HowellBasis<R> howell_form(const Matrix<R>& m, const R& ring) {
    using V = typename R::value_type;
    std::vector<std::vector<V>> h;
    h.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) h.push_back(m.row(i));

    const std::size_t cols = m.cols();
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && r < h.size(); ++c) {
        for (std::size_t i = r + 1; i < h.size(); ++i) {
            if (ring.is_zero(h[i][c])) continue;
            detail::combine_rows(h[r], h[i], ring.gcdx(h[r][c], h[i][c]), c, ring);
        }
        if (ring.is_zero(h[r][c])) continue;
        const V u = ring.normalizing_unit(h[r][c]);
        for (std::size_t j = c; j < cols; ++j) h[r][j] = ring.mul(u, h[r][j]);
        for (std::size_t i = 0; i < r; ++i) {
            const V qt = ring.reduction_multiple(h[i][c], h[r][c]);
            detail::axpy(h[i], ring.neg(qt), h[r], c, ring);
        }
        const V ann = ring.annihilator(h[r][c]);
        if (!ring.is_zero(ann)) {
            std::vector<V> extra(cols, ring.zero());
            for (std::size_t j = c + 1; j < cols; ++j) extra[j] = ring.mul(ann, h[r][j]);
            if (!detail::is_zero_vector(extra, ring)) h.push_back(std::move(extra));
        }
        pivots.push_back(c);
        ++r;
    }
    HowellBasis<R> out;
    out.cols = cols;
    h.resize(r);
    out.rows = std::move(h);
    out.pivots = std::move(pivots);
    return out;
}

/// Residue of v after reduction by the basis; zero iff v lies in the row span.
template <class R>
std::vector<typename R::value_type> reduce_by(const HowellBasis<R>& hb, std::vector<typename R::value_type> v,
                                              const R& ring) {
    for (std::size_t i = 0; i < hb.rows.size(); ++i) {
        const std::size_t c = hb.pivots[i];
        const auto qt = ring.reduction_multiple(v[c], hb.rows[i][c]);
        detail::axpy(v, ring.neg(qt), hb.rows[i], c, ring);
    }
    return v;
}

template <class R>
bool in_span(const HowellBasis<R>& hb, const std::vector<typename R::value_type>& v, const R& ring) {
    return detail::is_zero_vector(reduce_by(hb, v, ring), ring);
}

/// Spanning set of {v : m v = 0}, read off the Howell form of [m^T | I].
template <class R>
std::vector<std::vector<typename R::value_type>> kernel_basis(const Matrix<R>& m, const R& ring) {
    const std::size_t n = m.cols();
    const std::size_t k = m.rows();
    const Matrix<R> aug = hstack(m.transpose(), Matrix<R>::identity(n, ring), ring);
    const HowellBasis<R> hb = howell_form(aug, ring);
    std::vector<std::vector<typename R::value_type>> out;
    for (std::size_t i = 0; i < hb.rows.size(); ++i) {
        if (hb.pivots[i] < k) continue;
        out.emplace_back(hb.rows[i].begin() + static_cast<std::ptrdiff_t>(k), hb.rows[i].end());
    }
    return out;
}

/// log_p of the number of elements in the row span.
inline int span_log_cardinality(const HowellBasis<ZModPk>& hb, const ZModPk& ring) {
    int total = 0;
    for (std::size_t i = 0; i < hb.rows.size(); ++i) total += ring.k - ring.valuation(hb.rows[i][hb.pivots[i]]);
    return total;
}

namespace detail {

// Alternating row and column Hermite forms keep integer entries bounded by the pivots.
inline std::vector<Integer> integer_smith(Matrix<IntegerRing> a, const IntegerRing& ring) {
    while (true) {
        const HowellBasis<IntegerRing> h = howell_form(a, ring);
        bool diagonal = true;
        for (std::size_t i = 0; i < h.rows.size() && diagonal; ++i) {
            for (std::size_t j = 0; j < h.cols; ++j) {
                if (j != h.pivots[i] && h.rows[i][j] != 0) {
                    diagonal = false;
                    break;
                }
            }
        }
        if (!diagonal) {
            a = from_rows(h.rows, h.cols, ring).transpose();
            continue;
        }
        std::vector<Integer> d;
        for (std::size_t i = 0; i < h.rows.size(); ++i) d.push_back(abs(h.rows[i][h.pivots[i]]));
        for (std::size_t i = 0; i < d.size(); ++i) {
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                const Integer g = gcd(d[i], d[j]);
                const Integer l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
            }
        }
        return d;
    }
}

}  // namespace detail

/// Nonzero diagonal entries of a Smith form, normalized and divisibility-ordered.
template <class R>
std::vector<typename R::value_type> smith_diagonal(Matrix<R> a, const R& ring) {
    using V = typename R::value_type;
    if constexpr (std::is_same_v<R, IntegerRing>) return detail::integer_smith(std::move(a), ring);
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::vector<V> diag;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (ring.is_zero(a(i, j))) continue;
                if (!best || ring.size_rank(a(i, j)) < ring.size_rank(a(best->first, best->second))) best = {i, j};
            }
        }
        if (!best) break;
        auto [pi, pj] = *best;
        if (pi != t) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(t, j), a(pi, j));
        }
        if (pj != t) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, t), a(i, pj));
        }
        while (true) {
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (ring.is_zero(a(i, t))) continue;
                const auto g = ring.gcdx(a(t, t), a(i, t));
                for (std::size_t j = t; j < cols; ++j) {
                    const V x = a(t, j);
                    const V y = a(i, j);
                    a(t, j) = ring.add(ring.mul(g[0], x), ring.mul(g[1], y));
                    a(i, j) = ring.add(ring.mul(g[2], x), ring.mul(g[3], y));
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (ring.is_zero(a(t, j))) continue;
                const auto g = ring.gcdx(a(t, t), a(t, j));
                for (std::size_t i = t; i < rows; ++i) {
                    const V x = a(i, t);
                    const V y = a(i, j);
                    a(i, t) = ring.add(ring.mul(g[0], x), ring.mul(g[1], y));
                    a(i, j) = ring.add(ring.mul(g[2], x), ring.mul(g[3], y));
                }
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < rows && clean; ++i) clean = ring.is_zero(a(i, t));
            if (!clean) continue;
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < rows && !offending; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (!ring.divides(a(t, t), a(i, j))) {
                        offending = i;
                        break;
                    }
                }
            }
            if (!offending) break;
            for (std::size_t j = t; j < cols; ++j) a(t, j) = ring.add(a(t, j), a(*offending, j));
        }
        diag.push_back(ring.mul(ring.normalizing_unit(a(t, t)), a(t, t)));
    }
    return diag;
}

/// Invariant factors of R^n / (row span of rel): the nontrivial cyclic factors.
/// A zero factor stands for a free summand.
template <class R>
std::vector<typename R::value_type> quotient_factors(const Matrix<R>& rel, std::size_t n, const R& ring) {
    using V = typename R::value_type;
    std::vector<V> out;
    std::vector<V> diag = rel.rows() == 0 ? std::vector<V>{} : smith_diagonal(rel, ring);
    for (const V& d : diag) {
        if (d == ring.one()) continue;
        out.push_back(d);
    }
    for (std::size_t i = diag.size(); i < n; ++i) out.push_back(ring.zero());
    return out;
}

/// Finite or finitely generated abelian group data of a module: cyclic factors R/(d).
template <class R>
struct ModuleInvariants {
    std::vector<typename R::value_type> factors;

    [[nodiscard]] bool trivial() const { return factors.empty(); }
};

/// Exponents e of the factors Z/p^e; a zero value of the ring counts as e = k.
inline std::vector<int> exponents(const ModuleInvariants<ZModPk>& inv, const ZModPk& ring) {
    std::vector<int> out;
    for (auto d : inv.factors) out.push_back(ring.valuation(d));
    std::sort(out.begin(), out.end());
    return out;
}

inline int log_cardinality(const ModuleInvariants<ZModPk>& inv, const ZModPk& ring) {
    int total = 0;
    for (int e : exponents(inv, ring)) total += e;
    return total;
}

/// (span G + span S) / span S inside R^n, with G and S given by rows.
template <class R>
ModuleInvariants<R> subquotient(const Matrix<R>& gens, const Matrix<R>& sub, const R& ring) {
    const std::size_t g = gens.rows();
    if (g == 0) return {};
    const std::size_t n = gens.cols();
    Matrix<R> stacked = sub.rows() == 0 ? gens : vstack(gens, sub, ring);
    if (stacked.cols() != n) throw Error(ErrorKind::RankMismatch, "subquotient ambient mismatch");
    // c with c * stacked = 0, projected to the generator coordinates, are the relations among the images of G.
    const auto left_kernel = kernel_basis(stacked.transpose(), ring);
    Matrix<R> rel(left_kernel.size(), g, ring);
    for (std::size_t i = 0; i < left_kernel.size(); ++i) {
        for (std::size_t j = 0; j < g; ++j) rel(i, j) = left_kernel[i][j];
    }
    return ModuleInvariants<R>{quotient_factors(rel, g, ring)};
}

/// Cochain complex C^0 -> C^1 -> ... of presented modules C^i = R^{n_i} / rows(relations[i]).
/// diffs[i] maps C^i to C^{i+1} and acts on column vectors (rows = target coordinates).
template <class R>
struct PresentedComplex {
    std::vector<std::size_t> dims;
    std::vector<Matrix<R>> relations;
    std::vector<Matrix<R>> diffs;

    [[nodiscard]] std::size_t length() const { return dims.size(); }
};

template <class R>
Matrix<R> empty_relations(std::size_t n, const R& ring) {
    return Matrix<R>(0, n, ring);
}

/// Generators of {v in R^n : d v lies in the row span of target_rel}.
template <class R>
Matrix<R> preimage_of_relations(const Matrix<R>& d, const Matrix<R>& target_rel, const R& ring) {
    const std::size_t n = d.cols();
    Matrix<R> combined = target_rel.rows() == 0 ? d : hstack(d, target_rel.transpose(), ring);
    const auto ker = kernel_basis(combined, ring);
    Matrix<R> z(ker.size(), n, ring);
    for (std::size_t i = 0; i < ker.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) z(i, j) = ker[i][j];
    }
    return z;
}

template <class R>
ModuleInvariants<R> cohomology(const PresentedComplex<R>& c, std::size_t i, const R& ring) {
    const std::size_t n = c.dims[i];
    Matrix<R> cycles = i + 1 < c.length() ? preimage_of_relations(c.diffs[i], c.relations[i + 1], ring)
                                          : Matrix<R>::identity(n, ring);
    Matrix<R> boundaries = c.relations[i];
    if (i > 0) boundaries = vstack(boundaries, c.diffs[i - 1].transpose(), ring);
    return subquotient(cycles, boundaries, ring);
}

/// The complex has d_{i+1} d_i = 0 modulo relations, and every d_i respects relations.
template <class R>
bool is_complex(const PresentedComplex<R>& c, const R& ring) {
    for (std::size_t i = 0; i + 1 < c.diffs.size(); ++i) {
        const Matrix<R> dd = multiply(c.diffs[i + 1], c.diffs[i], ring);
        const auto hb = howell_form(c.relations[i + 2], ring);
        for (std::size_t j = 0; j < dd.cols(); ++j) {
            std::vector<typename R::value_type> col(dd.rows());
            for (std::size_t r = 0; r < dd.rows(); ++r) col[r] = dd(r, j);
            if (!in_span(hb, col, ring)) return false;
        }
    }
    return true;
}

/// Chain map f between complexes of equal length; f[i]: C^i -> D^i.
template <class R>
bool is_chain_map(const PresentedComplex<R>& c, const PresentedComplex<R>& d, const std::vector<Matrix<R>>& f,
                  const R& ring) {
    for (std::size_t i = 0; i + 1 < c.length(); ++i) {
        const Matrix<R> lhs = multiply(f[i + 1], c.diffs[i], ring);
        const Matrix<R> rhs = multiply(d.diffs[i], f[i], ring);
        const auto hb = howell_form(d.relations[i + 1], ring);
        for (std::size_t j = 0; j < lhs.cols(); ++j) {
            std::vector<typename R::value_type> col(lhs.rows());
            for (std::size_t r = 0; r < lhs.rows(); ++r) col[r] = ring.sub(lhs(r, j), rhs(r, j));
            if (!in_span(hb, col, ring)) return false;
        }
    }
    return true;
}

/// Mapping cone of f: C -> D, cone^i = C^{i+1} (+) D^i, indexed from -1.
template <class R>
PresentedComplex<R> mapping_cone(const PresentedComplex<R>& c, const PresentedComplex<R>& d,
                                 const std::vector<Matrix<R>>& f, const R& ring) {
    if (c.length() != d.length() || f.size() != c.length()) {
        throw Error(ErrorKind::RankMismatch, "cone needs complexes of equal length");
    }
    const std::size_t len = c.length();
    auto c_dim = [&](std::size_t i) { return i < len ? c.dims[i] : std::size_t{0}; };
    PresentedComplex<R> cone;
    // slot s corresponds to degree s-1: C^s (+) D^{s-1}
    for (std::size_t s = 0; s <= len; ++s) {
        const std::size_t a = c_dim(s);
        const std::size_t b = s == 0 ? 0 : d.dims[s - 1];
        cone.dims.push_back(a + b);
        const std::size_t ra = s < len ? c.relations[s].rows() : 0;
        const std::size_t rb = s == 0 ? 0 : d.relations[s - 1].rows();
        Matrix<R> rel(ra + rb, a + b, ring);
        for (std::size_t i = 0; i < ra; ++i) {
            for (std::size_t j = 0; j < a; ++j) rel(i, j) = c.relations[s](i, j);
        }
        for (std::size_t i = 0; i < rb; ++i) {
            for (std::size_t j = 0; j < b; ++j) rel(ra + i, a + j) = d.relations[s - 1](i, j);
        }
        cone.relations.push_back(std::move(rel));
    }
    for (std::size_t s = 0; s < len; ++s) {
        const std::size_t a0 = c_dim(s), b0 = s == 0 ? 0 : d.dims[s - 1];
        const std::size_t a1 = c_dim(s + 1), b1 = d.dims[s];
        Matrix<R> m(a1 + b1, a0 + b0, ring);
        if (s + 1 < len) {
            for (std::size_t i = 0; i < a1; ++i) {
                for (std::size_t j = 0; j < a0; ++j) m(i, j) = ring.neg(c.diffs[s](i, j));
            }
        }
        for (std::size_t i = 0; i < b1; ++i) {
            for (std::size_t j = 0; j < a0; ++j) m(a1 + i, j) = f[s](i, j);
        }
        if (s > 0) {
            for (std::size_t i = 0; i < b1; ++i) {
                for (std::size_t j = 0; j < b0; ++j) m(a1 + i, a0 + j) = d.diffs[s - 1](i, j);
            }
        }
        cone.diffs.push_back(std::move(m));
    }
    return cone;
}

template <class R>
bool acyclic(const PresentedComplex<R>& c, const R& ring) {
    for (std::size_t i = 0; i < c.length(); ++i) {
        if (!cohomology(c, i, ring).trivial()) return false;
    }
    return true;
}

// Two-term complexes of free Z/p^N-modules.

struct TwoTermComplex {
    ModMatrix d0;  // C^1 x C^0
};

struct CohomologyReport {
    std::vector<int> h0;  // exponents e of the cyclic factors Z/p^e
    std::vector<int> h1;
    int log_card_c0 = 0;
    int log_card_c1 = 0;
    int log_card_image = 0;

    [[nodiscard]] int log_card_h0() const {
        int s = 0;
        for (int e : h0) s += e;
        return s;
    }
    [[nodiscard]] int log_card_h1() const {
        int s = 0;
        for (int e : h1) s += e;
        return s;
    }
    [[nodiscard]] bool acyclic() const { return h0.empty() && h1.empty(); }
};

/// log_p |image| of a matrix, read off its Smith form.
inline int image_log_cardinality(const ModMatrix& m, const ZModPk& ring) {
    int total = 0;
    for (auto d : smith_diagonal(m, ring)) total += ring.k - ring.valuation(d);
    return total;
}

inline CohomologyReport cohomology_of_complex(const TwoTermComplex& c, const ZModPk& ring) {
    const auto diag = smith_diagonal(c.d0, ring);
    CohomologyReport r;
    for (auto d : diag) {
        const int e = ring.valuation(d);
        r.log_card_image += ring.k - e;
        if (e > 0) {
            r.h0.push_back(e);  // ann(p^e) in Z/p^k is a copy of Z/p^e
            r.h1.push_back(e);
        }
    }
    for (std::size_t i = diag.size(); i < c.d0.cols(); ++i) r.h0.push_back(ring.k);
    for (std::size_t i = diag.size(); i < c.d0.rows(); ++i) r.h1.push_back(ring.k);
    std::sort(r.h0.begin(), r.h0.end());
    std::sort(r.h1.begin(), r.h1.end());
    r.log_card_c0 = static_cast<int>(c.d0.cols()) * ring.k;
    r.log_card_c1 = static_cast<int>(c.d0.rows()) * ring.k;
    return r;
}

/// Exactness of C0 -a-> C1 -b-> C2 (with b a = 0) by cardinality counts. The complex is first split
/// into the direct summands spanned by connected blocks of nonzero entries.
inline bool three_term_acyclic(const ModMatrix& a, const ModMatrix& b, const ZModPk& ring) {
    const std::size_t n0 = a.cols(), n1 = a.rows(), n2 = b.rows();
    std::vector<std::size_t> parent(n0 + n1 + n2);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    };
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n0; ++j) {
            if (a(i, j) != 0) unite(n0 + i, j);
        }
    }
    for (std::size_t i = 0; i < n2; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            if (b(i, j) != 0) unite(n0 + n1 + i, n0 + j);
        }
    }
    std::vector<std::vector<std::size_t>> members(parent.size());
    for (std::size_t x = 0; x < parent.size(); ++x) members[find(x)].push_back(x);
    const int k = ring.k;
    for (const auto& comp : members) {
        if (comp.empty()) continue;
        std::vector<std::size_t> i0, i1, i2;
        for (std::size_t x : comp) {
            if (x < n0) {
                i0.push_back(x);
            } else if (x < n0 + n1) {
                i1.push_back(x - n0);
            } else {
                i2.push_back(x - n0 - n1);
            }
        }
        ModMatrix sa(i1.size(), i0.size(), ring);
        for (std::size_t r = 0; r < i1.size(); ++r) {
            for (std::size_t c = 0; c < i0.size(); ++c) sa(r, c) = a(i1[r], i0[c]);
        }
        ModMatrix sb(i2.size(), i1.size(), ring);
        for (std::size_t r = 0; r < i2.size(); ++r) {
            for (std::size_t c = 0; c < i1.size(); ++c) sb(r, c) = b(i2[r], i1[c]);
        }
        const int im_a = image_log_cardinality(sa, ring);
        const int im_b = image_log_cardinality(sb, ring);
        if (static_cast<int>(i0.size()) * k != im_a) return false;                   // ker a = 0
        if (static_cast<int>(i1.size()) * k - im_b != im_a) return false;           // ker b = im a
        if (im_b != static_cast<int>(i2.size()) * k) return false;                  // coker b = 0
    }
    return true;
}

/// The cone C0 -> C1 (+) D0 -> D1 of a chain map (f0, f1) between two-term complexes.
inline std::pair<ModMatrix, ModMatrix> cone_differentials(const TwoTermComplex& source, const TwoTermComplex& target,
                                                          const ModMatrix& f0, const ModMatrix& f1,
                                                          const ZModPk& ring) {
    if (!(multiply(f1, source.d0, ring) == multiply(target.d0, f0, ring))) {
        throw Error(ErrorKind::NotAChainMap, "f1 d0 != d0' f0");
    }
    const std::size_t c0 = source.d0.cols(), c1 = source.d0.rows();
    const std::size_t e0 = target.d0.cols(), e1 = target.d0.rows();
    ModMatrix a(c1 + e0, c0, ring);
    for (std::size_t i = 0; i < c1; ++i) {
        for (std::size_t j = 0; j < c0; ++j) a(i, j) = ring.neg(source.d0(i, j));
    }
    for (std::size_t i = 0; i < e0; ++i) {
        for (std::size_t j = 0; j < c0; ++j) a(c1 + i, j) = f0(i, j);
    }
    ModMatrix b(e1, c1 + e0, ring);
    for (std::size_t i = 0; i < e1; ++i) {
        for (std::size_t j = 0; j < c1; ++j) b(i, j) = f1(i, j);
        for (std::size_t j = 0; j < e0; ++j) b(i, c1 + j) = target.d0(i, j);
    }
    return {std::move(a), std::move(b)};
}

inline bool cone_acyclic(const TwoTermComplex& source, const TwoTermComplex& target, const ModMatrix& f0,
                         const ModMatrix& f1, const ZModPk& ring) {
    const auto [a, b] = cone_differentials(source, target, f0, f1, ring);
    return three_term_acyclic(a, b, ring);
}

}  // namespace qprism
