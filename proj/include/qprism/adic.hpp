#pragma once

// Torsion, boundedness, flatness and Koszul diagnostics for finitely presented modules
// over Z, Z/p^n, W(p,n,m) or Z[q] (the last one on a bounded q-degree window).
//
// Every base is flattened to a lattice over Z or Z/p^n. Base elements are polynomials in q;
// over Z and Z/p^n they are evaluated at q = 1.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/homology.hpp"
#include "qprism/mpoly.hpp"

namespace qprism {

enum class BaseKind { Z, Zpn, W, Zq };

inline BaseKind base_from_string(const std::string& s) {
    if (s == "Z") return BaseKind::Z;
    if (s == "Zpn") return BaseKind::Zpn;
    if (s == "W") return BaseKind::W;
    if (s == "Zq") return BaseKind::Zq;
    throw Error(ErrorKind::SpecError, "unknown base \"" + s + "\" (expected Z, Zq, Zpn or W)", "base");
}

inline const char* to_string(BaseKind b) {
    switch (b) {
        case BaseKind::Z: return "Z";
        case BaseKind::Zpn: return "Zpn";
        case BaseKind::W: return "W";
        case BaseKind::Zq: return "Zq";
    }
    return "?";
}

/// Cokernel of B^r -> B^g; each relation is a row of g base elements.
struct ModulePresentation {
    BaseKind base = BaseKind::Z;
    std::uint64_t p = 2;
    int n = 1;
    int m = 1;
    std::size_t generators = 0;
    std::vector<std::vector<MPoly>> relations;
    int zq_window = 12;  // q-degree window for the Z[q] base

    static ModulePresentation free_module(BaseKind base, std::uint64_t p, int n, int m, std::size_t rank) {
        ModulePresentation mp;
        mp.base = base;
        mp.p = p;
        mp.n = n;
        mp.m = m;
        mp.generators = rank;
        return mp;
    }

    [[nodiscard]] ModulePresentation with_relations(const std::vector<std::vector<MPoly>>& extra) const {
        ModulePresentation out = *this;
        out.relations.insert(out.relations.end(), extra.begin(), extra.end());
        return out;
    }

    /// M / aM.
    [[nodiscard]] ModulePresentation quotient_by(const MPoly& a) const {
        std::vector<std::vector<MPoly>> extra;
        for (std::size_t i = 0; i < generators; ++i) {
            std::vector<MPoly> row(generators);
            row[i] = a;
            extra.push_back(row);
        }
        return with_relations(extra);
    }
};

using Vec = std::vector<MPoly>;

namespace adic_detail {

/// Flattening of the base ring. Elements on window w occupy block(w) coordinates.
struct ZAdapter {
    IntegerRing ring;
    std::size_t block(int) const { return 1; }
    int degree(const MPoly&) const { return 0; }
    std::vector<MPoly> basis(int) const { return {MPoly::constant(1)}; }
    std::vector<Integer> flatten(const MPoly& a, int) const {
        return {a.at_q_equals_one().coefficient(Monomial{})};
    }
    MPoly unflatten(const std::vector<Integer>& v) const { return MPoly::constant(v[0]); }
};

struct ZpnAdapter {
    ZModPk ring;
    std::size_t block(int) const { return 1; }
    int degree(const MPoly&) const { return 0; }
    std::vector<MPoly> basis(int) const { return {MPoly::constant(1)}; }
    std::vector<std::uint64_t> flatten(const MPoly& a, int) const {
        return {ring.from_integer(a.at_q_equals_one().coefficient(Monomial{}))};
    }
    MPoly unflatten(const std::vector<std::uint64_t>& v) const { return MPoly::constant(Integer(v[0])); }
};

struct WAdapter {
    ZModPk ring;
    RingContext ctx;
    std::size_t block(int) const { return static_cast<std::size_t>(ctx.m_prec); }
    int degree(const MPoly&) const { return 0; }
    std::vector<MPoly> basis(int) const {
        std::vector<MPoly> out;
        const MPoly t = MPoly::q() - MPoly::constant(1);
        for (int b = 0; b < ctx.m_prec; ++b) out.push_back(t.pow(static_cast<unsigned>(b)));
        return out;
    }
    std::vector<std::uint64_t> flatten(const MPoly& a, int) const { return WScalar::from_poly(ctx, a).t_coeffs(); }
    MPoly unflatten(const std::vector<std::uint64_t>& v) const { return WScalar::from_t_coeffs(ctx, v).lift(); }
};

struct ZqAdapter {
    IntegerRing ring;
    std::size_t block(int w) const { return static_cast<std::size_t>(w + 1); }
    int degree(const MPoly& a) const { return a.is_zero() ? 0 : static_cast<int>(a.degree_in(var::q)); }
    std::vector<MPoly> basis(int w) const {
        std::vector<MPoly> out;
        for (int b = 0; b <= w; ++b) out.push_back(MPoly::variable(var::q, static_cast<std::uint32_t>(b)));
        return out;
    }
    std::vector<Integer> flatten(const MPoly& a, int w) const {
        std::vector<Integer> out(static_cast<std::size_t>(w + 1), 0);
        for (const auto& [mono, c] : a.terms()) {
            const int e = mono.empty() ? 0 : static_cast<int>(mono[0]);
            if (e > w) throw Error(ErrorKind::CapExceeded, "q-degree " + std::to_string(e) + " beyond window");
            out[static_cast<std::size_t>(e)] = c;
        }
        return out;
    }
    MPoly unflatten(const std::vector<Integer>& v) const {
        MPoly out;
        for (std::size_t b = 0; b < v.size(); ++b) out = out + v[b] * MPoly::variable(var::q, static_cast<std::uint32_t>(b));
        return out;
    }
};

template <class Ad>
using Value = typename decltype(Ad::ring)::value_type;

template <class Ad>
using Mat = Matrix<decltype(Ad::ring)>;

template <class Ad>
std::vector<Value<Ad>> flatten_vec(const Ad& ad, const Vec& v, int w) {
    std::vector<Value<Ad>> out;
    for (const auto& a : v) {
        auto part = ad.flatten(a, w);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

template <class Ad>
Mat<Ad> rows_to_matrix(const Ad& ad, const std::vector<std::vector<Value<Ad>>>& rows, std::size_t cols) {
    return from_rows(rows, cols, ad.ring);
}

/// All B-multiples of the given vectors of B^g that fit in window w, flattened.
template <class Ad>
Mat<Ad> multiples(const Ad& ad, const std::vector<Vec>& vecs, std::size_t g, int w) {
    std::vector<std::vector<Value<Ad>>> rows;
    for (const auto& v : vecs) {
        int deg = 0;
        for (const auto& a : v) deg = std::max(deg, ad.degree(a));
        if (deg > w) continue;
        for (const auto& e : ad.basis(w - deg)) {
            Vec ev;
            for (const auto& a : v) ev.push_back(e * a);
            rows.push_back(flatten_vec(ad, ev, w));
        }
    }
    return rows_to_matrix(ad, rows, g * ad.block(w));
}

template <class Ad>
Mat<Ad> relation_rows(const Ad& ad, const ModulePresentation& mp, int w) {
    return multiples(ad, mp.relations, mp.generators, w);
}

/// Matrix of multiplication by a from B^g on window w to window w + deg a.
template <class Ad>
Mat<Ad> action(const Ad& ad, const MPoly& a, std::size_t g, int w) {
    const int w2 = w + ad.degree(a);
    const auto basis = ad.basis(w);
    Mat<Ad> out(g * ad.block(w2), g * ad.block(w), ad.ring);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const auto img = ad.flatten(a * basis[b], w2);
            for (std::size_t r = 0; r < img.size(); ++r) out(i * ad.block(w2) + r, i * ad.block(w) + b) = img[r];
        }
    }
    return out;
}

/// Generators of {v on window w : a v = 0 in M}.
template <class Ad>
Mat<Ad> kernel_of(const Ad& ad, const ModulePresentation& mp, const MPoly& a, int w) {
    return preimage_of_relations(action(ad, a, mp.generators, w), relation_rows(ad, mp, w + ad.degree(a)), ad.ring);
}

template <class Ad>
bool contained(const Ad& ad, const Mat<Ad>& small, const Mat<Ad>& big) {
    if (small.rows() == 0) return true;
    return subquotient(small, big, ad.ring).trivial();
}

/// log_p of a finite p-group given by cyclic factors; nullopt when infinite or not a p-group.
inline std::optional<int> log_p_card(const std::vector<Integer>& factors, std::uint64_t p) {
    int total = 0;
    for (Integer d : factors) {
        if (d == 0) return std::nullopt;
        if (d < 0) d = -d;
        while (d % p == 0) {
            d /= p;
            ++total;
        }
        if (d != 1) return std::nullopt;
    }
    return total;
}

inline std::optional<int> log_p_card(const std::vector<std::uint64_t>& factors, const ZModPk& ring) {
    int total = 0;
    for (auto d : factors) total += ring.valuation(d);
    return total;
}

template <class Ad>
std::optional<int> log_card_of(const Ad& ad, const ModulePresentation& mp, int w, std::uint64_t p) {
    const std::size_t dim = mp.generators * ad.block(w);
    const auto factors = quotient_factors(relation_rows(ad, mp, w), dim, ad.ring);
    if constexpr (std::is_same_v<decltype(Ad::ring), ZModPk>) {
        return log_p_card(factors, ad.ring);
    } else {
        return log_p_card(factors, p);
    }
}

template <class Ad>
std::vector<std::string> factor_strings(const Ad& ad, const ModuleInvariants<decltype(Ad::ring)>& inv) {
    std::vector<std::string> out;
    for (const auto& d : inv.factors) {
        if constexpr (std::is_same_v<decltype(Ad::ring), ZModPk>) {
            out.push_back(d == 0 ? "p^" + std::to_string(ad.ring.k) : std::to_string(d));
        } else {
            out.push_back(d == 0 ? std::string("0") : Integer(d).str());
        }
    }
    return out;
}

}  // namespace adic_detail

struct TorsionReport {
    std::optional<int> bound;                          // nullopt: unbounded at cap
    std::vector<std::vector<std::string>> kernels;     // cyclic factors of ker f^b, b = 1, 2, ...
    int cap = 0;
    int window = 0;
};

struct FlatnessReport {
    bool g_torsion_free = false;
    std::optional<int> quotient_torsion_bound;
    bool bounded = false;
    bool reduction_free = false;  // M/IM free over B/I
    bool tor1_vanishes = false;
    bool completely_flat = false;
    bool formally_flat = false;
    int formal_window = 0;
};

struct KoszulComparison {
    bool is_complex = false;
    bool chain_map = false;
    bool cone_acyclic = false;
};

struct ProIsoReport {
    int bound = 0;
    std::vector<int> shifts;          // per n = 1..n_max
    std::vector<bool> h1_matches;     // H^1 of Kos(M, f^n) against M/f^nM
    std::vector<bool> topology_match; // f^m s in f^n M implies f^b s in f^{n-m+b} M
};

namespace adic_detail {

template <class Ad>
TorsionReport torsion_bound_impl(const Ad& ad, const ModulePresentation& mp, const MPoly& f, int cap) {
    TorsionReport r;
    r.cap = cap;
    r.window = mp.base == BaseKind::Zq ? mp.zq_window : 0;
    const int df = ad.degree(f);
    for (int b = 0; b <= cap; ++b) {
        const int w = r.window - (b + 1) * df;
        if (w < 0) break;
        const Mat<Ad> rel = relation_rows(ad, mp, w);
        const Mat<Ad> kb = b == 0 ? rel : kernel_of(ad, mp, f.pow(static_cast<unsigned>(b)), w);
        const Mat<Ad> kb1 = kernel_of(ad, mp, f.pow(static_cast<unsigned>(b + 1)), w);
        const Mat<Ad> base = kb.rows() == 0 ? rel : (rel.rows() == 0 ? kb : vstack(kb, rel, ad.ring));
        r.kernels.push_back(factor_strings(ad, subquotient(kb1, rel, ad.ring)));
        if (contained(ad, kb1, base)) {
            r.bound = b;
            r.kernels.pop_back();
            return r;
        }
    }
    return r;
}

/// Over a truncated base every non-unit is a zero divisor, so g-torsion is counted modulo ann(g) M:
/// only torsion that survives the truncation of the base itself.
template <class Ad>
bool torsion_free_impl(const Ad& ad, const ModulePresentation& mp, const MPoly& g) {
    const int w = (mp.base == BaseKind::Zq ? mp.zq_window : 0) - ad.degree(g);
    if (w < 0) return false;
    Mat<Ad> allowed = relation_rows(ad, mp, w);
    if (mp.base == BaseKind::Zpn || mp.base == BaseKind::W) {
        const auto ann = kernel_basis(action(ad, g, 1, 0), ad.ring);
        std::vector<Vec> vecs;
        for (const auto& a : ann) {
            for (std::size_t i = 0; i < mp.generators; ++i) {
                Vec v(mp.generators);
                v[i] = ad.unflatten(a);
                vecs.push_back(v);
            }
        }
        const Mat<Ad> extra = multiples(ad, vecs, mp.generators, w);
        if (extra.rows() > 0) allowed = allowed.rows() == 0 ? extra : vstack(allowed, extra, ad.ring);
    }
    return contained(ad, kernel_of(ad, mp, g, w), allowed);
}

/// M/JM is free over B/J, tested by cardinalities: |M/JM| = |B/J|^k with k = dim M/(p, q-1)M.
template <class Ad>
bool reduction_free_impl(const Ad& ad, const ModulePresentation& mp, const std::vector<MPoly>& ideal) {
    const int w = mp.base == BaseKind::Zq ? mp.zq_window : 0;
    ModulePresentation base_ring = ModulePresentation::free_module(mp.base, mp.p, mp.n, mp.m, 1);
    base_ring.zq_window = mp.zq_window;
    ModulePresentation mj = mp, bj = base_ring;
    for (const auto& a : ideal) {
        mj = mj.quotient_by(a);
        bj = bj.quotient_by(a);
    }
    ModulePresentation residue = mp.quotient_by(MPoly::constant(Integer(mp.p))).quotient_by(MPoly::q() - MPoly::constant(1));
    const auto lm = log_card_of(ad, mj, w, mp.p);
    const auto lb = log_card_of(ad, bj, w, mp.p);
    const auto k = log_card_of(ad, residue, w, mp.p);
    if (!lm || !lb || !k) return false;
    return *lm == *k * *lb;
}

/// Tor_1(M, B/I) = {u in B^r : uR in I B^g} / (I B^r + syzygies).
template <class Ad>
bool tor1_vanishes_impl(const Ad& ad, const ModulePresentation& mp, const std::vector<MPoly>& ideal) {
    const std::size_t r = mp.relations.size();
    if (r == 0) return true;
    int deg_r = 0;
    for (const auto& row : mp.relations) {
        for (const auto& a : row) deg_r = std::max(deg_r, ad.degree(a));
    }
    const int w_top = mp.base == BaseKind::Zq ? mp.zq_window : 0;
    const int w = w_top - deg_r;
    if (w < 0) return false;
    // u in B^r on window w maps to sum_i u_i R_i in B^g on window w_top
    const auto basis = ad.basis(w);
    Mat<Ad> rmap(mp.generators * ad.block(w_top), r * ad.block(w), ad.ring);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
            Vec img;
            for (const auto& a : mp.relations[i]) img.push_back(basis[b] * a);
            const auto flat = flatten_vec(ad, img, w_top);
            for (std::size_t row = 0; row < flat.size(); ++row) rmap(row, i * ad.block(w) + b) = flat[row];
        }
    }
    std::vector<Vec> ideal_g, ideal_r;
    for (const auto& a : ideal) {
        for (std::size_t i = 0; i < mp.generators; ++i) {
            Vec v(mp.generators);
            v[i] = a;
            ideal_g.push_back(v);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Vec v(r);
            v[i] = a;
            ideal_r.push_back(v);
        }
    }
    const Mat<Ad> ig = multiples(ad, ideal_g, mp.generators, w_top);
    const Mat<Ad> cycles = preimage_of_relations(rmap, ig, ad.ring);
    Mat<Ad> bound = multiples(ad, ideal_r, r, w);
    const auto syz = kernel_basis(rmap, ad.ring);
    if (!syz.empty()) bound = vstack(bound, rows_to_matrix(ad, syz, r * ad.block(w)), ad.ring);
    return contained(ad, cycles, bound);
}

template <class Ad>
FlatnessReport flatness_impl(const Ad& ad, const ModulePresentation& mp, const MPoly& f, const MPoly& g, int cap,
                             int formal_window) {
    FlatnessReport r;
    r.g_torsion_free = torsion_free_impl(ad, mp, g);
    r.quotient_torsion_bound = torsion_bound_impl(ad, mp.quotient_by(g), f, cap).bound;
    r.bounded = r.g_torsion_free && r.quotient_torsion_bound.has_value();
    r.reduction_free = reduction_free_impl(ad, mp, {f, g});
    r.tor1_vanishes = tor1_vanishes_impl(ad, mp, {f, g});
    r.completely_flat = r.reduction_free && r.tor1_vanishes;
    r.formal_window = formal_window;
    r.formally_flat = true;
    for (int j = 1; j <= formal_window; ++j) {
        std::vector<MPoly> power;
        for (int a = 0; a <= j; ++a) power.push_back(f.pow(static_cast<unsigned>(a)) * g.pow(static_cast<unsigned>(j - a)));
        if (!reduction_free_impl(ad, mp, power)) r.formally_flat = false;
    }
    return r;
}

template <class Ad>
PresentedComplex<decltype(Ad::ring)> presented_complex(const Ad& ad, const std::vector<ModulePresentation>& terms,
                                                       const std::vector<Mat<Ad>>& diffs) {
    PresentedComplex<decltype(Ad::ring)> c;
    for (const auto& t : terms) {
        c.dims.push_back(t.generators * ad.block(0));
        c.relations.push_back(relation_rows(ad, t, 0));
    }
    c.diffs = diffs;
    return c;
}

/// Block matrix of a map between direct sums of copies of the same free module: entry (i, j) is a scalar.
template <class Ad>
Mat<Ad> scalar_block_map(const Ad& ad, const std::vector<std::vector<MPoly>>& blocks, std::size_t g) {
    const std::size_t rows = blocks.size();
    const std::size_t cols = rows == 0 ? 0 : blocks[0].size();
    const std::size_t unit = g * ad.block(0);
    Mat<Ad> out(rows * unit, cols * unit, ad.ring);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const Mat<Ad> a = action(ad, blocks[i][j], g, 0);
            for (std::size_t r = 0; r < unit; ++r) {
                for (std::size_t c = 0; c < unit; ++c) out(i * unit + r, j * unit + c) = a(r, c);
            }
        }
    }
    return out;
}

template <class Ad>
ModulePresentation direct_sum(const ModulePresentation& mp, std::size_t copies) {
    ModulePresentation out = mp;
    out.generators = mp.generators * copies;
    out.relations.clear();
    for (std::size_t c = 0; c < copies; ++c) {
        for (const auto& row : mp.relations) {
            Vec v(out.generators);
            for (std::size_t i = 0; i < mp.generators; ++i) v[c * mp.generators + i] = row[i];
            out.relations.push_back(v);
        }
    }
    return out;
}

template <class Ad>
PresentedComplex<decltype(Ad::ring)> koszul_one(const Ad& ad, const ModulePresentation& mp, const MPoly& f) {
    return presented_complex(ad, {mp, mp}, {action(ad, f, mp.generators, 0)});
}

template <class Ad>
PresentedComplex<decltype(Ad::ring)> koszul_two(const Ad& ad, const ModulePresentation& mp, const MPoly& f,
                                                const MPoly& g) {
    const MPoly neg_g = MPoly::constant(-1) * g;
    return presented_complex(ad, {mp, direct_sum<Ad>(mp, 2), mp},
                             {scalar_block_map(ad, {{g}, {f}}, mp.generators),
                              scalar_block_map(ad, {{f, neg_g}}, mp.generators)});
}

template <class Ad>
KoszulComparison koszul_comparison_impl(const Ad& ad, const ModulePresentation& mp, const MPoly& f, const MPoly& g) {
    const auto& ring = ad.ring;
    KoszulComparison out;
    const auto kos = koszul_two(ad, mp, f, g);
    const ModulePresentation mg = mp.quotient_by(g);
    ModulePresentation zero = mp;
    zero.generators = 0;
    zero.relations.clear();
    const std::size_t dim = mp.generators * ad.block(0);
    Mat<Ad> to_zero(0, dim, ring);
    auto target = presented_complex(ad, {zero, mg, mg}, {Mat<Ad>(dim, 0, ring), action(ad, f, mp.generators, 0)});
    Mat<Ad> proj1(dim, 2 * dim, ring);
    for (std::size_t i = 0; i < dim; ++i) proj1(i, i) = ring.one();
    std::vector<Mat<Ad>> map{to_zero, proj1, Mat<Ad>::identity(dim, ring)};
    out.is_complex = is_complex(kos, ring);
    out.chain_map = is_chain_map(kos, target, map, ring);
    if (out.chain_map) out.cone_acyclic = acyclic(mapping_cone(kos, target, map, ring), ring);
    return out;
}

template <class Ad>
ProIsoReport pro_iso_impl(const Ad& ad, const ModulePresentation& mp, const MPoly& f, int n_max, int cap) {
    const auto& ring = ad.ring;
    const TorsionReport tr = torsion_bound_impl(ad, mp, f, cap);
    if (!tr.bound) throw Error(ErrorKind::NotBounded, "f-power torsion does not stabilize below cap " + std::to_string(cap));
    ProIsoReport out;
    out.bound = *tr.bound;
    const std::size_t g = mp.generators;
    const Mat<Ad> rel = relation_rows(ad, mp, 0);
    auto fp = [&](int e) { return f.pow(static_cast<unsigned>(e)); };
    auto image_plus_rel = [&](int e) {
        const Mat<Ad> im = action(ad, fp(e), g, 0).transpose();
        return rel.rows() == 0 ? im : vstack(im, rel, ring);
    };
    for (int n = 1; n <= n_max; ++n) {
        std::optional<int> shift;
        for (int s = 0; s <= cap && !shift; ++s) {
            const Mat<Ad> ker = kernel_of(ad, mp, fp(n + s), 0);
            const Mat<Ad> moved = ker.rows() == 0 ? ker : multiply(ker, action(ad, fp(s), g, 0).transpose(), ring);
            if (contained(ad, moved, rel)) shift = s;
        }
        out.shifts.push_back(shift.value_or(-1));

        const auto kos = koszul_one(ad, mp, fp(n));
        const auto h1 = cohomology(kos, 1, ring);
        const auto direct = ModuleInvariants<decltype(Ad::ring)>{
            quotient_factors(image_plus_rel(n), g * ad.block(0), ring)};
        auto sorted = [](auto v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        out.h1_matches.push_back(sorted(h1.factors) == sorted(direct.factors));

        bool topo = true;
        for (int m = 1; m <= n; ++m) {
            const Mat<Ad> s1 = preimage_of_relations(action(ad, fp(m), g, 0), image_plus_rel(n), ring);
            if (s1.rows() == 0) continue;
            const Mat<Ad> pushed = multiply(s1, action(ad, fp(out.bound), g, 0).transpose(), ring);
            if (!contained(ad, pushed, image_plus_rel(n - m + out.bound))) topo = false;
        }
        out.topology_match.push_back(topo);
    }
    return out;
}

template <class F>
decltype(auto) with_adapter(const ModulePresentation& mp, F&& fn) {
    switch (mp.base) {
        case BaseKind::Z: return fn(ZAdapter{});
        case BaseKind::Zpn: return fn(ZpnAdapter{ZModPk::make(mp.p, mp.n)});
        case BaseKind::W: return fn(WAdapter{ZModPk::make(mp.p, mp.n), RingContext::make(mp.p, mp.n, mp.m)});
        case BaseKind::Zq: return fn(ZqAdapter{});
    }
    throw Error(ErrorKind::InvalidArgs, "unknown base");
}

inline void require_finite_flattening(const ModulePresentation& mp, const char* what) {
    if (mp.base == BaseKind::Zq) {
        throw Error(ErrorKind::InvalidArgs, std::string(what) + " is not available over the windowed Z[q] base");
    }
}

inline void validate(const ModulePresentation& mp) {
    if (!is_prime(mp.p)) throw Error(ErrorKind::SpecError, "p must be prime", "p");
    for (const auto& row : mp.relations) {
        if (row.size() != mp.generators) {
            throw Error(ErrorKind::SpecError, "relation row has " + std::to_string(row.size()) + " entries, expected " +
                                                  std::to_string(mp.generators), "relations");
        }
        for (const auto& a : row) {
            if (!a.only_q()) throw Error(ErrorKind::SpecError, "relation entries must be polynomials in q", "relations");
        }
    }
}

}  // namespace adic_detail

inline MPoly default_f(const ModulePresentation& mp) { return MPoly::constant(Integer(mp.p)); }
inline MPoly default_g(const ModulePresentation& mp) { return to_mpoly(q_int_exact(mp.p)); }

inline TorsionReport torsion_bound(const ModulePresentation& mp, const MPoly& f, int cap) {
    adic_detail::validate(mp);
    return adic_detail::with_adapter(mp, [&](const auto& ad) { return adic_detail::torsion_bound_impl(ad, mp, f, cap); });
}

inline FlatnessReport bounded_and_flat_check(const ModulePresentation& mp, const MPoly& f, const MPoly& g, int cap = 8,
                                             int formal_window = 3) {
    adic_detail::validate(mp);
    return adic_detail::with_adapter(
        mp, [&](const auto& ad) { return adic_detail::flatness_impl(ad, mp, f, g, cap, formal_window); });
}

/// Kos(M, f, g) against [M/gM -f-> M/gM] placed in degrees 1, 2.
inline KoszulComparison koszul_reduction_check(const ModulePresentation& mp, const MPoly& f, const MPoly& g) {
    adic_detail::validate(mp);
    adic_detail::require_finite_flattening(mp, "Koszul comparison");
    return adic_detail::with_adapter(mp, [&](const auto& ad) { return adic_detail::koszul_comparison_impl(ad, mp, f, g); });
}

/// Cyclic factors of H^0, H^1 (and H^2) of Kos(M, f^n) or Kos(M, f^n, g^m).
struct KoszulCohomology {
    std::vector<std::vector<std::string>> h;
};

inline KoszulCohomology koszul_build(const ModulePresentation& mp, const MPoly& f, int n,
                                     const std::optional<MPoly>& g = std::nullopt, int mexp = 1) {
    adic_detail::validate(mp);
    adic_detail::require_finite_flattening(mp, "Koszul complex");
    if (n < 1 || mexp < 1) throw Error(ErrorKind::InvalidArgs, "Koszul exponents must be >= 1");
    return adic_detail::with_adapter(mp, [&](const auto& ad) {
        const MPoly fn = f.pow(static_cast<unsigned>(n));
        const auto kos = g ? adic_detail::koszul_two(ad, mp, fn, g->pow(static_cast<unsigned>(mexp)))
                           : adic_detail::koszul_one(ad, mp, fn);
        KoszulCohomology out;
        for (std::size_t i = 0; i < kos.length(); ++i) {
            out.h.push_back(adic_detail::factor_strings(ad, cohomology(kos, i, ad.ring)));
        }
        return out;
    });
}

inline ProIsoReport pro_iso_check(const ModulePresentation& mp, const MPoly& f, int n_max, int cap = 8) {
    adic_detail::validate(mp);
    adic_detail::require_finite_flattening(mp, "pro-system comparison");
    return adic_detail::with_adapter(mp, [&](const auto& ad) { return adic_detail::pro_iso_impl(ad, mp, f, n_max, cap); });
}

}  // namespace qprism
