#pragma once

// Local Cartier transform: a level -1 connection M' over A' = W[x'] is raised to the
// level 0 connection M = A (x)_{A'} M' over A = W[x] (x' = x^p), and the Frobenius
// comparison (F, [F]) between their de Rham complexes is checked to be a quasi-isomorphism.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/homology.hpp"
#include "qprism/twisted_calculus.hpp"

namespace qprism {

/// Which form of the operator on the k-th block is used.
/// Exact: L_k(s) = q^k x' theta'(s) + (k)_q s, what theta(x^k s) = x^{k-1} L_k(s) forces.
/// Unweighted: L_k(s) = x' theta'(s) + (k)_q s, which agrees with Exact only at q = 1.
enum class BlockOperator { Exact, Unweighted };

inline const char* to_string(BlockOperator b) { return b == BlockOperator::Exact ? "exact" : "unweighted"; }

struct CartierProblem {
    ConnectionModule conn_prime;  // level -1 over A'
    int degree_window = 4;
    int iterate_cap = 64;
};

/// Window of M matching the window D of M': x-degrees up to p(D+1) - 1.
inline int raised_window(int window, std::uint64_t p) { return static_cast<int>(p) * (window + 1) - 1; }

inline void require_level(const ConnectionModule& m, Level level, const char* what) {
    if (m.level != level) {
        throw Error(ErrorKind::WrongLevel, std::string(what) + " needs a level " + std::to_string(to_int(level)) +
                                               " connection");
    }
}

/// F: x' -> x^p on coefficients.
inline Section frobenius_pullback(const Section& s, std::uint64_t p, std::optional<int> window) {
    Section out;
    for (const auto& f : s) out.push_back(f.substitute_x_power(static_cast<int>(p), window));
    return out;
}

/// [F]: the coefficient of dx' goes to x^{p-1} F(coefficient), the coefficient of d_q x.
inline Section divided_frobenius(const Section& s, std::uint64_t p, std::optional<int> window) {
    Section out;
    for (const auto& f : s) out.push_back(f.substitute_x_power(static_cast<int>(p), window).shift(static_cast<int>(p) - 1));
    return out;
}

/// Level 0 connection on M = A (x) M' with Theta = x^{p-1} F(Theta').
inline ConnectionModule level_raise(const ConnectionModule& conn_prime) {
    require_level(conn_prime, Level::MinusOne, "level_raise");
    const std::uint64_t p = conn_prime.ctx.p;
    std::optional<int> window;
    if (conn_prime.degree_window) window = raised_window(*conn_prime.degree_window, p);
    ConnectionModule m = ConnectionModule::trivial(conn_prime.ctx, conn_prime.rank, Level::Zero, window);
    for (std::size_t i = 0; i < m.rank; ++i) {
        for (std::size_t j = 0; j < m.rank; ++j) {
            m.theta[i][j] = conn_prime.theta[i][j].substitute_x_power(static_cast<int>(p), window).shift(static_cast<int>(p) - 1);
        }
    }
    return m;
}

/// L_k on windowed sections of M'.
inline Section block_operator(const ConnectionModule& conn_prime_w, const Section& s, int k, BlockOperator variant) {
    const RingContext& ctx = conn_prime_w.ctx;
    const WScalar weight = variant == BlockOperator::Exact ? WScalar::q(ctx).pow(static_cast<std::uint64_t>(k))
                                                           : WScalar::one(ctx);
    const WScalar kq = q_int(static_cast<std::uint64_t>(k), 1, ctx);
    const Section th = connection_apply(conn_prime_w, s);
    Section out = zero_section(ctx, s.size(), conn_prime_w.degree_window);
    for (std::size_t j = 0; j < s.size(); ++j) out[j] = weight * th[j].shift(1) + kq * s[j];
    return out;
}

/// The de Rham complexes of M' (level -1) and of M (level 0) on matching stable windows, with (F, [F]).
struct CartierComplexes {
    RingContext ctx;
    int requested_window = 0;
    int effective_window = 0;  // D*, theta'-stable
    int raised_window = 0;     // p(D*+1) - 1, theta-stable
    ConnectionModule source;   // M' on window D*
    ConnectionModule target;   // M on the raised window
    TwoTermComplex source_complex;
    TwoTermComplex target_complex;
    ModMatrix f0;
    ModMatrix f1;
};

inline CartierComplexes build_cartier_complexes(const ConnectionModule& conn_prime, int requested_window) {
    require_level(conn_prime, Level::MinusOne, "cartier");
    CartierComplexes c;
    c.ctx = conn_prime.ctx;
    c.requested_window = requested_window;
    c.effective_window = stable_window(requested_window, Level::MinusOne, c.ctx);
    c.raised_window = raised_window(c.effective_window, c.ctx.p);
    if (!degree_factor(c.raised_window + 1, Level::Zero, c.ctx).is_zero()) {
        throw Error(ErrorKind::WindowUnstable, "raised window is not theta-stable");
    }
    c.source = conn_prime.with_window(c.effective_window);
    c.target = level_raise(c.source);
    const std::size_t r = conn_prime.rank;
    const std::uint64_t p = c.ctx.p;
    c.source_complex.d0 = de_rham_matrix(c.source, c.effective_window);
    c.target_complex.d0 = de_rham_matrix(c.target, c.raised_window);
    const int e = c.raised_window;
    c.f0 = flatten_operator(r, c.effective_window, r, e, c.ctx,
                            [&](const Section& s) { return frobenius_pullback(s, p, e); });
    c.f1 = flatten_operator(r, c.effective_window, r, e, c.ctx,
                            [&](const Section& s) { return divided_frobenius(s, p, e); });
    return c;
}

struct ChainMapCheck {
    bool chain_map_ok = false;
    bool verschiebung_ok = false;
};

/// (F, [F]) and the Verschiebung comparison (identity on M, (p)_q on forms) into [M -> M] with differential (p)_q theta.
inline ChainMapCheck chain_map_build(const CartierComplexes& c) {
    const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
    ChainMapCheck out;
    out.chain_map_ok = multiply(c.f1, c.source_complex.d0, ring) == multiply(c.target_complex.d0, c.f0, ring);
    const std::size_t n = c.target_complex.d0.cols();
    const int e = c.raised_window;
    const WScalar dq = q_int(c.ctx.p, 1, c.ctx);
    auto scale_by_dq = [&](const Section& s) {
        Section o;
        for (const auto& f : s) o.push_back(dq * f);
        return o;
    };
    const ModMatrix v1 = flatten_operator(c.target.rank, e, c.target.rank, e, c.ctx, scale_by_dq);
    const ModMatrix d_target = flatten_operator(c.target.rank, e, c.target.rank, e, c.ctx, [&](const Section& s) {
        return scale_by_dq(connection_apply(c.target, s));
    });
    out.verschiebung_ok = multiply(v1, c.target_complex.d0, ring) == multiply(d_target, ModMatrix::identity(n, ring), ring);
    return out;
}

struct BlockCertificate {
    int k = 0;
    BlockOperator variant = BlockOperator::Exact;
    bool triangular = false;       // no component lowers the x'-degree
    bool scalar_diagonal = false;  // the degree-preserving part is multiplication by one scalar u_n per degree
    bool diagonal_units = false;   // every u_n is a unit of W
    bool kernel_trivial = false;   // Howell kernel of the flattened operator is zero
    std::vector<WScalar> diagonal;

    [[nodiscard]] bool ok() const { return triangular && scalar_diagonal && diagonal_units && kernel_trivial; }
};

inline ModMatrix block_matrix(const CartierComplexes& c, int k, BlockOperator variant) {
    const int d = c.effective_window;
    return flatten_operator(c.source.rank, d, c.source.rank, d, c.ctx,
                            [&](const Section& s) { return block_operator(c.source, s, k, variant); });
}

inline BlockCertificate certify_block(const CartierComplexes& c, int k, BlockOperator variant) {
    const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
    const ModMatrix lk = block_matrix(c, k, variant);
    const std::size_t m = static_cast<std::size_t>(c.ctx.m_prec);
    const std::size_t r = c.source.rank;
    const int d = c.effective_window;
    auto index = [&](std::size_t j, int n, std::size_t b) {
        return (j * static_cast<std::size_t>(d + 1) + static_cast<std::size_t>(n)) * m + b;
    };
    BlockCertificate cert;
    cert.k = k;
    cert.variant = variant;
    cert.triangular = true;
    cert.scalar_diagonal = true;
    cert.diagonal_units = true;
    for (int n = 0; n <= d; ++n) {
        // u_n read off the image of x'^n e_0
        std::vector<std::uint64_t> un(m);
        for (std::size_t b = 0; b < m; ++b) un[b] = lk(index(0, n, b), index(0, n, 0));
        const WScalar u = WScalar::from_t_coeffs(c.ctx, un);
        cert.diagonal.push_back(u);
        if (!u.is_unit()) cert.diagonal_units = false;
        for (std::size_t j = 0; j < r; ++j) {
            for (std::size_t b = 0; b < m; ++b) {
                std::vector<std::uint64_t> tb(m, 0);
                tb[b] = 1;
                const WScalar expected = u * WScalar::from_t_coeffs(c.ctx, tb);
                for (std::size_t i = 0; i < r; ++i) {
                    for (int n2 = 0; n2 <= n; ++n2) {
                        for (std::size_t b2 = 0; b2 < m; ++b2) {
                            const std::uint64_t v = lk(index(i, n2, b2), index(j, n, b));
                            if (n2 < n) {
                                if (v != 0) cert.triangular = false;
                            } else {
                                const std::uint64_t want = i == j ? expected[b2] : 0;
                                if (v != want) cert.scalar_diagonal = false;
                            }
                        }
                    }
                }
            }
        }
    }
    const auto ker = kernel_basis(lk, ring);
    cert.kernel_trivial = true;
    for (const auto& v : ker) {
        for (auto x : v) {
            if (x != 0) cert.kernel_trivial = false;
        }
    }
    return cert;
}

/// theta(x^k F(s)) == x^{k-1} F(L_k(s)) in the raised window.
inline bool block_identity_holds(const CartierComplexes& c, const Section& s, int k, BlockOperator variant) {
    const std::uint64_t p = c.ctx.p;
    const int e = c.raised_window;
    Section lifted = frobenius_pullback(s, p, e);
    for (auto& f : lifted) f = f.shift(k);
    const Section lhs = connection_apply(c.target, lifted);
    Section rhs = frobenius_pullback(block_operator(c.source, s, k, variant), p, e);
    for (auto& f : rhs) f = f.shift(k - 1);
    for (std::size_t j = 0; j < lhs.size(); ++j) {
        if (lhs[j].with_window(e) != rhs[j].with_window(e)) return false;
    }
    return true;
}

struct BlockSplit {
    bool block0_chain_map = false;
    std::vector<BlockCertificate> blocks;  // k = 1..p-1
};

inline BlockSplit block_split(const CartierComplexes& c, BlockOperator variant = BlockOperator::Exact) {
    BlockSplit out;
    out.block0_chain_map = chain_map_build(c).chain_map_ok;
    for (int k = 1; k < static_cast<int>(c.ctx.p); ++k) out.blocks.push_back(certify_block(c, k, variant));
    return out;
}

struct CartierVerdicts {
    bool nilpotent = false;
    bool chain_map_ok = false;
    bool verschiebung_ok = false;
    std::vector<BlockCertificate> blocks;
    bool cone_acyclic = false;

    [[nodiscard]] bool blocks_ok() const {
        for (const auto& b : blocks) {
            if (!b.ok()) return false;
        }
        return true;
    }
    [[nodiscard]] bool all() const { return nilpotent && chain_map_ok && verschiebung_ok && blocks_ok() && cone_acyclic; }
    [[nodiscard]] bool same_outcome(const CartierVerdicts& o) const {
        if (blocks.size() != o.blocks.size()) return false;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].ok() != o.blocks[i].ok()) return false;
        }
        return nilpotent == o.nilpotent && chain_map_ok == o.chain_map_ok && verschiebung_ok == o.verschiebung_ok &&
               cone_acyclic == o.cone_acyclic;
    }
};

struct CartierReport {
    CartierVerdicts base;
    int requested_window = 0;
    int effective_window = 0;
    int raised_window = 0;
    std::optional<CartierVerdicts> grown;
    std::optional<int> grown_effective_window;

    [[nodiscard]] bool stable() const { return !grown || base.same_outcome(*grown); }
    [[nodiscard]] bool all() const { return base.all() && stable() && (!grown || grown->all()); }
};

inline CartierVerdicts run_cartier_checks(const CartierComplexes& c, int iterate_cap) {
    const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
    CartierVerdicts v;
    v.nilpotent = quasi_nilpotence_check(c.source, iterate_cap).nilpotent;
    const ChainMapCheck cm = chain_map_build(c);
    v.chain_map_ok = cm.chain_map_ok;
    v.verschiebung_ok = cm.verschiebung_ok;
    v.blocks = block_split(c, BlockOperator::Exact).blocks;
    if (v.chain_map_ok) v.cone_acyclic = cone_acyclic(c.source_complex, c.target_complex, c.f0, c.f1, ring);
    return v;
}

/// Canonical lift of a connection to a finer truncation of the same p.
inline ConnectionModule lift_connection(const ConnectionModule& m, const RingContext& finer) {
    ConnectionModule out = ConnectionModule::trivial(finer, m.rank, m.level, m.degree_window);
    for (std::size_t i = 0; i < m.rank; ++i) {
        for (std::size_t j = 0; j < m.rank; ++j) {
            const QPolynomial& f = m.theta[i][j];
            QPolynomial g(finer, m.degree_window);
            for (int n = 0; n <= f.degree(); ++n) g.set(n, WScalar::from_poly(finer, f.coefficient(n).lift()));
            out.theta[i][j] = g;
        }
    }
    return out;
}

/// Full verification; with grow set, reruns at (N+1, M+1) on the requested window plus 2.
inline CartierReport cartier_verify(const CartierProblem& problem, bool grow = true) {
    CartierReport report;
    const CartierComplexes c = build_cartier_complexes(problem.conn_prime, problem.degree_window);
    report.requested_window = c.requested_window;
    report.effective_window = c.effective_window;
    report.raised_window = c.raised_window;
    report.base = run_cartier_checks(c, problem.iterate_cap);
    if (grow) {
        const RingContext& ctx = problem.conn_prime.ctx;
        const RingContext finer = ctx.with_precision(ctx.n_prec + 1, ctx.m_prec + 1);
        const CartierComplexes g =
            build_cartier_complexes(lift_connection(problem.conn_prime, finer), problem.degree_window + 2);
        report.grown = run_cartier_checks(g, problem.iterate_cap);
        report.grown_effective_window = g.effective_window;
    }
    return report;
}

/// phi on the level -1 de Rham complex of A: phi_A on functions, (p)_q x^{p-1} phi_A on form coefficients.
struct SemilinearFrobenius {
    int window = 0;         // source window D*
    int target_window = 0;  // p(D*+1) - 1
    bool chain_map_ok = false;
    bool monomials_ok = false;
};

inline SemilinearFrobenius semilinear_frobenius(const RingContext& ctx, int requested_window) {
    const ZModPk ring = ZModPk::make(ctx.p, ctx.n_prec);
    SemilinearFrobenius out;
    out.window = stable_window(requested_window, Level::MinusOne, ctx);
    out.target_window = raised_window(out.window, ctx.p);
    if (!degree_factor(out.target_window + 1, Level::MinusOne, ctx).is_zero()) {
        throw Error(ErrorKind::WindowUnstable, "Frobenius target window is not theta-stable");
    }
    const int d = out.window, e = out.target_window;
    const ConnectionModule src = ConnectionModule::trivial(ctx, 1, Level::MinusOne, d);
    const ConnectionModule dst = ConnectionModule::trivial(ctx, 1, Level::MinusOne, e);
    const WScalar dq = q_int(ctx.p, 1, ctx);
    const int p = static_cast<int>(ctx.p);
    auto phi0 = [&](const Section& s) { return Section{s[0].frobenius(e)}; };
    auto phi1 = [&](const Section& s) { return Section{dq * s[0].frobenius(e).shift(p - 1)}; };
    const ModMatrix f0 = flatten_operator(1, d, 1, e, ctx, phi0);
    const ModMatrix f1 = flatten_operator(1, d, 1, e, ctx, phi1);
    out.chain_map_ok = multiply(f1, de_rham_matrix(src, d), ring) == multiply(de_rham_matrix(dst, e), f0, ring);
    out.monomials_ok = true;
    for (int n = 0; n <= requested_window; ++n) {
        const Section xn{QPolynomial::monomial(WScalar::one(ctx), n, d)};
        const Section lhs = connection_apply(dst, phi0(xn));
        const Section rhs = phi1(connection_apply(src, xn));
        if (lhs[0] != rhs[0]) out.monomials_ok = false;
    }
    return out;
}

}  // namespace qprism
