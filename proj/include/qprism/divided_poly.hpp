#pragma once

// Truncated divided-polynomial coalgebra A<w> over A = W[x]: basis w^{k}, k <= cap,
// comultiplication w^{k} -> sum_{i+j=k} w^{i} (x) w^{j}, and prismatic differential operators.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/homology.hpp"
#include "qprism/twisted_calculus.hpp"

namespace qprism {

struct DividedElement {
    RingContext ctx;
    int dp_cap = 0;
    std::optional<int> window;
    std::vector<QPolynomial> coeffs;  // coeffs[k] multiplies w^{k}

    static DividedElement zero(const RingContext& ctx, int dp_cap, std::optional<int> window = std::nullopt) {
        if (dp_cap < 0) throw Error(ErrorKind::InvalidArgs, "dp_cap must be >= 0", "dp_cap");
        return {ctx, dp_cap, window, std::vector<QPolynomial>(static_cast<std::size_t>(dp_cap) + 1, QPolynomial(ctx, window))};
    }

    static DividedElement basis(const RingContext& ctx, int k, int dp_cap, std::optional<int> window = std::nullopt) {
        if (k < 0 || k > dp_cap) throw Error(ErrorKind::CapExceeded, "w^{" + std::to_string(k) + "} beyond cap");
        DividedElement e = zero(ctx, dp_cap, window);
        e.coeffs[static_cast<std::size_t>(k)] = QPolynomial::constant(WScalar::one(ctx), window);
        return e;
    }

    [[nodiscard]] const QPolynomial& operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }
    QPolynomial& operator[](int k) { return coeffs[static_cast<std::size_t>(k)]; }

    [[nodiscard]] bool is_zero() const {
        for (const auto& c : coeffs) {
            if (!c.is_zero()) return false;
        }
        return true;
    }

    DividedElement& operator+=(const DividedElement& o) {
        for (int k = 0; k <= dp_cap && k <= o.dp_cap; ++k) (*this)[k] += o[k];
        return *this;
    }
    friend DividedElement operator+(DividedElement a, const DividedElement& b) { return a += b; }

    friend bool operator==(const DividedElement& a, const DividedElement& b) {
        return a.dp_cap == b.dp_cap && a.coeffs == b.coeffs;
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (int k = 0; k <= dp_cap; ++k) {
            if ((*this)[k].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "[" + (*this)[k].to_string() + "]*w{" + std::to_string(k) + "}";
        }
        return out.empty() ? "0" : out;
    }
};

/// The k+1 index pairs (i, j), i + j = k, of the comultiplication, each with unit coefficient.
inline std::vector<std::pair<int, int>> comultiply(int k, int dp_cap) {
    if (k < 0 || k > dp_cap) {
        throw Error(ErrorKind::CapExceeded, "divided degree " + std::to_string(k) + " beyond cap " + std::to_string(dp_cap));
    }
    std::vector<std::pair<int, int>> out;
    for (int i = k; i >= 0; --i) out.emplace_back(i, k - i);
    return out;
}

/// Coefficient of dx after Delta followed by id (x) d~, where d~(w) = 1 and d~(w^{k}) = 0 otherwise.
inline DividedElement linearized_differential(const DividedElement& e) {
    DividedElement out = DividedElement::zero(e.ctx, e.dp_cap, e.window);
    for (int k = 0; k <= e.dp_cap; ++k) {
        for (auto [i, j] : comultiply(k, e.dp_cap)) {
            if (j == 1) out[i] += e[k];
        }
    }
    return out;
}

/// Structure constants w^{i} w^{j} = sum_k c_k w^{k}; the ring structure itself is supplied by the caller.
struct MultiplicationTable {
    std::string name;
    std::function<std::vector<std::pair<int, WScalar>>(int, int, const RingContext&)> product;
};

/// w^{i} w^{j} = C(i+j, i) w^{i+j}.
inline MultiplicationTable classical_table() {
    return {"classical", [](int i, int j, const RingContext& ctx) {
                return std::vector<std::pair<int, WScalar>>{
                    {i + j, WScalar::constant(ctx, binomial(Integer(i + j), static_cast<unsigned>(i)))}};
            }};
}

/// w^{i} w^{j} = C(i+j, i)_{q^p} w^{i+j}.
inline MultiplicationTable q_power_table() {
    return {"q^p-binomial", [](int i, int j, const RingContext& ctx) {
                return std::vector<std::pair<int, WScalar>>{{i + j, q_binomial(i + j, i, ctx.p, ctx)}};
            }};
}

inline DividedElement multiply(const DividedElement& a, const DividedElement& b, const MultiplicationTable& table) {
    DividedElement out = DividedElement::zero(a.ctx, a.dp_cap, a.window);
    for (int i = 0; i <= a.dp_cap; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j <= b.dp_cap; ++j) {
            if (b[j].is_zero()) continue;
            const QPolynomial ab = a[i] * b[j];
            for (const auto& [k, c] : table.product(i, j, a.ctx)) {
                if (k <= out.dp_cap) out[k] += c * ab;
            }
        }
    }
    return out;
}

/// Taylor map f(x) -> f(x + d w) with d = (p)_q.
inline DividedElement taylor(const QPolynomial& f, int dp_cap, const MultiplicationTable& table) {
    const RingContext& ctx = f.context();
    DividedElement shifted = DividedElement::zero(ctx, dp_cap, f.window());
    shifted[0] = QPolynomial::x(ctx, f.window());
    if (dp_cap >= 1) shifted[1] = QPolynomial::constant(q_int(ctx.p, 1, ctx), f.window());
    DividedElement power = DividedElement::basis(ctx, 0, dp_cap, f.window());
    DividedElement out = DividedElement::zero(ctx, dp_cap, f.window());
    for (int n = 0; n <= f.degree(); ++n) {
        const WScalar c = f.coefficient(n);
        if (!c.is_zero()) {
            for (int k = 0; k <= dp_cap; ++k) out[k] += c * power[k];
        }
        power = multiply(power, shifted, table);
    }
    return out;
}

struct TableAxiomReport {
    bool commutative = true;
    bool associative = true;
    bool unital = true;
    bool comultiplicative = true;

    [[nodiscard]] bool all() const { return commutative && associative && unital && comultiplicative; }
};

/// Axioms of a structure-constant table on degrees <= cap, Delta-multiplicativity included.
inline TableAxiomReport check_table_axioms(const MultiplicationTable& table, const RingContext& ctx, int cap) {
    TableAxiomReport r;
    auto basis = [&](int k) { return DividedElement::basis(ctx, k, cap); };
    for (int i = 0; i <= cap; ++i) {
        if (!(multiply(basis(0), basis(i), table) == basis(i))) r.unital = false;
        for (int j = 0; i + j <= cap; ++j) {
            if (!(multiply(basis(i), basis(j), table) == multiply(basis(j), basis(i), table))) r.commutative = false;
            for (int k = 0; i + j + k <= cap; ++k) {
                const auto lhs = multiply(multiply(basis(i), basis(j), table), basis(k), table);
                const auto rhs = multiply(basis(i), multiply(basis(j), basis(k), table), table);
                if (!(lhs == rhs)) r.associative = false;
            }
            // Delta(w^i w^j) against Delta(w^i) Delta(w^j), componentwise on w^a (x) w^b.
            std::vector<std::vector<WScalar>> lhs(static_cast<std::size_t>(cap) + 1,
                                                  std::vector<WScalar>(static_cast<std::size_t>(cap) + 1, WScalar::zero(ctx)));
            auto rhs = lhs;
            for (const auto& [k, c] : table.product(i, j, ctx)) {
                if (k > cap) continue;
                for (auto [a, b] : comultiply(k, cap)) lhs[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += c;
            }
            for (auto [a1, b1] : comultiply(i, cap)) {
                for (auto [a2, b2] : comultiply(j, cap)) {
                    for (const auto& [ka, ca] : table.product(a1, a2, ctx)) {
                        for (const auto& [kb, cb] : table.product(b1, b2, ctx)) {
                            if (ka <= cap && kb <= cap) rhs[static_cast<std::size_t>(ka)][static_cast<std::size_t>(kb)] += ca * cb;
                        }
                    }
                }
            }
            if (lhs != rhs) r.comultiplicative = false;
        }
    }
    return r;
}

using PolyMatrix = std::vector<std::vector<QPolynomial>>;

inline PolyMatrix zero_poly_matrix(const RingContext& ctx, std::size_t rows, std::size_t cols,
                                   std::optional<int> window = std::nullopt) {
    return PolyMatrix(rows, std::vector<QPolynomial>(cols, QPolynomial(ctx, window)));
}

inline PolyMatrix identity_poly_matrix(const RingContext& ctx, std::size_t n, std::optional<int> window = std::nullopt) {
    PolyMatrix m = zero_poly_matrix(ctx, n, n, window);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = QPolynomial::constant(WScalar::one(ctx), window);
    return m;
}

/// D~(w^{k} (x) e_j) = sum_i components[k][i][j] e_i; components above order_cap vanish.
struct PrismaticDiffOp {
    RingContext ctx;
    std::size_t source_rank = 1;
    std::size_t target_rank = 1;
    int order_cap = 0;
    std::optional<int> window;
    std::vector<PolyMatrix> components;

    static PrismaticDiffOp zero(const RingContext& ctx, std::size_t source_rank, std::size_t target_rank, int order_cap,
                                std::optional<int> window = std::nullopt) {
        PrismaticDiffOp d{ctx, source_rank, target_rank, order_cap, window, {}};
        for (int k = 0; k <= order_cap; ++k) d.components.push_back(zero_poly_matrix(ctx, target_rank, source_rank, window));
        return d;
    }

    /// Counit (x) id.
    static PrismaticDiffOp identity(const RingContext& ctx, std::size_t rank, std::optional<int> window = std::nullopt) {
        PrismaticDiffOp d = zero(ctx, rank, rank, 0, window);
        d.components[0] = identity_poly_matrix(ctx, rank, window);
        return d;
    }

    /// The differential on the trivial rank-1 module: d~(w) = 1.
    static PrismaticDiffOp differential(const RingContext& ctx, std::optional<int> window = std::nullopt) {
        PrismaticDiffOp d = zero(ctx, 1, 1, 1, window);
        d.components[1][0][0] = QPolynomial::constant(WScalar::one(ctx), window);
        return d;
    }

    [[nodiscard]] const QPolynomial& at(int k, std::size_t i, std::size_t j) const {
        return components[static_cast<std::size_t>(k)][i][j];
    }

    friend bool operator==(const PrismaticDiffOp& a, const PrismaticDiffOp& b) {
        const int cap = std::max(a.order_cap, b.order_cap);
        if (a.source_rank != b.source_rank || a.target_rank != b.target_rank) return false;
        for (int k = 0; k <= cap; ++k) {
            for (std::size_t i = 0; i < a.target_rank; ++i) {
                for (std::size_t j = 0; j < a.source_rank; ++j) {
                    const bool za = k > a.order_cap, zb = k > b.order_cap;
                    if (za && zb) continue;
                    if (za ? !b.at(k, i, j).is_zero() : (zb ? !a.at(k, i, j).is_zero() : a.at(k, i, j) != b.at(k, i, j))) {
                        return false;
                    }
                }
            }
        }
        return true;
    }
};

/// (E o D)~(w^{k} (x) s) = sum_{i+j=k} E~(w^{i} (x) D~(w^{j} (x) s)), where w^{i} (x) c e = (w^{i} taylor(c)) (x) e.
inline PrismaticDiffOp diffop_compose(const PrismaticDiffOp& D, const PrismaticDiffOp& E, int dp_cap,
                                      const MultiplicationTable& table = classical_table()) {
    if (D.target_rank != E.source_rank) throw Error(ErrorKind::RankMismatch, "composition rank mismatch");
    const int order = D.order_cap + E.order_cap;
    if (order > dp_cap) {
        throw Error(ErrorKind::CapExceeded, "composite order " + std::to_string(order) + " exceeds cap " + std::to_string(dp_cap));
    }
    const RingContext& ctx = D.ctx;
    const auto window = D.window ? D.window : E.window;
    PrismaticDiffOp out = PrismaticDiffOp::zero(ctx, D.source_rank, E.target_rank, order, window);
    for (int k = 0; k <= order; ++k) {
        for (auto [i, j] : comultiply(k, dp_cap)) {
            if (j > D.order_cap) continue;
            const DividedElement wi = DividedElement::basis(ctx, i, dp_cap, window);
            for (std::size_t l = 0; l < D.target_rank; ++l) {
                for (std::size_t col = 0; col < D.source_rank; ++col) {
                    const QPolynomial& c = D.at(j, l, col);
                    if (c.is_zero()) continue;
                    const DividedElement moved = multiply(wi, taylor(c, dp_cap, table), table);
                    for (int m = 0; m <= std::min(dp_cap, E.order_cap); ++m) {
                        if (moved[m].is_zero()) continue;
                        for (std::size_t r = 0; r < E.target_rank; ++r) {
                            if (!E.at(m, r, l).is_zero()) out.components[static_cast<std::size_t>(k)][r][col] += moved[m] * E.at(m, r, l);
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// Order-1 extension of a level -1 connection: 1 (x) s -> theta(s), w (x) s -> s + (q-1) x theta(s).
inline PrismaticDiffOp hyperdiff_extend(const ConnectionModule& m) {
    if (m.level != Level::MinusOne) throw Error(ErrorKind::WrongLevel, "hyperdiff_extend needs a level -1 connection");
    PrismaticDiffOp d = PrismaticDiffOp::zero(m.ctx, m.rank, m.rank, 1, m.degree_window);
    const QPolynomial tx = QPolynomial::monomial(WScalar::t(m.ctx), 1, m.degree_window);
    for (std::size_t i = 0; i < m.rank; ++i) {
        for (std::size_t j = 0; j < m.rank; ++j) {
            d.components[0][i][j] = m.theta[i][j];
            d.components[1][i][j] = tx * m.theta[i][j];
            if (i == j) d.components[1][i][j] += QPolynomial::constant(WScalar::one(m.ctx), m.degree_window);
        }
    }
    return d;
}

enum class OmegaConvention { AsPrinted, DegreeIndexed };

struct FrobeniusOmega {
    OmegaConvention convention = OmegaConvention::AsPrinted;
    std::vector<DividedElement> terms;  // one per k = 1..p
    DividedElement total;
};

/// phi(w) = sum_{k=1}^{p} C(p-1, k-1)_{q^p} (p)_q^k x^{p-k} w^{e(k)} with e(k) = p as printed, or e(k) = k.
inline FrobeniusOmega frobenius_omega(const RingContext& ctx, int dp_cap, OmegaConvention convention = OmegaConvention::AsPrinted,
                                      std::optional<int> window = std::nullopt) {
    const int p = static_cast<int>(ctx.p);
    if (dp_cap < p) throw Error(ErrorKind::CapExceeded, "frobenius_omega needs dp_cap >= p", "dp_cap");
    FrobeniusOmega out{convention, {}, DividedElement::zero(ctx, dp_cap, window)};
    const WScalar dq = q_int(ctx.p, 1, ctx);
    for (int k = 1; k <= p; ++k) {
        const WScalar c = q_binomial(p - 1, k - 1, ctx.p, ctx) * dq.pow(static_cast<std::uint64_t>(k));
        DividedElement term = DividedElement::zero(ctx, dp_cap, window);
        const int slot = convention == OmegaConvention::AsPrinted ? p : k;
        term[slot] = QPolynomial::monomial(c, p - k, window);
        out.total += term;
        out.terms.push_back(std::move(term));
    }
    return out;
}

struct PoincareReport {
    int dp_cap = 0;
    int x_window = 0;
    int log_h_unit = 0;         // kernel of A -> A<w>
    int log_h_middle = 0;       // ker L(d) / image of A
    int log_h_forms_below = 0;  // cokernel of L(d) in divided degrees < cap
    int log_h_forms_top = 0;    // cokernel in the boundary degree, excluded from the claim

    [[nodiscard]] bool exact() const { return log_h_unit == 0 && log_h_middle == 0 && log_h_forms_below == 0; }
};

/// Cohomology of 0 -> A -> A<w> -> A<w> (x) Omega -> 0 on the window x-degree <= x_window.
inline PoincareReport poincare_check(const RingContext& ctx, int dp_cap, int x_window = 1) {
    if (dp_cap < 1) throw Error(ErrorKind::InvalidArgs, "dp_cap must be >= 1", "dp_cap");
    const ZModPk ring = ZModPk::make(ctx.p, ctx.n_prec);
    const auto slots = static_cast<std::size_t>(dp_cap) + 1;
    auto to_section = [&](const DividedElement& e) { return Section(e.coeffs.begin(), e.coeffs.end()); };
    auto to_divided = [&](const Section& s) {
        DividedElement e = DividedElement::zero(ctx, dp_cap, x_window);
        for (std::size_t k = 0; k < slots; ++k) e.coeffs[k] = s[k];
        return e;
    };
    const ModMatrix unit = flatten_operator(1, x_window, slots, x_window, ctx, [&](const Section& s) {
        DividedElement e = DividedElement::zero(ctx, dp_cap, x_window);
        e[0] = s[0];
        return to_section(e);
    });
    const ModMatrix lin = flatten_operator(slots, x_window, slots, x_window, ctx, [&](const Section& s) {
        return to_section(linearized_differential(to_divided(s)));
    });

    PresentedComplex<ZModPk> cx;
    const std::size_t a_dim = flat_dimension(1, x_window, ctx);
    const std::size_t w_dim = flat_dimension(slots, x_window, ctx);
    cx.dims = {a_dim, w_dim, w_dim};
    cx.relations = {empty_relations(a_dim, ring), empty_relations(w_dim, ring), empty_relations(w_dim, ring)};
    cx.diffs = {unit, lin};

    PoincareReport r;
    r.dp_cap = dp_cap;
    r.x_window = x_window;
    r.log_h_unit = log_cardinality(cohomology(cx, 0, ring), ring);
    r.log_h_middle = log_cardinality(cohomology(cx, 1, ring), ring);
    // split the forms by divided degree: the top slot is the boundary
    const std::size_t per_slot = flat_dimension(1, x_window, ctx);
    const std::size_t top_begin = static_cast<std::size_t>(dp_cap) * per_slot;
    ModMatrix top_rel(per_slot, w_dim, ring);
    ModMatrix low_rel(top_begin, w_dim, ring);
    for (std::size_t i = 0; i < per_slot; ++i) top_rel(i, top_begin + i) = ring.one();
    for (std::size_t i = 0; i < top_begin; ++i) low_rel(i, i) = ring.one();
    const ModMatrix image = lin.transpose();
    r.log_h_forms_below = log_cardinality(subquotient(Matrix<ZModPk>::identity(w_dim, ring), vstack(image, top_rel, ring), ring), ring);
    r.log_h_forms_top = log_cardinality(subquotient(Matrix<ZModPk>::identity(w_dim, ring), vstack(image, low_rel, ring), ring), ring);
    return r;
}

}  // namespace qprism
