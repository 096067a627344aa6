#pragma once

// delta-structures on exact integer polynomials in q, x, w0, w1, ...
// phi(q) = q^p, phi(x) = x^p, phi(w_k) = w_k^p + p w_{k+1}, delta = (phi(f) - f^p) / p.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/homology.hpp"
#include "qprism/mpoly.hpp"
#include "qprism/twisted_calculus.hpp"

namespace qprism {

inline constexpr int kDefaultOmegaCap = 8;

/// Exact polynomial plus the number of p-adic digits for which it is meaningful.
struct DeltaElement {
    MPoly poly;
    int precision = 1;

    static DeltaElement parse(std::string_view text, int precision) { return {MPoly::parse(text), precision}; }

    /// Largest k with w_k present, or -1.
    [[nodiscard]] int delta_order() const { return poly.omega_order(); }

    friend bool operator==(const DeltaElement& a, const DeltaElement& b) {
        return a.poly == b.poly && a.precision == b.precision;
    }
};

inline MPoly frobenius_lift(const MPoly& f, std::uint64_t p, int omega_cap = kDefaultOmegaCap) {
    if (f.omega_order() + 1 > omega_cap) {
        throw Error(ErrorKind::OrderOverflow, "phi(w" + std::to_string(f.omega_order()) + ") needs w" +
                                                  std::to_string(f.omega_order() + 1) + " beyond cap " +
                                                  std::to_string(omega_cap));
    }
    const auto pe = static_cast<std::uint32_t>(p);
    return f.substitute([&](std::size_t v) {
        if (v == var::q || v == var::x) return MPoly::variable(v, pe);
        return MPoly::variable(v, pe) + Integer(p) * MPoly::variable(v + 1);
    });
}

struct PhiDelta {
    DeltaElement phi;
    DeltaElement delta;
};

inline PhiDelta phi_delta(const DeltaElement& f, std::uint64_t p, int omega_cap = kDefaultOmegaCap) {
    if (f.precision <= 1) throw Error(ErrorKind::PrecisionExhausted, "delta needs precision >= 2");
    MPoly phi = frobenius_lift(f.poly, p, omega_cap);
    MPoly delta = (phi - f.poly.pow(static_cast<unsigned>(p))).exact_divide(Integer(p));
    return {{std::move(phi), f.precision}, {std::move(delta), f.precision - 1}};
}

inline DeltaElement delta(const DeltaElement& f, std::uint64_t p, int omega_cap = kDefaultOmegaCap) {
    return phi_delta(f, p, omega_cap).delta;
}

/// The W-context in which an element of the given precision is meaningful.
inline RingContext precision_context(const RingContext& ctx, int precision) {
    if (precision < 1) throw Error(ErrorKind::PrecisionExhausted, "no p-adic digits left");
    return ctx.with_precision(std::min(precision, ctx.n_prec), ctx.m_prec);
}

inline WScalar reduce_scalar(const DeltaElement& f, const RingContext& ctx) {
    return WScalar::from_poly(precision_context(ctx, f.precision), f.poly);
}

/// d is distinguished iff delta(d) is a unit of W.
inline bool is_distinguished(const DeltaElement& d, const RingContext& ctx) {
    if (!d.poly.only_q()) throw Error(ErrorKind::InvalidArgs, "is_distinguished expects an element of Z[q]");
    return reduce_scalar(delta(d, ctx.p), ctx).is_unit();
}

namespace detail {

inline std::vector<std::uint64_t> flatten_poly(const QPolynomial& f, int window) {
    return flatten(Section{f}, window, f.context());
}

}  // namespace detail

/// Decides phi(f) - (p)_q delta(f) in (p)_q J inside B = W[x]/(x^{D+1}), over the precision left after delta.
inline bool qpd_check(const DeltaElement& f, const std::vector<DeltaElement>& J, const RingContext& ctx,
                      int degree_window = 0) {
    auto check_window = [&](const MPoly& g, const char* what) {
        if (g.variable_count() > 2) throw Error(ErrorKind::InvalidArgs, std::string(what) + " must lie in W[x]");
        if (static_cast<int>(g.degree_in(var::x)) > degree_window) {
            throw Error(ErrorKind::WindowTooSmall, std::string(what) + " has x-degree " +
                                                       std::to_string(g.degree_in(var::x)) + " beyond window " +
                                                       std::to_string(degree_window));
        }
    };
    check_window(f.poly, "f");
    for (const auto& g : J) check_window(g.poly, "generator");

    const PhiDelta pd = phi_delta(f, ctx.p);
    const RingContext red = precision_context(ctx, pd.delta.precision);
    const MPoly dq = to_mpoly(q_int_exact(ctx.p));
    const MPoly target = pd.phi.poly - dq * pd.delta.poly;
    const QPolynomial tgt = QPolynomial::from_poly(red, target, degree_window);

    const ZModPk ring = ZModPk::make(red.p, red.n_prec);
    const std::size_t dim = flat_dimension(1, degree_window, red);
    std::vector<std::vector<std::uint64_t>> gens;
    const QPolynomial dq_b = QPolynomial::from_poly(red, dq, degree_window);
    for (const auto& g : J) {
        const QPolynomial gb = QPolynomial::from_poly(red, g.poly, degree_window);
        for (int m = 0; m <= degree_window; ++m) {
            for (int b = 0; b < red.m_prec; ++b) {
                std::vector<std::uint64_t> tc(static_cast<std::size_t>(red.m_prec), 0);
                tc[static_cast<std::size_t>(b)] = 1;
                const QPolynomial mono = QPolynomial::monomial(WScalar::from_t_coeffs(red, tc), m, degree_window);
                gens.push_back(detail::flatten_poly(dq_b * gb * mono, degree_window));
            }
        }
    }
    if (gens.empty()) return tgt.is_zero();
    const auto hb = howell_form(from_rows(gens, dim, ring), ring);
    return in_span(hb, detail::flatten_poly(tgt, degree_window), ring);
}

/// f lies in the Nygaard ideal phi^{-1}((p)_q B).
inline bool in_nygaard(const DeltaElement& f, const RingContext& ctx, int degree_window = 0) {
    return qpd_check(f, {DeltaElement{MPoly::constant(1), f.precision}}, ctx, degree_window);
}

struct EnvelopePresentation {
    std::vector<std::string> generators;
    std::vector<DeltaElement> relations;
    int order_cap = 0;
};

namespace detail {

inline EnvelopePresentation iterate_relations(DeltaElement r0, int K, std::uint64_t p, int first_index) {
    if (K < 0) throw Error(ErrorKind::InvalidArgs, "order cap must be >= 0");
    EnvelopePresentation env;
    env.order_cap = K;
    env.generators = {"q", "x"};
    const int omega_cap = std::max(kDefaultOmegaCap, first_index + K + 1);
    for (int k = 0; k <= first_index + K; ++k) env.generators.push_back("w" + std::to_string(k));
    DeltaElement cur = std::move(r0);
    for (int i = 0; i < first_index; ++i) cur = delta(cur, p, omega_cap);
    env.relations.push_back(cur);
    for (int i = 1; i <= K; ++i) {
        cur = delta(cur, p, omega_cap);
        env.relations.push_back(cur);
    }
    return env;
}

}  // namespace detail

/// relations[i] = delta^i(d w0 - g), i = 0..K.
inline EnvelopePresentation envelope_presentation(const DeltaElement& g, const DeltaElement& d, int K,
                                                  std::uint64_t p) {
    const int precision = std::min(g.precision, d.precision);
    if (precision < K + 1) {
        throw Error(ErrorKind::PrecisionExhausted,
                    "order " + std::to_string(K) + " needs precision " + std::to_string(K + 1));
    }
    return detail::iterate_relations({d.poly * MPoly::omega(0) - g.poly, precision}, K, p, 0);
}

/// Prismatic polynomials over B[x]: relations[i] = delta^{i+1}(x + d w0), i = 0..K.
inline EnvelopePresentation prismatic_polynomials(const DeltaElement& d, int K, std::uint64_t p) {
    if (d.precision < K + 2) {
        throw Error(ErrorKind::PrecisionExhausted,
                    "order " + std::to_string(K) + " needs precision " + std::to_string(K + 2));
    }
    return detail::iterate_relations({MPoly::x() + d.poly * MPoly::omega(0), d.precision}, K, p, 1);
}

}  // namespace qprism
