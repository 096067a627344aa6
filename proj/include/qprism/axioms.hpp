#pragma once

// Randomized and exhaustive checks of the delta-ring laws and of q-integer identities.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/delta_ring.hpp"
#include "qprism/mpoly.hpp"

namespace qprism {

struct DeltaLawReport {
    RingContext ctx;
    int samples = 0;
    int sum_failures = 0;
    int product_failures = 0;

    [[nodiscard]] bool ok() const { return sum_failures == 0 && product_failures == 0; }
};

inline WScalar random_scalar(const RingContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> digit(0, ctx.modulus - 1);
    std::vector<std::uint64_t> c(static_cast<std::size_t>(ctx.m_prec));
    for (auto& v : c) v = digit(rng);
    return WScalar::from_t_coeffs(ctx, c);
}

/// delta(a + b) and delta(ab) against the sum and product laws, both sides taken on canonical lifts
/// and compared at precision N - 1.
inline DeltaLawReport delta_law_check(const RingContext& ctx, int samples, std::mt19937_64& rng) {
    if (ctx.n_prec < 2) throw Error(ErrorKind::PrecisionExhausted, "delta laws need n_prec >= 2", "n_prec");
    const std::uint64_t p = ctx.p;
    const int n = ctx.n_prec;
    const auto pe = static_cast<unsigned>(p);
    DeltaLawReport r{ctx, samples, 0, 0};
    auto reduce = [&](const MPoly& f) { return reduce_scalar(DeltaElement{f, n - 1}, ctx); };
    auto d = [&](const MPoly& f) { return delta(DeltaElement{f, n}, p).poly; };
    for (int s = 0; s < samples; ++s) {
        const WScalar a = random_scalar(ctx, rng);
        const WScalar b = random_scalar(ctx, rng);
        const MPoly la = a.lift(), lb = b.lift();
        const MPoly da = d(la), db = d(lb);

        MPoly cross;
        for (unsigned i = 1; i < pe; ++i) {
            cross = cross + (binomial(Integer(p), i) / Integer(p)) * (la.pow(i) * lb.pow(pe - i));
        }
        if (reduce(d((a + b).lift())) != reduce(da + db - cross)) ++r.sum_failures;

        const MPoly prod = la.pow(pe) * db + lb.pow(pe) * da + Integer(p) * (da * db);
        if (reduce(d((a * b).lift())) != reduce(prod)) ++r.product_failures;
    }
    return r;
}

struct QIdentityReport {
    int bound = 0;
    int product_failures = 0;  // (mn)_q = (m)_q (n)_{q^m}
    int pascal_failures = 0;   // C(n,k) = C(n-1,k-1) + q^k C(n-1,k) = q^{n-k} C(n-1,k-1) + C(n-1,k)

    [[nodiscard]] bool ok() const { return product_failures == 0 && pascal_failures == 0; }
};

inline QIdentityReport q_identity_check(int bound) {
    QIdentityReport r;
    r.bound = bound;
    const MPoly q = MPoly::q();
    for (int m = 1; m <= bound; ++m) {
        for (int n = 1; n <= bound; ++n) {
            const MPoly lhs = to_mpoly(q_int_exact(static_cast<std::uint64_t>(m * n)));
            const MPoly rhs = to_mpoly(q_int_exact(static_cast<std::uint64_t>(m))) *
                              to_mpoly(q_int_exact(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m)));
            if (lhs != rhs) ++r.product_failures;
        }
    }
    for (int n = 1; n <= bound; ++n) {
        for (int k = 1; k < n; ++k) {
            const MPoly c = to_mpoly(q_binomial_exact(n, k));
            const MPoly a = to_mpoly(q_binomial_exact(n - 1, k - 1));
            const MPoly b = to_mpoly(q_binomial_exact(n - 1, k));
            const MPoly first = a + q.pow(static_cast<unsigned>(k)) * b;
            const MPoly second = q.pow(static_cast<unsigned>(n - k)) * a + b;
            if (c != first || c != second) ++r.pascal_failures;
        }
    }
    return r;
}

}  // namespace qprism
