#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qprism/axioms.hpp"
#include "qprism/base_ring.hpp"

using namespace qprism;

namespace {

oracle::Poly as_oracle(const ZPoly& f) { return oracle::Poly(f.begin(), f.end()); }

}  // namespace

TEST(BaseRing, ContextValidation) {
    EXPECT_THROW(RingContext::make(4, 2, 2), Error);
    EXPECT_THROW(RingContext::make(2, 0, 2), Error);
    EXPECT_EQ(RingContext::make(3, 3, 2).modulus, 27u);
}

TEST(BaseRing, QIntegerInTBasis) {
    const auto ctx = RingContext::make(2, 3, 3);
    // (4)_q = 4 + 6t + 4t^2 + t^3, truncated at t^3
    EXPECT_EQ(q_int(4, 1, ctx).t_coeffs(), (std::vector<std::uint64_t>{4, 6, 4}));
    EXPECT_EQ(q_int(2, 1, ctx), WScalar::parse(ctx, "1+q"));
}

TEST(BaseRing, InverseOfUnits) {
    const auto ctx = RingContext::make(3, 3, 4);
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 50) {
        const WScalar a = random_scalar(ctx, rng);
        if (!a.is_unit()) {
            EXPECT_THROW(w_invert(a), Error);
            continue;
        }
        EXPECT_TRUE((a * w_invert(a)).is_one());
        ++checked;
    }
}

TEST(BaseRing, FrobeniusIsRingMap) {
    const auto ctx = RingContext::make(2, 3, 3);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 40; ++i) {
        const WScalar a = random_scalar(ctx, rng), b = random_scalar(ctx, rng);
        EXPECT_EQ((a * b).frobenius(), a.frobenius() * b.frobenius());
        EXPECT_EQ((a + b).frobenius(), a.frobenius() + b.frobenius());
    }
    EXPECT_EQ(WScalar::q(ctx).frobenius(), WScalar::q(ctx).pow(2));
}

TEST(BaseRing, QBinomialMatchesFactorialQuotient) {
    for (int n = 0; n <= 12; ++n) {
        for (int k = 0; k <= n; ++k) {
            auto lib = as_oracle(q_binomial_exact(n, k));
            oracle::trim(lib);
            EXPECT_EQ(lib, oracle::q_binomial(n, k)) << n << " " << k;
        }
    }
}

TEST(BaseRing, QBinomialReducesConsistently) {
    const auto ctx = RingContext::make(3, 2, 3);
    for (int n = 1; n <= 9; ++n) {
        for (int k = 0; k <= n; ++k) {
            EXPECT_EQ(q_binomial(n, k, 1, ctx).t_coeffs(),
                      oracle::to_t_basis(oracle::q_binomial(n, k), ctx.m_prec, ctx.modulus));
        }
    }
}

TEST(BaseRing, QIntegerIdentities) {
    const auto r = q_identity_check(12);
    EXPECT_EQ(r.product_failures, 0);
    EXPECT_EQ(r.pascal_failures, 0);
}
