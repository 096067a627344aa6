#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qprism/axioms.hpp"
#include "qprism/twisted_calculus.hpp"

using namespace qprism;

namespace {

// Least D >= requested with (s (D+1))_q = 0 in W, evaluated through the t-basis expansion.
int reference_window(int requested, std::uint64_t p, Level level, int n, int m) {
    const std::uint64_t s = level == Level::Zero ? 1 : p;
    std::uint64_t mod = 1;
    for (int i = 0; i < n; ++i) mod *= p;
    for (int d = requested;; ++d) {
        const auto v = oracle::to_t_basis(oracle::q_integer(static_cast<int>(s * (d + 1))), m, mod);
        if (std::all_of(v.begin(), v.end(), [](std::uint64_t c) { return c == 0; })) return d;
    }
}

QPolynomial random_poly(const RingContext& ctx, int degree, std::mt19937_64& rng) {
    QPolynomial f(ctx, std::nullopt);
    for (int n = 0; n <= degree; ++n) f += QPolynomial::monomial(random_scalar(ctx, rng), n);
    return f;
}

}  // namespace

TEST(TwistedCalculus, StableWindowMatchesReference) {
    for (std::uint64_t p : {2, 3}) {
        for (int n : {1, 2, 3}) {
            for (int m : {1, 2, 3}) {
                const auto ctx = RingContext::make(p, n, m);
                for (Level l : {Level::Zero, Level::MinusOne}) {
                    for (int req : {0, 4, 9}) {
                        EXPECT_EQ(stable_window(req, l, ctx), reference_window(req, p, l, n, m))
                            << p << " " << n << " " << m << " " << to_int(l) << " " << req;
                    }
                }
            }
        }
    }
}

TEST(TwistedCalculus, FrozenStableWindows) {
    EXPECT_EQ(stable_window(4, Level::MinusOne, RingContext::make(2, 2, 2)), 7);
    EXPECT_EQ(stable_window(4, Level::MinusOne, RingContext::make(3, 2, 2)), 5);
    EXPECT_EQ(stable_window(4, Level::MinusOne, RingContext::make(2, 2, 1)), 5);
}

TEST(TwistedCalculus, TwistedLeibnizRule) {
    std::mt19937_64 rng(77);
    for (std::uint64_t p : {2, 3}) {
        const auto ctx = RingContext::make(p, 2, 3);
        for (int trial = 0; trial < 20; ++trial) {
            const QPolynomial f = random_poly(ctx, 3, rng), g = random_poly(ctx, 3, rng);
            EXPECT_EQ(twisted_derive(f * g, Level::Zero),
                      twisted_derive(f, Level::Zero) * g + f.sigma() * twisted_derive(g, Level::Zero));
            EXPECT_EQ(twisted_derive(f * g, Level::MinusOne),
                      twisted_derive(f, Level::MinusOne) * g + f.sigma(p) * twisted_derive(g, Level::MinusOne));
        }
    }
}

TEST(TwistedCalculus, ConnectionOnMonomials) {
    const auto ctx = RingContext::make(2, 2, 2);
    const auto m = ConnectionModule::trivial(ctx, 1, Level::MinusOne, 7);
    Section s{QPolynomial::monomial(WScalar::one(ctx), 3, 7)};
    const Section out = connection_apply(m, s);
    EXPECT_EQ(out[0], QPolynomial::monomial(degree_factor(3, Level::MinusOne, ctx), 2, 7));
    EXPECT_EQ(degree_factor(3, Level::MinusOne, ctx), q_int(6, 1, ctx));
    EXPECT_THROW(connection_apply(m, Section{}), Error);
}

TEST(TwistedCalculus, FlattenRoundTrip) {
    std::mt19937_64 rng(5);
    const auto ctx = RingContext::make(3, 2, 2);
    Section s;
    for (int j = 0; j < 2; ++j) s.push_back(random_poly(ctx, 4, rng).with_window(4));
    const auto v = flatten(s, 4, ctx);
    EXPECT_EQ(v.size(), flat_dimension(2, 4, ctx));
    EXPECT_EQ(unflatten(v, 2, 4, ctx), s);
}

TEST(TwistedCalculus, NilpotenceOfTrivialModule) {
    const auto ctx = RingContext::make(2, 2, 2);
    const auto r = quasi_nilpotence_check(ConnectionModule::trivial(ctx, 2, Level::MinusOne, 4), 64);
    EXPECT_TRUE(r.nilpotent);
    EXPECT_EQ(r.effective_window, 7);
    for (const auto& w : r.witness) EXPECT_EQ(w, 1);
}

TEST(TwistedCalculus, DeRhamMatrixShape) {
    const auto ctx = RingContext::make(2, 2, 2);
    const auto m = ConnectionModule::trivial(ctx, 1, Level::MinusOne, 7);
    const ModMatrix d = de_rham_matrix(m, 7);
    EXPECT_EQ(d.rows(), flat_dimension(1, 7, ctx));
    EXPECT_EQ(d.cols(), flat_dimension(1, 7, ctx));
}
