#include <gtest/gtest.h>

#include "qprism/divided_poly.hpp"

using namespace qprism;

TEST(DividedPoly, ComultiplicationPairs) {
    EXPECT_EQ(comultiply(2, 4), (std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}}));
    EXPECT_THROW(comultiply(5, 4), Error);
}

TEST(DividedPoly, LinearizedDifferentialLowersDegree) {
    const auto ctx = RingContext::make(2, 2, 2);
    for (int k = 1; k <= 4; ++k) {
        EXPECT_EQ(linearized_differential(DividedElement::basis(ctx, k, 4)), DividedElement::basis(ctx, k - 1, 4));
    }
    EXPECT_TRUE(linearized_differential(DividedElement::basis(ctx, 0, 4)).is_zero());
}

TEST(DividedPoly, ClassicalTableSatisfiesAxioms) {
    for (std::uint64_t p : {2, 3}) {
        const auto r = check_table_axioms(classical_table(), RingContext::make(p, 2, 2), 5);
        EXPECT_TRUE(r.all()) << p;
    }
}

TEST(DividedPoly, TaylorOfSquare) {
    const auto ctx = RingContext::make(3, 2, 2);
    const WScalar d = q_int(3, 1, ctx);
    const auto t = taylor(QPolynomial::monomial(WScalar::one(ctx), 2), 4, classical_table());
    EXPECT_EQ(t[0], QPolynomial::monomial(WScalar::one(ctx), 2));
    EXPECT_EQ(t[1], QPolynomial::monomial(d.scaled(2), 1));
    EXPECT_EQ(t[2], QPolynomial::constant((d * d).scaled(2)));
    EXPECT_TRUE(t[3].is_zero());
}

TEST(DividedPoly, CompositionWithIdentity) {
    const auto ctx = RingContext::make(2, 2, 2);
    const auto d = PrismaticDiffOp::differential(ctx);
    const auto id = PrismaticDiffOp::identity(ctx, 1);
    EXPECT_EQ(diffop_compose(d, id, 4), d);
    EXPECT_EQ(diffop_compose(id, d, 4), d);
    EXPECT_THROW(diffop_compose(d, d, 1), Error);
}

TEST(DividedPoly, HyperdiffExtensionRequiresLevelMinusOne) {
    const auto ctx = RingContext::make(2, 2, 2);
    EXPECT_THROW(hyperdiff_extend(ConnectionModule::trivial(ctx, 1, Level::Zero)), Error);
    const auto e = hyperdiff_extend(ConnectionModule::trivial(ctx, 1, Level::MinusOne));
    EXPECT_TRUE(e.at(0, 0, 0).is_zero());
    EXPECT_EQ(e.at(1, 0, 0), QPolynomial::constant(WScalar::one(ctx)));
}

TEST(DividedPoly, FrobeniusOfOmegaDegreeIndexed) {
    const auto ctx = RingContext::make(2, 2, 2);
    const auto f = frobenius_omega(ctx, 4, OmegaConvention::DegreeIndexed);
    const WScalar d = WScalar::parse(ctx, "1+q");
    EXPECT_EQ(f.total[1], QPolynomial::monomial(d, 1));
    EXPECT_EQ(f.total[2], QPolynomial::constant(d * d));
    const auto printed = frobenius_omega(ctx, 4, OmegaConvention::AsPrinted);
    EXPECT_TRUE(printed.total[1].is_zero());
    EXPECT_EQ(printed.total[2], QPolynomial::monomial(d, 1) + QPolynomial::constant(d * d));
    EXPECT_THROW(frobenius_omega(ctx, 1), Error);
}

TEST(DividedPoly, PoincareExactBelowCap) {
    for (std::uint64_t p : {2, 3}) {
        for (int cap : {4, 8}) {
            const auto r = poincare_check(RingContext::make(p, 2, 2), cap, 1);
            EXPECT_TRUE(r.exact()) << p << " " << cap;
        }
    }
}
