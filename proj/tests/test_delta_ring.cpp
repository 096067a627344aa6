#include <gtest/gtest.h>

#include <random>

#include "qprism/axioms.hpp"
#include "qprism/delta_ring.hpp"

using namespace qprism;

namespace {

MPoly d1(const std::string& text, std::uint64_t p, int precision = 3) {
    return delta(DeltaElement::parse(text, precision), p).poly;
}

}  // namespace

TEST(DeltaRing, HandComputedValues) {
    EXPECT_EQ(d1("2", 2), MPoly::parse("-1"));
    EXPECT_EQ(d1("1+q", 2), MPoly::parse("-q"));
    EXPECT_EQ(d1("q", 2), MPoly{});
    EXPECT_EQ(d1("w0", 3), MPoly::parse("w1"));
    EXPECT_EQ(d1("3", 3), MPoly::parse("-8"));
    EXPECT_EQ(d1("q-1", 2), MPoly::parse("q-1"));
}

TEST(DeltaRing, PrecisionDropsByOne) {
    const auto d = delta(DeltaElement::parse("q+x", 3), 2);
    EXPECT_EQ(d.precision, 2);
    EXPECT_THROW(delta(DeltaElement::parse("q", 1), 2), Error);
}

TEST(DeltaRing, OmegaCapOverflow) {
    try {
        (void)delta(DeltaElement::parse("w3", 3), 2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OrderOverflow);
    }
}

TEST(DeltaRing, SumAndProductLaws) {
    std::mt19937_64 rng(2024);
    for (std::uint64_t p : {2, 3, 5}) {
        for (int n : {2, 3}) {
            const auto r = delta_law_check(RingContext::make(p, n, 3), 100, rng);
            EXPECT_TRUE(r.ok()) << "p=" << p << " n=" << n << " sum=" << r.sum_failures
                                << " product=" << r.product_failures;
        }
    }
}

TEST(DeltaRing, DistinguishedElements) {
    for (std::uint64_t p : {2, 3, 5}) {
        const auto ctx = RingContext::make(p, 3, 3);
        EXPECT_TRUE(is_distinguished(DeltaElement{to_mpoly(q_int_exact(p)), 3}, ctx)) << p;
        EXPECT_TRUE(is_distinguished(DeltaElement{MPoly::constant(Integer(p)), 3}, ctx)) << p;
        EXPECT_FALSE(is_distinguished(DeltaElement::parse("q-1", 3), ctx)) << p;
        EXPECT_FALSE(is_distinguished(DeltaElement{MPoly::constant(Integer(p * p)), 3}, ctx)) << p;
    }
    EXPECT_THROW(is_distinguished(DeltaElement::parse("x", 3), RingContext::make(2, 3, 3)), Error);
}

TEST(DeltaRing, DividedPowerCheckBasics) {
    const auto ctx = RingContext::make(2, 3, 2);
    EXPECT_TRUE(qpd_check(DeltaElement::parse("0", 3), {DeltaElement::parse("1", 3)}, ctx, 2));
    EXPECT_FALSE(in_nygaard(DeltaElement::parse("1", 3), ctx, 2));
    try {
        (void)qpd_check(DeltaElement::parse("x^3", 3), {DeltaElement::parse("1", 3)}, ctx, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::WindowTooSmall);
    }
}

TEST(DeltaRing, EnvelopeRelationsAtOrderOne) {
    // delta((1+q) w0 + x) expanded by hand
    const auto env = envelope_presentation(DeltaElement::parse("-x", 3), DeltaElement::parse("1+q", 3), 1, 2);
    ASSERT_EQ(env.relations.size(), 2u);
    EXPECT_EQ(env.relations[0].poly, MPoly::parse("w0+q*w0+x"));
    EXPECT_EQ(env.relations[1].poly, MPoly::parse("w1-x*w0-q*w0^2-q*x*w0+q^2*w1"));
    EXPECT_EQ(env.relations[1].precision, 2);
    EXPECT_EQ(env.generators, (std::vector<std::string>{"q", "x", "w0", "w1"}));
}

TEST(DeltaRing, EnvelopeNeedsPrecision) {
    EXPECT_THROW(envelope_presentation(DeltaElement::parse("-x", 2), DeltaElement::parse("1+q", 2), 2, 2), Error);
    EXPECT_THROW(prismatic_polynomials(DeltaElement::parse("1+q", 2), 1, 2), Error);
    const auto pp = prismatic_polynomials(DeltaElement::parse("1+q", 3), 1, 2);
    EXPECT_EQ(pp.relations.size(), 2u);
}
