#include <gtest/gtest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "qprism/axioms.hpp"
#include "qprism/cartier.hpp"
#include "qprism/spec_io.hpp"

using namespace qprism;

namespace {

ConnectionModule fixture(const std::string& name) {
    return parse_connection_spec(load_json_file(std::string(QPRISM_FIXTURES) + "/" + name + ".json")).module;
}

// log_p |column span of a|, from the reference elimination on the transpose.
int log_image(const ModMatrix& a, std::uint64_t p, int k) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    oracle::Mat t(a.cols(), oracle::Vec(a.rows()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t[j][i] = a(i, j);
    }
    int quotient = 0;
    for (int e : oracle::smith_exponents(t, p, k)) quotient += e;
    return k * static_cast<int>(a.rows()) - quotient;
}

bool reference_cone_acyclic(const CartierComplexes& c) {
    const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
    const auto [a, b] = cone_differentials(c.source_complex, c.target_complex, c.f0, c.f1, ring);
    const int k = c.ctx.n_prec;
    const int ia = log_image(a, c.ctx.p, k), ib = log_image(b, c.ctx.p, k);
    return ia == k * static_cast<int>(a.cols()) && k * static_cast<int>(b.cols()) - ib == ia &&
           ib == k * static_cast<int>(b.rows());
}

const std::vector<std::string> kFixtures = {"p2_rank1_trivial",  "p2_rank1_qtwist", "p2_rank1_nilpotent",
                                            "p2_rank2_nilpotent", "p2_rank1_random", "p2_rank2_random",
                                            "p3_rank1_trivial",  "p3_rank1_qtwist", "p3_rank2_mixed",
                                            "p3_rank1_random",   "p3_rank2_random", "q1_rank1"};

}  // namespace

TEST(Cartier, WindowsOnFixtures) {
    const auto c2 = build_cartier_complexes(fixture("p2_rank1_trivial"), 4);
    EXPECT_EQ(c2.effective_window, 7);
    EXPECT_EQ(c2.raised_window, 15);
    const auto c3 = build_cartier_complexes(fixture("p3_rank1_trivial"), 4);
    EXPECT_EQ(c3.effective_window, 5);
    EXPECT_EQ(c3.raised_window, 17);
    const auto cq = build_cartier_complexes(fixture("q1_rank1"), 4);
    EXPECT_EQ(cq.effective_window, 5);
    EXPECT_EQ(cq.raised_window, 11);
}

TEST(Cartier, VerdictsOnEveryFixture) {
    for (const auto& name : kFixtures) {
        const auto r = cartier_verify(CartierProblem{fixture(name), 4, 64}, false);
        EXPECT_TRUE(r.base.all()) << name;
    }
}

TEST(Cartier, ConeAgreesWithReferenceElimination) {
    for (const auto& name : kFixtures) {
        const auto c = build_cartier_complexes(fixture(name), 4);
        const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
        EXPECT_EQ(cone_acyclic(c.source_complex, c.target_complex, c.f0, c.f1, ring), reference_cone_acyclic(c)) << name;
    }
}

TEST(Cartier, ZeroMapConeIsNotAcyclic) {
    const auto c = build_cartier_complexes(fixture("p2_rank1_trivial"), 4);
    const ZModPk ring = ZModPk::make(c.ctx.p, c.ctx.n_prec);
    const ModMatrix z0(c.f0.rows(), c.f0.cols(), ring), z1(c.f1.rows(), c.f1.cols(), ring);
    EXPECT_FALSE(cone_acyclic(c.source_complex, c.target_complex, z0, z1, ring));
}

TEST(Cartier, ExactBlockIdentityOnRandomSections) {
    std::mt19937_64 rng(99);
    for (const auto& name : {"p2_rank2_random", "p3_rank2_mixed", "q1_rank1"}) {
        const auto c = build_cartier_complexes(fixture(name), 4);
        for (int k = 1; k < static_cast<int>(c.ctx.p); ++k) {
            for (int trial = 0; trial < 10; ++trial) {
                Section s = zero_section(c.ctx, c.source.rank, c.effective_window);
                for (auto& f : s) {
                    for (int n = 0; n <= c.effective_window; ++n) {
                        f += QPolynomial::monomial(random_scalar(c.ctx, rng), n, c.effective_window);
                    }
                }
                EXPECT_TRUE(block_identity_holds(c, s, k, BlockOperator::Exact)) << name << " k=" << k;
            }
        }
    }
}

TEST(Cartier, UnweightedBlockIdentityOnlyAtTrivialQ) {
    const auto q1 = build_cartier_complexes(fixture("q1_rank1"), 4);
    const auto p2 = build_cartier_complexes(fixture("p2_rank1_qtwist"), 4);
    auto x_section = [](const CartierComplexes& c) {
        Section s = zero_section(c.ctx, c.source.rank, c.effective_window);
        s[0] = QPolynomial::monomial(WScalar::one(c.ctx), 1, c.effective_window);
        return s;
    };
    EXPECT_TRUE(block_identity_holds(q1, x_section(q1), 1, BlockOperator::Unweighted));
    EXPECT_FALSE(block_identity_holds(p2, x_section(p2), 1, BlockOperator::Unweighted));
}

TEST(Cartier, BlockCertificatesCarryUnitDiagonals) {
    const auto c = build_cartier_complexes(fixture("p3_rank1_qtwist"), 4);
    const auto split = block_split(c);
    EXPECT_TRUE(split.block0_chain_map);
    ASSERT_EQ(split.blocks.size(), 2u);
    for (const auto& b : split.blocks) {
        EXPECT_TRUE(b.ok());
        for (const auto& u : b.diagonal) EXPECT_TRUE(u.is_unit());
    }
}

TEST(Cartier, LevelIsChecked) {
    auto m = fixture("p2_rank1_trivial");
    m.level = Level::Zero;
    EXPECT_THROW(build_cartier_complexes(m, 4), Error);
}

TEST(Cartier, SemilinearFrobeniusIsChainMap) {
    for (std::uint64_t p : {2, 3}) {
        const auto r = semilinear_frobenius(RingContext::make(p, 2, 2), 4);
        EXPECT_TRUE(r.chain_map_ok) << p;
        EXPECT_TRUE(r.monomials_ok) << p;
    }
}

TEST(Cartier, LiftKeepsCoefficients) {
    const auto m = fixture("p3_rank2_mixed");
    const auto finer = m.ctx.with_precision(3, 3);
    const auto l = lift_connection(m, finer);
    EXPECT_EQ(l.theta[1][0].coefficient(1).lift(), MPoly::constant(3));
    EXPECT_EQ(l.ctx, finer);
}
