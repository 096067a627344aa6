#include <gtest/gtest.h>

#include "qprism/adic.hpp"

using namespace qprism;

namespace {

ModulePresentation z_with_torsion(std::uint64_t p) {
    // Z (+) Z/p^2
    auto mp = ModulePresentation::free_module(BaseKind::Z, p, 1, 1, 2);
    return mp.with_relations({{MPoly{}, MPoly::constant(Integer(p * p))}});
}

}  // namespace

TEST(Adic, BaseNames) {
    EXPECT_EQ(base_from_string("Zpn"), BaseKind::Zpn);
    EXPECT_STREQ(to_string(BaseKind::Zq), "Zq");
    try {
        (void)base_from_string("Qp");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.field(), "base");
    }
}

TEST(Adic, TorsionBoundOfCyclicSummand) {
    for (std::uint64_t p : {2, 3}) {
        const auto mp = z_with_torsion(p);
        const auto r = torsion_bound(mp, default_f(mp), 8);
        ASSERT_TRUE(r.bound.has_value()) << p;
        EXPECT_EQ(*r.bound, 2) << p;
    }
}

TEST(Adic, TorsionBoundIsLiteralOverTruncatedBase) {
    const auto mp = ModulePresentation::free_module(BaseKind::Zpn, 2, 4, 1, 1);
    EXPECT_EQ(torsion_bound(mp, default_f(mp), 8).bound, 4);
    const auto free_z = ModulePresentation::free_module(BaseKind::Z, 2, 1, 1, 2);
    EXPECT_EQ(torsion_bound(free_z, default_f(free_z), 8).bound, 0);
}

TEST(Adic, FlatnessOverW) {
    const auto free_w = ModulePresentation::free_module(BaseKind::W, 2, 2, 2, 2);
    const auto r = bounded_and_flat_check(free_w, default_f(free_w), default_g(free_w));
    EXPECT_TRUE(r.g_torsion_free);
    EXPECT_TRUE(r.bounded);
    EXPECT_TRUE(r.completely_flat);
    EXPECT_TRUE(r.formally_flat);

    const auto quotient = ModulePresentation::free_module(BaseKind::W, 2, 2, 2, 1).quotient_by(MPoly::parse("q-1"));
    EXPECT_FALSE(bounded_and_flat_check(quotient, default_f(quotient), default_g(quotient)).completely_flat);
}

TEST(Adic, CompleteFlatnessImpliesFormal) {
    for (const auto& mp : {z_with_torsion(2), ModulePresentation::free_module(BaseKind::Z, 3, 1, 1, 1),
                           ModulePresentation::free_module(BaseKind::Zq, 3, 1, 1, 1)}) {
        const auto r = bounded_and_flat_check(mp, default_f(mp), default_g(mp));
        if (r.completely_flat) EXPECT_TRUE(r.formally_flat);
    }
}

TEST(Adic, KoszulCohomologyOfTorsionModule) {
    const auto mp = z_with_torsion(2);
    const auto k = koszul_build(mp, MPoly::constant(2), 1, MPoly::constant(2));
    ASSERT_EQ(k.h.size(), 3u);
    EXPECT_EQ(k.h[0], (std::vector<std::string>{"2"}));
    EXPECT_EQ(k.h[1], (std::vector<std::string>{"2", "2", "2"}));
    EXPECT_EQ(k.h[2], (std::vector<std::string>{"2", "2"}));
}

TEST(Adic, KoszulReductionOverIntegers) {
    struct Case {
        ModulePresentation mp;
        MPoly g;
    };
    const std::vector<Case> cases = {
        {z_with_torsion(2), MPoly::parse("q+2")},
        {z_with_torsion(3), MPoly::parse("q+1")},
        {ModulePresentation::free_module(BaseKind::Z, 2, 1, 1, 2), MPoly::parse("1+q")},
    };
    for (const auto& c : cases) {
        const auto r = koszul_reduction_check(c.mp, default_f(c.mp), c.g);
        EXPECT_TRUE(r.is_complex);
        EXPECT_TRUE(r.chain_map);
        EXPECT_TRUE(r.cone_acyclic) << c.g.to_string();
    }
}

TEST(Adic, ProSystemShiftEqualsBound) {
    for (std::uint64_t p : {2, 3}) {
        const auto mp = z_with_torsion(p);
        const auto r = pro_iso_check(mp, default_f(mp), 3);
        EXPECT_EQ(r.bound, 2);
        for (int s : r.shifts) EXPECT_EQ(s, r.bound);
        for (bool b : r.h1_matches) EXPECT_TRUE(b);
        for (bool b : r.topology_match) EXPECT_TRUE(b);
    }
}

TEST(Adic, PolynomialBaseRejectsKoszul) {
    const auto mp = ModulePresentation::free_module(BaseKind::Zq, 3, 1, 1, 1);
    try {
        (void)koszul_build(mp, default_f(mp), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgs);
    }
    EXPECT_TRUE(bounded_and_flat_check(mp, default_f(mp), default_g(mp)).bounded);
}
