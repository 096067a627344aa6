// Acceptance run: one PASS/FAIL line per criterion. Arithmetic is exact throughout, so every
// tolerance below is zero; the only thresholds are wall-clock bounds.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qprism/adic.hpp"
#include "qprism/axioms.hpp"
#include "qprism/cli.hpp"
#include "qprism/qprism.hpp"

using namespace qprism;

namespace {

struct Result {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Result()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = limit_s <= 0 || secs < limit_s;
    const bool pass = r.ok && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %2d %-34s tolerance=0 (exact)  time=%.2fs", pass ? "PASS" : "FAIL", id, name, secs);
    if (limit_s > 0) std::printf(" < %.0fs", limit_s);
    std::printf("  %s\n", r.detail.c_str());
    std::fflush(stdout);
}

std::string fixture_path(const std::string& name) { return std::string(QPRISM_FIXTURES) + "/" + name + ".json"; }

ConnectionModule fixture(const std::string& name) {
    return parse_connection_spec(load_json_file(fixture_path(name))).module;
}

const std::vector<std::string> kDescent = {"p2_rank1_trivial",  "p2_rank1_qtwist", "p2_rank1_nilpotent",
                                           "p2_rank2_nilpotent", "p2_rank1_random", "p2_rank2_random",
                                           "p3_rank1_trivial",  "p3_rank1_qtwist", "p3_rank2_mixed",
                                           "p3_rank1_random",   "p3_rank2_random"};

std::vector<std::string> all_connections() {
    auto v = kDescent;
    v.push_back("q1_rank1");
    return v;
}

Section random_section(const CartierComplexes& c, std::mt19937_64& rng) {
    Section s = zero_section(c.ctx, c.source.rank, c.effective_window);
    for (auto& f : s) {
        for (int n = 0; n <= c.effective_window; ++n) {
            f += QPolynomial::monomial(random_scalar(c.ctx, rng), n, c.effective_window);
        }
    }
    return s;
}

ModMatrix to_mod(const oracle::Mat& m, std::size_t cols, const ZModPk& ring) {
    ModMatrix out(m.size(), cols, ring);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m[i][j];
    }
    return out;
}

std::string run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qprism");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str();
}

}  // namespace

int main() {
    criterion(1, "delta-ring sum and product laws", 10, [] {
        std::mt19937_64 rng(20240601);
        int contexts = 0, bad = 0;
        for (std::uint64_t p : {2, 3, 5}) {
            for (int n : {2, 3}) {
                for (int m : {2, 3}) {
                    const auto r = delta_law_check(RingContext::make(p, n, m), 1000, rng);
                    ++contexts;
                    bad += r.sum_failures + r.product_failures;
                }
            }
        }
        return Result{bad == 0, std::to_string(contexts) + " contexts x 1000 pairs, " + std::to_string(bad) + " violations"};
    });

    criterion(2, "distinguished elements", 1, [] {
        bool ok = true;
        for (std::uint64_t p : {2, 3, 5}) {
            const auto ctx = RingContext::make(p, 3, 3);
            ok = ok && is_distinguished(DeltaElement{to_mpoly(q_int_exact(p)), 3}, ctx);
            ok = ok && !is_distinguished(DeltaElement::parse("q-1", 3), ctx);
        }
        return Result{ok, "(p)_q distinguished, q-1 not, p in {2,3,5}"};
    });

    criterion(3, "q-integer identities", 1, [] {
        const auto r = q_identity_check(12);
        int mismatches = 0;
        for (int n = 0; n <= 12; ++n) {
            for (int k = 0; k <= n; ++k) {
                const ZPoly lib = q_binomial_exact(n, k);
                oracle::Poly got(lib.begin(), lib.end());
                oracle::trim(got);
                if (got != oracle::q_binomial(n, k)) ++mismatches;
            }
        }
        return Result{r.ok() && mismatches == 0,
                      "product " + std::to_string(r.product_failures) + ", pascal " + std::to_string(r.pascal_failures) +
                          ", factorial-quotient mismatches " + std::to_string(mismatches)};
    });

    criterion(4, "divided-polynomial Poincare lemma", 5, [] {
        bool ok = true;
        std::string detail;
        for (std::uint64_t p : {2, 3}) {
            for (int cap : {4, 8}) {
                const auto r = poincare_check(RingContext::make(p, 2, 2), cap, 1);
                ok = ok && r.exact();
                detail += "p" + std::to_string(p) + "/cap" + std::to_string(cap) + (r.exact() ? ":exact " : ":not-exact ");
            }
        }
        return Result{ok, detail};
    });

    criterion(5, "Frobenius descent on fixtures", 60, [] {
        int passed = 0;
        std::string bad;
        for (const auto& name : kDescent) {
            const auto r = cartier_verify(CartierProblem{fixture(name), 4, 64}, true);
            if (r.all()) {
                ++passed;
            } else {
                bad += " " + name;
            }
        }
        return Result{passed == static_cast<int>(kDescent.size()),
                      std::to_string(passed) + "/" + std::to_string(kDescent.size()) + " fixtures incl. grow" + bad};
    });

    int exact_failures = 0;
    criterion(6, "block identity as stated", 0, [&exact_failures] {
        std::mt19937_64 rng(6);
        int checks = 0, failed = 0;
        std::string holds_on;
        for (const auto& name : all_connections()) {
            const auto c = build_cartier_complexes(fixture(name), 4);
            bool all_here = true;
            for (int k = 1; k < static_cast<int>(c.ctx.p); ++k) {
                for (int s = 0; s < 50; ++s) {
                    const Section sec = random_section(c, rng);
                    ++checks;
                    if (!block_identity_holds(c, sec, k, BlockOperator::Unweighted)) {
                        ++failed;
                        all_here = false;
                    }
                    if (!block_identity_holds(c, sec, k, BlockOperator::Exact)) ++exact_failures;
                }
            }
            if (all_here) holds_on += " " + name;
        }
        return Result{failed == 0, std::to_string(failed) + "/" + std::to_string(checks) +
                                       " sections violate it; holds only on:" + holds_on};
    });
    std::printf("       note: with the q^k weight on the x' theta' term the identity has %d violations\n", exact_failures);

    criterion(7, "semilinear Frobenius chain map", 0, [] {
        bool ok = true;
        for (std::uint64_t p : {2, 3}) {
            const auto r = semilinear_frobenius(RingContext::make(p, 2, 2), 4);
            ok = ok && r.chain_map_ok && r.monomials_ok;
        }
        return Result{ok, "p in {2,3}, monomials x^n, n <= 4"};
    });

    criterion(8, "kernel oracle over Z/4 and Z/8", 0, [] {
        int matrices = 0, bad = 0;
        for (int k : {2, 3}) {
            const ZModPk ring = ZModPk::make(2, k);
            for (std::size_t r = 1; r <= 2; ++r) {
                for (std::size_t c = 1; c <= 2; ++c) {
                    oracle::for_each_vector(r * c, ring.mod, [&](const oracle::Vec& flat) {
                        oracle::Mat m(r, oracle::Vec(c));
                        for (std::size_t i = 0; i < r; ++i) {
                            for (std::size_t j = 0; j < c; ++j) m[i][j] = flat[i * c + j];
                        }
                        ++matrices;
                        const auto ker = oracle::kernel(m, c, ring.mod);
                        const auto img = oracle::image(m, c, ring.mod);
                        std::size_t dom = 1;
                        for (std::size_t i = 0; i < c; ++i) dom *= ring.mod;
                        const auto basis = kernel_basis(to_mod(m, c, ring), ring);
                        if (oracle::span(basis, c, ring.mod) != ker || ker.size() * img.size() != dom) ++bad;
                    });
                }
            }
        }
        return Result{bad == 0, std::to_string(matrices) + " matrices enumerated, " + std::to_string(bad) + " mismatches"};
    });

    criterion(9, "torsion, Koszul and completion", 0, [] {
        bool ok = true;
        std::string detail;
        for (std::uint64_t p : {2, 3}) {
            auto mp = ModulePresentation::free_module(BaseKind::Z, p, 1, 1, 2)
                          .with_relations({{MPoly{}, MPoly::constant(Integer(p * p))}});
            const auto t = torsion_bound(mp, default_f(mp), 8);
            const bool bound_ok = t.bound && *t.bound == 2;
            const auto pi = pro_iso_check(mp, default_f(mp), 3);
            bool shift = true, complete = true;
            for (int s : pi.shifts) shift = shift && s == pi.bound;
            for (bool b : pi.h1_matches) complete = complete && b;
            for (bool b : pi.topology_match) complete = complete && b;
            const MPoly g = p == 2 ? MPoly::parse("q+2") : MPoly::parse("q+1");
            const auto kc = koszul_reduction_check(mp, default_f(mp), g);
            const auto free = ModulePresentation::free_module(BaseKind::Z, p, 1, 1, 2);
            const auto kf = koszul_reduction_check(free, default_f(free), default_g(free));
            const bool kos = kc.cone_acyclic && kc.chain_map && kf.cone_acyclic && kf.chain_map;
            ok = ok && bound_ok && shift && complete && kos;
            detail += "p" + std::to_string(p) + ": bound=" + (t.bound ? std::to_string(*t.bound) : "none") +
                      " shift=" + (shift ? "ok" : "bad") + " koszul=" + (kos ? "acyclic" : "bad") +
                      " completion=" + (complete ? "agree" : "differ") + "  ";
        }
        return Result{ok, detail};
    });

    criterion(10, "envelope relation, p=2, K=1", 0, [] {
        const auto env = envelope_presentation(DeltaElement::parse("-x", 3), DeltaElement::parse("1+q", 3), 1, 2);
        const MPoly expected = MPoly::parse("(1+q^2)*w1 - q*w0^2 - (1+q)*x*w0");
        return Result{env.relations.size() == 2 && env.relations[1].poly == expected, env.relations[1].poly.to_string()};
    });

    criterion(11, "classical degeneration at q = 1", 0, [] {
        const auto r = cartier_verify(CartierProblem{fixture("q1_rank1"), 4, 64}, false);
        return Result{r.base.cone_acyclic && r.base.all(), std::string("cone ") + (r.base.cone_acyclic ? "acyclic" : "not acyclic")};
    });

    criterion(12, "byte-identical CLI reports", 0, [] {
        int runs = 0, differ = 0;
        auto twice = [&](const std::vector<std::string>& args) {
            ++runs;
            if (run_cli(args) != run_cli(args)) ++differ;
        };
        for (const auto& name : all_connections()) {
            twice({"cohomology", "--spec", fixture_path(name)});
            twice({"cartier", "--grow", "--spec", fixture_path(name)});
        }
        twice({"cohomology", "--spec", fixture_path("bad_rank")});
        for (const char* name : {"adic_z_torsion", "adic_z_koszul", "adic_zpn_cyclic", "adic_w_free",
                                 "adic_w_q_minus_one", "adic_zq_free"}) {
            twice({"adic", "--spec", fixture_path(name)});
        }
        return Result{differ == 0, std::to_string(runs) + " report pairs, " + std::to_string(differ) + " differ"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
