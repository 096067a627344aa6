#pragma once

// The qprism command line: subcommands, JSON reports, exit codes.
// Exit 0: every check passed. Exit 1: a check failed (named under "failed"). Exit 2: bad input.

#include <cstdint>
#include <exception>
#include <future>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qprism/adic.hpp"
#include "qprism/axioms.hpp"
#include "qprism/base_ring.hpp"
#include "qprism/cartier.hpp"
#include "qprism/delta_ring.hpp"
#include "qprism/divided_poly.hpp"
#include "qprism/error.hpp"
#include "qprism/spec_io.hpp"
#include "qprism/twisted_calculus.hpp"

namespace qprism::cli {

inline constexpr const char* kSchema = "qprism/1";

struct Outcome {
    int code = 0;
    Json report;
};

/// Collects named checks; the report lists the failing ones.
class Checks {
public:
    void add(const std::string& name, bool ok) {
        all_[name] = ok;
        if (!ok) failed_.push_back(name);
    }

    void finish(Outcome& o) const {
        o.report["checks"] = all_;
        o.report["failed"] = failed_;
        o.report["status"] = failed_.empty() ? "pass" : "fail";
        o.code = failed_.empty() ? 0 : 1;
    }

private:
    Json all_ = Json::object();
    std::vector<std::string> failed_;
};

inline Json context_json(const RingContext& ctx) {
    return {{"p", ctx.p}, {"n_prec", ctx.n_prec}, {"m_prec", ctx.m_prec}};
}

inline Outcome error_outcome(const std::string& command, const Error& e) {
    Outcome o;
    o.code = 2;
    o.report = {{"schema", kSchema}, {"command", command}, {"status", "error"}};
    o.report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}, {"field", e.field()}};
    return o;
}

template <class F>
Outcome guarded(const std::string& command, F&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        return error_outcome(command, e);
    } catch (const std::exception& e) {
        return error_outcome(command, Error(ErrorKind::InvalidArgs, e.what()));
    }
}

inline Json header(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

inline Json connection_json(const ConnectionSpec& s) {
    Json j = {{"level", to_int(s.level)}, {"rank", s.rank}, {"theta_matrix", s.theta_text}, {"dp_cap", s.dp_cap}};
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

// cohomology

inline Json cohomology_json(const ConnectionModule& m, int requested) {
    const int d = stable_window(requested, m.level, m.ctx);
    require_dimension(flat_dimension(m.rank, d, m.ctx), "degree_window");
    const ZModPk ring = ZModPk::make(m.ctx.p, m.ctx.n_prec);
    const CohomologyReport r = cohomology_of_complex(TwoTermComplex{de_rham_matrix(m.with_window(d), d)}, ring);
    return {{"context", context_json(m.ctx)},
            {"windows", {{"requested", requested}, {"effective", d}}},
            {"h0", r.h0},
            {"h1", r.h1},
            {"log_card_h0", r.log_card_h0()},
            {"log_card_h1", r.log_card_h1()},
            {"log_card_c0", r.log_card_c0},
            {"log_card_c1", r.log_card_c1},
            {"euler_ok", r.log_card_h0() - r.log_card_h1() == r.log_card_c0 - r.log_card_c1}};
}

inline Outcome run_cohomology(const std::string& path, bool grow) {
    return guarded("cohomology", [&] {
        const ConnectionSpec s = parse_connection_spec(load_json_file(path));
        Outcome o;
        o.report = header("cohomology");
        o.report["spec"] = path;
        o.report["connection"] = connection_json(s);
        o.report["context"] = context_json(s.ctx);
        Checks checks;
        const Json base = cohomology_json(s.module, s.degree_window);
        o.report["windows"] = base["windows"];
        o.report["report"] = base;
        const NilpotenceReport nil = quasi_nilpotence_check(s.module, 64);
        o.report["report"]["nilpotent"] = nil.nilpotent;
        checks.add("cardinality_identity", base["euler_ok"].get<bool>());
        if (grow) {
            const RingContext finer = s.ctx.with_precision(s.ctx.n_prec + 1, s.ctx.m_prec + 1);
            const Json grown = cohomology_json(lift_connection(s.module, finer), s.degree_window + 2);
            o.report["grown"] = grown;
            checks.add("grown_cardinality_identity", grown["euler_ok"].get<bool>());
        }
        checks.finish(o);
        return o;
    });
}

// cartier

inline Json block_json(const BlockCertificate& b) {
    std::vector<std::string> diag;
    for (const auto& u : b.diagonal) diag.push_back(u.to_string());
    return {{"k", b.k},
            {"triangular", b.triangular},
            {"scalar_diagonal", b.scalar_diagonal},
            {"diagonal_units", b.diagonal_units},
            {"kernel_trivial", b.kernel_trivial},
            {"diagonal", diag},
            {"ok", b.ok()}};
}

inline Json verdicts_json(const CartierVerdicts& v) {
    Json blocks = Json::array();
    for (const auto& b : v.blocks) blocks.push_back(block_json(b));
    return {{"nilpotent", v.nilpotent},
            {"chain_map", v.chain_map_ok},
            {"verschiebung", v.verschiebung_ok},
            {"blocks", blocks},
            {"cone_acyclic", v.cone_acyclic}};
}

/// theta(x^k F s) against both block operators on the sections x'^n e_j of the source window.
inline Json block_identity_json(const CartierComplexes& c) {
    Json out = Json::object();
    for (BlockOperator variant : {BlockOperator::Exact, BlockOperator::Unweighted}) {
        Json per_k = Json::array();
        bool all = true;
        for (int k = 1; k < static_cast<int>(c.ctx.p); ++k) {
            int failures = 0;
            for (std::size_t j = 0; j < c.source.rank; ++j) {
                for (int n = 0; n <= c.effective_window; ++n) {
                    Section s = zero_section(c.ctx, c.source.rank, c.effective_window);
                    s[j] = QPolynomial::monomial(WScalar::one(c.ctx), n, c.effective_window);
                    if (!block_identity_holds(c, s, k, variant)) ++failures;
                }
            }
            per_k.push_back({{"k", k}, {"failures", failures}});
            all = all && failures == 0;
        }
        out[to_string(variant)] = {{"holds", all}, {"per_k", per_k}};
    }
    return out;
}

inline void require_cartier_dimension(const ConnectionModule& m, int requested) {
    const int d = stable_window(requested, Level::MinusOne, m.ctx);
    require_dimension(flat_dimension(m.rank, raised_window(d, m.ctx.p), m.ctx), "degree_window");
}

inline Outcome run_cartier(const std::string& path, bool grow) {
    return guarded("cartier", [&] {
        const ConnectionSpec s = parse_connection_spec(load_json_file(path));
        if (s.level != Level::MinusOne) {
            throw Error(ErrorKind::SpecError, "cartier takes a level -1 connection on A'", "level");
        }
        require_cartier_dimension(s.module, s.degree_window);
        if (grow) {
            const RingContext finer = s.ctx.with_precision(s.ctx.n_prec + 1, s.ctx.m_prec + 1);
            require_cartier_dimension(lift_connection(s.module, finer), s.degree_window + 2);
        }
        CartierProblem problem{s.module, s.degree_window, 64};
        const CartierReport r = cartier_verify(problem, grow);

        Outcome o;
        o.report = header("cartier");
        o.report["spec"] = path;
        o.report["connection"] = connection_json(s);
        o.report["context"] = context_json(s.ctx);
        o.report["windows"] = {{"requested", r.requested_window},
                               {"effective", r.effective_window},
                               {"raised", r.raised_window}};
        o.report["report"] = verdicts_json(r.base);
        const CartierComplexes c = build_cartier_complexes(s.module, s.degree_window);
        o.report["diagnostics"] = {{"block_identity", block_identity_json(c)}};

        Checks checks;
        checks.add("nilpotent", r.base.nilpotent);
        checks.add("chain_map", r.base.chain_map_ok);
        checks.add("verschiebung", r.base.verschiebung_ok);
        checks.add("block_certificates", r.base.blocks_ok());
        checks.add("cone_acyclic", r.base.cone_acyclic);
        checks.add("block_identity", o.report["diagnostics"]["block_identity"]["exact"]["holds"].get<bool>());
        if (grow) {
            const RingContext finer = s.ctx.with_precision(s.ctx.n_prec + 1, s.ctx.m_prec + 1);
            o.report["grown"] = {{"context", context_json(finer)},
                                 {"windows", {{"requested", s.degree_window + 2}, {"effective", *r.grown_effective_window}}},
                                 {"report", verdicts_json(*r.grown)}};
            checks.add("grow_stable", r.stable());
            checks.add("grown_all", r.grown->all());
        }
        checks.finish(o);
        return o;
    });
}

// adic

inline Json torsion_json(const TorsionReport& t) {
    Json j = {{"cap", t.cap}, {"kernels", t.kernels}, {"window", t.window}};
    if (t.bound) {
        j["bound"] = *t.bound;
    } else {
        j["bound"] = "unbounded-at-cap";
    }
    return j;
}

inline Outcome run_adic(const std::string& path) {
    return guarded("adic", [&] {
        const AdicSpec s = parse_adic_spec(load_json_file(path));
        const ModulePresentation& mp = s.module;
        std::size_t block = 1;
        if (mp.base == BaseKind::W) block = static_cast<std::size_t>(mp.m);
        if (mp.base == BaseKind::Zq) block = static_cast<std::size_t>(mp.zq_window + 1);
        require_dimension(2 * mp.generators * block, "generators");

        Outcome o;
        o.report = header("adic");
        o.report["spec"] = path;
        o.report["context"] = {{"base", to_string(mp.base)}, {"p", mp.p}, {"n", mp.n}, {"m", mp.m}};
        o.report["windows"] = {{"cap", s.cap}, {"formal_window", s.formal_window}, {"n_max", s.n_max}};
        if (mp.base == BaseKind::Zq) o.report["windows"]["zq_window"] = mp.zq_window;
        o.report["elements"] = {{"f", s.f.to_string()}, {"g", s.g.to_string()}};

        Checks checks;
        const TorsionReport tor = torsion_bound(mp, s.f, s.cap);
        const FlatnessReport fl = bounded_and_flat_check(mp, s.f, s.g, s.cap, s.formal_window);
        Json rep;
        rep["torsion"] = torsion_json(tor);
        rep["g_torsion_free"] = fl.g_torsion_free;
        rep["bounded"] = fl.bounded;
        rep["reduction_free"] = fl.reduction_free;
        rep["tor1_vanishes"] = fl.tor1_vanishes;
        rep["completely_flat"] = fl.completely_flat;
        rep["formally_flat"] = fl.formally_flat;
        checks.add("complete_implies_formal", !fl.completely_flat || fl.formally_flat);

        if (mp.base != BaseKind::Zq) {
            const KoszulCohomology k1 = koszul_build(mp, s.f, 1);
            const KoszulCohomology k2 = koszul_build(mp, s.f, 1, s.g, 1);
            rep["koszul"] = {{"f", k1.h}, {"f_g", k2.h}};
            const KoszulComparison kc = koszul_reduction_check(mp, s.f, s.g);
            rep["koszul_reduction"] = {{"is_complex", kc.is_complex},
                                       {"chain_map", kc.chain_map},
                                       {"cone_acyclic", kc.cone_acyclic}};
            checks.add("koszul_is_complex", kc.is_complex);
            checks.add("koszul_chain_map", kc.chain_map);
            // over a truncated base g-torsion-freeness is relative, and the comparison is only informative
            if (mp.base == BaseKind::Z && fl.g_torsion_free) checks.add("koszul_reduction", kc.cone_acyclic);
            if (tor.bound) {
                const ProIsoReport pi = pro_iso_check(mp, s.f, s.n_max, s.cap);
                rep["pro_iso"] = {{"bound", pi.bound},
                                  {"shifts", pi.shifts},
                                  {"h1_matches", pi.h1_matches},
                                  {"completion_agreement", pi.topology_match}};
                bool shifts = true, h1 = true, topo = true;
                for (int sh : pi.shifts) shifts = shifts && sh == pi.bound;
                for (bool b : pi.h1_matches) h1 = h1 && b;
                for (bool b : pi.topology_match) topo = topo && b;
                checks.add("pro_iso_shift", shifts);
                checks.add("koszul_h1", h1);
                checks.add("completion_agreement", topo);
            }
        }
        o.report["report"] = rep;
        checks.finish(o);
        return o;
    });
}

// axioms, poincare, envelope

inline Outcome run_axioms(int samples, std::uint64_t seed) {
    return guarded("axioms", [&] {
        Outcome o;
        o.report = header("axioms");
        o.report["windows"] = {{"samples", samples}, {"seed", seed}, {"q_bound", 12}};
        Checks checks;
        std::mt19937_64 rng(seed);
        Json laws = Json::array();
        for (std::uint64_t p : {2, 3, 5}) {
            for (int n : {2, 3}) {
                for (int m : {2, 3}) {
                    const RingContext ctx = RingContext::make(p, n, m);
                    const DeltaLawReport r = delta_law_check(ctx, samples, rng);
                    laws.push_back({{"context", context_json(ctx)},
                                    {"sum_failures", r.sum_failures},
                                    {"product_failures", r.product_failures}});
                    checks.add("delta_laws_p" + std::to_string(p) + "_n" + std::to_string(n) + "_m" + std::to_string(m),
                               r.ok());
                }
            }
        }
        Json dist = Json::object();
        for (std::uint64_t p : {2, 3, 5}) {
            const RingContext ctx = RingContext::make(p, 3, 3);
            const bool dq = is_distinguished({to_mpoly(q_int_exact(p)), 3}, ctx);
            const bool t = is_distinguished({MPoly::q() - MPoly::constant(1), 3}, ctx);
            dist[std::to_string(p)] = {{"q_integer_p", dq}, {"q_minus_one", t}};
            checks.add("distinguished_p" + std::to_string(p), dq && !t);
        }
        const QIdentityReport qi = q_identity_check(12);
        const RingContext ctx3 = RingContext::make(3, 2, 2);
        const TableAxiomReport classical = check_table_axioms(classical_table(), ctx3, 6);
        const TableAxiomReport qpow = check_table_axioms(q_power_table(), ctx3, 6);
        auto table_json = [](const TableAxiomReport& r) {
            return Json{{"commutative", r.commutative},
                        {"associative", r.associative},
                        {"unital", r.unital},
                        {"comultiplicative", r.comultiplicative}};
        };
        checks.add("q_product", qi.product_failures == 0);
        checks.add("q_pascal", qi.pascal_failures == 0);
        checks.add("divided_power_table", classical.all());
        o.report["report"] = {{"delta_laws", laws},
                              {"distinguished", dist},
                              {"q_identities", {{"product_failures", qi.product_failures},
                                                {"pascal_failures", qi.pascal_failures}}},
                              {"tables", {{"classical", table_json(classical)}, {"q_power", table_json(qpow)}}}};
        checks.finish(o);
        return o;
    });
}

inline Outcome run_poincare(std::uint64_t p, int cap, int n, int m, int x_window) {
    return guarded("poincare", [&] {
        const RingContext ctx = RingContext::make(p, n, m);
        require_dimension(flat_dimension(static_cast<std::size_t>(cap) + 1, x_window, ctx), "cap");
        const PoincareReport r = poincare_check(ctx, cap, x_window);
        Outcome o;
        o.report = header("poincare");
        o.report["context"] = context_json(ctx);
        o.report["windows"] = {{"dp_cap", cap}, {"x_window", x_window}};
        o.report["report"] = {{"log_h_unit", r.log_h_unit},
                              {"log_h_middle", r.log_h_middle},
                              {"log_h_forms_below", r.log_h_forms_below},
                              {"log_h_forms_top", r.log_h_forms_top}};
        Checks checks;
        checks.add("exact_below_cap", r.exact());
        checks.finish(o);
        return o;
    });
}

inline Outcome run_envelope(std::uint64_t p, int order, const std::string& g_text, const std::string& d_text,
                            int precision) {
    return guarded("envelope", [&] {
        if (!is_prime(p) || p > 97) throw Error(ErrorKind::SpecError, "p must be a prime in [2, 97]", "p");
        if (order < 0 || order > 6) throw Error(ErrorKind::SpecError, "order must lie in [0, 6]", "order");
        const MPoly g = spec_detail::within_field("g", [&] { return MPoly::parse(g_text); });
        const MPoly d = d_text.empty() ? to_mpoly(q_int_exact(p))
                                       : spec_detail::within_field("d", [&] { return MPoly::parse(d_text); });
        const int prec = precision > 0 ? precision : order + 2;
        const EnvelopePresentation env = envelope_presentation({g, prec}, {d, prec}, order, p);
        Outcome o;
        o.report = header("envelope");
        o.report["context"] = {{"p", p}, {"precision", prec}};
        o.report["windows"] = {{"order", order}};
        Json rels = Json::array();
        bool precise = true;
        for (std::size_t i = 0; i < env.relations.size(); ++i) {
            rels.push_back({{"index", i},
                            {"polynomial", env.relations[i].poly.to_string()},
                            {"precision", env.relations[i].precision}});
            precise = precise && env.relations[i].precision >= 1;
        }
        o.report["report"] = {{"g", g.to_string()}, {"d", d.to_string()}, {"generators", env.generators},
                              {"relations", rels}};
        Checks checks;
        checks.add("relation_count", env.relations.size() == static_cast<std::size_t>(order) + 1);
        checks.add("precision_left", precise);
        checks.finish(o);
        return o;
    });
}

/// Independent spec files run concurrently; results keep input order.
template <class F>
Outcome run_batch(const std::vector<std::string>& paths, F&& one) {
    if (paths.size() == 1) return one(paths[0]);
    std::vector<std::future<Outcome>> jobs;
    for (const auto& path : paths) jobs.push_back(std::async(std::launch::async, one, path));
    Outcome all;
    all.report = Json::array();
    for (auto& j : jobs) {
        Outcome r = j.get();
        all.code = std::max(all.code, r.code);
        all.report.push_back(std::move(r.report));
    }
    return all;
}

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact checks for q-twisted calculus over truncated prismatic base rings", "qprism"};
    app.require_subcommand(1);

    int samples = 1000;
    std::uint64_t seed = 1;
    auto* axioms = app.add_subcommand("axioms", "delta-ring laws and q-combinatorics");
    axioms->add_option("--samples", samples, "random pairs per context")->check(CLI::Range(1, 1000000));
    axioms->add_option("--seed", seed, "RNG seed");

    std::vector<std::string> specs;
    bool grow = false;
    auto* cohomology = app.add_subcommand("cohomology", "twisted de Rham H^0 and H^1 of a connection");
    cohomology->add_option("--spec", specs, "spec files")->required()->expected(1, -1);
    cohomology->add_flag("--grow", grow, "rerun at (N+1, M+1, D+2)");

    auto* cartier = app.add_subcommand("cartier", "Frobenius descent pipeline");
    cartier->add_option("--spec", specs, "spec files")->required()->expected(1, -1);
    cartier->add_flag("--grow", grow, "rerun at (N+1, M+1, D+2) and compare verdicts");

    std::uint64_t p = 2;
    int cap = 4, n_prec = 2, m_prec = 2, x_window = 1;
    auto* poincare = app.add_subcommand("poincare", "exactness of the divided-polynomial complex");
    poincare->add_option("--p", p, "prime")->required();
    poincare->add_option("--cap", cap, "divided-degree cap")->required()->check(CLI::Range(1, 64));
    poincare->add_option("--n", n_prec, "p-adic precision")->check(CLI::Range(1, 16));
    poincare->add_option("--m", m_prec, "(q-1)-adic precision")->check(CLI::Range(1, 16));
    poincare->add_option("--x-window", x_window, "x-degree window")->check(CLI::Range(0, 64));

    int order = 1, precision = 0;
    std::string g_text = "-x", d_text;
    auto* envelope = app.add_subcommand("envelope", "delta-envelope relations");
    envelope->add_option("--p", p, "prime")->required();
    envelope->add_option("--order", order, "order cap K")->required();
    envelope->add_option("--g", g_text, "adjoined numerator g");
    envelope->add_option("--d", d_text, "denominator d, default (p)_q");
    envelope->add_option("--precision", precision, "p-adic digits of the inputs, default K+2");

    auto* adic = app.add_subcommand("adic", "torsion, boundedness and flatness of a module");
    adic->add_option("--spec", specs, "spec files")->required()->expected(1, -1);

    std::uint64_t qn = 0, qr = 1;
    bool json_out = false;
    auto* qint = app.add_subcommand("q-int", "print the q-integer (N)_{q^r}");
    qint->add_option("N", qn, "N")->required()->check(CLI::Range(std::uint64_t{0}, std::uint64_t{100000}));
    qint->add_option("--r", qr, "base exponent r")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000}));
    qint->add_flag("--json", json_out, "emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    Outcome o;
    if (*qint) {
        const std::string text = to_mpoly(q_int_exact(qn, qr)).to_string();
        if (!json_out) {
            out << text << "\n";
            return 0;
        }
        o.report = header("q-int");
        o.report["report"] = {{"n", qn}, {"r", qr}, {"polynomial", text}};
        o.report["status"] = "pass";
    } else if (*axioms) {
        o = run_axioms(samples, seed);
    } else if (*cohomology) {
        o = run_batch(specs, [grow](const std::string& f) { return run_cohomology(f, grow); });
    } else if (*cartier) {
        o = run_batch(specs, [grow](const std::string& f) { return run_cartier(f, grow); });
    } else if (*adic) {
        o = run_batch(specs, [](const std::string& f) { return run_adic(f); });
    } else if (*poincare) {
        o = run_poincare(p, cap, n_prec, m_prec, x_window);
    } else if (*envelope) {
        o = run_envelope(p, order, g_text, d_text, precision);
    }
    out << o.report.dump(2) << "\n";
    return o.code;
}

}  // namespace qprism::cli
