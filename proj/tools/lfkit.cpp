// lfkit command-line tool. Exit codes: 0 success or verified-true,
// 1 verified-false, 2 usage, parse or input error.

#include "lfkit/audit.hpp"
#include "lfkit/error.hpp"
#include "lfkit/io.hpp"
#include "lfkit/marginal.hpp"
#include "lfkit/quantum.hpp"
#include "lfkit/reproduce.hpp"
#include "lfkit/scm.hpp"
#include "lfkit/separation.hpp"
#include "lfkit/veronika.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace lfkit;

namespace {

struct Globals {
    double tolerance = 1e-9;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string out;
};

DirectedGraph named_graph(const std::string& name) {
    if (name == "lf") return graphs::lf_dag();
    if (name == "bell") return graphs::bell_dag();
    if (name == "tripartite") return graphs::tripartite_dag();
    if (name == "cyclic-feedback") return graphs::cyclic_feedback();
    if (name == "cyclic-pair") return graphs::cyclic_pair();
    if (name == "superluminal") return graphs::superluminal();
    if (name == "superdeterministic") return graphs::superdeterministic();
    if (name == "retrocausal") return graphs::retrocausal();
    throw ParseError("unknown graph '" + name + "'");
}

struct GraphSource {
    std::string file, name;
    void add(CLI::App* c) {
        c->add_option("--graph", file, "graph JSON file");
        c->add_option("--named", name, "built-in graph: lf, bell, tripartite, cyclic-feedback, cyclic-pair, "
                                       "superluminal, superdeterministic, retrocausal");
    }
    DirectedGraph get() const {
        if (!file.empty()) return load_graph(file);
        if (!name.empty()) return named_graph(name);
        throw ParseError("give --graph or --named");
    }
};

struct BoxSource {
    std::string file, name;
    std::string flag;
    void add(CLI::App* c, const std::string& f = "dist") {
        flag = f;
        c->add_option("--" + f, file, "distribution JSON file");
        c->add_option("--" + f + "-box", name, "built-in box: pr_box, tsirelson_box, white_noise, lhv_deterministic(i)");
    }
    ConditionalDistribution get() const {
        if (!file.empty()) return load_distribution(file);
        if (!name.empty()) return boxes::named_box(name);
        throw ParseError("give --" + flag + " or --" + flag + "-box");
    }
};

ConditionalDistribution perfect_pac(const ConditionalDistribution& pab) {
    RationalizedBox rb = rationalize_box(pab);
    const auto& t = rb.box.exact_table();
    BoxShape s;
    Rational p0 = t[s.ab_index(1, 0, 0, 0)] + t[s.ab_index(1, 0, 0, 1)];
    return ConditionalDistribution::exact({{"A", 2, VariableRole::Outcome}, {"C", 2, VariableRole::Outcome}}, {},
                                          {p0, 0, 0, 1 - p0});
}

void write_out(const Globals& g, const std::string& name, const std::string& content) {
    if (g.out.empty()) return;
    std::filesystem::create_directories(g.out);
    write_text_file((std::filesystem::path(g.out) / name).string(), content);
}

std::string fixed(double v, int p = 9) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(p) << v;
    return os.str();
}

Assignment parse_assignment(const std::string& text) {
    Assignment a;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected NAME=value in '" + item + "'");
        a[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    }
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local Friendliness and causal-modeling toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tolerance", g.tolerance, "numerical tolerance for approximate tables");
    app.add_option("--jobs", g.jobs, "worker threads");
    app.add_option("--seed", g.seed, "seed for randomized procedures");
    app.add_option("--out", g.out, "output directory for reports and CSV files");
    int rc = 0;

    // dsep / sigmasep
    GraphSource sep_graph;
    std::string sep_statement, sep_criterion = "d";
    auto run_sep = [&](Criterion c) {
        DirectedGraph gr = sep_graph.get();
        SeparationStatement s = parse_statement(sep_statement, c);
        auto path = open_path(gr, s.left, s.right, s.given, c);
        std::cout << s.to_string() << " [" << to_string(c) << "]: " << (path ? "not separated" : "separated") << "\n";
        if (path) std::cout << "open path " << path->to_string() << "\n";
        rc = path ? 1 : 0;
    };
    auto* dsep = app.add_subcommand("dsep", "test a separation statement U | V | W");
    sep_graph.add(dsep);
    dsep->add_option("statement", sep_statement, "U | V | W")->required();
    dsep->add_option("--criterion", sep_criterion, "d or sigma");
    dsep->callback([&] { run_sep(parse_criterion(sep_criterion)); });
    auto* sigmasep = app.add_subcommand("sigmasep", "test a sigma-separation statement");
    sep_graph.add(sigmasep);
    sigmasep->add_option("statement", sep_statement, "U | V | W")->required();
    sigmasep->callback([&] { run_sep(Criterion::Sigma); });

    // ci-test
    BoxSource ci_box;
    std::string ci_text;
    auto* ci = app.add_subcommand("ci-test", "exact conditional independence test");
    ci_box.add(ci);
    ci->add_option("statement", ci_text, "U | V | W")->required();
    ci->callback([&] {
        ConditionalDistribution d = ci_box.get();
        CIStatement s = parse_ci(ci_text);
        CIResult r = ci_holds(d, {s.u.begin(), s.u.end()}, {s.v.begin(), s.v.end()}, {s.w.begin(), s.w.end()}, {},
                              d.is_exact() ? 0.0 : g.tolerance);
        std::cout << s.to_string() << ": " << (r.holds ? "holds" : "fails") << ", deviation "
                  << (r.exact_deviation ? to_string(*r.exact_deviation) : fixed(r.deviation)) << "\n";
        rc = r.holds ? 0 : 1;
    });

    // marginal-feasible
    BoxSource mf_ab, mf_ac;
    auto* mf = app.add_subcommand("marginal-feasible", "decide the causal marginal problem for P(ab|xy), P(ac|x=1)");
    mf_ab.add(mf, "pab");
    mf_ac.add(mf, "pac");
    mf->callback([&] {
        MarginalVerdict v = marginal_feasible(mf_ab.get(), mf_ac.get());
        if (v.verdict.feasible) {
            std::cout << "feasible; witness verified: " << (verify_witness(v.system, v.verdict.witness) ? "yes" : "no") << "\n";
            if (v.joint) write_out(g, "extension.json", distribution_to_json(*v.joint));
        } else {
            std::cout << "infeasible; certificate verified: "
                      << (verify_certificate(v.system, v.verdict.certificate) ? "yes" : "no") << "\n";
        }
        rc = v.verdict.feasible ? 0 : 1;
    });

    // min-gamma
    BoxSource mg_box;
    auto* mg = app.add_subcommand("min-gamma", "least P(a!=c|x=1) over Local Agency extensions");
    mg_box.add(mg);
    mg->callback([&] {
        GammaResult r = min_gamma(mg_box.get());
        std::cout << "gamma " << to_string(r.gamma) << " (" << fixed(to_double(r.gamma)) << ")\n";
        if (r.rationalization_radius > 0) std::cout << "rationalization radius " << r.rationalization_radius << "\n";
        write_out(g, "min_gamma_extension.json", distribution_to_json(r.extension));
    });

    // monogamy
    BoxSource mo_ab, mo_ac;
    auto* mo = app.add_subcommand("monogamy", "evaluate CHSH + 2 P(a=c|x=1) <= 5");
    mo_ab.add(mo, "pab");
    mo_ac.add(mo, "pac");
    mo->callback([&] {
        Eq2Result r = monogamy_eq2(mo_ab.get(), mo_ac.get());
        std::cout << "lhs " << (r.exact_lhs ? to_string(*r.exact_lhs) : fixed(r.lhs)) << " bound 5: "
                  << (r.satisfied ? "satisfied" : "violated") << "\n";
        rc = r.satisfied ? 0 : 1;
    });

    // lf-facets
    std::string variant = "perfect-copy";
    auto* lff = app.add_subcommand("lf-facets", "facets of the binary LF polytope");
    lff->add_option("--variant", variant, "perfect-copy or general");
    lff->callback([&] {
        LfVariant v;
        if (variant == "perfect-copy") v = LfVariant::PerfectCopy;
        else if (variant == "general") v = LfVariant::General;
        else throw ParseError("variant must be perfect-copy or general");
        FacetResult f = lf_facets(BoxShape{}, v);
        std::ostringstream os;
        os << "joint vertices " << f.joint_vertex_count << ", dimension " << f.hull.dimension() << ", facets "
           << f.facets.size() << ", nontrivial " << f.nontrivial().size() << "\n";
        for (const auto& ineq : f.nontrivial()) os << ineq.to_string() << "\n";
        std::cout << os.str();
        write_out(g, "lf_facets.txt", os.str());
    });

    // member
    BoxSource me_box, me_pac;
    std::string polytope = "lhv";
    auto* me = app.add_subcommand("member", "membership in the LHV, LF or NS polytope");
    me_box.add(me);
    me_pac.add(me, "pac");
    me->add_option("--polytope", polytope, "lhv, lf or ns");
    me->callback([&] {
        PolytopeKind k = parse_polytope(polytope);
        ConditionalDistribution box = me_box.get();
        std::optional<ConditionalDistribution> pac;
        if (k == PolytopeKind::LF) pac = (me_pac.file.empty() && me_pac.name.empty()) ? perfect_pac(box) : me_pac.get();
        MembershipResult r = membership(box, k, pac);
        std::cout << to_string(k) << ": " << (r.inside ? "inside" : "outside") << "\n";
        if (r.separator) std::cout << "separator " << r.separator->to_string() << " value " << fixed(r.separator_value) << "\n";
        rc = r.inside ? 0 : 1;
    });

    // slice
    std::string f1_file, f2_file;
    std::size_t resolution = 200;
    auto* sl = app.add_subcommand("slice", "label a two-dimensional slice of box space");
    sl->add_option("--f1", f1_file, "inequality JSON for the first axis (default CHSH)");
    sl->add_option("--f2", f2_file, "inequality JSON for the second axis (default the 111 CHSH variant)");
    sl->add_option("--resolution", resolution, "grid points per axis");
    sl->callback([&] {
        Inequality f1 = f1_file.empty() ? chsh_inequality(0, 0, 0) : load_inequality(f1_file);
        Inequality f2 = f2_file.empty() ? chsh_inequality(1, 1, 1) : load_inequality(f2_file);
        SliceResult r = slice_scan(f1, f2, resolution, {{"tsirelson", boxes::tsirelson_box()}});
        if (g.out.empty()) std::cout << r.csv();
        else {
            write_out(g, "slice.csv", r.csv());
            std::cout << r.grid.size() << " points written\n";
        }
        for (const auto& e : r.extras) std::cout << "# " << e.name << " " << fixed(e.t1, 6) << " " << fixed(e.t2, 6) << " " << e.label << "\n";
    });

    // quantum-lf
    std::string scenario;
    auto* q = app.add_subcommand("quantum-lf", "simulate the minimal LF scenario");
    q->add_option("--scenario", scenario, "quantum scenario JSON (default Tsirelson-optimal)");
    q->callback([&] {
        MinimalLFModel m = scenario.empty() ? tsirelson_model() : load_quantum_scenario(scenario);
        LfRun run = run_minimal_lf(m);
        LocalAgencyReport la = verify_local_agency(run.bookkeeping, g.tolerance);
        std::cout << "CHSH " << fixed(chsh_value(run.pab), 12) << "\n"
                  << "Local Agency deviations " << la.ac_deviation << " " << la.bc_deviation << "\n"
                  << "P(c) " << fixed(run.charlie_marginal[0], 12) << " " << fixed(run.charlie_marginal[1], 12) << "\n";
        write_out(g, "pab.json", distribution_to_json(run.pab));
        write_out(g, "pac.json", distribution_to_json(run.pac));
        write_out(g, "pabc_bookkeeping.json", distribution_to_json(run.bookkeeping));
    });

    // veronika
    std::string protocol;
    auto* ve = app.add_subcommand("veronika", "run the verification protocol sweep");
    ve->add_option("--config", protocol, "protocol JSON (default M=2, N in {4,8,16}, epsilon 1/4)");
    ve->callback([&] {
        ProtocolConfig p = protocol.empty() ? parse_protocol(R"({"m":2,"ns":[4,8,16],"epsilon":"1/4"})") : load_protocol(protocol);
        std::ostringstream csv;
        csv << "n,pass_count,total,pass_probability,fidelity,gamma_estimate,pvm_deviation\n";
        if (p.settings == "balanced") {
            for (const auto& w : veronika_sweep(p.run, p.ns, p.epsilon, p.test, g.jobs))
                csv << w.n << "," << w.pass_count << "," << w.total << "," << fixed(w.pass_probability, 12) << ","
                    << fixed(w.fidelity, 12) << "," << fixed(w.gamma_estimate, 12) << "," << w.pvm_deviation << "\n";
        } else {
            AmplitudeTable t = AmplitudeTable::repeated(p.run, p.explicit_settings);
            PassPartition part = partition_sequences(t, p.epsilon, p.test);
            PostselectResult post = postselect(t, part);
            csv << t.n() << "," << part.pass_count << "," << part.total << ","
                << fixed(pass_probability(t, part, g.jobs), 12) << "," << fixed(post.fidelity, 12) << ","
                << fixed(induced_discrepancy(sequence_state(t), post.state), 12) << ","
                << pvm_variant_pass_probability(t, p.epsilon, p.test).deviation << "\n";
        }
        std::cout << csv.str();
        write_out(g, "veronika.csv", csv.str());
    });

    // scm
    std::string model_file, model_name, given_text, scm_criterion = "d";
    auto* sc = app.add_subcommand("scm", "solve a finite functional model and compare CI with separation");
    sc->add_option("--model", model_file, "model JSON");
    sc->add_option("--named", model_name, "built-in model: feedback or xor");
    sc->add_option("--given", given_text, "conditioning, e.g. A=0,C=0");
    sc->add_option("--criterion", scm_criterion, "d or sigma");
    sc->callback([&] {
        FunctionalModel m = !model_file.empty() ? load_model(model_file)
                            : model_name == "feedback" ? models::feedback_loop()
                            : model_name == "xor" ? models::xor_pair()
                            : throw ParseError("give --model or --named feedback|xor");
        Assignment given = given_text.empty() ? Assignment{} : parse_assignment(given_text);
        SolutionSet s = solve(m, given, g.jobs);
        std::cout << "error evaluations " << s.evaluations.size() << ", without solution " << s.invalid_count() << "\n";
        ConditionalDistribution d = induced_distribution(m, given);
        for (std::size_t o = 0; o < d.outcome_count(); ++o) {
            if (d.exact_at(0, o) == 0) continue;
            auto v = d.decode_outcome(o);
            std::cout << "  ";
            for (std::size_t i = 0; i < v.size(); ++i) std::cout << d.outcomes()[i].label << "=" << v[i] << " ";
            std::cout << to_string(d.exact_at(0, o)) << "\n";
        }
        CiSeparationReport r = ci_vs_separation_report(m, parse_criterion(scm_criterion));
        std::cout << r.to_string();
        write_out(g, "scm_report.txt", r.to_string());
        rc = r.violations().empty() ? 0 : 1;
    });

    // audit
    GraphSource au_graph;
    std::string cis_file, au_criterion = "d";
    auto* au = app.add_subcommand("audit", "check CIs against the graph's separations");
    au_graph.add(au);
    au->add_option("--cis", cis_file, "CI list JSON (default: the four premise CIs)");
    au->add_option("--criterion", au_criterion, "d or sigma");
    au->callback([&] {
        auto cis = cis_file.empty() ? setting_independence_premises() : load_ci_list(cis_file);
        AuditReport r = audit(au_graph.get(), cis, parse_criterion(au_criterion));
        std::cout << r.to_string();
        write_out(g, "audit.csv", r.csv());
        rc = r.fine_tuned() ? 1 : 0;
    });

    // derive
    BoxSource de_ab, de_ac;
    std::string kind = "thm4", de_cis;
    auto* de = app.add_subcommand("derive", "run the no-go derivation on a box");
    de_ab.add(de, "pab");
    de_ac.add(de, "pac");
    de->add_option("--kind", kind, "thm4 (conditional premises) or thm3 (relativistic premises)");
    de->add_option("--cis", de_cis, "CI list JSON (default: the premises of the chosen kind)");
    de->callback([&] {
        DerivationKind k;
        if (kind == "thm4") k = DerivationKind::Conditional;
        else if (kind == "thm3") k = DerivationKind::Relativistic;
        else throw ParseError("kind must be thm4 or thm3");
        auto cis = !de_cis.empty() ? load_ci_list(de_cis) : k == DerivationKind::Conditional ? setting_independence_premises() : causal_order_premises();
        ConditionalDistribution pab = de_ab.get();
        ConditionalDistribution pac = (de_ac.file.empty() && de_ac.name.empty()) ? perfect_pac(pab) : de_ac.get();
        DerivationTrace t = nogo_derivation(k, cis, pab, pac, std::nullopt, g.tolerance);
        std::cout << t.to_string();
        write_out(g, "derivation.txt", t.to_string());
        if (!t.all_verified()) rc = 2;
        else rc = t.feasible ? 0 : 1;
    });

    // reproduce
    std::string target;
    auto* re = app.add_subcommand("reproduce", "run a reproduction pipeline");
    re->add_option("target", target, "eq2-boundary, thm1, thm3, thm4, fig7-slice, quantum-lf, veronika-sweep, "
                                     "cyclic-ex1, cyclic-ex2, table1 or all")
        ->required();
    re->callback([&] {
        std::vector<std::string> targets = target == "all" ? reproduce_targets() : std::vector<std::string>{target};
        for (const auto& t : targets) {
            ReproduceResult r = reproduce(t, {g.jobs});
            std::cout << r.text();
            if (!g.out.empty()) write_reproduction(r, g.out);
            if (!r.ok()) rc = 1;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const lfkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
