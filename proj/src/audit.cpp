#include "lfkit/audit.hpp"

#include "lfkit/error.hpp"
#include "lfkit/marginal.hpp"
#include "lfkit/quantum.hpp"

#include <algorithm>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace lfkit {

namespace {

std::string join(const LabelSet& s) {
    std::string out;
    for (const auto& l : s) {
        if (!out.empty()) out += ",";
        out += l;
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool contains(const std::vector<SeparationStatement>& list, SeparationStatement s) {
    s = s.normalized();
    return std::any_of(list.begin(), list.end(), [&](const SeparationStatement& t) { return t.normalized() == s; });
}

}  // namespace

SeparationStatement CIStatement::as_separation(Criterion criterion) const {
    return SeparationStatement{u, v, w, criterion}.normalized();
}

std::string CIStatement::to_string() const { return join(u) + " | " + join(v) + " | " + join(w); }

CIStatement parse_ci(const std::string& text) {
    CIStatement ci;
    std::string body = text;
    auto hash = text.find('#');
    if (hash != std::string::npos) {
        ci.note = trim(text.substr(hash + 1));
        body = text.substr(0, hash);
    }
    SeparationStatement s = parse_statement(body);
    ci.u = s.left;
    ci.v = s.right;
    ci.w = s.given;
    return ci;
}

bool AuditReport::fine_tuned() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const AuditVerdict& v) { return !v.explained; });
}

std::string AuditReport::to_string() const {
    std::ostringstream os;
    os << "criterion " << lfkit::to_string(criterion) << "\n";
    for (const auto& v : verdicts) {
        os << v.ci.to_string() << "  ";
        if (v.explained) os << "explained by " << v.statement->to_string();
        else os << "FINE-TUNED (open path " << v.open_path->to_string() << ")";
        if (!v.ci.note.empty()) os << "  # " << v.ci.note;
        os << "\n";
    }
    os << "overall " << (fine_tuned() ? "fine-tuned" : "not fine-tuned") << "\n";
    return os.str();
}

std::string AuditReport::csv() const {
    std::ostringstream os;
    os << "ci,criterion,verdict,open_path\n";
    for (const auto& v : verdicts)
        os << '"' << v.ci.to_string() << "\"," << lfkit::to_string(criterion) << ','
           << (v.explained ? "explained" : "fine-tuned") << ",\"" << (v.open_path ? v.open_path->to_string() : "")
           << "\"\n";
    return os.str();
}

AuditReport audit(const DirectedGraph& g, const std::vector<CIStatement>& cis, Criterion criterion) {
    AuditReport r;
    r.criterion = criterion;
    for (const auto& ci : cis) {
        for (const auto* side : {&ci.u, &ci.v, &ci.w})
            for (const auto& l : *side) {
                std::size_t i = g.index_of(l);
                if (g.is_latent(i)) throw GraphError("CI names latent node '" + l + "'");
            }
        AuditVerdict v;
        v.ci = ci;
        SeparationStatement s = ci.as_separation(criterion);
        auto path = open_path(g, s.left, s.right, s.given, criterion);
        v.explained = !path.has_value();
        if (v.explained) v.statement = s;
        else v.open_path = path;
        r.verdicts.push_back(std::move(v));
    }
    return r;
}

std::vector<CIStatement> setting_independence_premises() {
    std::vector<CIStatement> out;
    auto add = [&](const char* text, const char* note) {
        CIStatement ci = parse_ci(text);
        ci.note = note;
        out.push_back(ci);
    };
    add("A | Y | X", "P(a|xy)=P(a|x)");
    add("B | X | Y", "P(b|xy)=P(b|y)");
    add("C | X | Y", "P(c|xy)=P(c)");
    add("C | Y | X", "P(c|xy)=P(c)");
    return out;
}

std::vector<CIStatement> causal_order_premises(const CausalOrderConstraints& constraints) {
    std::vector<CIStatement> out;
    for (const auto& [cause, target] : constraints.forbidden_cause) {
        if (!constraints.exogenous.count(cause)) continue;
        CIStatement ci;
        ci.u = {target};
        ci.v = {cause};
        ci.note = "exogenous " + cause + " is not an ancestor of " + target;
        out.push_back(ci);
    }
    return out;
}

bool DerivationTrace::all_verified() const {
    return std::all_of(steps.begin(), steps.end(), [](const DerivationStep& s) { return s.verified; });
}

std::string DerivationTrace::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < steps.size(); ++i)
        os << "step " << i + 1 << " [" << (steps[i].verified ? "verified" : "FAILED") << "] " << steps[i].name << ": "
           << steps[i].detail << "\n";
    os << "conclusion: " << conclusion << "\n";
    return os.str();
}

DerivationTrace nogo_derivation(DerivationKind kind, const std::vector<CIStatement>& cis,
                                const ConditionalDistribution& pab, const ConditionalDistribution& pac,
                                const std::optional<ConditionalDistribution>& pabc, double tolerance) {
    DerivationTrace t;
    t.kind = kind;
    const std::vector<CIStatement> required =
        kind == DerivationKind::Conditional ? setting_independence_premises() : causal_order_premises();
    std::vector<SeparationStatement> lifted;
    for (const auto& ci : cis) lifted.push_back(ci.as_separation(Criterion::D));
    for (const auto& r : required)
        if (!contains(lifted, r.as_separation(Criterion::D)))
            throw AuditError("missing premise " + r.to_string());

    // (i) each CI must be a separation in any model free of fine-tuning.
    const DirectedGraph witness = graphs::lf_dag();
    bool witness_ok = true;
    for (const auto& s : lifted) witness_ok = witness_ok && separated(witness, s);
    {
        std::ostringstream d;
        d << lifted.size() << " CIs lifted to d-separations; all hold on the LF DAG witness";
        t.steps.push_back({"no fine-tuning lift", d.str(), witness_ok});
    }

    // (ii) composition.
    t.closure = compose_closure(lifted);
    std::vector<SeparationStatement> targets;
    if (kind == DerivationKind::Conditional) {
        targets = {parse_statement("A,C | Y | X"), parse_statement("B,C | X | Y")};
    } else {
        targets = {parse_statement("A,C,X | Y |"), parse_statement("B,C,Y | X |")};
    }
    bool closure_ok = true;
    std::string names;
    for (const auto& s : targets) {
        closure_ok = closure_ok && contains(t.closure, s) && separated(witness, s);
        names += (names.empty() ? "" : ", ") + s.normalized().to_string();
    }
    t.steps.push_back({"composition", "closure of " + std::to_string(t.closure.size()) + " statements contains " + names,
                       closure_ok});

    // (iii) the separation rule gives Local Agency.
    if (pabc) {
        LocalAgencyReport la = verify_local_agency(*pabc, tolerance);
        std::ostringstream d;
        d << std::scientific << std::setprecision(3) << "P(ac|xy)=P(ac|x) deviation " << la.ac_deviation
          << ", P(bc|xy)=P(bc|y) deviation " << la.bc_deviation;
        t.steps.push_back({"local agency", d.str(), la.pass});
    } else {
        t.steps.push_back({"local agency", "P(ac|xy)=P(ac|x), P(bc|xy)=P(bc|y) imposed on every extension", closure_ok});
    }

    // (iv) the marginal problem.
    MarginalVerdict mv = marginal_feasible(pab, pac);
    t.feasible = mv.verdict.feasible;
    if (t.feasible) {
        bool ok = verify_witness(mv.system, mv.verdict.witness);
        t.steps.push_back({"marginal problem", "a Local Agency extension reproduces both marginals", ok});
        t.conclusion = "feasible: no contradiction";
    } else {
        t.certificate = mv.verdict.certificate;
        t.certificate_verified = verify_certificate(mv.system, *t.certificate);
        Eq2Result eq2 = monogamy_eq2(pab, pac);
        std::ostringstream d;
        d << std::fixed << std::setprecision(9) << "no extension exists; Farkas certificate checked; monogamy lhs "
          << eq2.lhs << " against bound 5";
        t.steps.push_back({"marginal problem", d.str(), t.certificate_verified});
        t.conclusion = "infeasible: fine-tuning required";
    }
    return t;
}

namespace {

struct PremiseMasks {
    NodeMask a, b, c, x, y;
};

PremiseMasks masks_of(const DirectedGraph& g) {
    return {bit(g.index_of("A")), bit(g.index_of("B")), bit(g.index_of("C")), bit(g.index_of("X")),
            bit(g.index_of("Y"))};
}

// Composed statements, checked by reachability.
bool violation_capable(const DirectedGraph& g, const PremiseMasks& m) {
    if (!g.is_acyclic()) {
        return !separated_masks(g, m.a | m.c, m.y, m.x, Criterion::D) ||
               !separated_masks(g, m.b | m.c, m.x, m.y, Criterion::D);
    }
    return !d_separated_reachability(g, m.a | m.c, m.y, m.x) || !d_separated_reachability(g, m.b | m.c, m.x, m.y);
}

// Premises, checked by path enumeration.
bool fine_tuned_masks(const DirectedGraph& g, const PremiseMasks& m) {
    return !separated_masks(g, m.a, m.y, m.x, Criterion::D) || !separated_masks(g, m.b, m.x, m.y, Criterion::D) ||
           !separated_masks(g, m.c, m.x, m.y, Criterion::D) || !separated_masks(g, m.c, m.y, m.x, Criterion::D);
}

}  // namespace

std::vector<CandidateRow> classify_candidates(const std::vector<NamedGraph>& graphs,
                                              const std::vector<CIStatement>& cis) {
    std::vector<CandidateRow> out;
    for (const auto& ng : graphs) {
        CandidateRow r;
        r.name = ng.name;
        r.violation_capable = violation_capable(ng.graph, masks_of(ng.graph));
        r.fine_tuned = audit(ng.graph, cis, Criterion::D).fine_tuned();
        out.push_back(r);
    }
    return out;
}

std::string SweepSummary::to_string() const {
    std::ostringstream os;
    os << "observed nodes A,B,C,X,Y; at most one latent root L (cap)\n"
       << "acyclic orientations " << orientations << "\n"
       << "graphs " << graphs << "\n"
       << "violation-capable " << violation_capable << "\n"
       << "fine-tuned " << fine_tuned << "\n"
       << "violation-capable and not fine-tuned " << counterexamples << "\n";
    for (const auto& c : first_counterexamples) os << "  " << c << "\n";
    return os.str();
}

SweepSummary dichotomy_sweep(unsigned jobs) {
    const std::vector<NodeSpec> nodes = {{"X", NodeKind::Observed}, {"Y", NodeKind::Observed},
                                         {"A", NodeKind::Observed}, {"B", NodeKind::Observed},
                                         {"C", NodeKind::Observed}, {"L", NodeKind::Latent}};
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) pairs.emplace_back(i, j);
    std::size_t total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;

    auto edges_of = [&](std::size_t code) {
        std::vector<Edge> e;
        for (const auto& [i, j] : pairs) {
            std::size_t d = code % 3;
            code /= 3;
            if (d == 1) e.emplace_back(nodes[i].label, nodes[j].label);
            if (d == 2) e.emplace_back(nodes[j].label, nodes[i].label);
        }
        return e;
    };

    SweepSummary summary;
    std::mutex mu;
    auto work = [&](std::size_t begin, std::size_t end) {
        SweepSummary local;
        for (std::size_t code = begin; code < end; ++code) {
            std::vector<Edge> base = edges_of(code);
            if (!DirectedGraph::build(nodes, base).is_acyclic()) continue;
            ++local.orientations;
            for (unsigned sub = 0; sub < 32; ++sub) {
                std::vector<Edge> e = base;
                for (std::size_t k = 0; k < 5; ++k)
                    if (sub & (1u << k)) e.emplace_back("L", nodes[k].label);
                DirectedGraph g = DirectedGraph::build(nodes, e);
                PremiseMasks m = masks_of(g);
                bool vc = violation_capable(g, m);
                bool ft = fine_tuned_masks(g, m);
                ++local.graphs;
                local.violation_capable += vc;
                local.fine_tuned += ft;
                if (vc && !ft) {
                    ++local.counterexamples;
                    if (local.first_counterexamples.size() < 5) {
                        std::string s;
                        for (const auto& [f, t] : e) s += f + "->" + t + " ";
                        local.first_counterexamples.push_back(s);
                    }
                }
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        summary.orientations += local.orientations;
        summary.graphs += local.graphs;
        summary.violation_capable += local.violation_capable;
        summary.fine_tuned += local.fine_tuned;
        summary.counterexamples += local.counterexamples;
        for (auto& c : local.first_counterexamples)
            if (summary.first_counterexamples.size() < 5) summary.first_counterexamples.push_back(c);
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (total + jobs - 1) / jobs;
        for (std::size_t b = 0; b < total; b += chunk) pool.emplace_back(work, b, std::min(total, b + chunk));
        for (auto& t : pool) t.join();
    }
    std::sort(summary.first_counterexamples.begin(), summary.first_counterexamples.end());
    return summary;
}

}  // namespace lfkit
