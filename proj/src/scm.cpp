#include "lfkit/scm.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace lfkit {

FunctionalModel FunctionalModel::build(std::vector<EndogenousVariable> endogenous, std::vector<ErrorVariable> errors,
                                       std::vector<StructuralEquation> equations,
                                       const std::map<std::string, LabelSet>& declared_parents) {
    FunctionalModel m;
    std::vector<std::string> slots;
    LabelSet endo_names;
    for (const auto& v : endogenous) {
        if (v.domain == 0) throw ParseError("variable '" + v.name + "' has an empty domain");
        if (!endo_names.insert(v.name).second) throw ParseError("duplicate variable '" + v.name + "'");
        slots.push_back(v.name);
    }
    for (auto& e : errors) {
        if (e.domain == 0) throw ParseError("error term '" + e.name + "' has an empty domain");
        if (endo_names.count(e.name) || std::count(slots.begin(), slots.end(), e.name))
            throw ParseError("duplicate name '" + e.name + "'");
        if (e.prior.empty()) e.prior.assign(e.domain, Rational(1, static_cast<long>(e.domain)));
        if (e.prior.size() != e.domain) throw ParseError("prior of '" + e.name + "' has the wrong length");
        Rational total = 0;
        for (const auto& p : e.prior) {
            if (p < 0) throw ParseError("negative prior for '" + e.name + "'");
            total += p;
        }
        if (total != 1) throw ParseError("prior of '" + e.name + "' does not sum to 1");
        slots.push_back(e.name);
    }

    std::vector<StructuralEquation> ordered;
    std::vector<NodeSpec> nodes;
    std::vector<Edge> edges;
    for (const auto& v : endogenous) {
        auto it = std::find_if(equations.begin(), equations.end(),
                               [&](const StructuralEquation& q) { return q.target == v.name; });
        if (it == equations.end()) throw ParseError("no equation for '" + v.name + "'");
        if (std::count_if(equations.begin(), equations.end(),
                          [&](const StructuralEquation& q) { return q.target == v.name; }) > 1)
            throw ParseError("more than one equation for '" + v.name + "'");
        StructuralEquation q = *it;
        q.expression.bind(slots);
        LabelSet parents;
        for (const auto& name : q.expression.variables())
            if (endo_names.count(name)) parents.insert(name);
        if (parents.count(v.name)) throw ParseError("equation of '" + v.name + "' mentions itself");
        auto dp = declared_parents.find(v.name);
        if (dp != declared_parents.end() && dp->second != parents)
            throw ParseError("equation of '" + v.name + "' does not match its declared parents");
        for (const auto& p : parents) edges.emplace_back(p, v.name);
        nodes.push_back({v.name, NodeKind::Observed});
        ordered.push_back(std::move(q));
    }
    for (const auto& q : equations)
        if (!endo_names.count(q.target)) throw ParseError("equation for unknown variable '" + q.target + "'");

    m.endogenous_ = std::move(endogenous);
    m.errors_ = std::move(errors);
    m.equations_ = std::move(ordered);
    m.graph_ = DirectedGraph::build(nodes, edges);
    return m;
}

std::size_t FunctionalModel::endogenous_index(const std::string& name) const {
    for (std::size_t i = 0; i < endogenous_.size(); ++i)
        if (endogenous_[i].name == name) return i;
    throw ParseError("unknown variable '" + name + "'");
}

LabelSet FunctionalModel::parents(const std::string& name) const {
    return graph_.labels_of(graph_.parents_mask(graph_.index_of(name)));
}

std::size_t FunctionalModel::error_evaluation_count() const {
    std::size_t n = 1;
    for (const auto& e : errors_) {
        if (n > kMaxScmAssignments / e.domain) throw SizeLimitError("too many error evaluations");
        n *= e.domain;
    }
    return n;
}

std::vector<std::int64_t> FunctionalModel::error_values(std::size_t evaluation) const {
    std::vector<std::int64_t> out(errors_.size());
    for (std::size_t i = errors_.size(); i-- > 0;) {
        out[i] = static_cast<std::int64_t>(evaluation % errors_[i].domain);
        evaluation /= errors_[i].domain;
    }
    return out;
}

Rational FunctionalModel::error_weight(std::size_t evaluation) const {
    auto v = error_values(evaluation);
    Rational w = 1;
    for (std::size_t i = 0; i < errors_.size(); ++i) w *= errors_[i].prior[static_cast<std::size_t>(v[i])];
    return w;
}

bool FunctionalModel::satisfies(const std::vector<std::int64_t>& endogenous_values,
                                const std::vector<std::int64_t>& error_values) const {
    std::vector<std::int64_t> all(endogenous_values);
    all.insert(all.end(), error_values.begin(), error_values.end());
    for (std::size_t i = 0; i < equations_.size(); ++i)
        if (equations_[i].expression.evaluate(all) != endogenous_values[i]) return false;
    return true;
}

std::size_t SolutionSet::valid_count() const {
    return static_cast<std::size_t>(std::count_if(evaluations.begin(), evaluations.end(),
                                                  [](const ErrorEvaluation& e) { return !e.solutions.empty(); }));
}

SolutionSet solve(const FunctionalModel& model, const Assignment& conditioning, unsigned jobs) {
    const auto& endo = model.endogenous();
    std::vector<std::optional<std::int64_t>> fixed(endo.size());
    for (const auto& [name, value] : conditioning) {
        std::size_t i = model.endogenous_index(name);
        if (value < 0 || static_cast<std::size_t>(value) >= endo[i].domain)
            throw ParseError("conditioning value out of domain for '" + name + "'");
        fixed[i] = value;
    }
    std::vector<std::size_t> free;
    std::size_t endo_count = 1;
    for (std::size_t i = 0; i < endo.size(); ++i) {
        if (fixed[i]) continue;
        free.push_back(i);
        if (endo_count > kMaxScmAssignments / endo[i].domain) throw SizeLimitError("endogenous domain too large");
        endo_count *= endo[i].domain;
    }
    const std::size_t err_count = model.error_evaluation_count();
    if (err_count > kMaxScmAssignments / endo_count) throw SizeLimitError("model too large to solve exhaustively");

    SolutionSet out;
    out.evaluations.resize(err_count);
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<std::int64_t> values(endo.size());
        for (std::size_t i = 0; i < endo.size(); ++i)
            if (fixed[i]) values[i] = *fixed[i];
        for (std::size_t e = begin; e < end; ++e) {
            ErrorEvaluation& ev = out.evaluations[e];
            ev.errors = model.error_values(e);
            ev.weight = model.error_weight(e);
            for (std::size_t k = 0; k < endo_count; ++k) {
                std::size_t rest = k;
                for (std::size_t j = free.size(); j-- > 0;) {
                    values[free[j]] = static_cast<std::int64_t>(rest % endo[free[j]].domain);
                    rest /= endo[free[j]].domain;
                }
                if (model.satisfies(values, ev.errors)) ev.solutions.push_back(values);
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(err_count)));
    if (jobs == 1) {
        work(0, err_count);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (err_count + jobs - 1) / jobs;
        for (std::size_t b = 0; b < err_count; b += chunk) pool.emplace_back(work, b, std::min(err_count, b + chunk));
        for (auto& t : pool) t.join();
    }
    return out;
}

namespace {

ConditionalDistribution to_distribution(const FunctionalModel& model, const std::vector<std::string>& keep,
                                        const std::vector<std::pair<std::vector<std::int64_t>, Rational>>& mass) {
    std::vector<std::size_t> idx;
    std::vector<VariableSpec> specs;
    if (keep.empty()) {
        for (std::size_t i = 0; i < model.endogenous().size(); ++i) idx.push_back(i);
    } else {
        for (const auto& k : keep) idx.push_back(model.endogenous_index(k));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    }
    for (auto i : idx) specs.push_back({model.endogenous()[i].name, model.endogenous()[i].domain, VariableRole::Outcome});
    std::vector<Rational> table(radix_size(specs), Rational(0));
    Rational total = 0;
    for (const auto& [values, w] : mass) {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < idx.size(); ++j)
            pos = pos * specs[j].cardinality + static_cast<std::size_t>(values[idx[j]]);
        table[pos] += w;
        total += w;
    }
    if (total == 0) throw DistributionError("model has no valid solution under the given conditioning");
    for (auto& t : table) t /= total;
    return ConditionalDistribution::exact(specs, {}, std::move(table));
}

}  // namespace

ConditionalDistribution induced_distribution(const FunctionalModel& model, const Assignment& conditioning,
                                             const std::vector<std::string>& keep) {
    SolutionSet s = solve(model, conditioning);
    std::vector<std::pair<std::vector<std::int64_t>, Rational>> mass;
    for (const auto& ev : s.evaluations) {
        if (ev.solutions.empty() || ev.weight == 0) continue;
        Rational share = ev.weight / static_cast<long>(ev.solutions.size());
        for (const auto& sol : ev.solutions) mass.emplace_back(sol, share);
    }
    return to_distribution(model, keep, mass);
}

ConditionalDistribution forward_distribution(const FunctionalModel& model) {
    const DirectedGraph& g = model.graph();
    if (!g.is_acyclic()) throw GraphError("forward evaluation needs an acyclic model");
    std::vector<std::size_t> order;
    NodeMask done = 0;
    while (order.size() < g.size()) {
        for (std::size_t v = 0; v < g.size(); ++v) {
            if ((done & bit(v)) || (g.parents_mask(v) & ~done)) continue;
            order.push_back(v);
            done |= bit(v);
        }
    }
    const auto& endo = model.endogenous();
    const std::size_t n_endo = endo.size();
    std::vector<std::pair<std::vector<std::int64_t>, Rational>> mass;
    for (std::size_t e = 0; e < model.error_evaluation_count(); ++e) {
        auto errs = model.error_values(e);
        std::vector<std::int64_t> all(n_endo, 0);
        all.insert(all.end(), errs.begin(), errs.end());
        bool ok = true;
        for (auto v : order) {
            std::int64_t x = model.equations()[v].expression.evaluate(all);
            if (x < 0 || static_cast<std::size_t>(x) >= endo[v].domain) {
                ok = false;
                break;
            }
            all[v] = x;
        }
        if (!ok) continue;
        mass.emplace_back(std::vector<std::int64_t>(all.begin(), all.begin() + static_cast<long>(n_endo)),
                          model.error_weight(e));
    }
    return to_distribution(model, {}, mass);
}

std::vector<SeparationStatement> CiSeparationReport::violations() const {
    std::vector<SeparationStatement> out;
    for (const auto& r : rows)
        if (r.violation) out.push_back(r.statement);
    return out;
}

bool CiSeparationReport::flags(const SeparationStatement& s) const {
    SeparationStatement n = s.normalized();
    for (const auto& r : rows)
        if (r.violation && r.statement.normalized() == n) return true;
    return false;
}

std::string CiSeparationReport::to_string() const {
    std::ostringstream os;
    os << "criterion " << lfkit::to_string(criterion) << "\n";
    for (const auto& r : rows) {
        os << r.statement.to_string() << "  CI " << (r.ci.holds ? "holds" : "fails");
        if (r.ci.exact_deviation) os << "  deviation " << lfkit::to_string(*r.ci.exact_deviation);
        if (r.violation) os << "  VIOLATION";
        os << "\n";
    }
    return os.str();
}

CiSeparationReport ci_vs_separation_report(const FunctionalModel& model, Criterion criterion) {
    CiSeparationReport report;
    report.criterion = criterion;
    ConditionalDistribution joint = induced_distribution(model);
    for (const auto& s : enumerate_separations(model.graph(), -1, criterion, false)) {
        SeparationCheck row;
        row.statement = s;
        row.ci = ci_holds(joint, {s.left.begin(), s.left.end()}, {s.right.begin(), s.right.end()},
                          {s.given.begin(), s.given.end()});
        row.violation = !row.ci.holds;
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace models {

namespace {

FunctionalModel binary_model(const std::vector<std::pair<std::string, std::string>>& eqs,
                             const std::vector<std::string>& errors) {
    std::vector<EndogenousVariable> endo;
    std::vector<StructuralEquation> equations;
    for (const auto& [target, text] : eqs) {
        endo.push_back({target, 2});
        equations.push_back({target, Expression::parse(text)});
    }
    std::vector<ErrorVariable> errs;
    for (const auto& e : errors) errs.push_back({e, 2, {}});
    return FunctionalModel::build(endo, errs, equations);
}

}  // namespace

FunctionalModel feedback_loop() {
    return binary_model({{"A", "D*E_A"}, {"B", "A+E_B"}, {"C", "B*E_C"}, {"D", "C+E_D"}},
                        {"E_A", "E_B", "E_C", "E_D"});
}

FunctionalModel xor_pair() {
    return binary_model({{"A", "C^B"}, {"B", "A^D"}, {"C", "E_C"}, {"D", "E_D"}}, {"E_C", "E_D"});
}

}  // namespace models

}  // namespace lfkit
