#include "lfkit/graph.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <bit>

namespace lfkit {

DirectedGraph DirectedGraph::build(const std::vector<NodeSpec>& nodes, const std::vector<Edge>& edges) {
    if (nodes.size() > kMaxGraphNodes) {
        throw GraphError("graph has " + std::to_string(nodes.size()) + " nodes; at most 64 are supported");
    }
    DirectedGraph g;
    for (const auto& n : nodes) {
        if (n.label.empty()) throw GraphError("empty node label");
        if (g.find(n.label)) throw GraphError("duplicate label '" + n.label + "'");
        g.labels_.push_back(n.label);
        g.kinds_.push_back(n.kind);
    }
    const std::size_t n = g.labels_.size();
    g.parents_.assign(n, 0);
    g.children_.assign(n, 0);
    for (const auto& [from, to] : edges) {
        auto f = g.find(from);
        auto t = g.find(to);
        if (!f) throw GraphError("dangling endpoint '" + from + "'");
        if (!t) throw GraphError("dangling endpoint '" + to + "'");
        if (*f == *t) throw GraphError("self-loop on '" + from + "'");
        if (g.children_[*f] & bit(*t)) throw GraphError("duplicate edge " + from + " -> " + to);
        g.children_[*f] |= bit(*t);
        g.parents_[*t] |= bit(*f);
    }

    // Warshall closure on bit rows.
    g.reach_ = g.children_;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (g.reach_[i] & bit(k)) g.reach_[i] |= g.reach_[k];
        }
    }
    g.reached_by_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (NodeMask m = g.reach_[i]; m; m &= m - 1) g.reached_by_[std::countr_zero(m)] |= bit(i);
    }
    return g;
}

std::optional<std::size_t> DirectedGraph::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t DirectedGraph::index_of(const std::string& label) const {
    auto i = find(label);
    if (!i) throw GraphError("unknown node '" + label + "'");
    return *i;
}

NodeMask DirectedGraph::component_mask(std::size_t i) const {
    return (reach_.at(i) & reached_by_.at(i)) | bit(i);
}

LabelSet DirectedGraph::ancestors(const std::string& n) const { return labels_of(reached_by_[index_of(n)]); }

LabelSet DirectedGraph::descendants(const std::string& n) const { return labels_of(reach_[index_of(n)]); }

std::vector<LabelSet> DirectedGraph::strongly_connected_components() const {
    std::vector<LabelSet> out;
    NodeMask seen = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (seen & bit(i)) continue;
        NodeMask c = component_mask(i);
        seen |= c;
        out.push_back(labels_of(c));
    }
    return out;
}

bool DirectedGraph::is_acyclic() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (reach_[i] & bit(i)) return false;
    }
    return true;
}

NodeMask DirectedGraph::observed_mask() const {
    NodeMask m = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (kinds_[i] == NodeKind::Observed) m |= bit(i);
    }
    return m;
}

NodeMask DirectedGraph::latent_mask() const {
    NodeMask all = size() == 64 ? ~NodeMask{0} : bit(size()) - 1;
    return all & ~observed_mask();
}

NodeMask DirectedGraph::mask_of(const LabelSet& labels) const {
    NodeMask m = 0;
    for (const auto& l : labels) m |= bit(index_of(l));
    return m;
}

LabelSet DirectedGraph::labels_of(NodeMask mask) const {
    LabelSet out;
    for (NodeMask m = mask; m; m &= m - 1) out.insert(labels_.at(std::countr_zero(m)));
    return out;
}

std::vector<NodeSpec> DirectedGraph::nodes() const {
    std::vector<NodeSpec> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back({labels_[i], kinds_[i]});
    return out;
}

std::vector<Edge> DirectedGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (NodeMask m = children_[i]; m; m &= m - 1) out.emplace_back(labels_[i], labels_[std::countr_zero(m)]);
    }
    return out;
}

DirectedGraph DirectedGraph::with_edge(const std::string& from, const std::string& to) const {
    auto e = edges();
    e.emplace_back(from, to);
    return build(nodes(), e);
}

ComplianceReport check_assumption_compliance(const DirectedGraph& g, const CausalOrderConstraints& c) {
    ComplianceReport report;
    using V = ComplianceViolation;
    for (const auto& [s, t] : c.forbidden_cause) {
        std::size_t si = g.index_of(s);
        std::size_t ti = g.index_of(t);
        if (g.ancestors_mask(ti) & bit(si)) {
            report.violations.push_back({V::Kind::ForbiddenAncestry, s, t, s + " ancestor of " + t});
        }
    }
    for (const auto& e : c.exogenous) {
        std::size_t ei = g.index_of(e);
        for (const auto& p : g.labels_of(g.parents_mask(ei))) {
            report.violations.push_back({V::Kind::ExogenousWithParent, e, p, "exogenous node " + e + " has parent " + p});
        }
        NodeMask latent_anc = g.ancestors_mask(ei) & g.latent_mask();
        for (NodeMask m = latent_anc; m; m &= m - 1) {
            std::size_t li = std::countr_zero(m);
            NodeMask sharers = g.descendants_mask(li) & ~bit(ei) & ~bit(li);
            for (const auto& other : g.labels_of(sharers)) {
                report.violations.push_back({V::Kind::SharedLatentAncestor, e, other,
                                             "exogenous node " + e + " shares latent ancestor " + g.label(li) +
                                                 " with " + other});
            }
        }
    }
    return report;
}

CausalOrderConstraints minimal_lf_constraints() {
    CausalOrderConstraints c;
    for (const char* t : {"B", "C", "Y"}) c.forbidden_cause.emplace_back("X", t);
    for (const char* t : {"A", "C", "X"}) c.forbidden_cause.emplace_back("Y", t);
    c.exogenous = {"X", "Y"};
    return c;
}

namespace graphs {

namespace {

std::vector<NodeSpec> lf_nodes() {
    return {{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}, {"A", NodeKind::Observed},
            {"B", NodeKind::Observed}, {"C", NodeKind::Observed}, {"L", NodeKind::Latent}};
}

std::vector<Edge> lf_edges() {
    return {{"X", "A"}, {"C", "A"}, {"L", "A"}, {"L", "C"}, {"L", "B"}, {"Y", "B"}};
}

}  // namespace

DirectedGraph bell_dag() {
    return DirectedGraph::build({{"X", NodeKind::Observed},
                                 {"Y", NodeKind::Observed},
                                 {"A", NodeKind::Observed},
                                 {"B", NodeKind::Observed},
                                 {"\xCE\x9B", NodeKind::Latent}},
                                {{"X", "A"}, {"\xCE\x9B", "A"}, {"\xCE\x9B", "B"}, {"Y", "B"}});
}

DirectedGraph lf_dag() { return DirectedGraph::build(lf_nodes(), lf_edges()); }

DirectedGraph tripartite_dag() {
    return DirectedGraph::build(lf_nodes(), {{"X", "A"}, {"L", "A"}, {"L", "C"}, {"L", "B"}, {"Y", "B"}});
}

DirectedGraph cyclic_feedback() {
    std::vector<NodeSpec> n{{"A"}, {"B"}, {"C"}, {"D"}};
    return DirectedGraph::build(n, {{"D", "A"}, {"A", "B"}, {"B", "C"}, {"C", "D"}});
}

DirectedGraph cyclic_pair() {
    std::vector<NodeSpec> n{{"A"}, {"B"}, {"C"}, {"D"}};
    return DirectedGraph::build(n, {{"A", "B"}, {"B", "A"}, {"C", "A"}, {"D", "B"}});
}

DirectedGraph superluminal() { return lf_dag().with_edge("X", "B"); }

DirectedGraph superdeterministic() { return lf_dag().with_edge("L", "X"); }

DirectedGraph retrocausal() { return lf_dag().with_edge("X", "L"); }

}  // namespace graphs

}  // namespace lfkit
