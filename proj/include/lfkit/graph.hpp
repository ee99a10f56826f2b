#ifndef LFKIT_GRAPH_HPP
#define LFKIT_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lfkit {

enum class NodeKind { Observed, Latent };

struct NodeSpec {
    std::string label;
    NodeKind kind = NodeKind::Observed;
};

using Edge = std::pair<std::string, std::string>;
using NodeMask = std::uint64_t;
using LabelSet = std::set<std::string>;

inline constexpr std::size_t kMaxGraphNodes = 64;

inline NodeMask bit(std::size_t i) { return NodeMask{1} << i; }

/**
 * Directed graph with labeled observed/latent nodes. Cycles are allowed,
 * self-loops are not. Reachability is computed once at construction, so
 * every query below is a table lookup.
 */
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Throws GraphError on duplicate labels, dangling endpoints,
    /// self-loops, duplicate edges or more than 64 nodes.
    static DirectedGraph build(const std::vector<NodeSpec>& nodes, const std::vector<Edge>& edges);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    NodeKind kind(std::size_t i) const { return kinds_.at(i); }
    bool is_latent(std::size_t i) const { return kinds_.at(i) == NodeKind::Latent; }

    /// Index of a label; throws GraphError for unknown labels.
    std::size_t index_of(const std::string& label) const;
    std::optional<std::size_t> find(const std::string& label) const;

    NodeMask parents_mask(std::size_t i) const { return parents_.at(i); }
    NodeMask children_mask(std::size_t i) const { return children_.at(i); }
    /// Nodes reachable by a nonempty directed path; contains i iff i is on a cycle.
    NodeMask descendants_mask(std::size_t i) const { return reach_.at(i); }
    NodeMask ancestors_mask(std::size_t i) const { return reached_by_.at(i); }
    /// Strongly connected component of i (always contains i).
    NodeMask component_mask(std::size_t i) const;

    bool has_edge(std::size_t from, std::size_t to) const { return (children_.at(from) & bit(to)) != 0; }

    LabelSet ancestors(const std::string& n) const;
    LabelSet descendants(const std::string& n) const;
    std::vector<LabelSet> strongly_connected_components() const;
    bool is_acyclic() const;

    NodeMask observed_mask() const;
    NodeMask latent_mask() const;
    NodeMask mask_of(const LabelSet& labels) const;
    LabelSet labels_of(NodeMask mask) const;

    std::vector<NodeSpec> nodes() const;
    std::vector<Edge> edges() const;

    /// Copy of this graph with one more edge.
    DirectedGraph with_edge(const std::string& from, const std::string& to) const;

private:
    std::vector<std::string> labels_;
    std::vector<NodeKind> kinds_;
    std::vector<NodeMask> parents_;
    std::vector<NodeMask> children_;
    std::vector<NodeMask> reach_;
    std::vector<NodeMask> reached_by_;
};

struct CausalOrderConstraints {
    /// (S, T): S may not be an ancestor of T.
    std::vector<std::pair<std::string, std::string>> forbidden_cause;
    /// Nodes that must have no parents and share no latent ancestor.
    LabelSet exogenous;
};

struct ComplianceViolation {
    enum class Kind { ForbiddenAncestry, ExogenousWithParent, SharedLatentAncestor };
    Kind kind;
    std::string subject;
    std::string object;
    std::string message;
};

struct ComplianceReport {
    std::vector<ComplianceViolation> violations;
    bool compliant() const { return violations.empty(); }
};

ComplianceReport check_assumption_compliance(const DirectedGraph& g, const CausalOrderConstraints& c);

/// X may not cause {B,C,Y}, Y may not cause {A,C,X}; X and Y exogenous.
CausalOrderConstraints minimal_lf_constraints();

namespace graphs {

DirectedGraph bell_dag();
DirectedGraph lf_dag();
/// The LF DAG without the C -> A arrow: a tripartite Bell DAG where C has no setting.
DirectedGraph tripartite_dag();
/// D -> A -> B -> C -> D.
DirectedGraph cyclic_feedback();
/// A <-> B with C -> A and D -> B.
DirectedGraph cyclic_pair();

/// Representatives of three causal mechanisms that allow LF violations.
DirectedGraph superluminal();
DirectedGraph superdeterministic();
DirectedGraph retrocausal();

}  // namespace graphs

}  // namespace lfkit

#endif  // LFKIT_GRAPH_HPP
