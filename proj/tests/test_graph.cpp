#include "lfkit/error.hpp"
#include "lfkit/graph.hpp"

#include <gtest/gtest.h>

using namespace lfkit;

namespace {
std::vector<NodeSpec> observed(std::initializer_list<const char*> labels) {
    std::vector<NodeSpec> out;
    for (const char* l : labels) out.push_back({l, NodeKind::Observed});
    return out;
}
}  // namespace

TEST(Graph, BuildRejectsMalformedInput) {
    EXPECT_THROW(DirectedGraph::build(observed({"A", "A"}), {}), GraphError);
    EXPECT_THROW(DirectedGraph::build(observed({"A"}), {{"A", "B"}}), GraphError);
    EXPECT_THROW(DirectedGraph::build(observed({"A"}), {{"A", "A"}}), GraphError);
    EXPECT_THROW(DirectedGraph::build(observed({"A", "B"}), {{"A", "B"}, {"A", "B"}}), GraphError);
    std::vector<NodeSpec> many;
    for (int i = 0; i < 65; ++i) many.push_back({"n" + std::to_string(i), NodeKind::Observed});
    EXPECT_THROW(DirectedGraph::build(many, {}), GraphError);
}

TEST(Graph, AncestorsAndDescendants) {
    DirectedGraph g = graphs::lf_dag();
    EXPECT_EQ(g.ancestors("A"), (LabelSet{"X", "C", "L"}));
    EXPECT_EQ(g.descendants("L"), (LabelSet{"A", "B", "C"}));
    EXPECT_TRUE(g.descendants("B").empty());
    EXPECT_TRUE(g.is_acyclic());
    EXPECT_THROW(g.index_of("Q"), GraphError);
}

TEST(Graph, CycleMembersAreTheirOwnAncestors) {
    DirectedGraph g = graphs::cyclic_feedback();
    EXPECT_FALSE(g.is_acyclic());
    EXPECT_EQ(g.ancestors("A"), (LabelSet{"A", "B", "C", "D"}));
    auto scc = g.strongly_connected_components();
    ASSERT_EQ(scc.size(), 1u);
    EXPECT_EQ(scc[0].size(), 4u);

    DirectedGraph p = graphs::cyclic_pair();
    EXPECT_EQ(p.ancestors("C"), LabelSet{});
    EXPECT_EQ(p.strongly_connected_components().size(), 3u);
}

TEST(Graph, ComponentMaskOfAcyclicNodeIsItself) {
    DirectedGraph g = graphs::lf_dag();
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.component_mask(i), bit(i));
}

TEST(Graph, WithEdgeCopies) {
    DirectedGraph g = graphs::lf_dag();
    DirectedGraph h = g.with_edge("X", "B");
    EXPECT_TRUE(h.has_edge(h.index_of("X"), h.index_of("B")));
    EXPECT_FALSE(g.has_edge(g.index_of("X"), g.index_of("B")));
}

TEST(Graph, LfDagIsCompliant) {
    EXPECT_TRUE(check_assumption_compliance(graphs::lf_dag(), minimal_lf_constraints()).compliant());
    EXPECT_TRUE(check_assumption_compliance(graphs::tripartite_dag(), minimal_lf_constraints()).compliant());
}

TEST(Graph, SuperluminalEdgeViolatesCausalOrder) {
    ComplianceReport r = check_assumption_compliance(graphs::superluminal(), minimal_lf_constraints());
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].kind, ComplianceViolation::Kind::ForbiddenAncestry);
    EXPECT_EQ(r.violations[0].message, "X ancestor of B");
}

TEST(Graph, SuperdeterminismGivesSettingAParent) {
    ComplianceReport r = check_assumption_compliance(graphs::superdeterministic(), minimal_lf_constraints());
    bool parent = false;
    for (const auto& v : r.violations) parent = parent || v.kind == ComplianceViolation::Kind::ExogenousWithParent;
    EXPECT_TRUE(parent);
}

TEST(Graph, SharedLatentAncestorOfSettingsIsReported) {
    DirectedGraph g = DirectedGraph::build({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}, {"M", NodeKind::Latent}},
                                           {{"M", "X"}, {"M", "Y"}});
    CausalOrderConstraints c;
    c.exogenous = {"X", "Y"};
    ComplianceReport r = check_assumption_compliance(g, c);
    bool shared = false;
    for (const auto& v : r.violations) shared = shared || v.kind == ComplianceViolation::Kind::SharedLatentAncestor;
    EXPECT_TRUE(shared);
}

TEST(Graph, RetrocausalRepresentativeIsAcyclic) {
    EXPECT_TRUE(graphs::retrocausal().is_acyclic());
    EXPECT_FALSE(check_assumption_compliance(graphs::retrocausal(), minimal_lf_constraints()).compliant());
}
