#include "lfkit/audit.hpp"
#include "lfkit/error.hpp"

#include <gtest/gtest.h>

using namespace lfkit;

namespace {

std::vector<NamedGraph> named() {
    return {{"lf", graphs::lf_dag()},
            {"tripartite", graphs::tripartite_dag()},
            {"superluminal", graphs::superluminal()},
            {"superdeterministic", graphs::superdeterministic()},
            {"retrocausal", graphs::retrocausal()}};
}

ConditionalDistribution pac_diag(const Rational& p0) {
    return ConditionalDistribution::exact({{"A", 2, VariableRole::Outcome}, {"C", 2, VariableRole::Outcome}}, {},
                                          {p0, 0, 0, 1 - p0});
}

}  // namespace

TEST(Audit, ParseCi) {
    CIStatement c = parse_ci("A,C | Y | X  # local agency");
    EXPECT_EQ(c.u, (LabelSet{"A", "C"}));
    EXPECT_EQ(c.v, (LabelSet{"Y"}));
    EXPECT_EQ(c.w, (LabelSet{"X"}));
    EXPECT_EQ(c.note, "local agency");
    EXPECT_EQ(parse_ci("C | X |").w, LabelSet{});
    EXPECT_THROW(parse_ci("A | B"), ParseError);
}

TEST(Audit, LfDagExplainsPremises) {
    AuditReport r = audit(graphs::lf_dag(), setting_independence_premises());
    EXPECT_FALSE(r.fine_tuned());
    for (const auto& v : r.verdicts) {
        EXPECT_TRUE(v.explained);
        EXPECT_TRUE(v.statement.has_value());
        EXPECT_FALSE(v.open_path.has_value());
    }
}

TEST(Audit, SuperluminalIsFineTuned) {
    AuditReport r = audit(graphs::superluminal(), setting_independence_premises());
    EXPECT_TRUE(r.fine_tuned());
    bool found = false;
    for (const auto& v : r.verdicts)
        if (!v.explained) {
            found = true;
            ASSERT_TRUE(v.open_path.has_value());
        }
    EXPECT_TRUE(found);
    EXPECT_NE(r.csv().find("B"), std::string::npos);
}

TEST(Audit, DAndSigmaAgreeOnDags) {
    for (const auto& ng : named()) {
        AuditReport d = audit(ng.graph, setting_independence_premises(), Criterion::D);
        AuditReport s = audit(ng.graph, setting_independence_premises(), Criterion::Sigma);
        ASSERT_EQ(d.verdicts.size(), s.verdicts.size());
        for (std::size_t i = 0; i < d.verdicts.size(); ++i)
            EXPECT_EQ(d.verdicts[i].explained, s.verdicts[i].explained) << ng.name << " " << i;
    }
}

TEST(Audit, RejectsUnknownAndLatent) {
    EXPECT_THROW(audit(graphs::lf_dag(), {parse_ci("Q | X |")}), GraphError);
    EXPECT_THROW(audit(graphs::lf_dag(), {parse_ci("L | X |")}), GraphError);
}

TEST(Audit, CandidatesAgainstDirectSeparation) {
    const auto graphs = named();
    for (const auto& row : classify_candidates(graphs)) {
        const DirectedGraph* g = nullptr;
        for (const auto& ng : graphs)
            if (ng.name == row.name) g = &ng.graph;
        ASSERT_NE(g, nullptr);
        bool ac = separated(*g, {"A", "C"}, {"Y"}, {"X"}, Criterion::D);
        bool bc = separated(*g, {"B", "C"}, {"X"}, {"Y"}, Criterion::D);
        bool premises = separated(*g, {"A"}, {"Y"}, {"X"}, Criterion::D) &&
                        separated(*g, {"B"}, {"X"}, {"Y"}, Criterion::D) &&
                        separated(*g, {"C"}, {"X"}, {"Y"}, Criterion::D) &&
                        separated(*g, {"C"}, {"Y"}, {"X"}, Criterion::D);
        EXPECT_EQ(row.violation_capable, !(ac && bc)) << row.name;
        EXPECT_EQ(row.fine_tuned, !premises) << row.name;
        EXPECT_TRUE(row.dichotomy_holds()) << row.name;
    }
}

TEST(Audit, CausalOrderPremisesFromConstraints) {
    auto p = causal_order_premises();
    EXPECT_FALSE(p.empty());
    for (const auto& ci : p) {
        EXPECT_EQ(ci.u.size(), 1u);
        EXPECT_EQ(ci.v.size(), 1u);
        EXPECT_TRUE(ci.w.empty());
    }
    EXPECT_FALSE(audit(graphs::lf_dag(), p).fine_tuned());
}

TEST(Audit, DerivationOnPrBox) {
    DerivationTrace t =
        nogo_derivation(DerivationKind::Conditional, setting_independence_premises(), boxes::pr_box(), pac_diag(Rational(1, 2)));
    EXPECT_FALSE(t.feasible);
    EXPECT_TRUE(t.certificate_verified);
    EXPECT_TRUE(t.all_verified());
    EXPECT_EQ(t.steps.size(), 4u);
    EXPECT_NE(t.conclusion.find("infeasible"), std::string::npos);

    DerivationTrace r =
        nogo_derivation(DerivationKind::Relativistic, causal_order_premises(), boxes::pr_box(), pac_diag(Rational(1, 2)));
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(r.all_verified());
}

TEST(Audit, DerivationOnClassicalBox) {
    DerivationTrace t = nogo_derivation(DerivationKind::Conditional, setting_independence_premises(), boxes::lhv_deterministic(0),
                                        pac_diag(Rational(1)));
    EXPECT_TRUE(t.feasible);
    EXPECT_FALSE(t.certificate.has_value());
}

TEST(Audit, MissingPremiseThrows) {
    auto cis = setting_independence_premises();
    cis.pop_back();
    EXPECT_THROW(nogo_derivation(DerivationKind::Conditional, cis, boxes::pr_box(), pac_diag(Rational(1, 2))),
                 AuditError);
}

TEST(Audit, SweepHasNoCounterexamples) {
    SweepSummary s = dichotomy_sweep(4);
    EXPECT_EQ(s.orientations, 29281u);
    EXPECT_EQ(s.graphs, 29281u * 32u);
    EXPECT_EQ(s.counterexamples, 0u);
    EXPECT_GT(s.violation_capable, 0u);
    EXPECT_GE(s.fine_tuned, s.violation_capable);
}
