#ifndef LFKIT_AUDIT_HPP
#define LFKIT_AUDIT_HPP

#include "lfkit/distribution.hpp"
#include "lfkit/graph.hpp"
#include "lfkit/linear.hpp"
#include "lfkit/separation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lfkit {

/// Conditional independence U _|_ V | W among observed variables.
struct CIStatement {
    LabelSet u;
    LabelSet v;
    LabelSet w;
    SettingsPolicy policy;
    double tolerance = 0;
    std::string note;

    SeparationStatement as_separation(Criterion criterion) const;
    std::string to_string() const;
};

/// "U | V | W", optionally followed by "  # note".
CIStatement parse_ci(const std::string& text);

struct AuditVerdict {
    CIStatement ci;
    bool explained = false;
    std::optional<SeparationStatement> statement;  ///< set iff explained
    std::optional<Path> open_path;                 ///< set iff fine-tuned
};

struct AuditReport {
    Criterion criterion = Criterion::D;
    std::vector<AuditVerdict> verdicts;

    bool fine_tuned() const;
    std::string to_string() const;
    std::string csv() const;
};

/// Throws GraphError when a CI names an unknown or latent node.
AuditReport audit(const DirectedGraph& g, const std::vector<CIStatement>& cis, Criterion criterion = Criterion::D);

/// A|Y|X, B|X|Y, C|X|Y, C|Y|X.
std::vector<CIStatement> setting_independence_premises();
/// T _|_ S for every forbidden (S, T) whose cause S is exogenous.
std::vector<CIStatement> causal_order_premises(const CausalOrderConstraints& constraints = minimal_lf_constraints());

enum class DerivationKind { Conditional, Relativistic };

struct DerivationStep {
    std::string name;
    std::string detail;
    bool verified = false;
};

struct DerivationTrace {
    DerivationKind kind = DerivationKind::Conditional;
    std::vector<DerivationStep> steps;
    std::vector<SeparationStatement> closure;
    bool feasible = false;
    std::optional<Certificate> certificate;
    bool certificate_verified = false;
    std::string conclusion;

    bool all_verified() const;
    std::string to_string() const;
};

/**
 * Chains the no-fine-tuning lift, composition, Local Agency and the
 * marginal problem. pabc, when given, is checked for Local Agency.
 * Throws AuditError when a required premise is missing.
 */
DerivationTrace nogo_derivation(DerivationKind kind, const std::vector<CIStatement>& cis,
                                const ConditionalDistribution& pab, const ConditionalDistribution& pac,
                                const std::optional<ConditionalDistribution>& pabc = std::nullopt,
                                double tolerance = 1e-9);

struct NamedGraph {
    std::string name;
    DirectedGraph graph;
};

struct CandidateRow {
    std::string name;
    bool violation_capable = false;  ///< AC|Y|X or BC|X|Y fails
    bool fine_tuned = false;         ///< some premise CI is not separated
    bool dichotomy_holds() const { return !violation_capable || fine_tuned; }
};

std::vector<CandidateRow> classify_candidates(const std::vector<NamedGraph>& graphs,
                                              const std::vector<CIStatement>& cis = setting_independence_premises());

struct SweepSummary {
    std::size_t orientations = 0;  ///< acyclic orientations on {A,B,C,X,Y}
    std::size_t graphs = 0;
    std::size_t violation_capable = 0;
    std::size_t fine_tuned = 0;
    std::size_t counterexamples = 0;  ///< violation-capable and not fine-tuned
    std::vector<std::string> first_counterexamples;

    std::string to_string() const;
};

/// Every DAG on {A,B,C,X,Y} plus at most one latent root L, each latent
/// child set included.
SweepSummary dichotomy_sweep(unsigned jobs = 1);

}  // namespace lfkit

#endif  // LFKIT_AUDIT_HPP
