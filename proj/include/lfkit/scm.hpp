#ifndef LFKIT_SCM_HPP
#define LFKIT_SCM_HPP

#include "lfkit/distribution.hpp"
#include "lfkit/expression.hpp"
#include "lfkit/graph.hpp"
#include "lfkit/rational.hpp"
#include "lfkit/separation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lfkit {

struct EndogenousVariable {
    std::string name;
    std::size_t domain = 2;  ///< values 0 .. domain-1
};

struct ErrorVariable {
    std::string name;
    std::size_t domain = 2;
    std::vector<Rational> prior;  ///< empty means uniform
};

/// Values outside the target's domain have no solution.
struct StructuralEquation {
    std::string target;
    Expression expression;
};

constexpr std::size_t kMaxScmAssignments = std::size_t{1} << 22;

/**
 * Finite-domain functional model, possibly cyclic. Each endogenous variable
 * has exactly one equation; the induced graph has an edge P -> V whenever
 * the equation of V mentions endogenous P.
 */
class FunctionalModel {
public:
    /// declared_parents, when given, must match the endogenous variables each
    /// equation mentions.
    static FunctionalModel build(std::vector<EndogenousVariable> endogenous, std::vector<ErrorVariable> errors,
                                 std::vector<StructuralEquation> equations,
                                 const std::map<std::string, LabelSet>& declared_parents = {});

    const std::vector<EndogenousVariable>& endogenous() const { return endogenous_; }
    const std::vector<ErrorVariable>& errors() const { return errors_; }
    const std::vector<StructuralEquation>& equations() const { return equations_; }
    std::size_t endogenous_index(const std::string& name) const;
    LabelSet parents(const std::string& name) const;
    const DirectedGraph& graph() const { return graph_; }

    std::size_t error_evaluation_count() const;
    std::vector<std::int64_t> error_values(std::size_t evaluation) const;
    Rational error_weight(std::size_t evaluation) const;

    /// True iff every equation holds at (endogenous, error) values.
    bool satisfies(const std::vector<std::int64_t>& endogenous_values,
                   const std::vector<std::int64_t>& error_values) const;

private:
    std::vector<EndogenousVariable> endogenous_;
    std::vector<ErrorVariable> errors_;
    std::vector<StructuralEquation> equations_;  ///< ordered like endogenous_
    DirectedGraph graph_;
};

struct ErrorEvaluation {
    std::vector<std::int64_t> errors;
    Rational weight;
    std::vector<std::vector<std::int64_t>> solutions;
};

struct SolutionSet {
    std::vector<ErrorEvaluation> evaluations;

    std::size_t valid_count() const;
    std::size_t invalid_count() const { return evaluations.size() - valid_count(); }
};

/// Endogenous values fixed before solving.
using Assignment = std::map<std::string, std::int64_t>;

/// Exhaustive search per error evaluation. Conditioned variables are held at
/// their values and every equation, including theirs, must still hold.
SolutionSet solve(const FunctionalModel& model, const Assignment& conditioning = {}, unsigned jobs = 1);

/**
 * Distribution over the endogenous variables (or `keep`, in model order).
 * Each valid evaluation contributes its prior split uniformly over its
 * solutions; the result is renormalized. Throws DistributionError on empty
 * support.
 */
ConditionalDistribution induced_distribution(const FunctionalModel& model, const Assignment& conditioning = {},
                                             const std::vector<std::string>& keep = {});

/// Joint by topological evaluation; only for acyclic models.
ConditionalDistribution forward_distribution(const FunctionalModel& model);

struct SeparationCheck {
    SeparationStatement statement;
    CIResult ci;
    bool violation = false;  ///< separated but not independent
};

struct CiSeparationReport {
    Criterion criterion = Criterion::D;
    std::vector<SeparationCheck> rows;

    std::vector<SeparationStatement> violations() const;
    bool flags(const SeparationStatement& s) const;
    std::string to_string() const;
};

CiSeparationReport ci_vs_separation_report(const FunctionalModel& model, Criterion criterion);

namespace models {

/// A = D*E_A, B = A + E_B, C = B*E_C, D = C + E_D, binary, uniform errors.
FunctionalModel feedback_loop();
/// A = C^B, B = A^D, C = E_C, D = E_D, binary, uniform errors.
FunctionalModel xor_pair();

}  // namespace models

}  // namespace lfkit

#endif  // LFKIT_SCM_HPP
