#ifndef LFKIT_LINEAR_HPP
#define LFKIT_LINEAR_HPP

#include "lfkit/rational.hpp"

#include <string>
#include <vector>

namespace lfkit {

using RationalMatrix = std::vector<RationalVector>;

struct LinearConstraint {
    RationalVector coeffs;
    Rational rhs;
};

/**
 * Rational system: equalities a.x = b, inequalities a.x <= b, optional
 * sign restrictions x_j >= 0 and an objective to minimize.
 */
class LinearSystem {
public:
    explicit LinearSystem(std::size_t variables = 0);

    std::size_t variable_count() const { return nonnegative_.size(); }
    void set_nonnegative(std::size_t j, bool value = true);
    void set_all_nonnegative(bool value = true);
    bool nonnegative(std::size_t j) const { return nonnegative_.at(j); }

    std::size_t add_equality(RationalVector coeffs, Rational rhs);
    std::size_t add_inequality(RationalVector coeffs, Rational rhs);
    void set_objective(RationalVector coeffs);

    const std::vector<LinearConstraint>& equalities() const { return equalities_; }
    const std::vector<LinearConstraint>& inequalities() const { return inequalities_; }
    const RationalVector& objective() const { return objective_; }

private:
    std::vector<bool> nonnegative_;
    std::vector<LinearConstraint> equalities_;
    std::vector<LinearConstraint> inequalities_;
    RationalVector objective_;

    void check(const RationalVector& coeffs) const;
};

/// Farkas multipliers: equality multipliers are free, inequality ones are
/// nonnegative, y^T A vanishes on free variables and is nonnegative on
/// sign-restricted ones, and y^T b = -1.
struct Certificate {
    RationalVector equality_multipliers;
    RationalVector inequality_multipliers;
};

struct FeasibilityVerdict {
    bool feasible = false;
    RationalVector witness;
    Certificate certificate;
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    RationalVector solution;
    Rational value;
    Certificate certificate;
};

/// Exact two-phase simplex with Bland's rule. Witnesses and certificates
/// are re-verified by substitution before returning.
FeasibilityVerdict lp_feasible(const LinearSystem& sys);
LpResult lp_minimize(const LinearSystem& sys);

bool verify_witness(const LinearSystem& sys, const RationalVector& x);
bool verify_certificate(const LinearSystem& sys, const Certificate& cert);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m);
/// Basis of {x : M x = 0}, one vector per free column.
RationalMatrix nullspace(const RationalMatrix& m, std::size_t columns);

}  // namespace lfkit

#endif  // LFKIT_LINEAR_HPP
