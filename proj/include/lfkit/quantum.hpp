#ifndef LFKIT_QUANTUM_HPP
#define LFKIT_QUANTUM_HPP

#include "lfkit/distribution.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace lfkit {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQuantumDimension = 4096;  // 12 qubits

/// Amplitudes over a tensor product; factor 0 is most significant.
struct StateVector {
    std::vector<std::size_t> dims;
    Eigen::VectorXcd amplitudes;

    static StateVector make(std::vector<std::size_t> dims, Eigen::VectorXcd amplitudes, double tolerance = 1e-12);
    /// Tensor product with |index> on a new trailing factor.
    StateVector extended(std::size_t dim, std::size_t index) const;
    /// Applies op to the listed factors (in the listed order).
    StateVector applied(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets) const;
    /// <psi| op |psi> with op on the listed factors.
    Complex expectation(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets) const;
    double norm() const { return amplitudes.norm(); }
};

/// Operators on one factor, positive and summing to the identity.
struct EffectFamily {
    std::vector<Eigen::MatrixXcd> effects;

    std::size_t dimension() const { return effects.empty() ? 0 : static_cast<std::size_t>(effects[0].rows()); }
    /// Throws QuantumModelError unless each effect is PSD and they sum to I.
    void validate(double tolerance = 1e-12) const;
};

/// Projective qubit measurement along Bloch angle theta in the Z-X plane:
/// outcome 0 projects onto cos(theta/2)|0> + sin(theta/2)|1>.
EffectFamily angle_measurement(double theta);

Eigen::MatrixXcd cnot();

enum class AliceAction { CopyCharlieMemory, ReverseThenMeasure };

struct AliceSetting {
    AliceAction action = AliceAction::ReverseThenMeasure;
    EffectFamily effect;  // on Charlie's system; unused for copy
};

/**
 * Factors: Bob, Charlie's system, Charlie's memory. Charlie's measurement
 * is the unitary `charlie` on (system, memory) with the memory starting in
 * |0>; reversal applies `charlie_inverse`.
 */
struct MinimalLFModel {
    Eigen::VectorXcd initial_state;  // on Bob (x) system
    std::size_t bob_dim = 2;
    std::size_t system_dim = 2;
    std::size_t memory_dim = 2;
    Eigen::MatrixXcd charlie;
    Eigen::MatrixXcd charlie_inverse;
    std::vector<AliceSetting> alice;
    std::vector<EffectFamily> bob;
    std::size_t copy_setting = 1;
    double tolerance = 1e-12;

    void validate() const;
};

/// Phi+ on Bob (x) system, CNOT into the memory, Alice {reverse at pi/2, copy},
/// Bob {pi/4, 3 pi/4}: CHSH = 2 + sqrt 2.
MinimalLFModel tsirelson_model();

struct LfRun {
    ConditionalDistribution pab;          // operational, coherent reversal
    ConditionalDistribution pac;          // P(ac|x=copy), no settings
    ConditionalDistribution pc;           // P(c|xy) from the bookkeeping table
    ConditionalDistribution bookkeeping;  // P(abc|xy), model bookkeeping, not operational data
    double bookkeeping_ab_discrepancy = 0;
    std::vector<double> charlie_marginal;  // P(c)
};

LfRun run_minimal_lf(const MinimalLFModel& m);

struct LocalAgencyReport {
    double ac_deviation = 0;  // max |P(ac|xy) - P(ac|x y=0)|
    double bc_deviation = 0;  // max |P(bc|xy) - P(bc|x=0 y)|
    std::string ac_context;
    std::string bc_context;
    bool pass = false;
};

/// Checks Local Agency on a P(abc|xy) table (outcomes A,B,C; settings X,Y).
LocalAgencyReport verify_local_agency(const ConditionalDistribution& pabc, double tolerance);

/// Charlie's unitary followed by its declared inverse is the identity on a basis sweep.
bool reversal_soundness(const MinimalLFModel& m, double tolerance = 1e-12);

}  // namespace lfkit

#endif  // LFKIT_QUANTUM_HPP
