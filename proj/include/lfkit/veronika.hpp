#ifndef LFKIT_VERONIKA_HPP
#define LFKIT_VERONIKA_HPP

#include "lfkit/rational.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lfkit {

inline constexpr std::uint64_t kMaxSequences = std::uint64_t{1} << 24;

/// N runs, each with an M-outcome amplitude vector and a setting pair.
/// Sequence k has run 0 as its most significant base-M digit.
struct AmplitudeTable {
    std::size_t m = 2;
    std::vector<std::vector<std::complex<double>>> runs;
    std::vector<std::pair<std::size_t, std::size_t>> settings;

    static AmplitudeTable make(std::size_t m, std::vector<std::vector<std::complex<double>>> runs,
                               std::vector<std::pair<std::size_t, std::size_t>> settings, double tolerance = 1e-12);
    /// Same single-run vector for every run.
    static AmplitudeTable repeated(const std::vector<std::complex<double>>& run,
                                   std::vector<std::pair<std::size_t, std::size_t>> settings);

    std::size_t n() const { return runs.size(); }
    /// Throws SizeLimitError above 2^24 sequences.
    std::uint64_t sequence_count() const;
};

/// Half the runs at (0,0), half at (1,1).
std::vector<std::pair<std::size_t, std::size_t>> balanced_settings(std::size_t n);

/// Uniform amplitudes 1/sqrt(M).
std::vector<std::complex<double>> uniform_run(std::size_t m);

enum class FrequencyTest {
    Max,    // max over c and realized contexts of |f(c|xy) - f(c)|
    Pooled  // max over c of the run-weighted mean over contexts of |f(c|xy) - f(c)|
};

std::string to_string(FrequencyTest t);

struct PassPartition {
    Rational epsilon;
    FrequencyTest test = FrequencyTest::Max;
    std::vector<std::uint8_t> pass;  // indexed by sequence
    std::uint64_t pass_count = 0;    // J
    std::uint64_t total = 0;         // M^N
};

PassPartition partition_sequences(const AmplitudeTable& t, const Rational& epsilon,
                                  FrequencyTest test = FrequencyTest::Max);

/// sum over passing sequences of |psi_k|^2, accumulated in fixed blocks.
double pass_probability(const AmplitudeTable& t, const PassPartition& p, std::size_t jobs = 1);

/// Full sequence state (possibly entangled across runs).
struct SequenceState {
    std::size_t m = 2;
    std::size_t n = 0;
    std::vector<std::complex<double>> amplitudes;
};

SequenceState sequence_state(const AmplitudeTable& t);

struct PostselectResult {
    SequenceState state;
    double fidelity = 0;  // |<pre|post>|^2
    double pass_probability = 0;
};

/// Zeroes failing sequences and renormalizes. Throws Error when nothing passes.
PostselectResult postselect(const AmplitudeTable& t, const PassPartition& p);

/// Max over runs of the total-variation distance between the pre and post
/// single-run outcome marginals.
double induced_discrepancy(const SequenceState& pre, const SequenceState& post);

struct PvmComparison {
    double pvm = 0;
    double two_step = 0;
    double deviation = 0;
    bool equal = false;  // deviation < 1e-12
};

/// Builds the full state by Kronecker products and measures the two-projector
/// PVM {Pi_pass, 1 - Pi_pass}; compares with pass_probability.
PvmComparison pvm_variant_pass_probability(const AmplitudeTable& t, const Rational& epsilon,
                                           FrequencyTest test = FrequencyTest::Max);

struct SweepRow {
    std::size_t n = 0;
    std::uint64_t pass_count = 0;
    std::uint64_t total = 0;
    double pass_probability = 0;
    double fidelity = 0;
    double gamma_estimate = 0;
    double pvm = 0;
    double pvm_deviation = 0;
};

std::vector<SweepRow> veronika_sweep(const std::vector<std::complex<double>>& run, const std::vector<std::size_t>& ns,
                                     const Rational& epsilon, FrequencyTest test = FrequencyTest::Max,
                                     std::size_t jobs = 1);

}  // namespace lfkit

#endif  // LFKIT_VERONIKA_HPP
