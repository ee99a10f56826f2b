#ifndef LFKIT_DISTRIBUTION_HPP
#define LFKIT_DISTRIBUTION_HPP

#include "lfkit/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lfkit {

enum class VariableRole { Outcome, Setting };

struct VariableSpec {
    std::string label;
    std::size_t cardinality = 2;
    VariableRole role = VariableRole::Outcome;

    friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/**
 * Table of P(outcomes | settings). Entry (ctx, out) lives at
 * ctx * outcome_count() + out; both indices are mixed radix with the first
 * variable most significant.
 *
 * Exact tables hold rationals and a double mirror. Approximate tables
 * (quantum-sourced) hold doubles only and are validated with a tolerance.
 */
class ConditionalDistribution {
public:
    ConditionalDistribution() = default;

    static ConditionalDistribution exact(std::vector<VariableSpec> outcomes, std::vector<VariableSpec> settings,
                                         std::vector<Rational> table);
    static ConditionalDistribution approximate(std::vector<VariableSpec> outcomes,
                                               std::vector<VariableSpec> settings, std::vector<double> table,
                                               double tolerance = 1e-9);

    bool is_exact() const { return !exact_.empty() || approx_.empty(); }
    const std::vector<VariableSpec>& outcomes() const { return outcomes_; }
    const std::vector<VariableSpec>& settings() const { return settings_; }
    std::size_t outcome_count() const { return outcome_count_; }
    std::size_t context_count() const { return context_count_; }

    /// Throws DistributionError on approximate tables.
    const std::vector<Rational>& exact_table() const;
    const std::vector<double>& table() const { return approx_; }

    const Rational& exact_at(std::size_t ctx, std::size_t out) const;
    double at(std::size_t ctx, std::size_t out) const { return approx_.at(ctx * outcome_count_ + out); }

    std::size_t outcome_position(const std::string& label) const;
    std::size_t setting_position(const std::string& label) const;

    std::vector<std::size_t> decode_outcome(std::size_t out) const;
    std::vector<std::size_t> decode_context(std::size_t ctx) const;
    std::size_t encode_outcome(const std::vector<std::size_t>& values) const;
    std::size_t encode_context(const std::vector<std::size_t>& values) const;

private:
    std::vector<VariableSpec> outcomes_;
    std::vector<VariableSpec> settings_;
    std::size_t outcome_count_ = 1;
    std::size_t context_count_ = 1;
    std::vector<Rational> exact_;
    std::vector<double> approx_;

    void init_shape();
};

std::size_t radix_size(const std::vector<VariableSpec>& vars);

ConditionalDistribution marginalize(const ConditionalDistribution& d, const std::vector<std::string>& keep);

/// Fixes some setting variables; throws DistributionError for out-of-range values.
ConditionalDistribution restrict_setting(const ConditionalDistribution& d,
                                         const std::map<std::string, std::size_t>& assignment);

/// Exact table to approximate table (drops rationals).
ConditionalDistribution to_approximate(const ConditionalDistribution& d);

/// Per setting: a fixed value, uniform folding into the joint, or a
/// separate test in every context. Unlisted settings are uniform.
struct SettingsPolicy {
    enum class Mode { Fixed, Uniform, PerContext };
    struct Entry {
        Mode mode = Mode::Uniform;
        std::size_t value = 0;
    };
    std::map<std::string, Entry> entries;

    static SettingsPolicy uniform() { return {}; }
    static SettingsPolicy per_context(const ConditionalDistribution& d);
};

struct CIResult {
    bool holds = false;
    double deviation = 0;
    std::optional<Rational> exact_deviation;
};

/**
 * Tests U _|_ V | W. U, V, W may name outcomes and (uniformly folded)
 * settings. Deviation is max |P(uv|w) - P(u|w)P(v|w)| over supported
 * contexts; exact tables with tolerance 0 are decided exactly.
 */
CIResult ci_holds(const ConditionalDistribution& d, const std::vector<std::string>& u,
                  const std::vector<std::string>& v, const std::vector<std::string>& w,
                  const SettingsPolicy& policy = {}, double tolerance = 0);

namespace boxes {

/// Outcomes (A, B), settings (X, Y), all binary.
std::vector<VariableSpec> ab_outcomes();
std::vector<VariableSpec> xy_settings();

ConditionalDistribution pr_box();
ConditionalDistribution tsirelson_box();
/// index = a0 + 2 a1 + 4 b0 + 8 b1, where a_x and b_y are the responses.
ConditionalDistribution lhv_deterministic(unsigned index);
ConditionalDistribution white_noise();
ConditionalDistribution mixture(const std::vector<ConditionalDistribution>& parts, const std::vector<Rational>& weights);

/// "pr_box", "tsirelson_box", "white_noise", "lhv_deterministic(i)".
ConditionalDistribution named_box(const std::string& name);

}  // namespace boxes

Rational chsh_value_exact(const ConditionalDistribution& d);
double chsh_value(const ConditionalDistribution& d);

/// Max over contexts of |P(a|xy) - P(a|xy')| and |P(b|xy) - P(b|x'y)|
/// for a binary-settings bipartite box P(ab|xy).
Rational no_signaling_deviation_exact(const ConditionalDistribution& d);
double no_signaling_deviation(const ConditionalDistribution& d);

}  // namespace lfkit

#endif  // LFKIT_DISTRIBUTION_HPP
