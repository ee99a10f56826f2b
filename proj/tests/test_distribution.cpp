#include "lfkit/distribution.hpp"
#include "lfkit/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lfkit;

namespace {

std::vector<VariableSpec> abc() {
    return {{"A", 2, VariableRole::Outcome}, {"B", 3, VariableRole::Outcome}, {"C", 2, VariableRole::Outcome}};
}

Rational random_weight(std::mt19937& rng) { return Rational(static_cast<long>(rng() % 9 + 1)); }

std::vector<Rational> normalized(std::vector<Rational> v) {
    Rational s = 0;
    for (const auto& x : v) s += x;
    for (auto& x : v) x /= s;
    return v;
}

}  // namespace

TEST(Distribution, ExactValidation) {
    auto outs = std::vector<VariableSpec>{{"A", 2, VariableRole::Outcome}};
    EXPECT_THROW(ConditionalDistribution::exact(outs, {}, {Rational(1, 2)}), DistributionError);
    EXPECT_THROW(ConditionalDistribution::exact(outs, {}, {Rational(3, 2), Rational(-1, 2)}), DistributionError);
    EXPECT_THROW(ConditionalDistribution::exact(outs, {}, {Rational(1, 2), Rational(1, 3)}), DistributionError);
    EXPECT_NO_THROW(ConditionalDistribution::exact(outs, {}, {Rational(1, 3), Rational(2, 3)}));
}

TEST(Distribution, ApproximateValidation) {
    auto outs = std::vector<VariableSpec>{{"A", 2, VariableRole::Outcome}};
    EXPECT_NO_THROW(ConditionalDistribution::approximate(outs, {}, {0.5 + 1e-12, 0.5}, 1e-9));
    EXPECT_THROW(ConditionalDistribution::approximate(outs, {}, {0.6, 0.5}, 1e-9), DistributionError);
    auto d = ConditionalDistribution::approximate(outs, {}, {0.25, 0.75});
    EXPECT_FALSE(d.is_exact());
    EXPECT_THROW(d.exact_table(), DistributionError);
}

TEST(Distribution, EncodeDecodeRoundTrip) {
    auto d = ConditionalDistribution::exact(abc(), {}, std::vector<Rational>(12, Rational(1, 12)));
    for (std::size_t o = 0; o < d.outcome_count(); ++o) EXPECT_EQ(d.encode_outcome(d.decode_outcome(o)), o);
    EXPECT_EQ(d.encode_outcome({1, 2, 1}), 11u);
    EXPECT_EQ(d.encode_outcome({0, 1, 0}), 2u);
}

TEST(Distribution, ChshValues) {
    EXPECT_EQ(chsh_value_exact(boxes::pr_box()), Rational(4));
    EXPECT_EQ(chsh_value_exact(boxes::white_noise()), Rational(2));
    Rational best = 0;
    for (unsigned i = 0; i < 16; ++i) best = std::max(best, chsh_value_exact(boxes::lhv_deterministic(i)));
    EXPECT_EQ(best, Rational(3));
    EXPECT_NEAR(chsh_value(boxes::tsirelson_box()), 2 + std::sqrt(2.0), 1e-12);
}

TEST(Distribution, DeterministicBoxResponses) {
    // index 6: a0 = 0, a1 = 1, b0 = 1, b1 = 0
    auto d = boxes::lhv_deterministic(6);
    EXPECT_EQ(d.exact_at(d.encode_context({1, 0}), d.encode_outcome({1, 1})), Rational(1));
    EXPECT_EQ(d.exact_at(d.encode_context({0, 1}), d.encode_outcome({0, 0})), Rational(1));
    EXPECT_THROW(boxes::lhv_deterministic(16), DistributionError);
    EXPECT_THROW(boxes::named_box("lhv_deterministic(x)"), DistributionError);
    EXPECT_EQ(boxes::named_box("lhv_deterministic(6)").exact_table(), d.exact_table());
}

TEST(Distribution, NoSignaling) {
    EXPECT_EQ(no_signaling_deviation_exact(boxes::pr_box()), Rational(0));
    EXPECT_LT(no_signaling_deviation(boxes::tsirelson_box()), 1e-12);
    // a = y signals from Bob to Alice.
    std::vector<Rational> t(16, Rational(0));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) t[(x * 2 + y) * 4 + y * 2] = 1;
    auto s = ConditionalDistribution::exact(boxes::ab_outcomes(), boxes::xy_settings(), t);
    EXPECT_EQ(no_signaling_deviation_exact(s), Rational(1));
    EXPECT_FALSE(ci_holds(s, {"A"}, {"Y"}, {"X"}).holds);
}

TEST(Distribution, MarginalizeAndRestrict) {
    auto m = marginalize(boxes::pr_box(), {"A"});
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(m.exact_at(c, 0), Rational(1, 2));
    auto r = restrict_setting(boxes::pr_box(), {{"X", 1}, {"Y", 1}});
    EXPECT_EQ(r.context_count(), 1u);
    EXPECT_EQ(r.exact_at(0, 1), Rational(1, 2));  // a=0, b=1
    EXPECT_THROW(restrict_setting(boxes::pr_box(), {{"X", 2}}), DistributionError);
}

TEST(Distribution, MixtureChecksWeights) {
    auto m = boxes::mixture({boxes::pr_box(), boxes::white_noise()}, {Rational(1, 2), Rational(1, 2)});
    EXPECT_EQ(chsh_value_exact(m), Rational(3));
    EXPECT_THROW(boxes::mixture({boxes::pr_box()}, {Rational(1, 2)}), DistributionError);
}

TEST(Distribution, CiHoldsOnConstructedConditionalProducts) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        // P(a,b,c) = P(c) P(a|c) P(b|c)
        auto pc = normalized({random_weight(rng), random_weight(rng)});
        std::vector<std::vector<Rational>> pa, pb;
        for (int c = 0; c < 2; ++c) {
            pa.push_back(normalized({random_weight(rng), random_weight(rng)}));
            pb.push_back(normalized({random_weight(rng), random_weight(rng), random_weight(rng)}));
        }
        std::vector<Rational> t(12);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 2; ++c) t[(a * 3 + b) * 2 + c] = pc[c] * pa[c][a] * pb[c][b];
        auto d = ConditionalDistribution::exact(abc(), {}, t);
        CIResult r = ci_holds(d, {"A"}, {"B"}, {"C"});
        EXPECT_TRUE(r.holds);
        EXPECT_EQ(*r.exact_deviation, Rational(0));

        // Move mass between two cells with c = 0; the oracle deviation is
        // max |P(ab|c) - P(a|c)P(b|c)| computed directly.
        Rational eps = std::min(t[0], t[(1 * 3 + 1) * 2]) / 2;
        t[0] -= eps;
        t[(0 * 3 + 1) * 2] += eps;
        auto e = ConditionalDistribution::exact(abc(), {}, t);
        Rational expected = 0;
        for (int c = 0; c < 2; ++c) {
            Rational z = 0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 3; ++b) z += t[(a * 3 + b) * 2 + c];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 3; ++b) {
                    Rational pab = t[(a * 3 + b) * 2 + c] / z, pa_ = 0, pb_ = 0;
                    for (int bb = 0; bb < 3; ++bb) pa_ += t[(a * 3 + bb) * 2 + c] / z;
                    for (int aa = 0; aa < 2; ++aa) pb_ += t[(aa * 3 + b) * 2 + c] / z;
                    Rational dev = pab - pa_ * pb_;
                    if (dev < 0) dev = -dev;
                    expected = std::max(expected, dev);
                }
        }
        CIResult f = ci_holds(e, {"A"}, {"B"}, {"C"});
        EXPECT_FALSE(f.holds);
        EXPECT_EQ(*f.exact_deviation, expected);
    }
}

TEST(Distribution, CiWithSettings) {
    auto pr = boxes::pr_box();
    EXPECT_TRUE(ci_holds(pr, {"A"}, {"Y"}, {"X"}).holds);
    EXPECT_TRUE(ci_holds(pr, {"B"}, {"X"}, {"Y"}).holds);
    EXPECT_FALSE(ci_holds(pr, {"A"}, {"B"}, {"X", "Y"}).holds);
    EXPECT_THROW(ci_holds(pr, {"A"}, {"A"}, {}), DistributionError);
    EXPECT_THROW(ci_holds(pr, {"A"}, {"Q"}, {}), DistributionError);
    // A fixed setting: in context x=0 the PR box's A and B are correlated.
    SettingsPolicy fixed;
    fixed.entries["X"] = {SettingsPolicy::Mode::Fixed, 0};
    EXPECT_FALSE(ci_holds(pr, {"A"}, {"B"}, {"Y"}, fixed).holds);
}

TEST(Distribution, ApproximateCiUsesTolerance) {
    auto ts = boxes::tsirelson_box();
    EXPECT_TRUE(ci_holds(ts, {"A"}, {"Y"}, {"X"}, {}, 1e-9).holds);
    EXPECT_FALSE(ci_holds(ts, {"A"}, {"B"}, {"X", "Y"}, {}, 1e-9).holds);
}
