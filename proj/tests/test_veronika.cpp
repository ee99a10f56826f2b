#include "lfkit/error.hpp"
#include "lfkit/veronika.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lfkit;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Balanced binary runs: with k1 ones among the n/2 runs of one context and
// k2 among the other, every frequency gap equals |k1 - k2| / n.
std::uint64_t binomial_j(std::uint64_t n, const Rational& eps) {
    const std::uint64_t h = n / 2;
    std::uint64_t j = 0;
    for (std::uint64_t k1 = 0; k1 <= h; ++k1)
        for (std::uint64_t k2 = 0; k2 <= h; ++k2) {
            Rational gap(static_cast<long>(k1 > k2 ? k1 - k2 : k2 - k1), static_cast<long>(n));
            if (gap < eps) j += choose(h, k1) * choose(h, k2);
        }
    return j;
}

// Direct frequency test over explicit sequences, independent of the library.
std::vector<bool> brute_pass(const AmplitudeTable& t, double eps) {
    const std::size_t n = t.n(), m = t.m;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    std::vector<bool> out(total);
    for (std::uint64_t k = 0; k < total; ++k) {
        std::vector<std::size_t> digits(n);
        std::uint64_t r = k;
        for (std::size_t i = n; i-- > 0;) {
            digits[i] = r % m;
            r /= m;
        }
        bool pass = true;
        for (std::size_t c = 0; c < m; ++c) {
            double fc = 0;
            for (auto d : digits) fc += d == c;
            fc /= n;
            for (const auto& ctx : t.settings) {
                double hits = 0, runs = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (t.settings[i] == ctx) {
                        ++runs;
                        hits += digits[i] == c;
                    }
                if (std::abs(hits / runs - fc) >= eps - 1e-12) pass = false;
            }
        }
        out[k] = pass;
    }
    return out;
}

}  // namespace

TEST(Veronika, PinnedPassCounts) {
    const Rational eps(1, 4);
    for (auto [n, j] : {std::pair<std::size_t, std::uint64_t>{4, 6}, {8, 182}, {16, 60502}}) {
        AmplitudeTable t = AmplitudeTable::repeated(uniform_run(2), balanced_settings(n));
        PassPartition p = partition_sequences(t, eps);
        EXPECT_EQ(p.pass_count, j) << n;
        EXPECT_EQ(p.pass_count, binomial_j(n, eps)) << n;
        EXPECT_EQ(p.total, std::uint64_t{1} << n);
    }
}

TEST(Veronika, BinomialOracleOverEpsilon) {
    for (std::size_t n : {2u, 6u, 10u, 12u})
        for (const Rational& eps : {Rational(1, 8), Rational(1, 3), Rational(1, 2)}) {
            AmplitudeTable t = AmplitudeTable::repeated(uniform_run(2), balanced_settings(n));
            EXPECT_EQ(partition_sequences(t, eps).pass_count, binomial_j(n, eps)) << n << " " << eps;
        }
}

TEST(Veronika, PartitionMatchesDirectTest) {
    std::vector<std::pair<std::size_t, std::size_t>> settings = {{0, 0}, {0, 1}, {0, 0}, {1, 1}, {0, 1}, {1, 1}};
    AmplitudeTable t = AmplitudeTable::repeated(uniform_run(3), settings);
    PassPartition p = partition_sequences(t, Rational(1, 3));
    std::vector<bool> want = brute_pass(t, 1.0 / 3);
    ASSERT_EQ(p.pass.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_EQ(static_cast<bool>(p.pass[k]), want[k]) << k;
}

TEST(Veronika, PooledEqualsMaxWhenBalanced) {
    AmplitudeTable t = AmplitudeTable::repeated(uniform_run(2), balanced_settings(10));
    EXPECT_EQ(partition_sequences(t, Rational(1, 4), FrequencyTest::Pooled).pass_count,
              partition_sequences(t, Rational(1, 4), FrequencyTest::Max).pass_count);
}

TEST(Veronika, PassProbabilityAndFidelity) {
    const double pi = std::numbers::pi;
    std::vector<std::complex<double>> run = {std::sqrt(0.7), std::polar(std::sqrt(0.3), pi / 5)};
    AmplitudeTable t = AmplitudeTable::repeated(run, balanced_settings(8));
    PassPartition p = partition_sequences(t, Rational(1, 4));
    double want = 0;
    for (std::uint64_t k = 0; k < p.total; ++k) {
        if (!p.pass[k]) continue;
        double w = 1;
        for (int i = 0; i < 8; ++i) w *= ((k >> i) & 1) ? 0.3 : 0.7;
        want += w;
    }
    EXPECT_NEAR(pass_probability(t, p), want, 1e-12);
    EXPECT_NEAR(pass_probability(t, p, 4), want, 1e-12);
    PostselectResult post = postselect(t, p);
    EXPECT_NEAR(post.fidelity, want, 1e-12);
    EXPECT_NEAR(post.pass_probability, want, 1e-12);
    PvmComparison c = pvm_variant_pass_probability(t, Rational(1, 4));
    EXPECT_TRUE(c.equal);
    EXPECT_NEAR(c.pvm, want, 1e-12);
}

TEST(Veronika, SweepOnUniformRuns) {
    auto rows = veronika_sweep(uniform_run(2), {4, 8, 16}, Rational(1, 4));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].pass_probability, 6.0 / 16, 1e-12);
    EXPECT_NEAR(rows[1].pass_probability, 182.0 / 256, 1e-12);
    EXPECT_NEAR(rows[2].pass_probability, 60502.0 / 65536, 1e-12);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.fidelity, r.pass_probability, 1e-12);
        EXPECT_LT(r.gamma_estimate, 1e-12);
        EXPECT_LT(r.pvm_deviation, 1e-12);
    }
}

TEST(Veronika, Guards) {
    EXPECT_THROW(AmplitudeTable::repeated(uniform_run(2), balanced_settings(25)).sequence_count(), SizeLimitError);
    EXPECT_THROW(AmplitudeTable::make(2, {{1.0, 1.0}}, {{0, 0}}), Error);
    // Only 0011 has weight, and its contexts disagree completely.
    AmplitudeTable t = AmplitudeTable::make(2, {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}},
                                            {{0, 0}, {0, 0}, {1, 1}, {1, 1}});
    PassPartition p = partition_sequences(t, Rational(1, 4));
    EXPECT_THROW(postselect(t, p), Error);
}
