#include "lfkit/error.hpp"
#include "lfkit/scm.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace lfkit;

namespace {

using Eqs = std::function<bool(const int* v, const int* e)>;

// Direct solver for four binary endogenous and four binary error variables.
// Returns P(v[i], v[j]) under the given conditioning (-1 means free).
std::vector<Rational> brute_pair(const Eqs& eqs, int ne, std::array<int, 4> fixed, int i, int j,
                                 std::size_t* invalid = nullptr) {
    std::vector<Rational> p(4, Rational(0));
    Rational total = 0;
    std::size_t bad = 0;
    for (int ek = 0; ek < (1 << ne); ++ek) {
        int e[4];
        for (int t = 0; t < ne; ++t) e[t] = (ek >> (ne - 1 - t)) & 1;
        std::vector<std::array<int, 4>> sols;
        for (int vk = 0; vk < 16; ++vk) {
            int v[4];
            bool ok = true;
            for (int t = 0; t < 4; ++t) {
                v[t] = (vk >> (3 - t)) & 1;
                ok = ok && (fixed[t] < 0 || fixed[t] == v[t]);
            }
            if (ok && eqs(v, e)) sols.push_back({v[0], v[1], v[2], v[3]});
        }
        if (sols.empty()) {
            ++bad;
            continue;
        }
        Rational w(1, static_cast<long>(sols.size()));
        for (const auto& s : sols) p[s[i] * 2 + s[j]] += w;
        total += 1;
    }
    for (auto& x : p) x /= total;
    if (invalid) *invalid = bad;
    return p;
}

bool feedback_eqs(const int* v, const int* e) {
    // A B C D
    return v[0] == v[3] * e[0] && v[1] == v[0] + e[1] && v[2] == v[1] * e[2] && v[3] == v[2] + e[3];
}

bool xor_eqs(const int* v, const int* e) {
    return v[0] == (v[2] ^ v[1]) && v[1] == (v[0] ^ v[3]) && v[2] == e[0] && v[3] == e[1];
}

std::int64_t eval(const std::string& text, const std::vector<std::string>& slots, const std::vector<std::int64_t>& v) {
    Expression e = Expression::parse(text);
    e.bind(slots);
    return e.evaluate(v);
}

}  // namespace

TEST(Expression, PrecedenceAndOperators) {
    EXPECT_EQ(eval("1+2*3", {}, {}), 7);
    EXPECT_EQ(eval("(1+2)*3", {}, {}), 9);
    EXPECT_EQ(eval("1+1", {}, {}), 2);
    EXPECT_EQ(eval("1^1", {}, {}), 0);
    EXPECT_EQ(eval("1⊕0", {}, {}), 1);
    EXPECT_EQ(eval("a·b+c", {"a", "b", "c"}, {1, 1, 1}), 2);
    EXPECT_EQ(eval("a ^ b * c", {"a", "b", "c"}, {1, 1, 0}), 1);
    EXPECT_EQ(Expression::parse("x*y + z").variables(), (std::set<std::string>{"x", "y", "z"}));
}

TEST(Expression, Errors) {
    EXPECT_THROW(Expression::parse("1+"), ParseError);
    EXPECT_THROW(Expression::parse("(a"), ParseError);
    EXPECT_THROW(Expression::parse("a $ b"), ParseError);
    EXPECT_THROW(Expression::parse(""), ParseError);
    Expression e = Expression::parse("a+b");
    EXPECT_THROW(e.bind({"a"}), ParseError);
}

TEST(Scm, FeedbackLoopAgainstDirectSolver) {
    FunctionalModel m = models::feedback_loop();
    SolutionSet s = solve(m, {{"A", 0}, {"C", 0}});
    std::size_t invalid = 0;
    brute_pair(feedback_eqs, 4, {0, -1, 0, -1}, 1, 3, &invalid);
    EXPECT_EQ(s.invalid_count(), invalid);
    EXPECT_EQ(invalid, 7u);
    std::size_t free_invalid = 0;
    brute_pair(feedback_eqs, 4, {-1, -1, -1, -1}, 1, 3, &free_invalid);
    EXPECT_EQ(solve(m).invalid_count(), free_invalid);

    auto want = brute_pair(feedback_eqs, 4, {0, -1, 0, -1}, 1, 3);
    EXPECT_EQ(want, (std::vector<Rational>{Rational(4, 9), Rational(2, 9), Rational(2, 9), Rational(1, 9)}));
    auto got = induced_distribution(m, {{"A", 0}, {"C", 0}}, {"B", "D"});
    EXPECT_EQ(got.exact_table(), want);
}

TEST(Scm, FeedbackLoopReport) {
    FunctionalModel m = models::feedback_loop();
    CiSeparationReport d = ci_vs_separation_report(m, Criterion::D);
    EXPECT_TRUE(d.flags(parse_statement("A | C | B,D")));
    EXPECT_TRUE(d.flags(parse_statement("B | D | A,C")));
    EXPECT_EQ(d.violations().size(), 2u);
    CiSeparationReport s = ci_vs_separation_report(m, Criterion::Sigma);
    EXPECT_TRUE(s.rows.empty());
    EXPECT_TRUE(s.violations().empty());
}

TEST(Scm, XorPairAgainstDirectSolver) {
    FunctionalModel m = models::xor_pair();
    auto want = brute_pair(xor_eqs, 2, {-1, -1, -1, -1}, 2, 3);
    EXPECT_EQ(want, (std::vector<Rational>{Rational(1, 2), 0, 0, Rational(1, 2)}));
    EXPECT_EQ(induced_distribution(m, {}, {"C", "D"}).exact_table(), want);
    for (auto c : {Criterion::D, Criterion::Sigma}) {
        CiSeparationReport r = ci_vs_separation_report(m, c);
        EXPECT_TRUE(r.flags(parse_statement("C | D |", c))) << r.to_string();
    }
}

TEST(Scm, BuildValidation) {
    auto e = [](const std::string& t) { return Expression::parse(t); };
    std::vector<EndogenousVariable> v = {{"A", 2}, {"B", 2}};
    std::vector<ErrorVariable> u = {{"U", 2, {}}};
    EXPECT_NO_THROW(FunctionalModel::build(v, u, {{"A", e("U")}, {"B", e("A")}}));
    EXPECT_THROW(FunctionalModel::build(v, u, {{"A", e("U")}}), Error);
    EXPECT_THROW(FunctionalModel::build(v, u, {{"A", e("A")}, {"B", e("A")}}), Error);
    EXPECT_THROW(FunctionalModel::build(v, u, {{"A", e("Q")}, {"B", e("A")}}), Error);
    EXPECT_THROW(FunctionalModel::build(v, {{"U", 2, {Rational(1, 2), Rational(1, 3)}}}, {{"A", e("U")}, {"B", e("A")}}),
                 Error);
    EXPECT_THROW(FunctionalModel::build(v, u, {{"A", e("U")}, {"B", e("A")}}, {{"B", {"A", "U"}}}), Error);
    EXPECT_NO_THROW(FunctionalModel::build(v, u, {{"A", e("U")}, {"B", e("A")}}, {{"B", {"A"}}}));
    EXPECT_THROW(forward_distribution(models::feedback_loop()), Error);
}

TEST(Scm, WeightedPrior) {
    auto m = FunctionalModel::build({{"A", 2}}, {{"U", 2, {Rational(1, 3), Rational(2, 3)}}},
                                    {{"A", Expression::parse("U")}});
    EXPECT_EQ(induced_distribution(m).exact_table(), (std::vector<Rational>{Rational(1, 3), Rational(2, 3)}));
    EXPECT_THROW(induced_distribution(m, {{"A", 2}}), Error);
}

TEST(Scm, RandomAcyclicForwardMatchesInduced) {
    std::mt19937 rng(31);
    const std::vector<std::string> ops = {"^", "*", "⊕"};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<EndogenousVariable> v;
        std::vector<ErrorVariable> u;
        std::vector<StructuralEquation> eqs;
        for (int i = 0; i < 5; ++i) {
            std::string name = "V" + std::to_string(i);
            std::string err = "U" + std::to_string(i);
            v.push_back({name, 2});
            std::vector<Rational> prior;
            if (rng() % 2) prior = {Rational(1, 4), Rational(3, 4)};
            u.push_back({err, 2, prior});
            std::string text = err;
            for (int j = 0; j < i; ++j)
                if (rng() % 2) text = "(" + text + " " + ops[rng() % ops.size()] + " V" + std::to_string(j) + ")";
            eqs.push_back({name, Expression::parse(text)});
        }
        FunctionalModel m = FunctionalModel::build(v, u, eqs);
        EXPECT_EQ(forward_distribution(m).exact_table(), induced_distribution(m).exact_table()) << trial;
        EXPECT_EQ(solve(m, {}, 3).invalid_count(), 0u);
    }
}
