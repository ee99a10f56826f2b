#include "lfkit/error.hpp"
#include "lfkit/separation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lfkit;

namespace {

// Oracle: moralize the ancestral graph of U, V, W, delete W and test
// connectivity. Works on adjacency lists so it shares nothing with the
// library's path or reachability code.
struct RawGraph {
    std::size_t n = 0;
    std::vector<std::vector<bool>> edge;  // edge[i][j]: i -> j
};

bool moral_separated(const RawGraph& g, const std::vector<std::size_t>& u, const std::vector<std::size_t>& v,
                     const std::vector<std::size_t>& w) {
    std::vector<bool> anc(g.n, false);
    std::vector<std::size_t> stack;
    for (const auto* s : {&u, &v, &w})
        for (auto i : *s)
            if (!anc[i]) anc[i] = true, stack.push_back(i);
    while (!stack.empty()) {
        std::size_t j = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < g.n; ++i)
            if (g.edge[i][j] && !anc[i]) anc[i] = true, stack.push_back(i);
    }
    std::vector<std::vector<bool>> und(g.n, std::vector<bool>(g.n, false));
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            if (anc[i] && anc[j] && g.edge[i][j]) und[i][j] = und[j][i] = true;
    for (std::size_t c = 0; c < g.n; ++c) {
        if (!anc[c]) continue;
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j)
                if (i != j && anc[i] && anc[j] && g.edge[i][c] && g.edge[j][c]) und[i][j] = true;
    }
    std::vector<bool> blocked(g.n, false), seen(g.n, false);
    for (auto i : w) blocked[i] = true;
    for (auto i : u) seen[i] = true, stack.push_back(i);
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < g.n; ++j)
            if (und[i][j] && !seen[j] && !blocked[j]) seen[j] = true, stack.push_back(j);
    }
    for (auto i : v)
        if (seen[i]) return false;
    return true;
}

// Acyclification: edges into an SCC fan out to all of its members, and
// every pair inside an SCC gets a fresh latent common cause.
RawGraph acyclify(const RawGraph& g) {
    std::vector<std::vector<bool>> reach = g.edge;
    for (std::size_t i = 0; i < g.n; ++i) reach[i][i] = true;
    for (std::size_t k = 0; k < g.n; ++k)
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    auto same = [&](std::size_t i, std::size_t j) { return reach[i][j] && reach[j][i]; };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j)
            if (same(i, j)) pairs.emplace_back(i, j);
    RawGraph a;
    a.n = g.n + pairs.size();
    a.edge.assign(a.n, std::vector<bool>(a.n, false));
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = 0; k < g.n; ++k)
            if (g.edge[i][k] && !same(i, k))
                for (std::size_t j = 0; j < g.n; ++j)
                    if (same(j, k)) a.edge[i][j] = true;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        a.edge[g.n + p][pairs[p].first] = true;
        a.edge[g.n + p][pairs[p].second] = true;
    }
    return a;
}

struct Sample {
    RawGraph raw;
    DirectedGraph graph;
};

Sample random_graph(std::mt19937& rng, std::size_t n, double p, bool acyclic) {
    Sample s;
    s.raw.n = n;
    s.raw.edge.assign(n, std::vector<bool>(n, false));
    std::vector<NodeSpec> nodes;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i), NodeKind::Observed});
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || (acyclic && j <= i)) continue;
            if (!acyclic && s.raw.edge[j][i] && !coin(rng)) continue;
            if (coin(rng)) {
                s.raw.edge[i][j] = true;
                edges.emplace_back(nodes[i].label, nodes[j].label);
            }
        }
    s.graph = DirectedGraph::build(nodes, edges);
    return s;
}

std::vector<std::size_t> members(NodeMask m, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (m & bit(i)) out.push_back(i);
    return out;
}

bool contains(const std::vector<SeparationStatement>& list, const std::string& text, Criterion c = Criterion::D) {
    SeparationStatement s = parse_statement(text, c).normalized();
    for (const auto& t : list)
        if (t.normalized() == s) return true;
    return false;
}

}  // namespace

TEST(Separation, LfDagRelations) {
    DirectedGraph g = graphs::lf_dag();
    EXPECT_TRUE(separated(g, parse_statement("A,C | Y | X")));
    EXPECT_TRUE(separated(g, parse_statement("B,C | X | Y")));
    EXPECT_TRUE(separated(g, parse_statement("C | X,Y |")));
    EXPECT_FALSE(separated(g, parse_statement("A | B |")));
    auto all = enumerate_separations(g);
    EXPECT_TRUE(contains(all, "A,C | Y | X"));
    EXPECT_TRUE(contains(all, "B,C | X | Y"));
}

TEST(Separation, BellDagRelations) {
    DirectedGraph g = graphs::bell_dag();
    SeparationOptions latent{true};
    EXPECT_TRUE(separated(g, parse_statement("\xCE\x9B | X,Y |"), latent));
    EXPECT_TRUE(separated(g, parse_statement("A,X | B,Y | \xCE\x9B"), latent));
    EXPECT_TRUE(separated(g, parse_statement("A | Y | X")));
    EXPECT_TRUE(separated(g, parse_statement("X | Y |")));
    EXPECT_FALSE(separated(g, parse_statement("A | B |")));
    EXPECT_THROW(separated(g, parse_statement("A | B | \xCE\x9B")), SeparationError);
    auto all = enumerate_separations(g, -1, Criterion::D, true);
    EXPECT_TRUE(contains(all, "\xCE\x9B | X,Y |"));
    EXPECT_TRUE(contains(all, "A,X | B,Y | \xCE\x9B"));
}

TEST(Separation, OpenPathIsReportedAndReallyOpen) {
    DirectedGraph g = graphs::superluminal();
    auto p = open_path(g, {"B"}, {"X"}, {"Y"}, Criterion::D);
    ASSERT_TRUE(p.has_value());
    EXPECT_FALSE(path_blocked(g, *p, {"Y"}, Criterion::D));
    EXPECT_EQ(p->to_string(), "B <- X");
}

TEST(Separation, ColliderOpensOnConditioningDescendant) {
    DirectedGraph g = DirectedGraph::build(
        {{"A", NodeKind::Observed}, {"B", NodeKind::Observed}, {"M", NodeKind::Observed}, {"D", NodeKind::Observed}},
        {{"A", "M"}, {"B", "M"}, {"M", "D"}});
    EXPECT_TRUE(separated(g, {"A"}, {"B"}, {}, Criterion::D));
    EXPECT_FALSE(separated(g, {"A"}, {"B"}, {"M"}, Criterion::D));
    EXPECT_FALSE(separated(g, {"A"}, {"B"}, {"D"}, Criterion::D));
}

TEST(Separation, SigmaOnFeedbackLoop) {
    DirectedGraph g = graphs::cyclic_feedback();
    EXPECT_TRUE(separated(g, parse_statement("B | D | A,C", Criterion::D)));
    EXPECT_FALSE(separated(g, parse_statement("B | D | A,C", Criterion::Sigma)));
}

TEST(Separation, SigmaOnCyclicPair) {
    DirectedGraph g = graphs::cyclic_pair();
    EXPECT_TRUE(separated(g, parse_statement("C | D |", Criterion::Sigma)));
    EXPECT_TRUE(separated(g, parse_statement("C | D | A,B", Criterion::D)));
    EXPECT_FALSE(separated(g, parse_statement("C | D | A,B", Criterion::Sigma)));
}

TEST(Separation, MalformedInputs) {
    DirectedGraph g = graphs::lf_dag();
    EXPECT_THROW(parse_statement("A | B"), ParseError);
    EXPECT_THROW(parse_statement(" | B | C"), ParseError);
    EXPECT_THROW(separated(g, parse_statement("A | Q |")), SeparationError);
    EXPECT_THROW(separated(g, parse_statement("A | A |")), SeparationError);
    EXPECT_THROW(parse_criterion("e"), ParseError);
    Path bad{{"A", "B"}, {true}};
    EXPECT_THROW(path_blocked(g, bad, {}, Criterion::D), SeparationError);
}

TEST(Separation, StatementText) {
    SeparationStatement s = parse_statement("Y | C,A | X");
    EXPECT_EQ(s.normalized().to_string(), "A,C | Y | X");
}

TEST(Separation, ComposeClosureRejectsMixedCriteria) {
    EXPECT_THROW(compose_closure({parse_statement("A | B |", Criterion::D), parse_statement("A | C |", Criterion::Sigma)}),
                 SeparationError);
}

TEST(Separation, ComposeClosureUnitesSides) {
    auto c = compose_closure({parse_statement("A | Y | X"), parse_statement("C | Y | X")});
    EXPECT_TRUE(contains(c, "A,C | Y | X"));
    EXPECT_TRUE(contains(c, "Y | A | X"));
}

TEST(Separation, PathAndReachabilityMatchMoralizationOracle) {
    std::mt19937 rng(7);
    std::size_t queries = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 3 + trial % 5;
        Sample s = random_graph(rng, n, 0.4, true);
        std::uniform_int_distribution<int> part(0, 3);
        for (int q = 0; q < 20; ++q) {
            NodeMask u = 0, v = 0, w = 0;
            for (std::size_t i = 0; i < n; ++i) {
                int k = part(rng);
                if (k == 0) u |= bit(i);
                if (k == 1) v |= bit(i);
                if (k == 2) w |= bit(i);
            }
            if (!u || !v) continue;
            bool oracle = moral_separated(s.raw, members(u, n), members(v, n), members(w, n));
            EXPECT_EQ(separated_masks(s.graph, u, v, w, Criterion::D), oracle);
            EXPECT_EQ(d_separated_reachability(s.graph, u, v, w), oracle);
            EXPECT_EQ(separated_masks(s.graph, u, v, w, Criterion::Sigma), oracle);
            ++queries;
        }
    }
    EXPECT_GT(queries, 3000u);
}

TEST(Separation, SigmaMatchesDSeparationInAcyclification) {
    std::mt19937 rng(11);
    std::size_t cyclic = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t n = 3 + trial % 4;
        Sample s = random_graph(rng, n, 0.35, false);
        cyclic += !s.graph.is_acyclic();
        RawGraph acy = acyclify(s.raw);
        std::uniform_int_distribution<int> part(0, 3);
        for (int q = 0; q < 15; ++q) {
            NodeMask u = 0, v = 0, w = 0;
            for (std::size_t i = 0; i < n; ++i) {
                int k = part(rng);
                if (k == 0) u |= bit(i);
                if (k == 1) v |= bit(i);
                if (k == 2) w |= bit(i);
            }
            if (!u || !v) continue;
            bool oracle = moral_separated(acy, members(u, n), members(v, n), members(w, n));
            EXPECT_EQ(separated_masks(s.graph, u, v, w, Criterion::Sigma), oracle);
        }
    }
    EXPECT_GT(cyclic, 100u);
}

TEST(Separation, GraphSeparationIsCompositional) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 4 + trial % 3;
        Sample s = random_graph(rng, n, 0.4, trial % 2 == 0);
        for (auto c : {Criterion::D, Criterion::Sigma}) {
            for (NodeMask z = 0; z < (NodeMask{1} << n); ++z)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k) {
                            NodeMask u = bit(i), v = bit(j), w = bit(k);
                            if ((u | v) & (w | z) || (w & z) || i == j) continue;
                            if (separated_masks(s.graph, u, w, z, c) && separated_masks(s.graph, v, w, z, c)) {
                                EXPECT_TRUE(separated_masks(s.graph, u | v, w, z, c));
                            }
                        }
        }
    }
}

TEST(Separation, EnumerationIsSymmetricAndSound) {
    DirectedGraph g = graphs::lf_dag();
    for (const auto& s : enumerate_separations(g)) {
        EXPECT_TRUE(separated(g, s));
        SeparationStatement flipped{s.right, s.left, s.given, s.criterion};
        EXPECT_TRUE(separated(g, flipped));
    }
}
