#include "lfkit/separation.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace lfkit {

std::string to_string(Criterion c) { return c == Criterion::D ? "d" : "sigma"; }

Criterion parse_criterion(const std::string& text) {
    if (text == "d") return Criterion::D;
    if (text == "sigma" || text == "\xCF\x83") return Criterion::Sigma;
    throw ParseError("unknown criterion '" + text + "'");
}

namespace {

std::string join(const LabelSet& s) {
    std::string out;
    for (const auto& l : s) {
        if (!out.empty()) out += ",";
        out += l;
    }
    return out;
}

LabelSet split_labels(const std::string& text) {
    LabelSet out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.insert(item.substr(b, e - b + 1));
    }
    return out;
}

struct Context {
    const DirectedGraph& g;
    NodeMask given;
    NodeMask collider_open;  // nodes with a descendant-or-self in W
    Criterion criterion;
};

Context make_context(const DirectedGraph& g, NodeMask w, Criterion criterion) {
    NodeMask open = w;
    for (NodeMask m = w; m; m &= m - 1) open |= g.ancestors_mask(std::countr_zero(m));
    return {g, w, open, criterion};
}

// Interior node c entered along in_fwd from p and left along out_fwd to n.
bool blocks(const Context& ctx, std::size_t p, bool in_fwd, std::size_t c, bool out_fwd, std::size_t n) {
    bool collider = in_fwd && !out_fwd;
    if (collider) return (ctx.collider_open & bit(c)) == 0;
    if ((ctx.given & bit(c)) == 0) return false;
    if (ctx.criterion == Criterion::D) return true;
    NodeMask comp = ctx.g.component_mask(c);
    if (!in_fwd && (comp & bit(p)) == 0) return true;
    if (out_fwd && (comp & bit(n)) == 0) return true;
    return false;
}

struct Search {
    const Context& ctx;
    NodeMask targets;
    std::vector<std::size_t> nodes;
    std::vector<bool> forward;

    bool step(std::size_t cur, NodeMask visited) {
        const DirectedGraph& g = ctx.g;
        for (int dir = 0; dir < 2; ++dir) {
            bool fwd = dir == 0;
            NodeMask next = (fwd ? g.children_mask(cur) : g.parents_mask(cur)) & ~visited;
            for (; next; next &= next - 1) {
                std::size_t n = std::countr_zero(next);
                if (nodes.size() >= 2) {
                    std::size_t p = nodes[nodes.size() - 2];
                    if (blocks(ctx, p, forward.back(), cur, fwd, n)) continue;
                }
                nodes.push_back(n);
                forward.push_back(fwd);
                if (targets & bit(n)) return true;
                if (step(n, visited | bit(n))) return true;
                nodes.pop_back();
                forward.pop_back();
            }
        }
        return false;
    }
};

std::optional<std::pair<std::vector<std::size_t>, std::vector<bool>>> find_open(const DirectedGraph& g, NodeMask u,
                                                                                 NodeMask v, NodeMask w,
                                                                                 Criterion criterion) {
    Context ctx = make_context(g, w, criterion);
    for (NodeMask m = u; m; m &= m - 1) {
        std::size_t s = std::countr_zero(m);
        Search search{ctx, v, {s}, {}};
        if (search.step(s, bit(s))) return std::make_pair(search.nodes, search.forward);
    }
    return std::nullopt;
}

NodeMask checked_mask(const DirectedGraph& g, const LabelSet& s, const char* role, bool allow_latent) {
    NodeMask m = 0;
    for (const auto& l : s) {
        auto i = g.find(l);
        if (!i) throw SeparationError("unknown node '" + l + "' in " + role);
        if (!allow_latent && g.is_latent(*i)) {
            throw SeparationError("latent node '" + l + "' may not appear in " + role);
        }
        m |= bit(*i);
    }
    return m;
}

struct Triple {
    NodeMask u, v, w;
};

Triple validate(const DirectedGraph& g, const LabelSet& u, const LabelSet& v, const LabelSet& w,
                SeparationOptions options) {
    if (u.empty() || v.empty()) throw SeparationError("separation sides must be nonempty");
    Triple t{checked_mask(g, u, "U", options.allow_latent), checked_mask(g, v, "V", options.allow_latent),
             checked_mask(g, w, "W", options.allow_latent)};
    if ((t.u & t.v) || (t.u & t.w) || (t.v & t.w)) throw SeparationError("U, V and W must be pairwise disjoint");
    return t;
}

}  // namespace

std::string Path::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) out += forward[i - 1] ? " -> " : " <- ";
        out += nodes[i];
    }
    return out;
}

SeparationStatement SeparationStatement::normalized() const {
    SeparationStatement s = *this;
    if (s.right < s.left) std::swap(s.left, s.right);
    return s;
}

std::string SeparationStatement::to_string() const {
    return join(left) + " | " + join(right) + " | " + join(given);
}

SeparationStatement parse_statement(const std::string& text, Criterion criterion) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, '|')) parts.push_back(item);
    if (text.size() && text.back() == '|') parts.push_back("");
    if (parts.size() != 3) throw ParseError("expected 'U | V | W', got '" + text + "'");
    SeparationStatement s{split_labels(parts[0]), split_labels(parts[1]), split_labels(parts[2]), criterion};
    if (s.left.empty() || s.right.empty()) throw ParseError("empty side in '" + text + "'");
    return s;
}

bool path_blocked(const DirectedGraph& g, const Path& p, const LabelSet& given, Criterion criterion) {
    if (p.nodes.empty() || p.forward.size() + 1 != p.nodes.size()) throw SeparationError("invalid path: shape");
    std::vector<std::size_t> idx;
    NodeMask seen = 0;
    for (const auto& l : p.nodes) {
        auto i = g.find(l);
        if (!i) throw SeparationError("invalid path: unknown node '" + l + "'");
        if (seen & bit(*i)) throw SeparationError("invalid path: repeated node '" + l + "'");
        seen |= bit(*i);
        idx.push_back(*i);
    }
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        bool ok = p.forward[k] ? g.has_edge(idx[k], idx[k + 1]) : g.has_edge(idx[k + 1], idx[k]);
        if (!ok) throw SeparationError("invalid path: no edge between " + p.nodes[k] + " and " + p.nodes[k + 1]);
    }
    NodeMask w = 0;
    for (const auto& l : given) {
        auto i = g.find(l);
        if (!i) throw SeparationError("unknown node '" + l + "' in W");
        w |= bit(*i);
    }
    Context ctx = make_context(g, w, criterion);
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        if (blocks(ctx, idx[k - 1], p.forward[k - 1], idx[k], p.forward[k], idx[k + 1])) return true;
    }
    return false;
}

bool separated_masks(const DirectedGraph& g, NodeMask u, NodeMask v, NodeMask w, Criterion criterion) {
    return !find_open(g, u, v, w, criterion).has_value();
}

bool separated(const DirectedGraph& g, const LabelSet& u, const LabelSet& v, const LabelSet& w,
               Criterion criterion, SeparationOptions options) {
    Triple t = validate(g, u, v, w, options);
    return separated_masks(g, t.u, t.v, t.w, criterion);
}

bool separated(const DirectedGraph& g, const SeparationStatement& s, SeparationOptions options) {
    return separated(g, s.left, s.right, s.given, s.criterion, options);
}

std::optional<Path> open_path(const DirectedGraph& g, const LabelSet& u, const LabelSet& v, const LabelSet& w,
                              Criterion criterion, SeparationOptions options) {
    Triple t = validate(g, u, v, w, options);
    auto found = find_open(g, t.u, t.v, t.w, criterion);
    if (!found) return std::nullopt;
    Path p;
    for (auto i : found->first) p.nodes.push_back(g.label(i));
    p.forward = found->second;
    return p;
}

bool d_separated_reachability(const DirectedGraph& g, NodeMask u, NodeMask v, NodeMask w) {
    NodeMask an_w = w;
    for (NodeMask m = w; m; m &= m - 1) an_w |= g.ancestors_mask(std::countr_zero(m));

    // Ball states: arrived from a child (up) or from a parent (down).
    NodeMask visited_up = 0, visited_down = 0;
    std::vector<std::pair<std::size_t, bool>> stack;
    for (NodeMask m = u; m; m &= m - 1) stack.emplace_back(std::countr_zero(m), true);
    NodeMask reached = 0;
    while (!stack.empty()) {
        auto [y, up] = stack.back();
        stack.pop_back();
        NodeMask& vis = up ? visited_up : visited_down;
        if (vis & bit(y)) continue;
        vis |= bit(y);
        bool in_w = (w & bit(y)) != 0;
        if (!in_w) reached |= bit(y);
        if (up) {
            if (in_w) continue;
            for (NodeMask m = g.parents_mask(y); m; m &= m - 1) stack.emplace_back(std::countr_zero(m), true);
            for (NodeMask m = g.children_mask(y); m; m &= m - 1) stack.emplace_back(std::countr_zero(m), false);
        } else {
            if (!in_w) {
                for (NodeMask m = g.children_mask(y); m; m &= m - 1) stack.emplace_back(std::countr_zero(m), false);
            }
            if (an_w & bit(y)) {
                for (NodeMask m = g.parents_mask(y); m; m &= m - 1) stack.emplace_back(std::countr_zero(m), true);
            }
        }
    }
    return (reached & v & ~u) == 0;
}

std::vector<SeparationStatement> enumerate_separations(const DirectedGraph& g, int max_conditioning,
                                                       Criterion criterion, bool include_latent) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (include_latent || !g.is_latent(i)) pool.push_back(i);
    }
    int bound = max_conditioning < 0 ? static_cast<int>(pool.size()) - 2 : max_conditioning;
    std::vector<SeparationStatement> found;
    NodeMask pool_mask = 0;
    for (auto i : pool) pool_mask |= bit(i);
    for (std::size_t a = 0; a < pool.size(); ++a) {
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
            NodeMask rest = pool_mask & ~bit(pool[a]) & ~bit(pool[b]);
            // Subsets of rest, smallest first is not required.
            for (NodeMask w = rest;; w = (w - 1) & rest) {
                if (std::popcount(w) <= bound && separated_masks(g, bit(pool[a]), bit(pool[b]), w, criterion)) {
                    found.push_back({{g.label(pool[a])}, {g.label(pool[b])}, g.labels_of(w), criterion});
                }
                if (w == 0) break;
            }
        }
    }
    return compose_closure(found);
}

std::vector<SeparationStatement> compose_closure(const std::vector<SeparationStatement>& statements) {
    if (statements.empty()) return {};
    Criterion criterion = statements.front().criterion;
    std::set<std::string> universe;
    for (const auto& s : statements) {
        if (s.criterion != criterion) throw SeparationError("compose_closure: mixed criteria");
        universe.insert(s.left.begin(), s.left.end());
        universe.insert(s.right.begin(), s.right.end());
        universe.insert(s.given.begin(), s.given.end());
    }
    if (universe.size() > 64) throw SizeLimitError("compose_closure: more than 64 labels");
    std::vector<std::string> names(universe.begin(), universe.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
    auto to_mask = [&](const LabelSet& s) {
        NodeMask m = 0;
        for (const auto& l : s) m |= bit(index[l]);
        return m;
    };
    auto to_set = [&](NodeMask m) {
        LabelSet s;
        for (; m; m &= m - 1) s.insert(names[std::countr_zero(m)]);
        return s;
    };

    using Key = std::tuple<NodeMask, NodeMask, NodeMask>;  // (left, right, given)
    std::set<Key> closed;
    std::map<std::pair<NodeMask, NodeMask>, std::vector<NodeMask>> by_right;  // (right, given) -> lefts
    std::vector<Key> work;
    auto add = [&](NodeMask l, NodeMask r, NodeMask z) {
        for (Key k : {Key{l, r, z}, Key{r, l, z}}) {
            if (closed.insert(k).second) {
                by_right[{std::get<1>(k), std::get<2>(k)}].push_back(std::get<0>(k));
                work.push_back(k);
            }
        }
    };
    for (const auto& s : statements) add(to_mask(s.left), to_mask(s.right), to_mask(s.given));
    while (!work.empty()) {
        auto [l, r, z] = work.back();
        work.pop_back();
        std::vector<NodeMask> partners = by_right[{r, z}];
        for (NodeMask other : partners) {
            NodeMask merged = l | other;
            if (merged != l && merged != other) add(merged, r, z);
        }
    }
    std::set<SeparationStatement> out;
    for (const auto& [l, r, z] : closed) out.insert(SeparationStatement{to_set(l), to_set(r), to_set(z), criterion}.normalized());
    return {out.begin(), out.end()};
}

}  // namespace lfkit
