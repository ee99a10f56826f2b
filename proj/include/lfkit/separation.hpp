#ifndef LFKIT_SEPARATION_HPP
#define LFKIT_SEPARATION_HPP

#include "lfkit/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lfkit {

enum class Criterion { D, Sigma };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& text);

/// forward[k] is true when the k-th step follows nodes[k] -> nodes[k+1].
struct Path {
    std::vector<std::string> nodes;
    std::vector<bool> forward;

    std::string to_string() const;
};

struct SeparationStatement {
    LabelSet left;
    LabelSet right;
    LabelSet given;
    Criterion criterion = Criterion::D;

    /// Orders the two sides so that left <= right.
    SeparationStatement normalized() const;
    /// "A,C | Y | X"
    std::string to_string() const;

    friend bool operator==(const SeparationStatement&, const SeparationStatement&) = default;
    friend auto operator<=>(const SeparationStatement&, const SeparationStatement&) = default;
};

/// Parses "U | V | W" with comma-separated labels; W may be empty.
SeparationStatement parse_statement(const std::string& text, Criterion criterion = Criterion::D);

struct SeparationOptions {
    /// Permit latent nodes in U, V and W. Only used for textbook relations
    /// that condition on a hidden variable.
    bool allow_latent = false;
};

/// Throws SeparationError when the path is not a simple path of g.
bool path_blocked(const DirectedGraph& g, const Path& p, const LabelSet& given, Criterion criterion);

/// Exhaustive simple-path check.
bool separated(const DirectedGraph& g, const LabelSet& u, const LabelSet& v, const LabelSet& w,
               Criterion criterion, SeparationOptions options = {});
bool separated(const DirectedGraph& g, const SeparationStatement& s, SeparationOptions options = {});

/// First open simple path between the sets, if any.
std::optional<Path> open_path(const DirectedGraph& g, const LabelSet& u, const LabelSet& v, const LabelSet& w,
                              Criterion criterion, SeparationOptions options = {});

/// Mask-level exhaustive check without validation, for sweeps.
bool separated_masks(const DirectedGraph& g, NodeMask u, NodeMask v, NodeMask w, Criterion criterion);

/// Reachability (Bayes-ball) d-separation. Independent of the path
/// enumeration above and used to cross-check it.
bool d_separated_reachability(const DirectedGraph& g, NodeMask u, NodeMask v, NodeMask w);

/// All true singleton-pair statements among observed nodes with
/// |W| <= max_conditioning (negative means |observed| - 2), closed under
/// composition.
std::vector<SeparationStatement> enumerate_separations(const DirectedGraph& g, int max_conditioning = -1,
                                                       Criterion criterion = Criterion::D,
                                                       bool include_latent = false);

/// Closure under symmetry and (U _|_ W | Z) & (V _|_ W | Z) => (UV _|_ W | Z).
/// Returned normalized and sorted. Throws SeparationError on mixed criteria.
std::vector<SeparationStatement> compose_closure(const std::vector<SeparationStatement>& statements);

}  // namespace lfkit

#endif  // LFKIT_SEPARATION_HPP
