#ifndef LFKIT_MARGINAL_HPP
#define LFKIT_MARGINAL_HPP

#include "lfkit/distribution.hpp"
#include "lfkit/linear.hpp"
#include "lfkit/polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lfkit {

/// Cardinalities of A, B, C, X, Y.
struct BoxShape {
    std::size_t a = 2, b = 2, c = 2, x = 2, y = 2;

    std::size_t joint_size() const { return a * b * c * x * y; }
    /// Alice's copy setting: 1, or 0 when X is trivial.
    std::size_t copy_setting() const { return x > 1 ? 1 : 0; }
    std::size_t ab_size() const { return x * y * a * b; }
    std::size_t ac_size() const { return a * c; }
    std::size_t joint_index(std::size_t xi, std::size_t yi, std::size_t ai, std::size_t bi, std::size_t ci) const {
        return (((xi * y + yi) * a + ai) * b + bi) * c + ci;
    }
    std::size_t ab_index(std::size_t xi, std::size_t yi, std::size_t ai, std::size_t bi) const {
        return ((xi * y + yi) * a + ai) * b + bi;
    }
    std::size_t ac_index(std::size_t ai, std::size_t ci) const { return ai * c + ci; }

    friend bool operator==(const BoxShape&, const BoxShape&) = default;
};

inline constexpr std::size_t kMaxJointEntries = 4096;

/// Throws SizeLimitError above kMaxJointEntries.
void check_shape(const BoxShape& shape);

/**
 * sum ab[i] P(ab|xy)_i + sum ac[j] P(ac|x=copy)_j <= bound, coordinates
 * laid out by BoxShape::ab_index / ac_index.
 */
struct Inequality {
    BoxShape shape;
    RationalVector ab;
    RationalVector ac;
    Rational bound;

    std::string to_string() const;
    HalfSpace as_halfspace() const;
    static Inequality from_halfspace(const BoxShape& shape, const HalfSpace& h);

    friend bool operator==(const Inequality&, const Inequality&) = default;
};

std::string ab_key(std::size_t a, std::size_t b, std::size_t x, std::size_t y);
std::string ac_key(std::size_t a, std::size_t c);

/// Joint polytope {P(abc|xy) >= 0, normalized, Local Agency} as a system.
LinearSystem joint_system(const BoxShape& shape, bool perfect_copy = false);

/// P(ab|xy) and P(ac|x=copy) of a joint table (entries by joint_index).
RationalVector project_joint(const BoxShape& shape, const RationalVector& joint, bool include_ac = true);

/// Joint table as P(abc|xy) with outcomes (A,B,C) and settings (X,Y).
ConditionalDistribution joint_distribution(const BoxShape& shape, const RationalVector& joint);

struct RationalizedBox {
    ConditionalDistribution box;
    double radius = 0;  // max |exact - float| over entries
};

/**
 * Continued-fraction rounding at the denominator bound, then exact
 * orthogonal projection onto the normalization (and, for bipartite
 * boxes, no-signaling) subspace. Exact inputs pass through unchanged.
 */
RationalizedBox rationalize_box(const ConditionalDistribution& d, const Integer& max_denominator = Integer(1000000000));

struct MarginalVerdict {
    FeasibilityVerdict verdict;
    LinearSystem system{0};
    std::optional<ConditionalDistribution> joint;
};

/// Decides whether some P(abc|xy) satisfying Local Agency reproduces both
/// marginals. pab has outcomes (A,B) and settings (X,Y); pac has outcomes
/// (A,C) and no settings. Throws InconsistentMarginalError when the shared
/// A marginal disagrees.
MarginalVerdict marginal_feasible(const ConditionalDistribution& pab, const ConditionalDistribution& pac);

struct GammaResult {
    Rational gamma;
    ConditionalDistribution extension;
    double rationalization_radius = 0;
};

/// Least sum_{a != c} P(ac|x=copy) over Local Agency extensions of pab.
/// Approximate inputs are rationalized first. Throws SignalingError for
/// signaling inputs.
GammaResult min_gamma(const ConditionalDistribution& pab);

struct Eq2Result {
    double lhs = 0;
    std::optional<Rational> exact_lhs;
    bool satisfied = false;
};

/// CHSH(pab) + 2 sum_{a=c} pac(a,c) against the bound 5.
Eq2Result monogamy_eq2(const ConditionalDistribution& pab, const ConditionalDistribution& pac);
Inequality eq2_inequality();

/// Sum_xy P(a xor b = xy xor alpha x xor beta y xor gamma | xy) <= 3.
Inequality chsh_inequality(unsigned alpha, unsigned beta, unsigned gamma);
std::vector<Inequality> chsh_symmetries();

/// The 16 deterministic boxes and the 8 PR-type boxes.
std::vector<ConditionalDistribution> ns_vertices();

enum class LfVariant { General, PerfectCopy };

struct FacetResult {
    BoxShape shape;
    LfVariant variant = LfVariant::General;
    std::size_t joint_vertex_count = 0;
    RationalMatrix projected_vertices;
    AffineHull hull;
    std::vector<Inequality> facets;

    /// Canonical form of an arbitrary inequality against this hull.
    Inequality canonical(const Inequality& i) const;
    bool is_positivity(const Inequality& facet) const;
    std::vector<Inequality> nontrivial() const;
};

/// Facets of the projection of the joint polytope onto (P(ab|xy), P(ac|x=1))
/// coordinates, or onto P(ab|xy) alone for the perfect-copy variant.
FacetResult lf_facets(const BoxShape& shape, LfVariant variant);

enum class PolytopeKind { LHV, NS, LF };

struct MembershipResult {
    bool inside = false;
    std::optional<Inequality> separator;
    double separator_value = 0;  // functional at the input; exceeds the bound when outside
    double rationalization_radius = 0;
};

/// LF membership needs pac (outcomes A,C, no settings).
MembershipResult membership(const ConditionalDistribution& pab, PolytopeKind kind,
                            const std::optional<ConditionalDistribution>& pac = std::nullopt);

std::string to_string(PolytopeKind k);
PolytopeKind parse_polytope(const std::string& text);

struct SlicePoint {
    Rational t1, t2;
    std::string label;
};

struct SliceExtra {
    std::string name;
    double t1 = 0, t2 = 0;
    std::string label;
};

struct SliceResult {
    Rational t1_min, t1_max, t2_min, t2_max;
    std::vector<SlicePoint> grid;
    std::vector<SliceExtra> extras;

    std::string csv() const;
};

/**
 * Labels a grid over the plane through white noise spanned by the NS
 * vertices maximizing f1 and f2. Coordinates are the functional values.
 * Labels: LHV, LF-only, NS-only, outside-NS. Throws LinearSystemError for a
 * degenerate plane.
 */
SliceResult slice_scan(const Inequality& f1, const Inequality& f2, std::size_t resolution,
                       const std::vector<std::pair<std::string, ConditionalDistribution>>& overlay = {});

}  // namespace lfkit

#endif  // LFKIT_MARGINAL_HPP
