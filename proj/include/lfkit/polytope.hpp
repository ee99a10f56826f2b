#ifndef LFKIT_POLYTOPE_HPP
#define LFKIT_POLYTOPE_HPP

#include "lfkit/linear.hpp"

#include <vector>

namespace lfkit {

/// a.x <= b (or a.x = b where used as an equation).
struct HalfSpace {
    RationalVector a;
    Rational b;

    friend bool operator==(const HalfSpace&, const HalfSpace&) = default;
};

bool operator<(const HalfSpace& lhs, const HalfSpace& rhs);

struct ConeGenerators {
    RationalMatrix rays;       // extreme rays, primitive integer vectors
    RationalMatrix lineality;  // basis of the lineality space
};

/// Double description of {x in Q^dim : A x >= 0}.
ConeGenerators dd_cone(const RationalMatrix& a, std::size_t dim);

/// Vertices of the bounded polytope {x : ineq.a x <= ineq.b, eq.a x = eq.b}.
/// Throws LinearSystemError when the polytope is unbounded.
RationalMatrix enumerate_vertices(const std::vector<HalfSpace>& inequalities, const std::vector<HalfSpace>& equalities,
                                  std::size_t dim);

/**
 * Affine hull of a point set in RREF: dependent coordinates are affine
 * functions of the free ones.
 */
struct AffineHull {
    std::size_t ambient = 0;
    std::vector<std::size_t> dependent;
    std::vector<std::size_t> free;
    RationalMatrix coefficients;  // row k: x_dependent[k] = offset[k] + sum_f coefficients[k][f] x_free[f]
    RationalVector offset;

    std::size_t dimension() const { return free.size(); }
    bool contains(const RationalVector& x) const;
};

AffineHull affine_hull(const RationalMatrix& points);

/// Rewrites an inequality in free coordinates of the hull and scales it to
/// a primitive integer vector (bound included in the gcd).
HalfSpace canonicalize(const HalfSpace& h, const AffineHull& hull);

/// Facets of conv(points), canonicalized against the points' affine hull
/// and sorted.
std::vector<HalfSpace> convex_hull_facets(const RationalMatrix& points, AffineHull* hull_out = nullptr);

}  // namespace lfkit

#endif  // LFKIT_POLYTOPE_HPP
