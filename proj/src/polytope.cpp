#include "lfkit/polytope.hpp"

#include "lfkit/error.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>

namespace lfkit {

bool operator<(const HalfSpace& lhs, const HalfSpace& rhs) {
    if (lhs.a != rhs.a) return std::lexicographical_compare(lhs.a.begin(), lhs.a.end(), rhs.a.begin(), rhs.a.end());
    return lhs.b < rhs.b;
}

namespace {

using Bits = boost::dynamic_bitset<>;

struct Ray {
    RationalVector v;
    Bits zeros;
};

Bits zero_set(const RationalMatrix& m, const RationalVector& v) {
    Bits z(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (dot(m[i], v) == 0) z.set(i);
    }
    return z;
}

// Extreme rays of a pointed cone {z : M z >= 0} with rank(M) = k.
RationalMatrix dd_pointed(const RationalMatrix& m, std::size_t k) {
    RationalMatrix mt(k, RationalVector(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) mt[j][i] = m[i][j];
    std::vector<std::size_t> basis_rows = rref(mt);
    if (basis_rows.size() != k) throw LinearSystemError("dd: constraint matrix is not full rank");

    // Initial simplicial cone: columns of the inverse of the basis rows.
    RationalMatrix aug(k, RationalVector(2 * k));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < k; ++j) aug[r][j] = m[basis_rows[r]][j];
        aug[r][k + r] = 1;
    }
    rref(aug);
    std::vector<Ray> rays;
    for (std::size_t c = 0; c < k; ++c) {
        RationalVector v(k);
        for (std::size_t r = 0; r < k; ++r) v[r] = aug[r][k + c];
        v = primitive_integer(v);
        rays.push_back({v, zero_set(m, v)});
    }

    Bits processed(m.size());
    for (auto r : basis_rows) processed.set(r);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (processed.test(i)) continue;
        std::vector<Rational> val(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray> next;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(m[i], rays[r].v);
            if (val[r] > 0) pos.push_back(r);
            else if (val[r] < 0) neg.push_back(r);
            if (val[r] >= 0) next.push_back(rays[r]);
        }
        for (auto p : pos) {
            for (auto n : neg) {
                Bits common = rays[p].zeros & rays[n].zeros & processed;
                if (common.count() + 2 < k) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == n) continue;
                    if (common.is_subset_of(rays[r].zeros)) adjacent = false;
                }
                if (!adjacent) continue;
                RationalVector v(k);
                for (std::size_t j = 0; j < k; ++j) v[j] = val[p] * rays[n].v[j] - val[n] * rays[p].v[j];
                v = primitive_integer(v);
                next.push_back({v, zero_set(m, v)});
            }
        }
        rays = std::move(next);
        processed.set(i);
    }
    RationalMatrix out;
    for (auto& r : rays) out.push_back(std::move(r.v));
    return out;
}

}  // namespace

ConeGenerators dd_cone(const RationalMatrix& a, std::size_t dim) {
    for (const auto& row : a) {
        if (row.size() != dim) throw LinearSystemError("dd: row length does not match dimension");
    }
    ConeGenerators g;
    g.lineality = nullspace(a, dim);
    if (g.lineality.size() == dim) return g;

    // Restrict to the orthogonal complement of the lineality space.
    RationalMatrix complement;
    if (g.lineality.empty()) {
        for (std::size_t j = 0; j < dim; ++j) {
            RationalVector e(dim);
            e[j] = 1;
            complement.push_back(e);
        }
    } else {
        complement = nullspace(g.lineality, dim);
    }
    std::size_t k = complement.size();
    RationalMatrix reduced(a.size(), RationalVector(k));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) reduced[i][j] = dot(a[i], complement[j]);

    for (const auto& z : dd_pointed(reduced, k)) {
        RationalVector x(dim);
        for (std::size_t j = 0; j < k; ++j) {
            if (z[j] == 0) continue;
            for (std::size_t t = 0; t < dim; ++t) x[t] += z[j] * complement[j][t];
        }
        g.rays.push_back(primitive_integer(x));
    }
    std::sort(g.rays.begin(), g.rays.end());
    return g;
}

RationalMatrix enumerate_vertices(const std::vector<HalfSpace>& inequalities, const std::vector<HalfSpace>& equalities,
                                  std::size_t dim) {
    RationalVector x0(dim);
    RationalMatrix basis;
    if (!equalities.empty()) {
        RationalMatrix aug;
        for (const auto& e : equalities) {
            if (e.a.size() != dim) throw LinearSystemError("equation length does not match dimension");
            RationalVector row = e.a;
            row.push_back(e.b);
            aug.push_back(row);
        }
        auto pivots = rref(aug);
        if (!pivots.empty() && pivots.back() == dim) return {};  // inconsistent equations
        for (std::size_t r = 0; r < pivots.size(); ++r) x0[pivots[r]] = aug[r][dim];
        RationalMatrix coeffs;
        for (const auto& e : equalities) coeffs.push_back(e.a);
        basis = nullspace(coeffs, dim);
    } else {
        for (std::size_t j = 0; j < dim; ++j) {
            RationalVector e(dim);
            e[j] = 1;
            basis.push_back(e);
        }
    }
    std::size_t k = basis.size();
    if (k == 0) {
        for (const auto& h : inequalities) {
            if (dot(h.a, x0) > h.b) return {};
        }
        return {x0};
    }

    // Homogenized cone in (t, s): s (b - a.x0) - (a N) t >= 0, s >= 0.
    RationalMatrix cone;
    for (const auto& h : inequalities) {
        if (h.a.size() != dim) throw LinearSystemError("inequality length does not match dimension");
        RationalVector row(k + 1);
        for (std::size_t j = 0; j < k; ++j) row[j] = -dot(h.a, basis[j]);
        row[k] = h.b - dot(h.a, x0);
        cone.push_back(row);
    }
    RationalVector s_row(k + 1);
    s_row[k] = 1;
    cone.push_back(s_row);

    ConeGenerators g = dd_cone(cone, k + 1);
    if (!g.lineality.empty()) throw LinearSystemError("polytope is unbounded (lineality)");
    RationalMatrix vertices;
    bool recession = false;
    for (const auto& r : g.rays) {
        if (r[k] == 0) {
            recession = true;
            continue;
        }
        RationalVector v = x0;
        for (std::size_t j = 0; j < k; ++j) {
            if (r[j] == 0) continue;
            Rational t = r[j] / r[k];
            for (std::size_t c = 0; c < dim; ++c) v[c] += t * basis[j][c];
        }
        vertices.push_back(std::move(v));
    }
    if (recession && !vertices.empty()) throw LinearSystemError("polytope is unbounded");
    std::sort(vertices.begin(), vertices.end());
    return vertices;
}

bool AffineHull::contains(const RationalVector& x) const {
    if (x.size() != ambient) return false;
    for (std::size_t k = 0; k < dependent.size(); ++k) {
        Rational v = offset[k];
        for (std::size_t f = 0; f < free.size(); ++f) v += coefficients[k][f] * x[free[f]];
        if (v != x[dependent[k]]) return false;
    }
    return true;
}

AffineHull affine_hull(const RationalMatrix& points) {
    if (points.empty()) throw LinearSystemError("affine hull of an empty point set");
    AffineHull hull;
    hull.ambient = points[0].size();
    const RationalVector& p0 = points[0];
    RationalMatrix diff;
    for (std::size_t i = 1; i < points.size(); ++i) {
        RationalVector d(hull.ambient);
        for (std::size_t j = 0; j < hull.ambient; ++j) d[j] = points[i][j] - p0[j];
        diff.push_back(std::move(d));
    }
    std::vector<std::size_t> pivots = rref(diff);
    hull.free = pivots;
    std::vector<bool> is_free(hull.ambient, false);
    for (auto p : pivots) is_free[p] = true;
    for (std::size_t j = 0; j < hull.ambient; ++j) {
        if (is_free[j]) continue;
        hull.dependent.push_back(j);
        RationalVector c(pivots.size());
        Rational off = p0[j];
        for (std::size_t f = 0; f < pivots.size(); ++f) {
            c[f] = diff[f][j];
            off -= p0[pivots[f]] * c[f];
        }
        hull.coefficients.push_back(std::move(c));
        hull.offset.push_back(off);
    }
    return hull;
}

HalfSpace canonicalize(const HalfSpace& h, const AffineHull& hull) {
    if (h.a.size() != hull.ambient) throw LinearSystemError("inequality length does not match hull");
    RationalVector a(hull.ambient);
    Rational b = h.b;
    for (std::size_t f = 0; f < hull.free.size(); ++f) a[hull.free[f]] = h.a[hull.free[f]];
    for (std::size_t k = 0; k < hull.dependent.size(); ++k) {
        const Rational& hd = h.a[hull.dependent[k]];
        if (hd == 0) continue;
        for (std::size_t f = 0; f < hull.free.size(); ++f) a[hull.free[f]] += hd * hull.coefficients[k][f];
        b -= hd * hull.offset[k];
    }
    RationalVector joint = a;
    joint.push_back(b);
    bool all_zero = std::all_of(a.begin(), a.end(), [](const Rational& v) { return v == 0; });
    if (all_zero) {
        // Constant inequality on the hull: keep only the sign of the bound.
        return {a, b > 0 ? Rational(1) : (b < 0 ? Rational(-1) : Rational(0))};
    }
    joint = primitive_integer(joint);
    HalfSpace out;
    out.b = joint.back();
    joint.pop_back();
    out.a = std::move(joint);
    return out;
}

std::vector<HalfSpace> convex_hull_facets(const RationalMatrix& points, AffineHull* hull_out) {
    AffineHull hull = affine_hull(points);
    if (hull_out) *hull_out = hull;
    std::size_t k = hull.dimension();
    if (k == 0) return {};
    RationalMatrix polar;
    for (const auto& p : points) {
        RationalVector row(k + 1);
        for (std::size_t f = 0; f < k; ++f) row[f] = -p[hull.free[f]];
        row[k] = 1;
        polar.push_back(std::move(row));
    }
    ConeGenerators g = dd_cone(polar, k + 1);
    if (!g.lineality.empty()) throw LinearSystemError("hull polar cone is not pointed");
    std::vector<HalfSpace> facets;
    for (const auto& r : g.rays) {
        bool trivial = true;
        for (std::size_t f = 0; f < k; ++f) trivial = trivial && r[f] == 0;
        if (trivial) continue;
        HalfSpace h;
        h.a.assign(hull.ambient, 0);
        for (std::size_t f = 0; f < k; ++f) h.a[hull.free[f]] = r[f];
        h.b = r[k];
        facets.push_back(canonicalize(h, hull));
    }
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
    return facets;
}

}  // namespace lfkit
