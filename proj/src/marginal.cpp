#include "lfkit/marginal.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace lfkit {

void check_shape(const BoxShape& shape) {
    for (std::size_t v : {shape.a, shape.b, shape.c, shape.x, shape.y}) {
        if (v == 0) throw DistributionError("cardinalities must be positive");
    }
    if (shape.joint_size() > kMaxJointEntries) {
        throw SizeLimitError("joint table has " + std::to_string(shape.joint_size()) + " entries; limit is " +
                             std::to_string(kMaxJointEntries));
    }
}

std::string ab_key(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return "P(" + std::to_string(a) + "," + std::to_string(b) + "|" + std::to_string(x) + "," + std::to_string(y) + ")";
}

std::string ac_key(std::size_t a, std::size_t c) {
    return "P(" + std::to_string(a) + "," + std::to_string(c) + "|x=1)";
}

std::string Inequality::to_string() const {
    std::ostringstream out;
    bool first = true;
    auto term = [&](const Rational& coeff, const std::string& key) {
        if (coeff == 0) return;
        if (!first) out << (coeff < 0 ? " - " : " + ");
        else if (coeff < 0) out << "-";
        Rational mag = coeff < 0 ? Rational(-coeff) : coeff;
        if (mag != 1) out << lfkit::to_string(mag) << "*";
        out << key;
        first = false;
    };
    for (std::size_t x = 0; x < shape.x; ++x)
        for (std::size_t y = 0; y < shape.y; ++y)
            for (std::size_t a = 0; a < shape.a; ++a)
                for (std::size_t b = 0; b < shape.b; ++b) term(ab[shape.ab_index(x, y, a, b)], ab_key(a, b, x, y));
    for (std::size_t a = 0; a < shape.a; ++a)
        for (std::size_t c = 0; c < shape.c; ++c) term(ac[shape.ac_index(a, c)], ac_key(a, c));
    if (first) out << "0";
    out << " <= " << lfkit::to_string(bound);
    return out.str();
}

HalfSpace Inequality::as_halfspace() const {
    HalfSpace h;
    h.a = ab;
    h.a.insert(h.a.end(), ac.begin(), ac.end());
    h.b = bound;
    return h;
}

Inequality Inequality::from_halfspace(const BoxShape& shape, const HalfSpace& h) {
    Inequality i;
    i.shape = shape;
    i.ab.assign(h.a.begin(), h.a.begin() + static_cast<std::ptrdiff_t>(shape.ab_size()));
    i.ac.assign(shape.ac_size(), 0);
    for (std::size_t k = shape.ab_size(); k < h.a.size(); ++k) i.ac[k - shape.ab_size()] = h.a[k];
    i.bound = h.b;
    return i;
}

namespace {

void add_local_agency(LinearSystem& sys, const BoxShape& s) {
    const std::size_t n = s.joint_size();
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t a = 0; a < s.a; ++a)
            for (std::size_t c = 0; c < s.c; ++c)
                for (std::size_t y = 1; y < s.y; ++y) {
                    RationalVector row(n);
                    for (std::size_t b = 0; b < s.b; ++b) {
                        row[s.joint_index(x, y, a, b, c)] += 1;
                        row[s.joint_index(x, 0, a, b, c)] -= 1;
                    }
                    sys.add_equality(row, 0);
                }
    for (std::size_t y = 0; y < s.y; ++y)
        for (std::size_t b = 0; b < s.b; ++b)
            for (std::size_t c = 0; c < s.c; ++c)
                for (std::size_t x = 1; x < s.x; ++x) {
                    RationalVector row(n);
                    for (std::size_t a = 0; a < s.a; ++a) {
                        row[s.joint_index(x, y, a, b, c)] += 1;
                        row[s.joint_index(0, y, a, b, c)] -= 1;
                    }
                    sys.add_equality(row, 0);
                }
}

RationalVector ab_row(const BoxShape& s, std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    RationalVector row(s.joint_size());
    for (std::size_t c = 0; c < s.c; ++c) row[s.joint_index(x, y, a, b, c)] = 1;
    return row;
}

RationalVector ac_row(const BoxShape& s, std::size_t a, std::size_t c) {
    RationalVector row(s.joint_size());
    for (std::size_t b = 0; b < s.b; ++b) row[s.joint_index(s.copy_setting(), 0, a, b, c)] = 1;
    return row;
}

BoxShape shape_of(const ConditionalDistribution& pab) {
    if (pab.outcomes().size() != 2 || pab.settings().size() != 2) {
        throw DistributionError("expected P(ab|xy) with two outcomes and two settings");
    }
    BoxShape s;
    s.a = pab.outcomes()[0].cardinality;
    s.b = pab.outcomes()[1].cardinality;
    s.x = pab.settings()[0].cardinality;
    s.y = pab.settings()[1].cardinality;
    return s;
}

bool is_binary(const BoxShape& s) { return s == BoxShape{}; }

Rational functional(const Inequality& f, const RationalVector& ab) {
    return dot(f.ab, ab);
}

}  // namespace

LinearSystem joint_system(const BoxShape& shape, bool perfect_copy) {
    check_shape(shape);
    LinearSystem sys(shape.joint_size());
    sys.set_all_nonnegative();
    for (std::size_t x = 0; x < shape.x; ++x)
        for (std::size_t y = 0; y < shape.y; ++y) {
            RationalVector row(shape.joint_size());
            for (std::size_t a = 0; a < shape.a; ++a)
                for (std::size_t b = 0; b < shape.b; ++b)
                    for (std::size_t c = 0; c < shape.c; ++c) row[shape.joint_index(x, y, a, b, c)] = 1;
            sys.add_equality(row, 1);
        }
    add_local_agency(sys, shape);
    if (perfect_copy) {
        for (std::size_t y = 0; y < shape.y; ++y)
            for (std::size_t a = 0; a < shape.a; ++a)
                for (std::size_t b = 0; b < shape.b; ++b)
                    for (std::size_t c = 0; c < shape.c; ++c) {
                        if (a == c) continue;
                        RationalVector row(shape.joint_size());
                        row[shape.joint_index(shape.copy_setting(), y, a, b, c)] = 1;
                        sys.add_equality(row, 0);
                    }
    }
    return sys;
}

RationalVector project_joint(const BoxShape& s, const RationalVector& joint, bool include_ac) {
    RationalVector out(s.ab_size() + (include_ac ? s.ac_size() : 0));
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t y = 0; y < s.y; ++y)
            for (std::size_t a = 0; a < s.a; ++a)
                for (std::size_t b = 0; b < s.b; ++b)
                    for (std::size_t c = 0; c < s.c; ++c) {
                        const Rational& v = joint[s.joint_index(x, y, a, b, c)];
                        if (v == 0) continue;
                        out[s.ab_index(x, y, a, b)] += v;
                        if (include_ac && x == s.copy_setting() && y == 0) out[s.ab_size() + s.ac_index(a, c)] += v;
                    }
    return out;
}

ConditionalDistribution joint_distribution(const BoxShape& s, const RationalVector& joint) {
    return ConditionalDistribution::exact(
        {{"A", s.a, VariableRole::Outcome}, {"B", s.b, VariableRole::Outcome}, {"C", s.c, VariableRole::Outcome}},
        {{"X", s.x, VariableRole::Setting}, {"Y", s.y, VariableRole::Setting}}, joint);
}

RationalizedBox rationalize_box(const ConditionalDistribution& d, const Integer& max_denominator) {
    if (d.is_exact()) return {d, 0};
    const std::size_t n = d.table().size();
    RationalVector p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = rationalize(d.table()[i], max_denominator);

    RationalMatrix aug;
    auto push = [&](RationalVector row, const Rational& rhs) {
        row.push_back(rhs);
        aug.push_back(std::move(row));
    };
    const std::size_t no = d.outcome_count();
    for (std::size_t c = 0; c < d.context_count(); ++c) {
        RationalVector row(n);
        for (std::size_t o = 0; o < no; ++o) row[c * no + o] = 1;
        push(row, 1);
    }
    if (d.outcomes().size() == 2 && d.settings().size() == 2) {
        BoxShape s = shape_of(d);
        for (std::size_t x = 0; x < s.x; ++x)
            for (std::size_t a = 0; a < s.a; ++a)
                for (std::size_t y = 1; y < s.y; ++y) {
                    RationalVector row(n);
                    for (std::size_t b = 0; b < s.b; ++b) {
                        row[s.ab_index(x, y, a, b)] += 1;
                        row[s.ab_index(x, 0, a, b)] -= 1;
                    }
                    push(row, 0);
                }
        for (std::size_t y = 0; y < s.y; ++y)
            for (std::size_t b = 0; b < s.b; ++b)
                for (std::size_t x = 1; x < s.x; ++x) {
                    RationalVector row(n);
                    for (std::size_t a = 0; a < s.a; ++a) {
                        row[s.ab_index(x, y, a, b)] += 1;
                        row[s.ab_index(0, y, a, b)] -= 1;
                    }
                    push(row, 0);
                }
    }
    auto pivots = rref(aug);
    RationalMatrix r;
    RationalVector rhs;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        rhs.push_back(aug[k][n]);
        aug[k].pop_back();
        r.push_back(aug[k]);
    }
    // p' = p - R^T (R R^T)^{-1} (R p - rhs)
    const std::size_t m = r.size();
    RationalMatrix g(m, RationalVector(m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) g[i][j] = dot(r[i], r[j]);
        g[i][m] = dot(r[i], p) - rhs[i];
    }
    rref(g);
    for (std::size_t i = 0; i < m; ++i) {
        const Rational& lambda = g[i][m];
        if (lambda == 0) continue;
        for (std::size_t j = 0; j < n; ++j) p[j] -= lambda * r[i][j];
    }
    RationalizedBox out;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] < 0) throw DistributionError("rationalized table has a negative entry at index " + std::to_string(i));
        out.radius = std::max(out.radius, std::abs(to_double(p[i]) - d.table()[i]));
    }
    out.box = ConditionalDistribution::exact(d.outcomes(), d.settings(), p);
    return out;
}

MarginalVerdict marginal_feasible(const ConditionalDistribution& pab_in, const ConditionalDistribution& pac_in) {
    BoxShape s = shape_of(pab_in);
    if (pac_in.outcomes().size() != 2 || !pac_in.settings().empty()) {
        throw DistributionError("expected P(ac|x=1) with outcomes (A, C) and no settings");
    }
    s.c = pac_in.outcomes()[1].cardinality;
    if (pac_in.outcomes()[0].cardinality != s.a) throw DistributionError("A cardinality differs between the marginals");
    check_shape(s);
    const RationalVector pab = rationalize_box(pab_in).box.exact_table();
    const RationalVector pac = rationalize_box(pac_in).box.exact_table();

    for (std::size_t y = 0; y < s.y; ++y)
        for (std::size_t a = 0; a < s.a; ++a) {
            Rational lhs = 0, rhs = 0;
            for (std::size_t c = 0; c < s.c; ++c) lhs += pac[s.ac_index(a, c)];
            for (std::size_t b = 0; b < s.b; ++b) rhs += pab[s.ab_index(s.copy_setting(), y, a, b)];
            if (lhs != rhs) {
                throw InconsistentMarginalError("P(a|x=1) disagrees between the marginals at a=" + std::to_string(a) +
                                                ", y=" + std::to_string(y) + ": " + to_string(lhs) + " vs " +
                                                to_string(rhs));
            }
        }

    MarginalVerdict out;
    out.system = LinearSystem(s.joint_size());
    out.system.set_all_nonnegative();
    add_local_agency(out.system, s);
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t y = 0; y < s.y; ++y)
            for (std::size_t a = 0; a < s.a; ++a)
                for (std::size_t b = 0; b < s.b; ++b) out.system.add_equality(ab_row(s, x, y, a, b), pab[s.ab_index(x, y, a, b)]);
    for (std::size_t a = 0; a < s.a; ++a)
        for (std::size_t c = 0; c < s.c; ++c) out.system.add_equality(ac_row(s, a, c), pac[s.ac_index(a, c)]);
    out.verdict = lp_feasible(out.system);
    if (out.verdict.feasible) out.joint = joint_distribution(s, out.verdict.witness);
    return out;
}

GammaResult min_gamma(const ConditionalDistribution& pab_in) {
    BoxShape s = shape_of(pab_in);
    s.c = s.a;
    check_shape(s);
    RationalizedBox rb = rationalize_box(pab_in);
    const RationalVector& pab = rb.box.exact_table();
    Rational dev = no_signaling_deviation_exact(rb.box);
    if (dev != 0) throw SignalingError("input box signals (deviation " + to_string(dev) + ")");

    LinearSystem sys(s.joint_size());
    sys.set_all_nonnegative();
    add_local_agency(sys, s);
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t y = 0; y < s.y; ++y)
            for (std::size_t a = 0; a < s.a; ++a)
                for (std::size_t b = 0; b < s.b; ++b) sys.add_equality(ab_row(s, x, y, a, b), pab[s.ab_index(x, y, a, b)]);
    RationalVector obj(s.joint_size());
    for (std::size_t a = 0; a < s.a; ++a)
        for (std::size_t b = 0; b < s.b; ++b)
            for (std::size_t c = 0; c < s.c; ++c) {
                if (a != c) obj[s.joint_index(s.copy_setting(), 0, a, b, c)] = 1;
            }
    sys.set_objective(obj);
    LpResult r = lp_minimize(sys);
    if (r.status != LpResult::Status::Optimal) {
        throw std::logic_error("min_gamma: a no-signaling box must admit a Local Agency extension");
    }
    return {r.value, joint_distribution(s, r.solution), rb.radius};
}

Inequality chsh_inequality(unsigned alpha, unsigned beta, unsigned gamma) {
    Inequality f;
    f.ab.assign(16, 0);
    f.ac.assign(4, 0);
    f.bound = 3;
    for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y)
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b) {
                    unsigned target = (x & y) ^ (alpha & x) ^ (beta & y) ^ (gamma & 1u);
                    if ((a ^ b) == target) f.ab[f.shape.ab_index(x, y, a, b)] = 1;
                }
    return f;
}

std::vector<Inequality> chsh_symmetries() {
    std::vector<Inequality> out;
    for (unsigned k = 0; k < 8; ++k) out.push_back(chsh_inequality(k & 1u, (k >> 1) & 1u, (k >> 2) & 1u));
    return out;
}

Inequality eq2_inequality() {
    Inequality f = chsh_inequality(0, 0, 0);
    f.ac[f.shape.ac_index(0, 0)] = 2;
    f.ac[f.shape.ac_index(1, 1)] = 2;
    f.bound = 5;
    return f;
}

Eq2Result monogamy_eq2(const ConditionalDistribution& pab, const ConditionalDistribution& pac) {
    if (!is_binary(shape_of(pab)) || pac.outcomes().size() != 2 || !pac.settings().empty() || pac.outcome_count() != 4) {
        throw DistributionError("monogamy_eq2 needs binary P(ab|xy) and binary P(ac|x=1)");
    }
    Eq2Result r;
    if (pab.is_exact() && pac.is_exact()) {
        Rational lhs = chsh_value_exact(pab) + 2 * (pac.exact_at(0, 0) + pac.exact_at(0, 3));
        r.exact_lhs = lhs;
        r.lhs = to_double(lhs);
        r.satisfied = lhs <= 5;
    } else {
        r.lhs = chsh_value(pab) + 2 * (pac.at(0, 0) + pac.at(0, 3));
        r.satisfied = r.lhs <= 5 + 1e-12;
    }
    return r;
}

std::vector<ConditionalDistribution> ns_vertices() {
    std::vector<ConditionalDistribution> out;
    for (unsigned i = 0; i < 16; ++i) out.push_back(boxes::lhv_deterministic(i));
    for (unsigned k = 0; k < 8; ++k) {
        Inequality f = chsh_inequality(k & 1u, (k >> 1) & 1u, (k >> 2) & 1u);
        RationalVector t(16);
        for (std::size_t i = 0; i < 16; ++i) t[i] = f.ab[i] == 1 ? Rational(1, 2) : Rational(0);
        out.push_back(ConditionalDistribution::exact(boxes::ab_outcomes(), boxes::xy_settings(), t));
    }
    return out;
}

Inequality FacetResult::canonical(const Inequality& i) const {
    HalfSpace h;
    h.a = i.ab;
    if (variant == LfVariant::General) {
        h.a.insert(h.a.end(), i.ac.begin(), i.ac.end());
    } else if (std::any_of(i.ac.begin(), i.ac.end(), [](const Rational& v) { return v != 0; })) {
        throw DistributionError("perfect-copy facets live on P(ab|xy) only");
    }
    h.b = i.bound;
    return Inequality::from_halfspace(shape, canonicalize(h, hull));
}

bool FacetResult::is_positivity(const Inequality& facet) const {
    std::size_t coords = shape.ab_size() + (variant == LfVariant::General ? shape.ac_size() : 0);
    for (std::size_t k = 0; k < coords; ++k) {
        Inequality pos;
        pos.shape = shape;
        pos.ab.assign(shape.ab_size(), 0);
        pos.ac.assign(shape.ac_size(), 0);
        if (k < shape.ab_size()) pos.ab[k] = -1;
        else pos.ac[k - shape.ab_size()] = -1;
        pos.bound = 0;
        if (canonical(pos) == facet) return true;
    }
    return false;
}

std::vector<Inequality> FacetResult::nontrivial() const {
    std::vector<Inequality> out;
    for (const auto& f : facets) {
        if (!is_positivity(f)) out.push_back(f);
    }
    return out;
}

FacetResult lf_facets(const BoxShape& shape, LfVariant variant) {
    check_shape(shape);
    FacetResult res;
    res.shape = shape;
    res.variant = variant;
    LinearSystem sys = joint_system(shape, variant == LfVariant::PerfectCopy);
    std::vector<HalfSpace> ineqs, eqs;
    for (std::size_t j = 0; j < sys.variable_count(); ++j) {
        RationalVector row(sys.variable_count());
        row[j] = -1;
        ineqs.push_back({row, 0});
    }
    for (const auto& e : sys.equalities()) eqs.push_back({e.coeffs, e.rhs});
    RationalMatrix vertices = enumerate_vertices(ineqs, eqs, sys.variable_count());
    res.joint_vertex_count = vertices.size();
    bool include_ac = variant == LfVariant::General;
    for (const auto& v : vertices) res.projected_vertices.push_back(project_joint(shape, v, include_ac));
    std::sort(res.projected_vertices.begin(), res.projected_vertices.end());
    res.projected_vertices.erase(std::unique(res.projected_vertices.begin(), res.projected_vertices.end()),
                                 res.projected_vertices.end());
    for (const auto& h : convex_hull_facets(res.projected_vertices, &res.hull)) {
        res.facets.push_back(Inequality::from_halfspace(shape, h));
    }
    return res;
}

std::string to_string(PolytopeKind k) {
    switch (k) {
        case PolytopeKind::LHV: return "LHV";
        case PolytopeKind::NS: return "NS";
        case PolytopeKind::LF: return "LF";
    }
    return "?";
}

PolytopeKind parse_polytope(const std::string& text) {
    if (text == "LHV" || text == "lhv") return PolytopeKind::LHV;
    if (text == "NS" || text == "ns") return PolytopeKind::NS;
    if (text == "LF" || text == "lf") return PolytopeKind::LF;
    throw ParseError("unknown polytope '" + text + "'");
}

namespace {

struct LhvHull {
    AffineHull hull;
    std::vector<Inequality> facets;
};

const LhvHull& lhv_hull() {
    static const LhvHull cached = [] {
        RationalMatrix pts;
        for (unsigned i = 0; i < 16; ++i) pts.push_back(boxes::lhv_deterministic(i).exact_table());
        LhvHull h;
        for (const auto& f : convex_hull_facets(pts, &h.hull)) h.facets.push_back(Inequality::from_halfspace(BoxShape{}, f));
        return h;
    }();
    return cached;
}

const FacetResult& perfect_lf_facets() {
    static const FacetResult cached = lf_facets(BoxShape{}, LfVariant::PerfectCopy);
    return cached;
}

Inequality zero_inequality(const BoxShape& s) {
    Inequality f;
    f.shape = s;
    f.ab.assign(s.ab_size(), 0);
    f.ac.assign(s.ac_size(), 0);
    f.bound = 0;
    return f;
}

MembershipResult ns_membership(const ConditionalDistribution& box, const BoxShape& s) {
    const RationalVector& p = box.exact_table();
    MembershipResult r;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0) {
            Inequality f = zero_inequality(s);
            f.ab[i] = -1;
            r.separator = f;
            r.separator_value = to_double(-p[i]);
            return r;
        }
    }
    auto check = [&](Inequality f) {
        Rational v = dot(f.ab, p);
        if (v == 0) return false;
        if (v < 0) {
            for (auto& c : f.ab) c = -c;
            v = -v;
        }
        r.separator = f;
        r.separator_value = to_double(v);
        return true;
    };
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t a = 0; a < s.a; ++a)
            for (std::size_t y = 1; y < s.y; ++y) {
                Inequality f = zero_inequality(s);
                for (std::size_t b = 0; b < s.b; ++b) {
                    f.ab[s.ab_index(x, y, a, b)] += 1;
                    f.ab[s.ab_index(x, 0, a, b)] -= 1;
                }
                if (check(f)) return r;
            }
    for (std::size_t y = 0; y < s.y; ++y)
        for (std::size_t b = 0; b < s.b; ++b)
            for (std::size_t x = 1; x < s.x; ++x) {
                Inequality f = zero_inequality(s);
                for (std::size_t a = 0; a < s.a; ++a) {
                    f.ab[s.ab_index(x, y, a, b)] += 1;
                    f.ab[s.ab_index(0, y, a, b)] -= 1;
                }
                if (check(f)) return r;
            }
    r.inside = true;
    return r;
}

MembershipResult lhv_membership(const ConditionalDistribution& box) {
    const RationalVector& p = box.exact_table();
    LinearSystem sys(16);
    sys.set_all_nonnegative();
    std::vector<RationalVector> det;
    for (unsigned i = 0; i < 16; ++i) det.push_back(boxes::lhv_deterministic(i).exact_table());
    for (std::size_t e = 0; e < 16; ++e) {
        RationalVector row(16);
        for (std::size_t k = 0; k < 16; ++k) row[k] = det[k][e];
        sys.add_equality(row, p[e]);
    }
    FeasibilityVerdict v = lp_feasible(sys);

    // Second route: the facet list of the LHV hull.
    const LhvHull& h = lhv_hull();
    const Inequality* worst = nullptr;
    Rational worst_excess = 0;
    for (const auto& f : h.facets) {
        Rational excess = dot(f.ab, p) - f.bound;
        if (excess > worst_excess) {
            worst_excess = excess;
            worst = &f;
        }
    }
    if (v.feasible != (worst == nullptr)) throw std::logic_error("LHV membership: LP and facet routes disagree");
    MembershipResult r;
    r.inside = v.feasible;
    if (!r.inside) {
        r.separator = *worst;
        r.separator_value = to_double(dot(worst->ab, p));
        for (const auto& d : det) {
            if (dot(worst->ab, d) > worst->bound) throw std::logic_error("LHV separator fails on a deterministic box");
        }
    }
    return r;
}

MembershipResult lf_membership(const ConditionalDistribution& box, const ConditionalDistribution& pac) {
    MarginalVerdict mv = marginal_feasible(box, pac);
    MembershipResult r;
    r.inside = mv.verdict.feasible;
    if (r.inside) return r;
    BoxShape s = shape_of(box);
    s.c = pac.outcomes()[1].cardinality;
    // Equality rows: Local Agency, then P(ab|xy), then P(ac|x=1).
    const RationalVector& y = mv.verdict.certificate.equality_multipliers;
    std::size_t la = y.size() - s.ab_size() - s.ac_size();
    Inequality f = zero_inequality(s);
    for (std::size_t i = 0; i < s.ab_size(); ++i) f.ab[i] = -y[la + i];
    for (std::size_t i = 0; i < s.ac_size(); ++i) f.ac[i] = -y[la + s.ab_size() + i];
    HalfSpace scaled = f.as_halfspace();
    scaled.a = primitive_integer(scaled.a);
    f = Inequality::from_halfspace(s, scaled);

    // Re-verify validity: maximize the functional over the joint polytope.
    LinearSystem sys = joint_system(s);
    RationalVector obj(s.joint_size());
    for (std::size_t j = 0; j < s.joint_size(); ++j) {
        RationalVector unit(s.joint_size());
        unit[j] = 1;
        obj[j] = -dot(f.as_halfspace().a, project_joint(s, unit, true));
    }
    sys.set_objective(obj);
    LpResult lp = lp_minimize(sys);
    if (lp.status != LpResult::Status::Optimal || -lp.value > f.bound) {
        throw std::logic_error("LF separator is not valid on the joint polytope");
    }
    RationalVector point = rationalize_box(box).box.exact_table();
    const RationalVector pc = rationalize_box(pac).box.exact_table();
    point.insert(point.end(), pc.begin(), pc.end());
    Rational value = dot(f.as_halfspace().a, point);
    if (value <= f.bound) throw std::logic_error("LF separator does not cut off the input");
    r.separator = f;
    r.separator_value = to_double(value);
    return r;
}

}  // namespace

MembershipResult membership(const ConditionalDistribution& pab, PolytopeKind kind,
                            const std::optional<ConditionalDistribution>& pac) {
    BoxShape s = shape_of(pab);
    RationalizedBox rb = rationalize_box(pab);
    MembershipResult r;
    switch (kind) {
        case PolytopeKind::NS:
            r = ns_membership(rb.box, s);
            break;
        case PolytopeKind::LHV:
            if (!is_binary(s)) throw DistributionError("LHV membership supports binary boxes only");
            r = lhv_membership(rb.box);
            break;
        case PolytopeKind::LF:
            if (!pac) throw DistributionError("LF membership needs P(ac|x=1)");
            r = lf_membership(rb.box, *pac);
            break;
    }
    r.rationalization_radius = rb.radius;
    return r;
}

std::string SliceResult::csv() const {
    std::ostringstream out;
    out << "t1,t2,label\n" << std::fixed << std::setprecision(6);
    for (const auto& p : grid) out << to_double(p.t1) << "," << to_double(p.t2) << "," << p.label << "\n";
    return out.str();
}

namespace {

// value(t1, t2) = c0 + c1 t1 + c2 t2
struct Affine2 {
    Rational c0, c1, c2;
    Rational at(const Rational& t1, const Rational& t2) const { return c0 + c1 * t1 + c2 * t2; }
    double at(double t1, double t2) const { return to_double(c0) + to_double(c1) * t1 + to_double(c2) * t2; }
};

const char* label_for(bool ns, bool lf, bool lhv) {
    if (!ns) return "outside-NS";
    if (lhv && lf) return "LHV";
    if (lf) return "LF-only";
    if (lhv) throw std::logic_error("slice: point inside LHV but outside LF");
    return "NS-only";
}

}  // namespace

SliceResult slice_scan(const Inequality& f1, const Inequality& f2, std::size_t resolution,
                       const std::vector<std::pair<std::string, ConditionalDistribution>>& overlay) {
    if (!is_binary(f1.shape) || !is_binary(f2.shape)) throw DistributionError("slice_scan works on binary boxes");
    if (resolution == 0) throw DistributionError("slice resolution must be positive");
    const RationalVector w = boxes::white_noise().exact_table();
    auto verts = ns_vertices();
    auto argmax = [&](const Inequality& f) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < verts.size(); ++i) {
            if (functional(f, verts[i].exact_table()) > functional(f, verts[best].exact_table())) best = i;
        }
        RationalVector d = verts[best].exact_table();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= w[i];
        return d;
    };
    RationalVector d1 = argmax(f1), d2 = argmax(f2);
    Rational m11 = dot(f1.ab, d1), m12 = dot(f1.ab, d2), m21 = dot(f2.ab, d1), m22 = dot(f2.ab, d2);
    Rational det = m11 * m22 - m12 * m21;
    if (det == 0) throw LinearSystemError("degenerate plane: the functionals do not span a 2-plane");
    Rational fw1 = dot(f1.ab, w), fw2 = dot(f2.ab, w);

    // s = M^{-1} (t - f(w)); g.p = g.w + (g.d1, g.d2) s.
    auto affine = [&](const RationalVector& g, const Rational& bound) {
        Rational a1 = dot(g, d1), a2 = dot(g, d2);
        Rational k1 = (a1 * m22 - a2 * m21) / det;  // coefficient of (t1 - fw1)
        Rational k2 = (a2 * m11 - a1 * m12) / det;  // coefficient of (t2 - fw2)
        return Affine2{dot(g, w) - bound - k1 * fw1 - k2 * fw2, k1, k2};
    };
    std::vector<Affine2> ns_rows, lhv_rows, lf_rows;
    for (std::size_t i = 0; i < 16; ++i) {
        RationalVector g(16);
        g[i] = -1;
        ns_rows.push_back(affine(g, 0));
    }
    for (const auto& f : lhv_hull().facets) lhv_rows.push_back(affine(f.ab, f.bound));
    for (const auto& f : perfect_lf_facets().facets) lf_rows.push_back(affine(f.ab, f.bound));
    auto inside = [](const std::vector<Affine2>& rows, const auto& t1, const auto& t2, double tol) {
        for (const auto& r : rows) {
            if constexpr (std::is_same_v<std::decay_t<decltype(t1)>, Rational>) {
                if (r.at(t1, t2) > 0) return false;
            } else {
                if (r.at(t1, t2) > tol) return false;
            }
        }
        return true;
    };

    auto range = [&](const Inequality& f, Rational& lo, Rational& hi) {
        lo = hi = functional(f, verts[0].exact_table());
        for (const auto& v : verts) {
            Rational val = functional(f, v.exact_table());
            lo = std::min(lo, val);
            hi = std::max(hi, val);
        }
        Rational pad = (hi - lo) / 8;
        lo -= pad;
        hi += pad;
    };
    SliceResult res;
    range(f1, res.t1_min, res.t1_max);
    range(f2, res.t2_min, res.t2_max);
    Rational step1 = (res.t1_max - res.t1_min) / Rational(resolution);
    Rational step2 = (res.t2_max - res.t2_min) / Rational(resolution);
    res.grid.reserve((resolution + 1) * (resolution + 1));
    for (std::size_t j = 0; j <= resolution; ++j) {
        Rational t2 = res.t2_min + step2 * Rational(j);
        for (std::size_t i = 0; i <= resolution; ++i) {
            Rational t1 = res.t1_min + step1 * Rational(i);
            bool ns = inside(ns_rows, t1, t2, 0);
            bool lf = ns && inside(lf_rows, t1, t2, 0);
            bool lhv = ns && inside(lhv_rows, t1, t2, 0);
            res.grid.push_back({t1, t2, label_for(ns, lf, lhv)});
        }
    }

    for (const auto& [name, q] : overlay) {
        if (q.table().size() != 16) throw DistributionError("overlay box must be binary P(ab|xy)");
        SliceExtra e;
        e.name = name;
        for (std::size_t i = 0; i < 16; ++i) {
            e.t1 += to_double(f1.ab[i]) * q.table()[i];
            e.t2 += to_double(f2.ab[i]) * q.table()[i];
        }
        auto holds = [&](const std::vector<Inequality>& fs) {
            for (const auto& f : fs) {
                double v = 0;
                for (std::size_t i = 0; i < 16; ++i) v += to_double(f.ab[i]) * q.table()[i];
                if (v > to_double(f.bound) + 1e-12) return false;
            }
            return true;
        };
        bool ns = std::all_of(q.table().begin(), q.table().end(), [](double v) { return v >= -1e-12; }) &&
                  no_signaling_deviation(q) <= 1e-12;
        e.label = label_for(ns, ns && holds(perfect_lf_facets().facets), ns && holds(lhv_hull().facets));
        res.extras.push_back(e);
    }
    return res;
}

}  // namespace lfkit
