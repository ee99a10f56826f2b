#include "lfkit/linear.hpp"

#include "lfkit/error.hpp"

#include <optional>
#include <stdexcept>

namespace lfkit {

LinearSystem::LinearSystem(std::size_t variables) : nonnegative_(variables, false), objective_(variables) {}

void LinearSystem::set_nonnegative(std::size_t j, bool value) {
    if (j >= variable_count()) throw LinearSystemError("variable index out of range");
    nonnegative_[j] = value;
}

void LinearSystem::set_all_nonnegative(bool value) { nonnegative_.assign(nonnegative_.size(), value); }

void LinearSystem::check(const RationalVector& coeffs) const {
    if (coeffs.size() != variable_count()) {
        throw LinearSystemError("coefficient vector has " + std::to_string(coeffs.size()) + " entries, expected " +
                                std::to_string(variable_count()));
    }
}

std::size_t LinearSystem::add_equality(RationalVector coeffs, Rational rhs) {
    check(coeffs);
    equalities_.push_back({std::move(coeffs), std::move(rhs)});
    return equalities_.size() - 1;
}

std::size_t LinearSystem::add_inequality(RationalVector coeffs, Rational rhs) {
    check(coeffs);
    inequalities_.push_back({std::move(coeffs), std::move(rhs)});
    return inequalities_.size() - 1;
}

void LinearSystem::set_objective(RationalVector coeffs) {
    check(coeffs);
    objective_ = std::move(coeffs);
}

namespace {

// Standard form  A' z = b', z >= 0, b' >= 0, with one artificial per row.
class Tableau {
public:
    explicit Tableau(const LinearSystem& sys) : sys_(sys) {
        std::size_t n = sys.variable_count();
        for (std::size_t j = 0; j < n; ++j) {
            plus_col_.push_back(structural_++);
            minus_col_.push_back(sys.nonnegative(j) ? kNone : structural_++);
        }
        std::size_t m_eq = sys.equalities().size();
        std::size_t m_in = sys.inequalities().size();
        m_ = m_eq + m_in;
        slack_begin_ = structural_;
        art_begin_ = slack_begin_ + m_in;
        cols_ = art_begin_ + m_;
        rows_.assign(m_, RationalVector(cols_ + 1));
        sign_.assign(m_, 1);
        for (std::size_t i = 0; i < m_; ++i) {
            const LinearConstraint& c = i < m_eq ? sys.equalities()[i] : sys.inequalities()[i - m_eq];
            RationalVector& r = rows_[i];
            for (std::size_t j = 0; j < n; ++j) {
                if (c.coeffs[j] == 0) continue;
                r[plus_col_[j]] = c.coeffs[j];
                if (minus_col_[j] != kNone) r[minus_col_[j]] = -c.coeffs[j];
            }
            if (i >= m_eq) r[slack_begin_ + (i - m_eq)] = 1;
            r[cols_] = c.rhs;
            if (c.rhs < 0) {
                sign_[i] = -1;
                for (auto& v : r) v = -v;
            }
            r[art_begin_ + i] = 1;
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = art_begin_ + i;
    }

    // Returns phase-1 optimum (sum of artificials).
    Rational phase1() {
        RationalVector cost(cols_);
        for (std::size_t i = 0; i < m_; ++i) cost[art_begin_ + i] = 1;
        set_cost(cost);
        run(cols_);
        return -obj_[cols_];
    }

    // Duals of the phase-1 problem per original row: pi = c_B B^{-1}.
    RationalVector phase1_duals() const {
        RationalVector pi(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            // reduced cost of artificial i is 1 - pi_i
            pi[i] = 1 - obj_[art_begin_ + i];
        }
        return pi;
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < rows_.size();) {
            if (basis_[r] < art_begin_) {
                ++r;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (rows_[r][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col) {
                pivot(r, *col);
                ++r;
            } else {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
            }
        }
    }

    // Phase 2 over non-artificial columns; false when unbounded.
    bool phase2() {
        RationalVector cost(cols_);
        const RationalVector& c = sys_.objective();
        for (std::size_t j = 0; j < c.size(); ++j) {
            cost[plus_col_[j]] = c[j];
            if (minus_col_[j] != kNone) cost[minus_col_[j]] = -c[j];
        }
        set_cost(cost);
        return run(art_begin_);
    }

    RationalVector solution() const {
        RationalVector z(cols_);
        for (std::size_t r = 0; r < rows_.size(); ++r) z[basis_[r]] = rows_[r][cols_];
        RationalVector x(sys_.variable_count());
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = z[plus_col_[j]];
            if (minus_col_[j] != kNone) x[j] -= z[minus_col_[j]];
        }
        return x;
    }

    const std::vector<int>& signs() const { return sign_; }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    const LinearSystem& sys_;
    std::size_t m_ = 0;
    std::size_t structural_ = 0;
    std::size_t slack_begin_ = 0;
    std::size_t art_begin_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> plus_col_, minus_col_;
    std::vector<RationalVector> rows_;
    std::vector<std::size_t> basis_;
    std::vector<int> sign_;
    RationalVector obj_;  // reduced costs, last entry is -objective value

    void set_cost(const RationalVector& cost) {
        obj_ = cost;
        obj_.push_back(0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rational& cb = cost[basis_[r]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (rows_[r][j] != 0) obj_[j] -= cb * rows_[r][j];
            }
        }
    }

    void pivot(std::size_t pr, std::size_t pc) {
        RationalVector& prow = rows_[pr];
        Rational inv = 1 / prow[pc];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (prow[j] != 0) {
                prow[j] *= inv;
                nz.push_back(j);
            }
        }
        auto eliminate = [&](RationalVector& row) {
            if (row[pc] == 0) return;
            Rational f = row[pc];
            for (auto j : nz) row[j] -= f * prow[j];
        };
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (r != pr) eliminate(rows_[r]);
        }
        eliminate(obj_);
        basis_[pr] = pc;
    }

    // Bland's rule; entering columns restricted to [0, limit).
    bool run(std::size_t limit) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                const Rational& a = rows_[r][*enter];
                if (a <= 0) continue;
                Rational ratio = rows_[r][cols_] / a;
                if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }
};

Certificate farkas_from_duals(const LinearSystem& sys, const RationalVector& pi, const std::vector<int>& sign,
                              const Rational& phase1_value) {
    std::size_t m_eq = sys.equalities().size();
    Certificate cert;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        Rational y = -Rational(sign[i]) * pi[i] / phase1_value;
        if (i < m_eq) cert.equality_multipliers.push_back(y);
        else cert.inequality_multipliers.push_back(y);
    }
    return cert;
}

}  // namespace

bool verify_witness(const LinearSystem& sys, const RationalVector& x) {
    if (x.size() != sys.variable_count()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (sys.nonnegative(j) && x[j] < 0) return false;
    }
    for (const auto& c : sys.equalities()) {
        if (dot(c.coeffs, x) != c.rhs) return false;
    }
    for (const auto& c : sys.inequalities()) {
        if (dot(c.coeffs, x) > c.rhs) return false;
    }
    return true;
}

bool verify_certificate(const LinearSystem& sys, const Certificate& cert) {
    if (cert.equality_multipliers.size() != sys.equalities().size() ||
        cert.inequality_multipliers.size() != sys.inequalities().size()) {
        return false;
    }
    RationalVector combo(sys.variable_count());
    Rational rhs = 0;
    auto accumulate = [&](const std::vector<LinearConstraint>& cs, const RationalVector& ys) {
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (ys[i] == 0) continue;
            for (std::size_t j = 0; j < combo.size(); ++j) {
                if (cs[i].coeffs[j] != 0) combo[j] += ys[i] * cs[i].coeffs[j];
            }
            rhs += ys[i] * cs[i].rhs;
        }
    };
    for (const auto& y : cert.inequality_multipliers) {
        if (y < 0) return false;
    }
    accumulate(sys.equalities(), cert.equality_multipliers);
    accumulate(sys.inequalities(), cert.inequality_multipliers);
    for (std::size_t j = 0; j < combo.size(); ++j) {
        if (sys.nonnegative(j) ? combo[j] < 0 : combo[j] != 0) return false;
    }
    return rhs < 0;
}

FeasibilityVerdict lp_feasible(const LinearSystem& sys) {
    Tableau t(sys);
    Rational value = t.phase1();
    FeasibilityVerdict v;
    if (value > 0) {
        v.certificate = farkas_from_duals(sys, t.phase1_duals(), t.signs(), value);
        if (!verify_certificate(sys, v.certificate)) throw std::logic_error("simplex produced an invalid certificate");
        return v;
    }
    v.feasible = true;
    v.witness = t.solution();
    if (!verify_witness(sys, v.witness)) throw std::logic_error("simplex produced an invalid witness");
    return v;
}

LpResult lp_minimize(const LinearSystem& sys) {
    Tableau t(sys);
    LpResult res;
    Rational value = t.phase1();
    if (value > 0) {
        res.status = LpResult::Status::Infeasible;
        res.certificate = farkas_from_duals(sys, t.phase1_duals(), t.signs(), value);
        if (!verify_certificate(sys, res.certificate)) throw std::logic_error("simplex produced an invalid certificate");
        return res;
    }
    t.drive_out_artificials();
    if (!t.phase2()) {
        res.status = LpResult::Status::Unbounded;
        return res;
    }
    res.status = LpResult::Status::Optimal;
    res.solution = t.solution();
    if (!verify_witness(sys, res.solution)) throw std::logic_error("simplex produced an invalid optimum");
    res.value = dot(sys.objective(), res.solution);
    return res;
}

std::vector<std::size_t> rref(RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto& v : m[r]) v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

RationalMatrix nullspace(const RationalMatrix& m, std::size_t columns) {
    RationalMatrix a = m;
    for (const auto& row : a) {
        if (row.size() != columns) throw LinearSystemError("nullspace: ragged matrix");
    }
    auto pivots = rref(a);
    std::vector<bool> is_pivot(columns, false);
    for (auto p : pivots) is_pivot[p] = true;
    RationalMatrix basis;
    for (std::size_t f = 0; f < columns; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(columns);
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace lfkit
