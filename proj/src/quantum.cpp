#include "lfkit/quantum.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lfkit {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (auto d : dims) {
        if (d == 0) throw QuantumModelError("factor dimension 0");
        n *= d;
        if (n > kMaxQuantumDimension) throw SizeLimitError("state exceeds the 12-qubit dimension cap");
    }
    return n;
}

// For each assignment of the non-target factors, the list of full indices
// spanned by the target factors (in target order).
std::vector<std::vector<std::size_t>> blocks(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& targets) {
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];
    std::vector<bool> is_target(dims.size(), false);
    for (auto t : targets) {
        if (t >= dims.size() || is_target[t]) throw QuantumModelError("bad target factor list");
        is_target[t] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (!is_target[i]) rest.push_back(i);
    }
    std::size_t n_rest = 1, n_tgt = 1;
    for (auto r : rest) n_rest *= dims[r];
    for (auto t : targets) n_tgt *= dims[t];
    std::vector<std::vector<std::size_t>> out(n_rest, std::vector<std::size_t>(n_tgt));
    for (std::size_t r = 0; r < n_rest; ++r) {
        std::size_t base = 0, rem = r;
        for (std::size_t k = rest.size(); k-- > 0;) {
            base += (rem % dims[rest[k]]) * stride[rest[k]];
            rem /= dims[rest[k]];
        }
        for (std::size_t t = 0; t < n_tgt; ++t) {
            std::size_t off = 0, tr = t;
            for (std::size_t k = targets.size(); k-- > 0;) {
                off += (tr % dims[targets[k]]) * stride[targets[k]];
                tr /= dims[targets[k]];
            }
            out[r][t] = base + off;
        }
    }
    return out;
}

void check_unitary(const Eigen::MatrixXcd& u, double tol, const char* what) {
    if (u.rows() != u.cols()) throw QuantumModelError(std::string(what) + " is not square");
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > tol) throw QuantumModelError(std::string(what) + " is not unitary");
}

Eigen::MatrixXcd projector(std::size_t dim, std::size_t k) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1;
    return p;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::string context_name(std::size_t x, std::size_t y) {
    return "x=" + std::to_string(x) + ",y=" + std::to_string(y);
}

}  // namespace

StateVector StateVector::make(std::vector<std::size_t> dims, Eigen::VectorXcd amplitudes, double tolerance) {
    if (static_cast<std::size_t>(amplitudes.size()) != product(dims)) {
        throw QuantumModelError("amplitude count does not match factor dimensions");
    }
    if (std::abs(amplitudes.norm() - 1) > tolerance) throw QuantumModelError("state is not normalized");
    return {std::move(dims), std::move(amplitudes)};
}

StateVector StateVector::extended(std::size_t dim, std::size_t index) const {
    if (index >= dim) throw QuantumModelError("basis index out of range");
    std::vector<std::size_t> d = dims;
    d.push_back(dim);
    product(d);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(amplitudes.size() * static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) v(i * static_cast<Eigen::Index>(dim) + static_cast<Eigen::Index>(index)) = amplitudes(i);
    return {d, v};
}

StateVector StateVector::applied(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets) const {
    auto bl = blocks(dims, targets);
    if (bl.empty() || static_cast<std::size_t>(op.cols()) != bl[0].size() || op.rows() != op.cols()) {
        throw QuantumModelError("operator size does not match target factors");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amplitudes.size());
    Eigen::VectorXcd sub(op.cols());
    for (const auto& idx : bl) {
        for (std::size_t t = 0; t < idx.size(); ++t) sub(static_cast<Eigen::Index>(t)) = amplitudes(static_cast<Eigen::Index>(idx[t]));
        Eigen::VectorXcd r = op * sub;
        for (std::size_t t = 0; t < idx.size(); ++t) out(static_cast<Eigen::Index>(idx[t])) = r(static_cast<Eigen::Index>(t));
    }
    return {dims, out};
}

Complex StateVector::expectation(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets) const {
    return amplitudes.dot(applied(op, targets).amplitudes);
}

void EffectFamily::validate(double tolerance) const {
    if (effects.empty()) throw QuantumModelError("empty effect family");
    const Eigen::Index d = effects[0].rows();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& e : effects) {
        if (e.rows() != d || e.cols() != d) throw QuantumModelError("effects have different sizes");
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tolerance) throw QuantumModelError("effect is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
        if (es.eigenvalues().minCoeff() < -tolerance) throw QuantumModelError("effect is not positive semidefinite");
        sum += e;
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tolerance) {
        throw QuantumModelError("effects do not sum to the identity");
    }
}

EffectFamily angle_measurement(double theta) {
    Eigen::VectorXcd v(2), w(2);
    v << std::cos(theta / 2), std::sin(theta / 2);
    w << -std::sin(theta / 2), std::cos(theta / 2);
    return {{v * v.adjoint(), w * w.adjoint()}};
}

Eigen::MatrixXcd cnot() {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
    return u;
}

void MinimalLFModel::validate() const {
    product({bob_dim, system_dim, memory_dim});
    StateVector::make({bob_dim, system_dim}, initial_state, tolerance);
    const auto sm = static_cast<Eigen::Index>(system_dim * memory_dim);
    if (charlie.rows() != sm || charlie_inverse.rows() != sm) {
        throw QuantumModelError("Charlie's unitary must act on system (x) memory");
    }
    check_unitary(charlie, tolerance, "Charlie's unitary");
    check_unitary(charlie_inverse, tolerance, "Charlie's inverse");
    if (alice.empty() || bob.empty()) throw QuantumModelError("Alice and Bob need at least one setting");
    if (copy_setting >= alice.size() || alice[copy_setting].action != AliceAction::CopyCharlieMemory) {
        throw QuantumModelError("the copy setting must use CopyCharlieMemory");
    }
    for (std::size_t x = 0; x < alice.size(); ++x) {
        const auto& s = alice[x];
        if (s.action == AliceAction::CopyCharlieMemory) {
            if (x != copy_setting) throw QuantumModelError("only the copy setting may copy Charlie's memory");
            continue;
        }
        s.effect.validate(tolerance);
        if (s.effect.dimension() != system_dim) throw QuantumModelError("Alice's effects must act on Charlie's system");
        if (s.effect.effects.size() != memory_dim) throw QuantumModelError("Alice needs one outcome per memory value");
    }
    for (const auto& f : bob) {
        f.validate(tolerance);
        if (f.dimension() != bob_dim) throw QuantumModelError("Bob's effects must act on Bob's system");
        if (f.effects.size() != bob[0].effects.size()) throw QuantumModelError("Bob's settings disagree on outcome count");
    }
}

MinimalLFModel tsirelson_model() {
    MinimalLFModel m;
    m.initial_state = Eigen::VectorXcd::Zero(4);
    m.initial_state(0) = m.initial_state(3) = 1 / std::sqrt(2.0);
    m.charlie = cnot();
    m.charlie_inverse = cnot();
    const double pi = std::numbers::pi;
    m.alice = {{AliceAction::ReverseThenMeasure, angle_measurement(pi / 2)}, {AliceAction::CopyCharlieMemory, {}}};
    m.bob = {angle_measurement(pi / 4), angle_measurement(3 * pi / 4)};
    m.copy_setting = 1;
    return m;
}

LfRun run_minimal_lf(const MinimalLFModel& m) {
    m.validate();
    const std::size_t nx = m.alice.size(), ny = m.bob.size();
    const std::size_t na = m.memory_dim, nb = m.bob[0].effects.size(), nc = m.memory_dim;
    enum { kBob = 0, kSys = 1, kMem = 2 };

    StateVector psi0 = StateVector::make({m.bob_dim, m.system_dim}, m.initial_state, m.tolerance).extended(m.memory_dim, 0);
    StateVector psi1 = psi0.applied(m.charlie, {kSys, kMem});

    std::vector<double> pab(nx * ny * na * nb), pabc(nx * ny * na * nb * nc, 0.0), pc_marg(nc);
    std::vector<StateVector> branch;  // memory projected onto c
    for (std::size_t c = 0; c < nc; ++c) {
        branch.push_back(psi1.applied(projector(m.memory_dim, c), {kMem}));
        pc_marg[c] = branch.back().amplitudes.squaredNorm();
    }
    for (std::size_t x = 0; x < nx; ++x) {
        const AliceSetting& s = m.alice[x];
        for (std::size_t y = 0; y < ny; ++y) {
            for (std::size_t a = 0; a < na; ++a) {
                for (std::size_t b = 0; b < nb; ++b) {
                    const Eigen::MatrixXcd& fb = m.bob[y].effects[b];
                    std::size_t ab = ((x * ny + y) * na + a) * nb + b;
                    if (s.action == AliceAction::CopyCharlieMemory) {
                        Eigen::MatrixXcd op = kron(fb, projector(m.memory_dim, a));
                        pab[ab] = psi1.expectation(op, {kBob, kMem}).real();
                        // Alice's copy equals the record: zero off the diagonal by construction.
                        pabc[ab * nc + a] = branch[a].expectation(fb, {kBob}).real();
                    } else {
                        Eigen::MatrixXcd op = kron(fb, s.effect.effects[a]);
                        StateVector restored = psi1.applied(m.charlie_inverse, {kSys, kMem});
                        pab[ab] = restored.expectation(op, {kBob, kSys}).real();
                        for (std::size_t c = 0; c < nc; ++c) {
                            StateVector rev = branch[c].applied(m.charlie_inverse, {kSys, kMem});
                            pabc[ab * nc + c] = rev.expectation(op, {kBob, kSys}).real();
                        }
                    }
                }
            }
        }
    }
    for (auto& v : pab) v = std::max(v, 0.0);
    for (auto& v : pabc) v = std::max(v, 0.0);

    std::vector<VariableSpec> settings{{"X", nx, VariableRole::Setting}, {"Y", ny, VariableRole::Setting}};
    const double tol = 1e-9;
    LfRun run;
    run.pab = ConditionalDistribution::approximate({{"A", na}, {"B", nb}}, settings, pab, tol);
    run.bookkeeping = ConditionalDistribution::approximate({{"A", na}, {"B", nb}, {"C", nc}}, settings, pabc, tol);
    run.charlie_marginal = pc_marg;

    std::vector<double> pac(na * nc, 0.0);
    for (std::size_t a = 0; a < na; ++a) pac[a * nc + a] = pc_marg[a];
    run.pac = ConditionalDistribution::approximate({{"A", na}, {"C", nc}}, {}, pac, tol);
    run.pc = marginalize(run.bookkeeping, {"C"});

    auto book_ab = marginalize(run.bookkeeping, {"A", "B"});
    for (std::size_t i = 0; i < pab.size(); ++i) {
        run.bookkeeping_ab_discrepancy = std::max(run.bookkeeping_ab_discrepancy, std::abs(book_ab.table()[i] - pab[i]));
    }
    return run;
}

LocalAgencyReport verify_local_agency(const ConditionalDistribution& d, double tolerance) {
    if (d.outcomes().size() != 3 || d.settings().size() != 2) {
        throw DistributionError("Local Agency check needs P(abc|xy)");
    }
    const std::size_t na = d.outcomes()[0].cardinality, nb = d.outcomes()[1].cardinality,
                      nc = d.outcomes()[2].cardinality;
    const std::size_t nx = d.settings()[0].cardinality, ny = d.settings()[1].cardinality;
    auto p = [&](std::size_t x, std::size_t y, std::size_t a, std::size_t b, std::size_t c) {
        return d.at(x * ny + y, (a * nb + b) * nc + c);
    };
    LocalAgencyReport r;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 1; y < ny; ++y)
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t c = 0; c < nc; ++c) {
                    double s = 0;
                    for (std::size_t b = 0; b < nb; ++b) s += p(x, y, a, b, c) - p(x, 0, a, b, c);
                    if (std::abs(s) > r.ac_deviation) {
                        r.ac_deviation = std::abs(s);
                        r.ac_context = context_name(x, y) + " a=" + std::to_string(a) + " c=" + std::to_string(c);
                    }
                }
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 1; x < nx; ++x)
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t c = 0; c < nc; ++c) {
                    double s = 0;
                    for (std::size_t a = 0; a < na; ++a) s += p(x, y, a, b, c) - p(0, y, a, b, c);
                    if (std::abs(s) > r.bc_deviation) {
                        r.bc_deviation = std::abs(s);
                        r.bc_context = context_name(x, y) + " b=" + std::to_string(b) + " c=" + std::to_string(c);
                    }
                }
    r.pass = r.ac_deviation <= tolerance && r.bc_deviation <= tolerance;
    return r;
}

bool reversal_soundness(const MinimalLFModel& m, double tolerance) {
    if (m.charlie.rows() != m.charlie_inverse.rows() || m.charlie.cols() != m.charlie_inverse.cols()) return false;
    const Eigen::Index n = m.charlie.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Unit(n, k);
        if ((m.charlie_inverse * (m.charlie * e) - e).norm() > tolerance) return false;
    }
    return true;
}

}  // namespace lfkit
