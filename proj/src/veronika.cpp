#include "lfkit/veronika.hpp"

#include "lfkit/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace lfkit {

AmplitudeTable AmplitudeTable::make(std::size_t m, std::vector<std::vector<std::complex<double>>> runs,
                                    std::vector<std::pair<std::size_t, std::size_t>> settings, double tolerance) {
    if (m == 0) throw Error("outcome alphabet must be nonempty");
    if (runs.size() != settings.size()) throw Error("one setting pair per run is required");
    for (const auto& r : runs) {
        if (r.size() != m) throw Error("run amplitude vector has the wrong length");
        double norm = 0;
        for (const auto& a : r) norm += std::norm(a);
        if (std::abs(norm - 1) > tolerance) throw Error("run amplitude vector is not normalized");
    }
    AmplitudeTable t;
    t.m = m;
    t.runs = std::move(runs);
    t.settings = std::move(settings);
    t.sequence_count();
    return t;
}

AmplitudeTable AmplitudeTable::repeated(const std::vector<std::complex<double>>& run,
                                        std::vector<std::pair<std::size_t, std::size_t>> settings) {
    std::vector<std::vector<std::complex<double>>> runs(settings.size(), run);
    return make(run.size(), std::move(runs), std::move(settings));
}

std::uint64_t AmplitudeTable::sequence_count() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (total > kMaxSequences / m) throw SizeLimitError("M^N exceeds the 2^24 enumeration guard");
        total *= m;
    }
    return total;
}

std::vector<std::pair<std::size_t, std::size_t>> balanced_settings(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> s;
    for (std::size_t i = 0; i < n; ++i) s.emplace_back(i < n / 2 ? std::make_pair(0, 0) : std::make_pair(1, 1));
    return s;
}

std::vector<std::complex<double>> uniform_run(std::size_t m) {
    return std::vector<std::complex<double>>(m, 1 / std::sqrt(static_cast<double>(m)));
}

std::string to_string(FrequencyTest t) { return t == FrequencyTest::Max ? "max" : "pooled"; }

namespace {

struct ContextMap {
    std::vector<std::size_t> of_run;  // context id per run
    std::vector<std::int64_t> size;   // runs per context
};

ContextMap contexts(const AmplitudeTable& t) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
    ContextMap cm;
    for (const auto& s : t.settings) {
        auto [it, inserted] = ids.emplace(s, ids.size());
        if (inserted) cm.size.push_back(0);
        cm.of_run.push_back(it->second);
        ++cm.size[it->second];
    }
    return cm;
}

// Exact test on counts[c][ctx]; epsilon = p/q.
bool passes(const std::vector<std::vector<std::int64_t>>& counts, const ContextMap& cm, std::int64_t n, std::int64_t p,
            std::int64_t q, FrequencyTest test) {
    for (const auto& row : counts) {
        std::int64_t nc = 0;
        for (auto v : row) nc += v;
        if (test == FrequencyTest::Max) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                // |row[k]/size_k - nc/n| < p/q
                std::int64_t diff = std::abs(row[k] * n - nc * cm.size[k]);
                if (diff * q >= p * cm.size[k] * n) return false;
            }
        } else {
            // sum_k (size_k/n) |row[k]/size_k - nc/n| = sum_k |row[k] n - nc size_k| / n^2
            std::int64_t total = 0;
            for (std::size_t k = 0; k < row.size(); ++k) total += std::abs(row[k] * n - nc * cm.size[k]);
            if (total * q >= p * n * n) return false;
        }
    }
    return true;
}

std::pair<std::int64_t, std::int64_t> epsilon_parts(const Rational& e) {
    if (e <= 0 || e > 1) throw Error("epsilon must lie in (0, 1]");
    auto num = boost::multiprecision::numerator(e);
    auto den = boost::multiprecision::denominator(e);
    if (den > 1000000) throw Error("epsilon denominator too large");
    return {num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>()};
}

// Pairwise sum of a fixed-length block.
double pairwise(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise(v, h) + pairwise(v + h, n - h);
}

constexpr std::uint64_t kBlock = 4096;

std::vector<double> log_weights(const AmplitudeTable& t) {
    // log |psi_i(c)|^2 flattened as [run][c]
    std::vector<double> lw;
    for (const auto& r : t.runs) {
        for (const auto& a : r) {
            double p = std::norm(a);
            lw.push_back(p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity());
        }
    }
    return lw;
}

double sequence_weight(const std::vector<double>& lw, std::size_t m, std::size_t n, std::uint64_t k) {
    double s = 0;
    for (std::size_t i = n; i-- > 0;) {
        s += lw[i * m + k % m];
        k /= m;
    }
    return std::exp(s);
}

}  // namespace

PassPartition partition_sequences(const AmplitudeTable& t, const Rational& epsilon, FrequencyTest test) {
    auto [p, q] = epsilon_parts(epsilon);
    ContextMap cm = contexts(t);
    const std::size_t n = t.n();
    PassPartition out;
    out.epsilon = epsilon;
    out.test = test;
    out.total = t.sequence_count();
    out.pass.assign(out.total, 0);

    // Odometer over digits with incremental counts.
    std::vector<std::size_t> digit(n, 0);
    std::vector<std::vector<std::int64_t>> counts(t.m, std::vector<std::int64_t>(cm.size.size(), 0));
    for (std::size_t i = 0; i < n; ++i) ++counts[0][cm.of_run[i]];
    for (std::uint64_t k = 0; k < out.total; ++k) {
        if (passes(counts, cm, static_cast<std::int64_t>(n), p, q, test)) {
            out.pass[k] = 1;
            ++out.pass_count;
        }
        for (std::size_t i = n; i-- > 0;) {
            std::size_t ctx = cm.of_run[i];
            --counts[digit[i]][ctx];
            digit[i] = (digit[i] + 1) % t.m;
            ++counts[digit[i]][ctx];
            if (digit[i] != 0) break;
        }
    }
    return out;
}

double pass_probability(const AmplitudeTable& t, const PassPartition& p, std::size_t jobs) {
    const std::vector<double> lw = log_weights(t);
    const std::uint64_t total = t.sequence_count();
    if (p.pass.size() != total) throw Error("partition does not match the amplitude table");
    const std::uint64_t n_blocks = (total + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0);
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        std::vector<double> buf(kBlock);
        for (std::uint64_t b = first; b < n_blocks; b += stride) {
            std::uint64_t lo = b * kBlock, hi = std::min(total, lo + kBlock);
            for (std::uint64_t k = lo; k < hi; ++k) buf[k - lo] = p.pass[k] ? sequence_weight(lw, t.m, t.n(), k) : 0.0;
            block_sum[b] = pairwise(buf.data(), hi - lo);
        }
    };
    jobs = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n_blocks));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
        for (auto& th : pool) th.join();
    }
    return pairwise(block_sum.data(), block_sum.size());
}

SequenceState sequence_state(const AmplitudeTable& t) {
    SequenceState s;
    s.m = t.m;
    s.n = t.n();
    const std::uint64_t total = t.sequence_count();
    s.amplitudes.resize(total);
    for (std::uint64_t k = 0; k < total; ++k) {
        std::complex<double> a = 1;
        std::uint64_t r = k;
        for (std::size_t i = t.n(); i-- > 0;) {
            a *= t.runs[i][r % t.m];
            r /= t.m;
        }
        s.amplitudes[k] = a;
    }
    return s;
}

PostselectResult postselect(const AmplitudeTable& t, const PassPartition& p) {
    PostselectResult r;
    r.pass_probability = pass_probability(t, p);
    if (r.pass_probability <= 0) throw Error("post-selection on an empty pass set");
    SequenceState pre = sequence_state(t);
    r.state = pre;
    const double scale = 1 / std::sqrt(r.pass_probability);
    std::vector<double> re(pre.amplitudes.size()), im(pre.amplitudes.size());
    for (std::uint64_t k = 0; k < pre.amplitudes.size(); ++k) {
        r.state.amplitudes[k] = p.pass[k] ? pre.amplitudes[k] * scale : 0.0;
        const std::complex<double> term = std::conj(pre.amplitudes[k]) * r.state.amplitudes[k];
        re[k] = term.real();
        im[k] = term.imag();
    }
    r.fidelity = std::norm(std::complex<double>(pairwise(re.data(), re.size()), pairwise(im.data(), im.size())));
    return r;
}

double induced_discrepancy(const SequenceState& pre, const SequenceState& post) {
    if (pre.m != post.m || pre.n != post.n || pre.amplitudes.size() != post.amplitudes.size()) {
        throw Error("induced_discrepancy: shape mismatch");
    }
    double worst = 0;
    for (std::size_t i = 0; i < pre.n; ++i) {
        std::vector<double> a(pre.m, 0.0), b(pre.m, 0.0);
        std::uint64_t stride = 1;
        for (std::size_t j = i + 1; j < pre.n; ++j) stride *= pre.m;
        for (std::uint64_t k = 0; k < pre.amplitudes.size(); ++k) {
            std::size_t c = (k / stride) % pre.m;
            a[c] += std::norm(pre.amplitudes[k]);
            b[c] += std::norm(post.amplitudes[k]);
        }
        double tv = 0;
        for (std::size_t c = 0; c < pre.m; ++c) tv += std::abs(a[c] - b[c]);
        worst = std::max(worst, tv / 2);
    }
    return worst;
}

PvmComparison pvm_variant_pass_probability(const AmplitudeTable& t, const Rational& epsilon, FrequencyTest test) {
    auto [p, q] = epsilon_parts(epsilon);
    ContextMap cm = contexts(t);
    const std::uint64_t total = t.sequence_count();
    // |psi> = psi_1 (x) psi_2 (x) ... by repeated Kronecker products.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (const auto& r : t.runs) {
        Eigen::VectorXcd next(psi.size() * static_cast<Eigen::Index>(t.m));
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            for (std::size_t c = 0; c < t.m; ++c) next(i * static_cast<Eigen::Index>(t.m) + static_cast<Eigen::Index>(c)) = psi(i) * r[c];
        psi = std::move(next);
    }
    // Diagonal of Pi_pass from a direct digit decode of each basis index.
    Eigen::VectorXd diag(static_cast<Eigen::Index>(total));
    for (std::uint64_t k = 0; k < total; ++k) {
        std::vector<std::vector<std::int64_t>> counts(t.m, std::vector<std::int64_t>(cm.size.size(), 0));
        std::uint64_t r = k;
        for (std::size_t i = t.n(); i-- > 0;) {
            ++counts[r % t.m][cm.of_run[i]];
            r /= t.m;
        }
        diag(static_cast<Eigen::Index>(k)) = passes(counts, cm, static_cast<std::int64_t>(t.n()), p, q, test) ? 1.0 : 0.0;
    }
    PvmComparison out;
    out.pvm = psi.dot(diag.cast<std::complex<double>>().cwiseProduct(psi)).real();
    out.two_step = pass_probability(t, partition_sequences(t, epsilon, test));
    out.deviation = std::abs(out.pvm - out.two_step);
    out.equal = out.deviation < 1e-12;
    return out;
}

std::vector<SweepRow> veronika_sweep(const std::vector<std::complex<double>>& run, const std::vector<std::size_t>& ns,
                                     const Rational& epsilon, FrequencyTest test, std::size_t jobs) {
    std::vector<SweepRow> rows;
    for (std::size_t n : ns) {
        AmplitudeTable t = AmplitudeTable::repeated(run, balanced_settings(n));
        PassPartition part = partition_sequences(t, epsilon, test);
        SweepRow row;
        row.n = n;
        row.pass_count = part.pass_count;
        row.total = part.total;
        row.pass_probability = pass_probability(t, part, jobs);
        PostselectResult post = postselect(t, part);
        row.fidelity = post.fidelity;
        row.gamma_estimate = induced_discrepancy(sequence_state(t), post.state);
        PvmComparison pvm = pvm_variant_pass_probability(t, epsilon, test);
        row.pvm = pvm.pvm;
        row.pvm_deviation = pvm.deviation;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace lfkit
