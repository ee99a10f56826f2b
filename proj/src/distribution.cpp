#include "lfkit/distribution.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lfkit {

std::size_t radix_size(const std::vector<VariableSpec>& vars) {
    std::size_t n = 1;
    for (const auto& v : vars) {
        if (v.cardinality == 0) throw DistributionError("variable '" + v.label + "' has cardinality 0");
        n *= v.cardinality;
    }
    return n;
}

namespace {

std::vector<std::size_t> decode(const std::vector<VariableSpec>& vars, std::size_t index) {
    std::vector<std::size_t> values(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
        values[i] = index % vars[i].cardinality;
        index /= vars[i].cardinality;
    }
    return values;
}

std::size_t encode(const std::vector<VariableSpec>& vars, const std::vector<std::size_t>& values) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (values.at(i) >= vars[i].cardinality) throw DistributionError("value out of range for '" + vars[i].label + "'");
        index = index * vars[i].cardinality + values[i];
    }
    return index;
}

void check_labels(const std::vector<VariableSpec>& outcomes, const std::vector<VariableSpec>& settings) {
    std::set<std::string> seen;
    for (const auto* list : {&outcomes, &settings}) {
        for (const auto& v : *list) {
            if (!seen.insert(v.label).second) throw DistributionError("duplicate variable '" + v.label + "'");
        }
    }
}

}  // namespace

void ConditionalDistribution::init_shape() {
    check_labels(outcomes_, settings_);
    for (auto& v : outcomes_) v.role = VariableRole::Outcome;
    for (auto& v : settings_) v.role = VariableRole::Setting;
    outcome_count_ = radix_size(outcomes_);
    context_count_ = radix_size(settings_);
}

ConditionalDistribution ConditionalDistribution::exact(std::vector<VariableSpec> outcomes,
                                                       std::vector<VariableSpec> settings,
                                                       std::vector<Rational> table) {
    ConditionalDistribution d;
    d.outcomes_ = std::move(outcomes);
    d.settings_ = std::move(settings);
    d.init_shape();
    if (table.size() != d.outcome_count_ * d.context_count_) {
        throw DistributionError("table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(d.outcome_count_ * d.context_count_));
    }
    for (std::size_t c = 0; c < d.context_count_; ++c) {
        Rational sum = 0;
        for (std::size_t o = 0; o < d.outcome_count_; ++o) {
            const Rational& p = table[c * d.outcome_count_ + o];
            if (p < 0) throw DistributionError("negative entry in context " + std::to_string(c));
            sum += p;
        }
        if (sum != 1) throw DistributionError("context " + std::to_string(c) + " sums to " + to_string(sum));
    }
    d.approx_.reserve(table.size());
    for (const auto& p : table) d.approx_.push_back(to_double(p));
    d.exact_ = std::move(table);
    return d;
}

ConditionalDistribution ConditionalDistribution::approximate(std::vector<VariableSpec> outcomes,
                                                             std::vector<VariableSpec> settings,
                                                             std::vector<double> table, double tolerance) {
    ConditionalDistribution d;
    d.outcomes_ = std::move(outcomes);
    d.settings_ = std::move(settings);
    d.init_shape();
    if (table.size() != d.outcome_count_ * d.context_count_) {
        throw DistributionError("table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(d.outcome_count_ * d.context_count_));
    }
    for (std::size_t c = 0; c < d.context_count_; ++c) {
        double sum = 0;
        for (std::size_t o = 0; o < d.outcome_count_; ++o) {
            double p = table[c * d.outcome_count_ + o];
            if (!std::isfinite(p) || p < -tolerance) throw DistributionError("negative entry in context " + std::to_string(c));
            sum += p;
        }
        if (std::abs(sum - 1) > tolerance) {
            throw DistributionError("context " + std::to_string(c) + " sums to " + std::to_string(sum));
        }
    }
    d.approx_ = std::move(table);
    return d;
}

const std::vector<Rational>& ConditionalDistribution::exact_table() const {
    if (!is_exact()) throw DistributionError("distribution is approximate; rationalize it first");
    return exact_;
}

const Rational& ConditionalDistribution::exact_at(std::size_t ctx, std::size_t out) const {
    return exact_table().at(ctx * outcome_count_ + out);
}

std::size_t ConditionalDistribution::outcome_position(const std::string& label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i].label == label) return i;
    }
    throw DistributionError("unknown outcome variable '" + label + "'");
}

std::size_t ConditionalDistribution::setting_position(const std::string& label) const {
    for (std::size_t i = 0; i < settings_.size(); ++i) {
        if (settings_[i].label == label) return i;
    }
    throw DistributionError("unknown setting variable '" + label + "'");
}

std::vector<std::size_t> ConditionalDistribution::decode_outcome(std::size_t out) const { return decode(outcomes_, out); }
std::vector<std::size_t> ConditionalDistribution::decode_context(std::size_t ctx) const { return decode(settings_, ctx); }
std::size_t ConditionalDistribution::encode_outcome(const std::vector<std::size_t>& v) const { return encode(outcomes_, v); }
std::size_t ConditionalDistribution::encode_context(const std::vector<std::size_t>& v) const { return encode(settings_, v); }

ConditionalDistribution marginalize(const ConditionalDistribution& d, const std::vector<std::string>& keep) {
    std::vector<std::size_t> pos;
    std::vector<VariableSpec> kept;
    for (const auto& l : keep) {
        pos.push_back(d.outcome_position(l));
        kept.push_back(d.outcomes()[pos.back()]);
    }
    std::size_t n_out = radix_size(kept);
    std::vector<std::size_t> target(d.outcome_count());
    for (std::size_t o = 0; o < d.outcome_count(); ++o) {
        auto values = d.decode_outcome(o);
        std::vector<std::size_t> sub;
        for (auto p : pos) sub.push_back(values[p]);
        target[o] = encode(kept, sub);
    }
    if (d.is_exact()) {
        std::vector<Rational> t(n_out * d.context_count());
        for (std::size_t c = 0; c < d.context_count(); ++c) {
            for (std::size_t o = 0; o < d.outcome_count(); ++o) t[c * n_out + target[o]] += d.exact_at(c, o);
        }
        return ConditionalDistribution::exact(kept, d.settings(), std::move(t));
    }
    std::vector<double> t(n_out * d.context_count());
    for (std::size_t c = 0; c < d.context_count(); ++c) {
        for (std::size_t o = 0; o < d.outcome_count(); ++o) t[c * n_out + target[o]] += d.at(c, o);
    }
    return ConditionalDistribution::approximate(kept, d.settings(), std::move(t), 1e-9);
}

ConditionalDistribution restrict_setting(const ConditionalDistribution& d,
                                         const std::map<std::string, std::size_t>& assignment) {
    std::vector<VariableSpec> remaining;
    std::vector<std::optional<std::size_t>> fixed(d.settings().size());
    for (const auto& [label, value] : assignment) {
        std::size_t p = d.setting_position(label);
        if (value >= d.settings()[p].cardinality) {
            throw DistributionError("value " + std::to_string(value) + " out of range for setting '" + label + "'");
        }
        fixed[p] = value;
    }
    for (std::size_t i = 0; i < d.settings().size(); ++i) {
        if (!fixed[i]) remaining.push_back(d.settings()[i]);
    }
    std::size_t n_ctx = radix_size(remaining);
    std::vector<Rational> te;
    std::vector<double> ta;
    for (std::size_t c = 0; c < n_ctx; ++c) {
        auto sub = decode(remaining, c);
        std::vector<std::size_t> full;
        std::size_t k = 0;
        for (std::size_t i = 0; i < d.settings().size(); ++i) full.push_back(fixed[i] ? *fixed[i] : sub[k++]);
        std::size_t src = d.encode_context(full);
        for (std::size_t o = 0; o < d.outcome_count(); ++o) {
            if (d.is_exact()) te.push_back(d.exact_at(src, o));
            else ta.push_back(d.at(src, o));
        }
    }
    if (d.is_exact()) return ConditionalDistribution::exact(d.outcomes(), remaining, std::move(te));
    return ConditionalDistribution::approximate(d.outcomes(), remaining, std::move(ta), 1e-9);
}

ConditionalDistribution to_approximate(const ConditionalDistribution& d) {
    return ConditionalDistribution::approximate(d.outcomes(), d.settings(), d.table(), 1e-9);
}

SettingsPolicy SettingsPolicy::per_context(const ConditionalDistribution& d) {
    SettingsPolicy p;
    for (const auto& s : d.settings()) p.entries[s.label] = {Mode::PerContext, 0};
    return p;
}

namespace {

double abs_value(double x) { return std::abs(x); }
Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// Max deviation over the supported W values of one joint table.
template <typename T>
T ci_deviation(const std::vector<T>& joint, const std::vector<VariableSpec>& vars, const std::vector<std::size_t>& u,
               const std::vector<std::size_t>& v, const std::vector<std::size_t>& w) {
    auto sub_spec = [&](const std::vector<std::size_t>& idx) {
        std::vector<VariableSpec> s;
        for (auto i : idx) s.push_back(vars[i]);
        return s;
    };
    auto su = sub_spec(u), sv = sub_spec(v), sw = sub_spec(w);
    std::size_t nu = radix_size(su), nv = radix_size(sv), nw = radix_size(sw);
    std::vector<T> puvw(nu * nv * nw), pw(nw);
    for (std::size_t k = 0; k < joint.size(); ++k) {
        if (joint[k] == 0) continue;
        auto val = decode(vars, k);
        auto pick = [&](const std::vector<std::size_t>& idx, const std::vector<VariableSpec>& s) {
            std::vector<std::size_t> x;
            for (auto i : idx) x.push_back(val[i]);
            return encode(s, x);
        };
        std::size_t iu = pick(u, su), iv = pick(v, sv), iw = pick(w, sw);
        puvw[(iw * nu + iu) * nv + iv] += joint[k];
        pw[iw] += joint[k];
    }
    T worst = 0;
    for (std::size_t iw = 0; iw < nw; ++iw) {
        if (pw[iw] == 0) continue;
        std::vector<T> pu(nu), pv(nv);
        for (std::size_t iu = 0; iu < nu; ++iu) {
            for (std::size_t iv = 0; iv < nv; ++iv) {
                const T& p = puvw[(iw * nu + iu) * nv + iv];
                pu[iu] += p;
                pv[iv] += p;
            }
        }
        for (std::size_t iu = 0; iu < nu; ++iu) {
            for (std::size_t iv = 0; iv < nv; ++iv) {
                T lhs = puvw[(iw * nu + iu) * nv + iv] / pw[iw];
                T rhs = (pu[iu] / pw[iw]) * (pv[iv] / pw[iw]);
                T dev = abs_value(T(lhs - rhs));
                if (dev > worst) worst = dev;
            }
        }
    }
    return worst;
}

}  // namespace

CIResult ci_holds(const ConditionalDistribution& d, const std::vector<std::string>& u,
                  const std::vector<std::string>& v, const std::vector<std::string>& w,
                  const SettingsPolicy& policy, double tolerance) {
    std::set<std::string> seen;
    for (const auto* list : {&u, &v, &w}) {
        for (const auto& l : *list) {
            if (!seen.insert(l).second) throw DistributionError("CI sets overlap at '" + l + "'");
        }
    }
    if (u.empty() || v.empty()) throw DistributionError("CI sides must be nonempty");

    using Mode = SettingsPolicy::Mode;
    std::vector<SettingsPolicy::Entry> modes(d.settings().size());
    for (const auto& [label, entry] : policy.entries) {
        std::size_t p = d.setting_position(label);
        if (entry.mode == Mode::Fixed && entry.value >= d.settings()[p].cardinality) {
            throw DistributionError("fixed value out of range for '" + label + "'");
        }
        modes[p] = entry;
    }

    // Joint variables: all outcomes, then folded settings.
    std::vector<VariableSpec> vars = d.outcomes();
    std::vector<std::size_t> folded, split;
    for (std::size_t i = 0; i < d.settings().size(); ++i) {
        if (modes[i].mode == Mode::Uniform) {
            folded.push_back(i);
            vars.push_back(d.settings()[i]);
        } else if (modes[i].mode == Mode::PerContext) {
            split.push_back(i);
        }
    }
    auto position = [&](const std::string& label) -> std::size_t {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i].label == label) return i;
        }
        d.setting_position(label);  // throws for unknown labels
        throw DistributionError("setting '" + label + "' must be folded uniformly to appear in a CI statement");
    };
    std::vector<std::size_t> iu, iv, iw;
    for (const auto& l : u) iu.push_back(position(l));
    for (const auto& l : v) iv.push_back(position(l));
    for (const auto& l : w) iw.push_back(position(l));

    std::vector<VariableSpec> split_spec, folded_spec;
    for (auto i : split) split_spec.push_back(d.settings()[i]);
    for (auto i : folded) folded_spec.push_back(d.settings()[i]);
    std::size_t n_split = radix_size(split_spec), n_fold = radix_size(folded_spec);

    CIResult result;
    Rational worst_exact = 0;
    double worst = 0;
    for (std::size_t s = 0; s < n_split; ++s) {
        auto sv = decode(split_spec, s);
        std::vector<Rational> je;
        std::vector<double> ja;
        std::size_t n_joint = d.outcome_count() * n_fold;
        if (d.is_exact()) je.assign(n_joint, 0);
        else ja.assign(n_joint, 0);
        for (std::size_t f = 0; f < n_fold; ++f) {
            auto fv = decode(folded_spec, f);
            std::vector<std::size_t> full(d.settings().size());
            for (std::size_t i = 0; i < split.size(); ++i) full[split[i]] = sv[i];
            for (std::size_t i = 0; i < folded.size(); ++i) full[folded[i]] = fv[i];
            for (std::size_t i = 0; i < d.settings().size(); ++i) {
                if (modes[i].mode == Mode::Fixed) full[i] = modes[i].value;
            }
            std::size_t ctx = d.encode_context(full);
            for (std::size_t o = 0; o < d.outcome_count(); ++o) {
                std::size_t k = o * n_fold + f;
                if (d.is_exact()) je[k] = d.exact_at(ctx, o) / Rational(n_fold);
                else ja[k] = d.at(ctx, o) / static_cast<double>(n_fold);
            }
        }
        if (d.is_exact()) {
            Rational dev = ci_deviation(je, vars, iu, iv, iw);
            if (dev > worst_exact) worst_exact = dev;
        } else {
            worst = std::max(worst, ci_deviation(ja, vars, iu, iv, iw));
        }
    }
    if (d.is_exact()) {
        result.exact_deviation = worst_exact;
        result.deviation = to_double(worst_exact);
        result.holds = tolerance == 0 ? worst_exact == 0 : result.deviation <= tolerance;
    } else {
        result.deviation = worst;
        result.holds = worst <= tolerance;
    }
    return result;
}

namespace boxes {

std::vector<VariableSpec> ab_outcomes() { return {{"A", 2, VariableRole::Outcome}, {"B", 2, VariableRole::Outcome}}; }
std::vector<VariableSpec> xy_settings() { return {{"X", 2, VariableRole::Setting}, {"Y", 2, VariableRole::Setting}}; }

ConditionalDistribution pr_box() {
    std::vector<Rational> t(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) t[(x * 2 + y) * 4 + a * 2 + b] = ((a ^ b) == (x & y)) ? Rational(1, 2) : Rational(0);
    return ConditionalDistribution::exact(ab_outcomes(), xy_settings(), t);
}

ConditionalDistribution tsirelson_box() {
    std::vector<double> t(16);
    const double e = std::sqrt(2.0) / 2;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double corr = (x & y) ? -e : e;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) t[(x * 2 + y) * 4 + a * 2 + b] = (1 + (a == b ? corr : -corr)) / 4;
        }
    return ConditionalDistribution::approximate(ab_outcomes(), xy_settings(), t, 1e-12);
}

ConditionalDistribution lhv_deterministic(unsigned index) {
    if (index >= 16) throw DistributionError("lhv_deterministic index must be in [0, 16)");
    std::vector<Rational> t(16);
    for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y) {
            unsigned a = (index >> x) & 1u;
            unsigned b = (index >> (2 + y)) & 1u;
            t[(x * 2 + y) * 4 + a * 2 + b] = 1;
        }
    return ConditionalDistribution::exact(ab_outcomes(), xy_settings(), t);
}

ConditionalDistribution white_noise() {
    return ConditionalDistribution::exact(ab_outcomes(), xy_settings(), std::vector<Rational>(16, Rational(1, 4)));
}

ConditionalDistribution mixture(const std::vector<ConditionalDistribution>& parts, const std::vector<Rational>& weights) {
    if (parts.empty() || parts.size() != weights.size()) throw DistributionError("mixture needs one weight per part");
    Rational total = 0;
    for (const auto& w : weights) {
        if (w < 0) throw DistributionError("negative mixture weight");
        total += w;
    }
    if (total != 1) throw DistributionError("mixture weights sum to " + to_string(total));
    bool exact = true;
    for (const auto& p : parts) {
        if (p.outcomes() != parts[0].outcomes() || p.settings() != parts[0].settings()) {
            throw DistributionError("mixture parts have different shapes");
        }
        exact = exact && p.is_exact();
    }
    std::size_t n = parts[0].table().size();
    if (exact) {
        std::vector<Rational> t(n);
        for (std::size_t k = 0; k < parts.size(); ++k)
            for (std::size_t i = 0; i < n; ++i) t[i] += weights[k] * parts[k].exact_table()[i];
        return ConditionalDistribution::exact(parts[0].outcomes(), parts[0].settings(), t);
    }
    std::vector<double> t(n);
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) t[i] += to_double(weights[k]) * parts[k].table()[i];
    return ConditionalDistribution::approximate(parts[0].outcomes(), parts[0].settings(), t, 1e-9);
}

ConditionalDistribution named_box(const std::string& name) {
    if (name == "pr_box") return pr_box();
    if (name == "tsirelson_box") return tsirelson_box();
    if (name == "white_noise") return white_noise();
    const std::string prefix = "lhv_deterministic(";
    if (name.rfind(prefix, 0) == 0 && name.back() == ')') {
        std::string arg = name.substr(prefix.size(), name.size() - prefix.size() - 1);
        try {
            return lhv_deterministic(static_cast<unsigned>(std::stoul(arg)));
        } catch (const std::logic_error&) {
            throw DistributionError("bad lhv_deterministic index '" + arg + "'");
        }
    }
    throw DistributionError("unknown box '" + name + "'");
}

}  // namespace boxes

namespace {

void require_chsh_shape(const ConditionalDistribution& d) {
    if (d.outcomes().size() != 2 || d.settings().size() != 2 || d.outcome_count() != 4 || d.context_count() != 4) {
        throw DistributionError("CHSH needs binary outcomes A, B and binary settings X, Y");
    }
}

template <typename T, typename Get>
T chsh_sum(Get get) {
    T s = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    bool agree = a == b;
                    if (agree != (x == 1 && y == 1)) s += get(x * 2 + y, a * 2 + b);
                }
    return s;
}

template <typename T, typename Get>
T ns_deviation(const ConditionalDistribution& d, Get get) {
    if (d.outcomes().size() != 2 || d.settings().size() != 2) {
        throw DistributionError("no-signaling check needs a bipartite box P(ab|xy)");
    }
    std::size_t na = d.outcomes()[0].cardinality, nb = d.outcomes()[1].cardinality;
    std::size_t nx = d.settings()[0].cardinality, ny = d.settings()[1].cardinality;
    T worst = 0;
    auto pa = [&](std::size_t x, std::size_t y, std::size_t a) {
        T s = 0;
        for (std::size_t b = 0; b < nb; ++b) s += get(x * ny + y, a * nb + b);
        return s;
    };
    auto pb = [&](std::size_t x, std::size_t y, std::size_t b) {
        T s = 0;
        for (std::size_t a = 0; a < na; ++a) s += get(x * ny + y, a * nb + b);
        return s;
    };
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 1; y < ny; ++y)
            for (std::size_t a = 0; a < na; ++a) {
                T dev = abs_value(T(pa(x, y, a) - pa(x, 0, a)));
                if (dev > worst) worst = dev;
            }
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 1; x < nx; ++x)
            for (std::size_t b = 0; b < nb; ++b) {
                T dev = abs_value(T(pb(x, y, b) - pb(0, y, b)));
                if (dev > worst) worst = dev;
            }
    return worst;
}

}  // namespace

Rational chsh_value_exact(const ConditionalDistribution& d) {
    require_chsh_shape(d);
    return chsh_sum<Rational>([&](std::size_t c, std::size_t o) { return d.exact_at(c, o); });
}

double chsh_value(const ConditionalDistribution& d) {
    require_chsh_shape(d);
    return chsh_sum<double>([&](std::size_t c, std::size_t o) { return d.at(c, o); });
}

Rational no_signaling_deviation_exact(const ConditionalDistribution& d) {
    return ns_deviation<Rational>(d, [&](std::size_t c, std::size_t o) { return d.exact_at(c, o); });
}

double no_signaling_deviation(const ConditionalDistribution& d) {
    return ns_deviation<double>(d, [&](std::size_t c, std::size_t o) { return d.at(c, o); });
}

}  // namespace lfkit
