#include "lfkit/io.hpp"

#include "lfkit/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lfkit {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

void expect_object(const json& j, const std::string& what, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ParseError(what + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError("unknown field '" + key + "' in " + what);
    }
}

const json& require(const json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing field '" + std::string(key) + "' in " + what);
    return *it;
}

template <class T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ParseError("wrong type for " + what);
    }
}

Rational rational_of(const json& j, const std::string& what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ParseError(what + " must be a \"p/q\" string or an integer");
}

std::complex<double> complex_of(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_string()) return {to_double(parse_rational(j.get<std::string>())), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError(what + " must be a number or a [re, im] pair");
}

std::vector<VariableSpec> variables_of(const json& j, VariableRole role, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be a list");
    std::vector<VariableSpec> out;
    for (const auto& v : j) {
        expect_object(v, what + " entry", {"label", "cardinality"});
        out.push_back({get_as<std::string>(require(v, "label", what), what + " label"),
                       get_as<std::size_t>(require(v, "cardinality", what), what + " cardinality"), role});
    }
    return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

DirectedGraph parse_graph(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "graph", {"nodes", "edges"});
    std::vector<NodeSpec> nodes;
    std::vector<Edge> edges;
    const json& jn = require(j, "nodes", "graph");
    if (!jn.is_array()) throw ParseError("graph nodes must be a list");
    for (const auto& n : jn) {
        expect_object(n, "node", {"label", "kind"});
        std::string kind = get_as<std::string>(require(n, "kind", "node"), "node kind");
        if (kind != "observed" && kind != "latent") throw ParseError("node kind must be observed or latent");
        nodes.push_back({get_as<std::string>(require(n, "label", "node"), "node label"),
                         kind == "latent" ? NodeKind::Latent : NodeKind::Observed});
    }
    if (j.contains("edges")) {
        const json& je = j["edges"];
        if (!je.is_array()) throw ParseError("graph edges must be a list");
        for (const auto& e : je) {
            expect_object(e, "edge", {"from", "to"});
            edges.emplace_back(get_as<std::string>(require(e, "from", "edge"), "edge from"),
                               get_as<std::string>(require(e, "to", "edge"), "edge to"));
        }
    }
    return DirectedGraph::build(nodes, edges);
}

std::string graph_to_json(const DirectedGraph& g) {
    json j;
    j["nodes"] = json::array();
    for (const auto& n : g.nodes())
        j["nodes"].push_back({{"label", n.label}, {"kind", n.kind == NodeKind::Latent ? "latent" : "observed"}});
    j["edges"] = json::array();
    for (const auto& [f, t] : g.edges()) j["edges"].push_back({{"from", f}, {"to", t}});
    return j.dump(2) + "\n";
}

DirectedGraph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

ConditionalDistribution parse_distribution(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "distribution", {"outcomes", "settings", "table", "approximate"});
    auto outcomes = variables_of(require(j, "outcomes", "distribution"), VariableRole::Outcome, "outcomes");
    std::vector<VariableSpec> settings;
    if (j.contains("settings")) settings = variables_of(j["settings"], VariableRole::Setting, "settings");
    bool approximate = j.value("approximate", false);
    const json& table = require(j, "table", "distribution");
    if (!table.is_array()) throw ParseError("table must be a list");
    if (approximate) {
        std::vector<double> t;
        for (const auto& v : table) t.push_back(complex_of(v, "table entry").real());
        return ConditionalDistribution::approximate(outcomes, settings, t);
    }
    std::vector<Rational> t;
    for (const auto& v : table) t.push_back(rational_of(v, "table entry"));
    return ConditionalDistribution::exact(outcomes, settings, t);
}

std::string distribution_to_json(const ConditionalDistribution& d) {
    json j;
    auto vars = [](const std::vector<VariableSpec>& vs) {
        json a = json::array();
        for (const auto& v : vs) a.push_back({{"label", v.label}, {"cardinality", v.cardinality}});
        return a;
    };
    j["outcomes"] = vars(d.outcomes());
    j["settings"] = vars(d.settings());
    j["table"] = json::array();
    if (d.is_exact()) {
        for (const auto& r : d.exact_table()) j["table"].push_back(to_string(r));
    } else {
        j["approximate"] = true;
        for (double v : d.table()) j["table"].push_back(v);
    }
    return j.dump(2) + "\n";
}

ConditionalDistribution load_distribution(const std::string& path) { return parse_distribution(read_text_file(path)); }

Inequality parse_inequality(const std::string& text, const BoxShape& shape) {
    json j = parse_json(text);
    expect_object(j, "inequality", {"coefficients", "bound"});
    Inequality f{shape, RationalVector(shape.ab_size()), RationalVector(shape.ac_size()), 0};
    for (auto& r : f.ab) r = 0;
    for (auto& r : f.ac) r = 0;
    f.bound = rational_of(require(j, "bound", "inequality"), "bound");
    const json& coeffs = require(j, "coefficients", "inequality");
    if (!coeffs.is_object()) throw ParseError("coefficients must be an object");
    for (const auto& [key, value] : coeffs.items()) {
        bool found = false;
        for (std::size_t x = 0; x < shape.x && !found; ++x)
            for (std::size_t y = 0; y < shape.y && !found; ++y)
                for (std::size_t a = 0; a < shape.a && !found; ++a)
                    for (std::size_t b = 0; b < shape.b && !found; ++b)
                        if (key == ab_key(a, b, x, y)) {
                            f.ab[shape.ab_index(x, y, a, b)] = rational_of(value, key);
                            found = true;
                        }
        for (std::size_t a = 0; a < shape.a && !found; ++a)
            for (std::size_t c = 0; c < shape.c && !found; ++c)
                if (key == ac_key(a, c)) {
                    f.ac[shape.ac_index(a, c)] = rational_of(value, key);
                    found = true;
                }
        if (!found) throw ParseError("unknown coefficient key '" + key + "'");
    }
    return f;
}

std::string inequality_to_json(const Inequality& f) {
    const BoxShape& s = f.shape;
    json coeffs = json::object();
    for (std::size_t x = 0; x < s.x; ++x)
        for (std::size_t y = 0; y < s.y; ++y)
            for (std::size_t a = 0; a < s.a; ++a)
                for (std::size_t b = 0; b < s.b; ++b) {
                    const Rational& v = f.ab[s.ab_index(x, y, a, b)];
                    if (v != 0) coeffs[ab_key(a, b, x, y)] = to_string(v);
                }
    for (std::size_t a = 0; a < s.a; ++a)
        for (std::size_t c = 0; c < s.c; ++c) {
            const Rational& v = f.ac[s.ac_index(a, c)];
            if (v != 0) coeffs[ac_key(a, c)] = to_string(v);
        }
    json j{{"coefficients", coeffs}, {"bound", to_string(f.bound)}};
    return j.dump(2) + "\n";
}

Inequality load_inequality(const std::string& path) { return parse_inequality(read_text_file(path)); }

double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '*') s += c;
    auto p = s.find("pi");
    if (p == std::string::npos) return to_double(parse_rational(s));
    std::string coef = s.substr(0, p);
    std::string rest = s.substr(p + 2);
    double k = 1;
    if (coef == "-") k = -1;
    else if (!coef.empty() && coef != "+") k = to_double(parse_rational(coef));
    double den = 1;
    if (!rest.empty()) {
        if (rest[0] != '/') throw ParseError("bad angle '" + text + "'");
        den = to_double(parse_rational(rest.substr(1)));
    }
    return k * std::numbers::pi / den;
}

namespace {

double angle_of(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_angle(j.get<std::string>());
    throw ParseError("angle must be a number or a string such as \"pi/4\"");
}

Eigen::MatrixXcd matrix_of(const json& j, std::size_t dim) {
    if (j.is_string()) {
        if (j.get<std::string>() == "cnot" && dim == 4) return cnot();
        if (j.get<std::string>() == "identity") return Eigen::MatrixXcd::Identity(static_cast<long>(dim), static_cast<long>(dim));
        throw ParseError("unknown gate '" + j.get<std::string>() + "'");
    }
    if (!j.is_array() || j.size() != dim) throw ParseError("unitary must be a " + std::to_string(dim) + "-row matrix");
    Eigen::MatrixXcd m(static_cast<long>(dim), static_cast<long>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        if (!j[r].is_array() || j[r].size() != dim) throw ParseError("unitary row has the wrong length");
        for (std::size_t c = 0; c < dim; ++c) m(static_cast<long>(r), static_cast<long>(c)) = complex_of(j[r][c], "matrix entry");
    }
    return m;
}

}  // namespace

MinimalLFModel parse_quantum_scenario(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "quantum scenario",
                  {"initial_state", "dims", "charlie", "charlie_inverse", "alice", "bob", "copy_setting", "tolerance"});
    MinimalLFModel m;
    if (j.contains("dims")) {
        expect_object(j["dims"], "dims", {"bob", "system", "memory"});
        m.bob_dim = j["dims"].value("bob", std::size_t{2});
        m.system_dim = j["dims"].value("system", std::size_t{2});
        m.memory_dim = j["dims"].value("memory", std::size_t{2});
    }
    const json& st = require(j, "initial_state", "quantum scenario");
    if (!st.is_array()) throw ParseError("initial_state must be a list");
    m.initial_state.resize(static_cast<long>(st.size()));
    for (std::size_t i = 0; i < st.size(); ++i) m.initial_state(static_cast<long>(i)) = complex_of(st[i], "amplitude");
    const std::size_t cm = m.system_dim * m.memory_dim;
    m.charlie = matrix_of(require(j, "charlie", "quantum scenario"), cm);
    m.charlie_inverse = j.contains("charlie_inverse") ? matrix_of(j["charlie_inverse"], cm) : Eigen::MatrixXcd(m.charlie.adjoint());
    for (const auto& a : require(j, "alice", "quantum scenario")) {
        expect_object(a, "alice setting", {"action", "angle"});
        std::string action = get_as<std::string>(require(a, "action", "alice setting"), "action");
        if (action == "copy") {
            m.alice.push_back({AliceAction::CopyCharlieMemory, {}});
        } else if (action == "reverse") {
            m.alice.push_back({AliceAction::ReverseThenMeasure, angle_measurement(angle_of(require(a, "angle", "alice setting")))});
        } else {
            throw ParseError("alice action must be copy or reverse");
        }
    }
    for (const auto& b : require(j, "bob", "quantum scenario")) {
        expect_object(b, "bob setting", {"angle"});
        m.bob.push_back(angle_measurement(angle_of(require(b, "angle", "bob setting"))));
    }
    m.copy_setting = j.value("copy_setting", std::size_t{1});
    m.tolerance = j.value("tolerance", 1e-12);
    m.validate();
    return m;
}

MinimalLFModel load_quantum_scenario(const std::string& path) { return parse_quantum_scenario(read_text_file(path)); }

ProtocolConfig parse_protocol(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "protocol", {"m", "n", "ns", "run", "source", "settings", "epsilon", "test"});
    ProtocolConfig p;
    p.m = j.value("m", std::size_t{2});
    if (j.contains("ns")) p.ns = get_as<std::vector<std::size_t>>(j["ns"], "ns");
    if (j.contains("n")) p.ns.push_back(get_as<std::size_t>(j["n"], "n"));
    if (p.ns.empty()) throw ParseError("protocol needs n or ns");
    if (j.contains("run")) {
        for (const auto& a : j["run"]) p.run.push_back(complex_of(a, "run amplitude"));
        p.source = "explicit";
        if (p.run.size() != p.m) throw ParseError("run amplitude count differs from m");
    } else {
        p.source = j.value("source", std::string("uniform"));
        if (p.source == "uniform") {
            p.run = uniform_run(p.m);
        } else if (p.source == "quantum-charlie") {
            if (p.m != 2) throw ParseError("quantum-charlie source has m = 2");
            for (double q : run_minimal_lf(tsirelson_model()).charlie_marginal) p.run.emplace_back(std::sqrt(q), 0.0);
        } else {
            throw ParseError("unknown run source '" + p.source + "'");
        }
    }
    if (j.contains("settings")) {
        if (j["settings"].is_string()) {
            p.settings = j["settings"].get<std::string>();
            if (p.settings != "balanced") throw ParseError("unknown settings '" + p.settings + "'");
        } else {
            p.settings = "explicit";
            for (const auto& s : j["settings"]) {
                auto v = get_as<std::vector<std::size_t>>(s, "setting pair");
                if (v.size() != 2) throw ParseError("setting pair must have two entries");
                p.explicit_settings.emplace_back(v[0], v[1]);
            }
        }
    }
    if (j.contains("epsilon")) p.epsilon = rational_of(j["epsilon"], "epsilon");
    std::string test = j.value("test", std::string("max"));
    if (test == "max") p.test = FrequencyTest::Max;
    else if (test == "pooled") p.test = FrequencyTest::Pooled;
    else throw ParseError("test must be max or pooled");
    return p;
}

ProtocolConfig load_protocol(const std::string& path) { return parse_protocol(read_text_file(path)); }

FunctionalModel parse_model(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "model", {"variables", "errors", "equations", "parents"});
    std::vector<EndogenousVariable> endo;
    for (const auto& v : require(j, "variables", "model")) {
        expect_object(v, "variable", {"name", "domain"});
        endo.push_back({get_as<std::string>(require(v, "name", "variable"), "name"), v.value("domain", std::size_t{2})});
    }
    std::vector<ErrorVariable> errs;
    if (j.contains("errors"))
        for (const auto& e : j["errors"]) {
            expect_object(e, "error term", {"name", "domain", "prior"});
            ErrorVariable ev{get_as<std::string>(require(e, "name", "error term"), "name"), e.value("domain", std::size_t{2}), {}};
            if (e.contains("prior"))
                for (const auto& p : e["prior"]) ev.prior.push_back(rational_of(p, "prior"));
            errs.push_back(std::move(ev));
        }
    std::vector<StructuralEquation> eqs;
    const json& je = require(j, "equations", "model");
    if (!je.is_object()) throw ParseError("equations must map variable names to expressions");
    for (const auto& [target, expr] : je.items())
        eqs.push_back({target, Expression::parse(get_as<std::string>(expr, "equation"))});
    std::map<std::string, LabelSet> parents;
    if (j.contains("parents"))
        for (const auto& [target, list] : j["parents"].items()) {
            auto v = get_as<std::vector<std::string>>(list, "parents");
            parents[target] = LabelSet(v.begin(), v.end());
        }
    return FunctionalModel::build(endo, errs, eqs, parents);
}

FunctionalModel load_model(const std::string& path) { return parse_model(read_text_file(path)); }

std::vector<CIStatement> parse_ci_list(const std::string& text) {
    json j = parse_json(text);
    expect_object(j, "CI list", {"statements", "settings_policy", "tolerance"});
    SettingsPolicy policy;
    if (j.contains("settings_policy")) {
        for (const auto& [label, mode] : j["settings_policy"].items()) {
            SettingsPolicy::Entry e;
            if (mode == "uniform") e.mode = SettingsPolicy::Mode::Uniform;
            else if (mode == "per_context") e.mode = SettingsPolicy::Mode::PerContext;
            else if (mode.is_object() && mode.contains("fixed")) {
                e.mode = SettingsPolicy::Mode::Fixed;
                e.value = get_as<std::size_t>(mode["fixed"], "fixed setting");
            } else {
                throw ParseError("settings policy for '" + label + "' must be uniform, per_context or {fixed: v}");
            }
            policy.entries[label] = e;
        }
    }
    double tol = j.value("tolerance", 0.0);
    std::vector<CIStatement> out;
    for (const auto& s : require(j, "statements", "CI list")) {
        CIStatement ci;
        if (s.is_string()) {
            ci = parse_ci(s.get<std::string>());
        } else {
            expect_object(s, "statement", {"ci", "note"});
            ci = parse_ci(get_as<std::string>(require(s, "ci", "statement"), "ci"));
            ci.note = s.value("note", std::string());
        }
        ci.policy = policy;
        ci.tolerance = tol;
        out.push_back(std::move(ci));
    }
    return out;
}

std::vector<CIStatement> load_ci_list(const std::string& path) { return parse_ci_list(read_text_file(path)); }

}  // namespace lfkit
