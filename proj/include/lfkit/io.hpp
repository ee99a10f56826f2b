#ifndef LFKIT_IO_HPP
#define LFKIT_IO_HPP

#include "lfkit/audit.hpp"
#include "lfkit/distribution.hpp"
#include "lfkit/graph.hpp"
#include "lfkit/marginal.hpp"
#include "lfkit/quantum.hpp"
#include "lfkit/scm.hpp"
#include "lfkit/veronika.hpp"

#include <string>
#include <vector>

namespace lfkit {

// JSON documents. Parsers throw ParseError on malformed input and on
// unknown fields.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

DirectedGraph parse_graph(const std::string& json);
std::string graph_to_json(const DirectedGraph& g);
DirectedGraph load_graph(const std::string& path);

ConditionalDistribution parse_distribution(const std::string& json);
std::string distribution_to_json(const ConditionalDistribution& d);
ConditionalDistribution load_distribution(const std::string& path);

/// Coefficients keyed "P(a,b|x,y)" and "P(a,c|x=1)", plus a bound.
Inequality parse_inequality(const std::string& json, const BoxShape& shape = {});
std::string inequality_to_json(const Inequality& f);
Inequality load_inequality(const std::string& path);

/// "pi/4", "-3pi/4", "0.5" and similar.
double parse_angle(const std::string& text);
MinimalLFModel parse_quantum_scenario(const std::string& json);
MinimalLFModel load_quantum_scenario(const std::string& path);

struct ProtocolConfig {
    std::size_t m = 2;
    std::vector<std::size_t> ns;
    std::vector<std::complex<double>> run;
    std::string source;  ///< "uniform", "quantum-charlie" or "explicit"
    std::string settings = "balanced";
    std::vector<std::pair<std::size_t, std::size_t>> explicit_settings;
    Rational epsilon{1, 4};
    FrequencyTest test = FrequencyTest::Max;
};

ProtocolConfig parse_protocol(const std::string& json);
ProtocolConfig load_protocol(const std::string& path);

FunctionalModel parse_model(const std::string& json);
FunctionalModel load_model(const std::string& path);

std::vector<CIStatement> parse_ci_list(const std::string& json);
std::vector<CIStatement> load_ci_list(const std::string& path);

}  // namespace lfkit

#endif  // LFKIT_IO_HPP
