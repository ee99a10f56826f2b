#ifndef LFKIT_ERROR_HPP
#define LFKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lfkit {

/** Base class of every exception thrown by the toolkit. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Malformed graph construction or an unknown node label. */
class GraphError : public Error {
public:
    explicit GraphError(const std::string& what) : Error(what) {}
};

/** Invalid path, latent node in a separation query, or mixed criteria. */
class SeparationError : public Error {
public:
    explicit SeparationError(const std::string& what) : Error(what) {}
};

/** Table that is not a conditional distribution, or an unknown variable. */
class DistributionError : public Error {
public:
    explicit DistributionError(const std::string& what) : Error(what) {}
};

/** Malformed linear system. */
class LinearSystemError : public Error {
public:
    explicit LinearSystemError(const std::string& what) : Error(what) {}
};

/** Shared marginal of P(ab|xy) and P(ac|x=1) disagrees. */
class InconsistentMarginalError : public Error {
public:
    explicit InconsistentMarginalError(const std::string& what) : Error(what) {}
};

/** Input violates no-signaling where no-signaling is a precondition. */
class SignalingError : public Error {
public:
    explicit SignalingError(const std::string& what) : Error(what) {}
};

/** An enumeration or table would exceed a hard size guard. */
class SizeLimitError : public Error {
public:
    explicit SizeLimitError(const std::string& what) : Error(what) {}
};

/** Quantum model whose states, unitaries or effects break their invariants. */
class QuantumModelError : public Error {
public:
    explicit QuantumModelError(const std::string& what) : Error(what) {}
};

/** Unreadable or schema-violating input file or expression. */
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/** A derivation is missing one of its premises. */
class AuditError : public Error {
public:
    explicit AuditError(const std::string& what) : Error(what) {}
};

}  // namespace lfkit

#endif  // LFKIT_ERROR_HPP
