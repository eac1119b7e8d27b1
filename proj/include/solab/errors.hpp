#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solab {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset), message_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& bare_message() const noexcept { return message_; }

private:
    std::size_t offset_;
    std::string message_;
};

/// Evaluation left the domain of an elementary function (log of a non-positive value,
/// sqrt of a negative value, division by zero, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::string subexpression)
        : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class AsymmetricTensor : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Shape/variance/dimension mismatch between operands.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A vector field vanished where a decomposition needs it nonzero.
class ZeroVector : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class NonConstantNorm : public Error {
public:
    using Error::Error;
};

class NotTorsionFree : public Error {
public:
    using Error::Error;
};

/// A stated hypothesis of a structure (Vaisman data, ...) failed numerically.
class PremiseViolated : public Error {
public:
    PremiseViolated(std::string premise, std::string detail)
        : Error("premise '" + premise + "' violated: " + detail), premise_(std::move(premise)) {}

    const std::string& premise() const noexcept { return premise_; }

private:
    std::string premise_;
};

class NotTorseForming : public Error {
public:
    NotTorseForming(const std::string& message, double residual) : Error(message), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NotEtaUmbilical : public Error {
public:
    using Error::Error;
};

class UnknownEntry : public Error {
public:
    using Error::Error;
};

class ParamOutOfRange : public Error {
public:
    using Error::Error;
};

/// Bad geometry file or inconsistent option set. Carries line/column when known.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace solab
