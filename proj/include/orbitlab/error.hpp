#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

enum class ErrorKind { invalid_input, hypothesis, numerical };

/// Base of every failure raised by the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};

struct HypothesisViolation : Error {
    explicit HypothesisViolation(const std::string& w) : Error(ErrorKind::hypothesis, w) {}
};

struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

}  // namespace orbitlab
