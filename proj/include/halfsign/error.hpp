#pragma once

#include <stdexcept>
#include <string>

namespace halfsign {

/// Rejected parameters or malformed input. The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced data that violates a mathematical guarantee
/// (Deligne bound, Hecke relations, ...). The CLI maps this to exit code 2.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace halfsign
