#pragma once

#include <stdexcept>
#include <string>

namespace contraction_lab {

/// Caller supplied something outside an operation's contract.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Two sub-results that must agree did not (signals an estimator bug).
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace contraction_lab
