#ifndef CSYNC_ERRORS_HPP
#define CSYNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csync {

// Malformed input files, alphabet mismatches and violated preconditions.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A reduction gadget was asked to build an instance whose theorem
// hypotheses do not hold; the message names the failing clause.
class HypothesisError : public InputError {
public:
    explicit HypothesisError(const std::string& what) : InputError(what) {}
};

// A configured state cap (subset construction, solver search space,
// enumeration bound) was exceeded.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check of the classifier failed. This is always
// a bug in the engine, never a property of the input.
class EngineError : public std::logic_error {
public:
    explicit EngineError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace csync

#endif
