#pragma once

#include <stdexcept>
#include <string>

namespace kdsp {

/// Malformed input: bad vertex ids, self-loops, unparsable files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called with arguments violating its documented precondition.
class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A coloured path met a bi-coloured component in more than one stretch.
/// Impossible for well-formed shortest graphs; signals corrupted inputs.
class NonContiguousIntersection : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class StateBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EnumerationCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CyclicInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Disconnected : public std::invalid_argument {
public:
    Disconnected(unsigned s, unsigned t)
        : std::invalid_argument("vertices " + std::to_string(s) + " and " + std::to_string(t) +
                                " are not connected"),
          source(s), target(t) {}
    unsigned source;
    unsigned target;
};

/// Segment paths could not be chained back into a request path. Always a solver bug.
class AssemblyMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace kdsp
