#pragma once

#include <stdexcept>
#include <string>

namespace cusp {

/// Malformed or inconsistent group, scene, or embedding data.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A query asks for more than the finite ball can certify.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cusp
