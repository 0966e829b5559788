#ifndef LDP_ERRORS_HPP
#define LDP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ldp {

/// Bad user-supplied data: malformed files, unknown link ids, out-of-range
/// parameters. Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A problem instance exceeds a configured exhaustive-enumeration cap.
/// Maps to exit code 2 in the CLI.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Random generation could not satisfy geometric constraints within the
/// retry budget. Carries diagnostics about what failed.
class GenerationError : public InputError {
public:
    explicit GenerationError(const std::string& what) : InputError(what) {}
};

/// An internal invariant was violated (a bug, not bad input).
/// Maps to exit code 3 in the CLI.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace ldp

#endif // LDP_ERRORS_HPP
