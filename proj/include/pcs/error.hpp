#ifndef PCS_ERROR_HPP
#define PCS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pcs {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (formula, DIMACS, CSV, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A formula or configuration references something outside its model,
/// or a type invariant would be violated (empty clause, bad name, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Intermediate clause count exceeded the configured cap during a
/// DNF transformation. Carries the origin tag of the offending condition.
class BlowupError : public Error {
public:
    BlowupError(const std::string& origin, std::size_t cap)
        : Error("dnf clause blow-up exceeds cap " + std::to_string(cap) +
                " while transforming " + (origin.empty() ? "<unknown>" : origin)),
          origin_(origin) {}
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
};

/// A satisfiability query exceeded its per-query time budget.
class TimeoutError : public Error {
public:
    using Error::Error;
};

/// The number of t-wise interactions exceeds the configured cap.
class CapError : public Error {
public:
    using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure, message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Brute-force oracle refused an instance it cannot enumerate.
class InstanceTooLargeError : public Error {
public:
    using Error::Error;
};

} // namespace pcs

#endif
