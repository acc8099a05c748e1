#pragma once

#include <stdexcept>
#include <string>

namespace sctk {

/** Error categories; the CLI maps each category to a distinct exit code. */
enum class ErrorKind {
    usage = 1,       // bad arguments, malformed literals, unparseable config
    validation = 2,  // structurally invalid inputs (non-permutation, det != 1, ...)
    check_failed = 3,// a verification predicate did not hold
    io = 4,          // file system problems
    precision = 5,   // refinement cap reached without a decision
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) { return Error(ErrorKind::usage, msg); }
inline Error validation_error(const std::string& msg) { return Error(ErrorKind::validation, msg); }
inline Error check_error(const std::string& msg) { return Error(ErrorKind::check_failed, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorKind::io, msg); }
inline Error precision_error(const std::string& msg) { return Error(ErrorKind::precision, msg); }

} // namespace sctk
