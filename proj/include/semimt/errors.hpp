#pragma once

#include <stdexcept>
#include <string>

namespace semimt {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    usage   = 2,  // bad flags, malformed config
    data    = 3,  // missing/malformed files, shape or vocabulary mismatches
    numeric = 4,  // non-finite values, divergence
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ErrorKind::usage, msg); }
[[noreturn]] inline void fail_data(const std::string& msg) { throw Error(ErrorKind::data, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(ErrorKind::numeric, msg); }

}  // namespace semimt
