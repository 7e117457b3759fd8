#pragma once

#include <stdexcept>
#include <string>

namespace viewscore {

enum class ErrorKind {
    Parse,       // malformed input syntax
    Validation,  // structurally valid input violating an invariant
    Domain,      // argument outside an operation's domain
    Usage,       // bad CLI flags / contradictory configuration
    Io,          // file system failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_parse(std::string msg) { throw Error(ErrorKind::Parse, std::move(msg)); }
[[noreturn]] inline void throw_validation(std::string msg) { throw Error(ErrorKind::Validation, std::move(msg)); }
[[noreturn]] inline void throw_domain(std::string msg) { throw Error(ErrorKind::Domain, std::move(msg)); }
[[noreturn]] inline void throw_usage(std::string msg) { throw Error(ErrorKind::Usage, std::move(msg)); }
[[noreturn]] inline void throw_io(std::string msg) { throw Error(ErrorKind::Io, std::move(msg)); }

} // namespace viewscore
