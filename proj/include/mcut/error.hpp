#pragma once

#include <stdexcept>
#include <string>

namespace mcut {

// Error taxonomy maps onto CLI exit codes: Input -> 2, Verify -> 1,
// Internal -> 1 (a bug, never expected on valid inputs).
enum class ErrorKind { Input, Verify, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& msg) { throw Error(ErrorKind::Input, msg); }
[[noreturn]] inline void throw_verify(const std::string& msg) { throw Error(ErrorKind::Verify, msg); }
[[noreturn]] inline void throw_internal(const std::string& msg) { throw Error(ErrorKind::Internal, msg); }

}  // namespace mcut
