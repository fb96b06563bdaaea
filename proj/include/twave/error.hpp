#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twave {

enum class ErrorCode {
    syntax,
    domain,
    oscillating_limit,
    fit_failed,
    infinite_h0,
    no_asymptotics,
    step_failure,
    bound_violation,
    no_existence,
    bracket_failure,
    undecidable_tail,
    inconsistent_endpoint,
    invalid_argument,
    config
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string token, const std::string& msg)
        : Error(ErrorCode::syntax, msg), offset_(offset), token_(std::move(token)) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t offset_;
    std::string token_;
};

} // namespace twave
