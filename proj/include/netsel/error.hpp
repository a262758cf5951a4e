#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netsel {

enum class ErrorCode {
    InvalidEdge,
    InvalidNode,
    ParseError,
    InvalidSpec,
    InvalidInput,
    UndefinedFeature,
    UndefinedBayesFactor,
    UndefinedPosterior,
    DegenerateRatio,
    Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C layer can translate it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace netsel
