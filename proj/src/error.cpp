#include "netsel/error.hpp"

namespace netsel {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidEdge: return "InvalidEdge";
        case ErrorCode::InvalidNode: return "InvalidNode";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::UndefinedFeature: return "UndefinedFeature";
        case ErrorCode::UndefinedBayesFactor: return "UndefinedBayesFactor";
        case ErrorCode::UndefinedPosterior: return "UndefinedPosterior";
        case ErrorCode::DegenerateRatio: return "DegenerateRatio";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace netsel
