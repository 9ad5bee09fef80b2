#include "cwknn/error.hpp"

namespace cwknn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WrongMagic: return "WrongMagic";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::ZeroDim: return "ZeroDim";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyPatch: return "EmptyPatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::DegenerateZero: return "DegenerateZero";
    case ErrorCode::NotEnoughNeighbors: return "NotEnoughNeighbors";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::TemplateCountMismatch: return "TemplateCountMismatch";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ConfigTooDeep: return "ConfigTooDeep";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::CacheConfigMismatch: return "CacheConfigMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace cwknn
