#include "fourvertex/error.hpp"

namespace fourvertex {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::SlotReused: return "SlotReused";
    case ErrorCode::NotFourRegular: return "NotFourRegular";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::RotationIncomplete: return "RotationIncomplete";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::MismatchedDecomposition: return "MismatchedDecomposition";
    case ErrorCode::NotFerromagnetic: return "NotFerromagnetic";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::NoFerroReduction: return "NoFerroReduction";
    case ErrorCode::NotPlanarEmbedding: return "NotPlanarEmbedding";
    case ErrorCode::MissingOuterFace: return "MissingOuterFace";
    case ErrorCode::NotCanonicalLabeling: return "NotCanonicalLabeling";
    case ErrorCode::BetaAtMostOne: return "BetaAtMostOne";
    case ErrorCode::ArityTooLarge: return "ArityTooLarge";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

}  // namespace fourvertex
