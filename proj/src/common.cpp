#include "aocgcn/common.hpp"

#include <cmath>

namespace aocgcn {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DuplicateSocCode: return "DuplicateSocCode";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MalformedVectorLine: return "MalformedVectorLine";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::TooFewLabels: return "TooFewLabels";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::PerplexityTooLarge: return "PerplexityTooLarge";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return ErrorClass::Usage;
    case ErrorCode::NonFiniteLoss:
    case ErrorCode::DegenerateInput:
    case ErrorCode::PerplexityTooLarge:
      return ErrorClass::Numeric;
    default:
      return ErrorClass::Data;
  }
}

std::string Error::reason() const {
  std::string cls;
  switch (error_class(code_)) {
    case ErrorClass::Usage: cls = "usage"; break;
    case ErrorClass::Data: cls = "data"; break;
    case ErrorClass::Numeric: cls = "numeric"; break;
  }
  std::string flat = detail_;
  for (auto& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return "error=" + std::string(error_code_name(code_)) + " class=" + cls + " detail=" + flat;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace aocgcn
