#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aocgcn {

// Row-major so that a row is one node / one sample.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

enum class ErrorCode {
  Usage,
  MissingFile,
  IoError,
  MalformedRow,
  DuplicateSocCode,
  UnresolvedReference,
  DuplicateLabel,
  EmptyCorpus,
  MalformedVectorLine,
  DimensionMismatch,
  IsolatedNode,
  InvalidNode,
  ShapeMismatch,
  EmptyMask,
  NonFiniteLoss,
  DegenerateInput,
  EmptyEnsemble,
  TooFewLabels,
  LengthMismatch,
  Empty,
  PerplexityTooLarge,
  MissingArtifact,
};

// Process exit-code classes shared by the C API and the CLI.
enum class ErrorClass { Usage = 1, Data = 2, Numeric = 3 };

std::string_view error_code_name(ErrorCode code);
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  // Single line: "error=<Code> class=<usage|data|numeric> detail=<text>"
  std::string reason() const;

 private:
  ErrorCode code_;
  std::string detail_;
};

// Seeded generator with library-independent uniform draws, so that runs with
// the same seed reproduce across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double normal();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derive an independent stream seed from a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

bool all_finite(const Matrix& m);

}  // namespace aocgcn
