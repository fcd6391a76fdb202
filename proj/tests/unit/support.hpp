#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/csv.hpp"

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace testing {

inline std::filesystem::path fixture_dir() { return AOCGCN_DATA_DIR; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("aocgcn_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& text) const {
    aocgcn::csv::write_text(path_ / name, text);
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

template <typename Fn>
aocgcn::ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const aocgcn::Error& e) {
    return e.code();
  }
  FAIL("expected an aocgcn::Error");
  return aocgcn::ErrorCode::Usage;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

}  // namespace testing
