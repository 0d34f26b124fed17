#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

inline bool rel_close(double a, double b, double tol) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * (scale > 0 ? scale : 1.0);
}

inline std::filesystem::path data_dir() { return GEOSCHED_DATA_DIR; }

/// A scratch directory unique to the test case, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("geosched-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
