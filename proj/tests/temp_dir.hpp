// Self-deleting scratch directory for tests that touch the filesystem.
#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

class TempDir {
 public:
  TempDir() {
    std::random_device entropy;
    const std::string name = "oodlab-test-" + std::to_string(entropy()) +
                             std::to_string(entropy());
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
