#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "concierge/catalog_store.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return std::filesystem::path(CONCIERGE_SOURCE_DIR) / "data"; }

inline const concierge::store::CatalogBundle& bundle() {
  static const auto b = concierge::store::load_bundle(data_dir());
  return b;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("concierge-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
