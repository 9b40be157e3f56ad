#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "lexcase/error.hpp"
#include "lexcase/textprep.hpp"
#include "lexcase/random.hpp"

namespace support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    lexcase::Rng rng(lexcase::fnv1a(tag) ^ ++counter);
    path_ = std::filesystem::temp_directory_path() / ("lexcase-" + tag + "-" + std::to_string(rng.next() % 1000000000));
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

 private:
  std::filesystem::path path_;
};

/// Code of the lexcase::Error thrown by `f`, or nullopt if it returns.
template <class F>
std::optional<lexcase::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const lexcase::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline const lexcase::textprep::PrepConfig& stage1() {
  static const auto cfg = lexcase::textprep::PrepConfig::load(lexcase::textprep::Stage::stage1,
                                                              lexcase::textprep::resolve_data_dir());
  return cfg;
}

inline const lexcase::textprep::PrepConfig& stage2() {
  static const auto cfg = lexcase::textprep::PrepConfig::load(lexcase::textprep::Stage::stage2,
                                                              lexcase::textprep::resolve_data_dir());
  return cfg;
}

inline std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace support
