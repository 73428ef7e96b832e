#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace netputsim {

// 64-bit FNV-1a; used for schema fingerprints and input-file digests in
// output metadata, not for anything security related.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string file_digest(const std::filesystem::path& path);

}  // namespace netputsim
