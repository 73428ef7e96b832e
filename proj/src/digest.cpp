#include "netputsim/digest.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iterator>

#include "netputsim/error.hpp"

namespace netputsim {

void Fnv1a::update(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  // Field separator so ("ab","c") and ("a","bc") differ.
  state_ ^= 0xff;
  state_ *= 0x100000001b3ULL;
}

std::string Fnv1a::hex() const { return fmt::format("{:016x}", state_); }

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Fnv1a h;
  h.update(bytes);
  return "fnv1a64:" + h.hex();
}

}  // namespace netputsim
