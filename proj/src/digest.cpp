#include "promptvote/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace promptvote {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), raw.data(), &len, EVP_sha256(), nullptr);
  std::string out;
  out.reserve(len * 2);
  static const char* hex = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[raw[i] >> 4]);
    out.push_back(hex[raw[i] & 0xf]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view instance_id,
                          int run_index, std::string_view phase) {
  std::string key;
  key.reserve(instance_id.size() + phase.size() + 40);
  key += std::to_string(master);
  key += '|';
  key += instance_id;
  key += '|';
  key += std::to_string(run_index);
  key += '|';
  key += phase;
  return fnv1a64(key);
}

}  // namespace promptvote
