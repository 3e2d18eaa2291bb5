#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace promptvote {

/// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

/// FNV-1a 64-bit. Used for seed derivation, not for content addressing.
std::uint64_t fnv1a64(std::string_view data);

/// Stable sub-seed for one (instance, run, phase) triple.
std::uint64_t derive_seed(std::uint64_t master, std::string_view instance_id,
                          int run_index, std::string_view phase);

}  // namespace promptvote
