#pragma once

// Binary checkpoints (little-endian):
//   "VELA0001" | version u32 | dim u32 | n u32 | length f64 | t f64 |
//   gamma f64 | mu f64 | mode u8 | 7 reserved bytes
// followed by rho, the u components and the E components (row-major), each a
// contiguous f64 array in x-fastest order.

#include <cstdint>
#include <optional>
#include <string>

#include "vela/dynamics.hpp"

namespace vela {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 60;

struct Checkpoint {
  State state;
  double gamma = 2.0;
  double mu = 0.1;
  Mode mode = Mode::incompressible;
};

std::string encode_checkpoint(const Checkpoint& c);
/// Throws CheckpointError on short read, bad magic, version mismatch or, when
/// `expected_dim` is given, a dimension mismatch.
Checkpoint decode_checkpoint(const std::string& bytes, std::optional<int> expected_dim = std::nullopt);

void write_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint read_checkpoint(const std::string& path, std::optional<int> expected_dim = std::nullopt);

}  // namespace vela
