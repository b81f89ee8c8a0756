#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>

#include "rl4im/qnet.hpp"

namespace rl4im {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary container, all integers and floats little-endian:
///   8 bytes  magic "RL4IMQN\0"
///   u32      version
///   u32      node feature width
///   u64 x 3  embed_dim, embed_iters, hidden
///   u64      parameter count
///   f64 x N  parameters in QNetworkParams layout order
void save_checkpoint(const QNetworkParams& params, const std::filesystem::path& path);

/// Throws CheckpointError on a bad magic/version, truncation, trailing bytes,
/// or (when `expected` is given) a shape different from the expected one.
QNetworkParams load_checkpoint(const std::filesystem::path& path,
                               std::optional<QNetworkShape> expected = std::nullopt);

}  // namespace rl4im
