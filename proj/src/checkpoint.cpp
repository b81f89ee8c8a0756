#include "rl4im/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace rl4im {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'L', '4', 'I', 'M', 'Q', 'N', '\0'};

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>(value >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw CheckpointError(path_.string() + ": truncated checkpoint");
    }
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return value;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const QNetworkParams& params, const std::filesystem::path& path) {
  std::vector<unsigned char> out(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kNodeFeatures));
  put_le<std::uint64_t>(out, params.shape().embed_dim);
  put_le<std::uint64_t>(out, params.shape().embed_iters);
  put_le<std::uint64_t>(out, params.shape().hidden);
  put_le<std::uint64_t>(out, params.size());
  for (double w : params.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(w));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CheckpointError("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw CheckpointError("write failed: " + path.string());
}

QNetworkParams load_checkpoint(const std::filesystem::path& path,
                               std::optional<QNetworkShape> expected) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CheckpointError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw CheckpointError(path.string() + ": not a Q-network checkpoint");
  }
  Reader r(bytes, path);
  for (std::size_t i = 0; i < kMagic.size(); ++i) r.get<std::uint8_t>();
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                          std::to_string(version));
  }
  const auto features = r.get<std::uint32_t>();
  if (features != kNodeFeatures) {
    throw CheckpointError(path.string() + ": node feature width " + std::to_string(features) +
                          " does not match " + std::to_string(kNodeFeatures));
  }
  QNetworkShape shape;
  shape.embed_dim = r.get<std::uint64_t>();
  shape.embed_iters = r.get<std::uint64_t>();
  shape.hidden = r.get<std::uint64_t>();
  if (expected && !(*expected == shape)) {
    throw CheckpointError(path.string() + ": shape mismatch, checkpoint has embed_dim=" +
                          std::to_string(shape.embed_dim) + " embed_iters=" +
                          std::to_string(shape.embed_iters) + " hidden=" +
                          std::to_string(shape.hidden) + ", expected embed_dim=" +
                          std::to_string(expected->embed_dim) + " embed_iters=" +
                          std::to_string(expected->embed_iters) + " hidden=" +
                          std::to_string(expected->hidden));
  }
  if (shape.embed_dim == 0 || shape.embed_iters == 0 || shape.hidden == 0 ||
      shape.embed_dim > 4096 || shape.hidden > 65536 || shape.embed_iters > 64) {
    throw CheckpointError(path.string() + ": implausible network shape");
  }
  QNetworkParams params(shape);
  const auto count = r.get<std::uint64_t>();
  if (count != params.size()) {
    throw CheckpointError(path.string() + ": parameter count " + std::to_string(count) +
                          " does not match shape (" + std::to_string(params.size()) + ")");
  }
  for (double& w : params.values()) w = std::bit_cast<double>(r.get<std::uint64_t>());
  if (!r.at_end()) throw CheckpointError(path.string() + ": trailing bytes after parameters");
  return params;
}

}  // namespace rl4im
