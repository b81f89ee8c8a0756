#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rl4im/graph.hpp"

namespace rl4im {

struct QNetworkShape {
  std::size_t embed_dim = 64;
  std::size_t embed_iters = 3;
  std::size_t hidden = 128;

  friend bool operator==(const QNetworkShape&, const QNetworkShape&) = default;
};

/// Per-node input: (abstracted state entry, 1).
inline constexpr std::size_t kNodeFeatures = 2;

/// All learnable weights of the Q-function in one flat buffer, so gradients,
/// Adam moments and checkpoints share the same layout.
///
/// Embedding, shared across iterations k = 1..K:
///   z0_v = lift f_v,                         mu0_v = relu(z0_v)
///   zk_v = lift f_v + neighbor * sum_{u~v} mu(k-1)_u + self * mu(k-1)_v
///   muk_v = relu(zk_v)
/// Readout for candidate a, with pooled = mean_v muK_v:
///   h = relu(hidden_pool * pooled + hidden_node * muK_a + hidden_bias)
///   Q = output . h + output_bias
class QNetworkParams {
 public:
  QNetworkParams() : QNetworkParams(QNetworkShape{}) {}
  /// All zeros.
  explicit QNetworkParams(const QNetworkShape& shape);
  /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per block; biases zero.
  static QNetworkParams initialize(const QNetworkShape& shape, std::uint64_t seed);

  const QNetworkShape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  bool all_finite() const;
  void set_zero();

  std::span<const double> lift() const { return block(0); }
  std::span<const double> neighbor() const { return block(1); }
  std::span<const double> self() const { return block(2); }
  std::span<const double> hidden_pool() const { return block(3); }
  std::span<const double> hidden_node() const { return block(4); }
  std::span<const double> hidden_bias() const { return block(5); }
  std::span<const double> output() const { return block(6); }
  double output_bias() const { return block(7)[0]; }

  std::span<double> lift() { return block(0); }
  std::span<double> neighbor() { return block(1); }
  std::span<double> self() { return block(2); }
  std::span<double> hidden_pool() { return block(3); }
  std::span<double> hidden_node() { return block(4); }
  std::span<double> hidden_bias() { return block(5); }
  std::span<double> output() { return block(6); }
  double& output_bias() { return block(7)[0]; }

  friend bool operator==(const QNetworkParams&, const QNetworkParams&) = default;

 private:
  static constexpr std::size_t kBlocks = 8;
  std::span<const double> block(std::size_t i) const {
    return {data_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<double> block(std::size_t i) {
    return {data_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  QNetworkShape shape_;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

/// Forward activations of the embedding for one (graph, state), kept for
/// readout of many candidates and for backpropagation.
struct EmbeddingCache {
  std::size_t nodes = 0;
  std::vector<double> features;   // nodes x kNodeFeatures
  std::vector<double> lifted;     // nodes x D, lift * f_v
  std::vector<double> pre;        // (K + 1) x nodes x D
  std::vector<double> post;       // (K + 1) x nodes x D
  std::vector<double> aggregated; // K x nodes x D, neighbor sums feeding iteration k
  std::vector<double> pooled;     // D
  std::vector<double> pooled_hidden;  // hidden_pool * pooled + hidden_bias
};

void embed(const QNetworkParams& params, const Graph& graph, std::span<const double> state,
           EmbeddingCache& cache);

double readout(const QNetworkParams& params, const EmbeddingCache& cache, NodeId candidate);

/// Q-value of each candidate, in candidate order. Throws
/// std::invalid_argument on a state/graph size mismatch or bad candidate.
std::vector<double> q_values(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, std::span<const NodeId> candidates);

/// Adds scale * dQ(state, action)/dparams into `grad` and returns Q.
double accumulate_q_gradient(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, NodeId action, double scale,
                             QNetworkParams& grad);

/// Same, with the scale computed from the forward value: adds
/// upstream(Q) * dQ/dparams. Saves a second forward pass for losses.
double accumulate_q_gradient(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, NodeId action,
                             const std::function<double(double)>& upstream, QNetworkParams& grad);

}  // namespace rl4im
