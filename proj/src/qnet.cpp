#include "rl4im/qnet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rl4im/kernels.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

namespace k = kernels;

QNetworkParams::QNetworkParams(const QNetworkShape& shape) : shape_(shape) {
  if (shape.embed_dim == 0 || shape.embed_iters == 0 || shape.hidden == 0) {
    throw std::invalid_argument("Q-network dimensions must be positive");
  }
  const std::size_t d = shape.embed_dim, h = shape.hidden;
  const std::size_t sizes[kBlocks] = {d * kNodeFeatures, d * d, d * d, h * d, h * d, h, h, 1};
  offsets_.assign(kBlocks + 1, 0);
  for (std::size_t i = 0; i < kBlocks; ++i) offsets_[i + 1] = offsets_[i] + sizes[i];
  data_.assign(offsets_.back(), 0.0);
}

QNetworkParams QNetworkParams::initialize(const QNetworkShape& shape, std::uint64_t seed) {
  QNetworkParams p(shape);
  Rng rng(seed);
  const double d = static_cast<double>(shape.embed_dim);
  const double fan_in[kBlocks] = {static_cast<double>(kNodeFeatures), d, d, 2 * d, 2 * d, 0,
                                  static_cast<double>(shape.hidden), 0};
  for (std::size_t b = 0; b < kBlocks; ++b) {
    if (fan_in[b] == 0) continue;
    const double bound = 1.0 / std::sqrt(fan_in[b]);
    for (double& w : p.block(b)) w = (2.0 * uniform01(rng) - 1.0) * bound;
  }
  return p;
}

bool QNetworkParams::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void QNetworkParams::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

namespace {

std::span<double> row(std::vector<double>& m, std::size_t index, std::size_t width) {
  return {m.data() + index * width, width};
}

void check_inputs(const Graph& graph, std::span<const double> state) {
  if (state.size() != graph.node_count()) {
    throw std::invalid_argument("abstracted state has " + std::to_string(state.size()) +
                                " entries, graph has " + std::to_string(graph.node_count()) +
                                " nodes");
  }
  if (graph.node_count() == 0) throw std::invalid_argument("Q-network needs a non-empty graph");
}

void check_candidate(const EmbeddingCache& cache, NodeId v) {
  if (v >= cache.nodes) throw std::invalid_argument("candidate " + std::to_string(v) + " out of range");
}

}  // namespace

void embed(const QNetworkParams& params, const Graph& graph, std::span<const double> state,
           EmbeddingCache& cache) {
  check_inputs(graph, state);
  const std::size_t n = graph.node_count();
  const std::size_t d = params.shape().embed_dim;
  const std::size_t iters = params.shape().embed_iters;
  const std::size_t layer = n * d;

  cache.nodes = n;
  cache.features.resize(n * kNodeFeatures);
  cache.lifted.resize(layer);
  cache.pre.resize((iters + 1) * layer);
  cache.post.resize((iters + 1) * layer);
  cache.aggregated.assign(iters * layer, 0.0);
  cache.pooled.assign(d, 0.0);
  cache.pooled_hidden.resize(params.shape().hidden);

  for (std::size_t v = 0; v < n; ++v) {
    cache.features[v * kNodeFeatures] = state[v];
    cache.features[v * kNodeFeatures + 1] = 1.0;
    k::gemv(params.lift(), d, kNodeFeatures, row(cache.features, v, kNodeFeatures),
            row(cache.lifted, v, d));
  }
  std::copy(cache.lifted.begin(), cache.lifted.end(), cache.pre.begin());
  std::copy(cache.lifted.begin(), cache.lifted.end(), cache.post.begin());
  k::relu({cache.post.data(), layer});

  for (std::size_t it = 1; it <= iters; ++it) {
    const double* prev = cache.post.data() + (it - 1) * layer;
    double* agg = cache.aggregated.data() + (it - 1) * layer;
    double* pre = cache.pre.data() + it * layer;
    for (NodeId v = 0; v < n; ++v) {
      std::span<double> agg_v(agg + v * d, d);
      for (const Neighbor& nb : graph.neighbors(v)) {
        k::axpy(1.0, {prev + nb.node * d, d}, agg_v);
      }
      std::span<double> pre_v(pre + v * d, d);
      std::copy_n(cache.lifted.data() + v * d, d, pre_v.data());
      k::gemv(params.neighbor(), d, d, agg_v, pre_v, true);
      k::gemv(params.self(), d, d, {prev + v * d, d}, pre_v, true);
    }
    double* post = cache.post.data() + it * layer;
    std::copy_n(pre, layer, post);
    k::relu({post, layer});
  }

  const double* last = cache.post.data() + iters * layer;
  for (std::size_t v = 0; v < n; ++v) k::axpy(1.0, {last + v * d, d}, cache.pooled);
  for (double& x : cache.pooled) x /= static_cast<double>(n);
  std::copy(params.hidden_bias().begin(), params.hidden_bias().end(), cache.pooled_hidden.begin());
  k::gemv(params.hidden_pool(), params.shape().hidden, d, cache.pooled, cache.pooled_hidden, true);
}

namespace {

std::span<const double> final_embedding(const QNetworkParams& params, const EmbeddingCache& cache,
                                        NodeId v) {
  const std::size_t d = params.shape().embed_dim;
  const std::size_t offset = (params.shape().embed_iters * cache.nodes + v) * d;
  return {cache.post.data() + offset, d};
}

double readout_hidden(const QNetworkParams& params, const EmbeddingCache& cache, NodeId candidate,
                      std::vector<double>& hidden_pre, std::vector<double>& hidden) {
  check_candidate(cache, candidate);
  const std::size_t h = params.shape().hidden;
  hidden_pre = cache.pooled_hidden;
  k::gemv(params.hidden_node(), h, params.shape().embed_dim,
          final_embedding(params, cache, candidate), hidden_pre, true);
  hidden = hidden_pre;
  k::relu(hidden);
  return k::dot(params.output(), hidden) + params.output_bias();
}

}  // namespace

double readout(const QNetworkParams& params, const EmbeddingCache& cache, NodeId candidate) {
  std::vector<double> hidden_pre, hidden;
  return readout_hidden(params, cache, candidate, hidden_pre, hidden);
}

std::vector<double> q_values(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, std::span<const NodeId> candidates) {
  EmbeddingCache cache;
  embed(params, graph, state, cache);
  std::vector<double> out;
  out.reserve(candidates.size());
  std::vector<double> hidden_pre, hidden;
  for (NodeId v : candidates) out.push_back(readout_hidden(params, cache, v, hidden_pre, hidden));
  return out;
}

double accumulate_q_gradient(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, NodeId action, double scale,
                             QNetworkParams& grad) {
  return accumulate_q_gradient(params, graph, state, action, [scale](double) { return scale; },
                               grad);
}

double accumulate_q_gradient(const QNetworkParams& params, const Graph& graph,
                             std::span<const double> state, NodeId action,
                             const std::function<double(double)>& upstream, QNetworkParams& grad) {
  if (!(grad.shape() == params.shape())) throw std::invalid_argument("gradient shape mismatch");
  EmbeddingCache cache;
  embed(params, graph, state, cache);
  std::vector<double> hidden_pre, hidden;
  const double q = readout_hidden(params, cache, action, hidden_pre, hidden);
  const double scale = upstream(q);

  const std::size_t n = cache.nodes;
  const std::size_t d = params.shape().embed_dim;
  const std::size_t h = params.shape().hidden;
  const std::size_t iters = params.shape().embed_iters;
  const std::size_t layer = n * d;

  // Readout.
  grad.output_bias() += scale;
  k::axpy(scale, hidden, grad.output());
  std::vector<double> d_hidden(h);
  for (std::size_t i = 0; i < h; ++i) {
    d_hidden[i] = hidden_pre[i] > 0.0 ? scale * params.output()[i] : 0.0;
  }
  k::axpy(1.0, d_hidden, grad.hidden_bias());
  k::rank1_update(grad.hidden_node(), d_hidden, final_embedding(params, cache, action));
  k::rank1_update(grad.hidden_pool(), d_hidden, cache.pooled);

  // Gradient w.r.t. the final embeddings: the mean pool reaches every node,
  // the candidate slot reaches only the action.
  std::vector<double> d_post(layer, 0.0);
  std::vector<double> d_pool(d, 0.0);
  k::gemv_transposed_accumulate(params.hidden_pool(), h, d, d_hidden, d_pool);
  for (double& x : d_pool) x /= static_cast<double>(n);
  for (std::size_t v = 0; v < n; ++v) k::axpy(1.0, d_pool, row(d_post, v, d));
  k::gemv_transposed_accumulate(params.hidden_node(), h, d, d_hidden, row(d_post, action, d));

  std::vector<double> d_pre(layer);
  std::vector<double> d_prev(layer);
  std::vector<double> d_agg(d);
  for (std::size_t it = iters; it >= 1; --it) {
    const double* pre = cache.pre.data() + it * layer;
    for (std::size_t i = 0; i < layer; ++i) d_pre[i] = pre[i] > 0.0 ? d_post[i] : 0.0;
    std::fill(d_prev.begin(), d_prev.end(), 0.0);
    const std::vector<double>& post_prev = cache.post;
    for (NodeId v = 0; v < n; ++v) {
      std::span<const double> dz(d_pre.data() + v * d, d);
      if (std::all_of(dz.begin(), dz.end(), [](double x) { return x == 0.0; })) continue;
      k::rank1_update(grad.lift(), dz, row(cache.features, v, kNodeFeatures));
      k::rank1_update(grad.neighbor(), dz,
                      {cache.aggregated.data() + (it - 1) * layer + v * d, d});
      std::span<const double> prev_v(post_prev.data() + (it - 1) * layer + v * d, d);
      k::rank1_update(grad.self(), dz, prev_v);
      k::gemv_transposed_accumulate(params.self(), d, d, dz, row(d_prev, v, d));
      std::fill(d_agg.begin(), d_agg.end(), 0.0);
      k::gemv_transposed_accumulate(params.neighbor(), d, d, dz, d_agg);
      for (const Neighbor& nb : graph.neighbors(v)) k::axpy(1.0, d_agg, row(d_prev, nb.node, d));
    }
    d_post.swap(d_prev);
  }
  for (std::size_t i = 0; i < layer; ++i) d_pre[i] = cache.pre[i] > 0.0 ? d_post[i] : 0.0;
  for (NodeId v = 0; v < n; ++v) {
    k::rank1_update(grad.lift(), {d_pre.data() + v * d, d}, row(cache.features, v, kNodeFeatures));
  }
  return q;
}

}  // namespace rl4im
