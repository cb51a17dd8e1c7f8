#include "soda/value_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace soda {

std::vector<double> CategoricalHead::project(double v) const {
  std::vector<double> p(n_bins, 0.0);
  v = std::clamp(v, v_min, v_max);
  double pos = (v - v_min) / (v_max - v_min) * (n_bins - 1);
  int lo = static_cast<int>(pos);
  if (lo >= n_bins - 1) {
    p[n_bins - 1] = 1.0;
    return p;
  }
  double frac = pos - lo;
  p[lo] = 1.0 - frac;
  p[lo + 1] = frac;
  return p;
}

double CategoricalHead::readout(const std::vector<double>& probs) const {
  double acc = 0.0;
  for (int i = 0; i < n_bins; ++i) acc += probs[i] * center(i);
  return acc;
}

std::vector<int> NetShape::layer_dims() const {
  std::vector<int> dims;
  dims.push_back(in_dim);
  for (int h : hidden) dims.push_back(h);
  dims.push_back(n_actions * n_bins);
  return dims;
}

int NetShape::n_params() const {
  const std::vector<int> dims = layer_dims();
  int n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    n += dims[l] * dims[l + 1] + dims[l + 1];
  return n;
}

ValueNet ValueNet::zeros(const NetShape& shape) {
  ValueNet net;
  net.shape = shape;
  net.params.assign(shape.n_params(), 0.0);
  return net;
}

ValueNet ValueNet::random_init(const NetShape& shape, Rng& rng) {
  ValueNet net = zeros(shape);
  const std::vector<int> dims = shape.layer_dims();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    double bound = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    for (int i = 0; i < dims[l] * dims[l + 1]; ++i)
      net.params[off + i] = rng.uniform_real(-bound, bound);
    off += dims[l] * dims[l + 1];
    off += dims[l + 1];  // biases stay zero
  }
  return net;
}

namespace {

struct Layout {
  std::vector<int> dims;
  std::vector<std::size_t> w_off, b_off;
};

Layout layout_of(const NetShape& shape) {
  Layout lay;
  lay.dims = shape.layer_dims();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < lay.dims.size(); ++l) {
    lay.w_off.push_back(off);
    off += static_cast<std::size_t>(lay.dims[l]) * lay.dims[l + 1];
    lay.b_off.push_back(off);
    off += lay.dims[l + 1];
  }
  return lay;
}

// acts[0] = input, acts[l+1] = activation after layer l (tanh on hidden
// layers, identity on the output layer).
void forward_cache(const ValueNet& net, const Layout& lay,
                   const std::vector<double>& x,
                   std::vector<std::vector<double>>& acts) {
  const std::size_t n_layers = lay.w_off.size();
  acts.resize(n_layers + 1);
  acts[0] = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = lay.dims[l], out = lay.dims[l + 1];
    const double* w = net.params.data() + lay.w_off[l];
    const double* b = net.params.data() + lay.b_off[l];
    auto& y = acts[l + 1];
    y.assign(out, 0.0);
    const double* xin = acts[l].data();
    for (int i = 0; i < in; ++i) {
      const double xi = xin[i];
      const double* wrow = w + static_cast<std::size_t>(i) * out;
      for (int j = 0; j < out; ++j) y[j] += xi * wrow[j];
    }
    const bool is_hidden = l + 1 < n_layers;
    for (int j = 0; j < out; ++j) {
      y[j] += b[j];
      if (is_hidden) y[j] = std::tanh(y[j]);
    }
  }
}

void softmax_inplace(double* z, int n) {
  double mx = z[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, z[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    z[i] = std::exp(z[i] - mx);
    sum += z[i];
  }
  for (int i = 0; i < n; ++i) z[i] /= sum;
}

}  // namespace

std::vector<double> forward(const ValueNet& net, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != net.shape.in_dim)
    throw std::invalid_argument("forward: input dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw std::domain_error("forward: non-finite input");
  const Layout lay = layout_of(net.shape);
  std::vector<std::vector<double>> acts;
  forward_cache(net, lay, x, acts);
  return acts.back();
}

std::vector<double> q_values(const ValueNet& net, const CategoricalHead& head,
                             const std::vector<double>& x) {
  std::vector<double> logits = forward(net, x);
  std::vector<double> out(net.shape.n_actions);
  std::vector<double> probs(head.n_bins);
  for (int a = 0; a < net.shape.n_actions; ++a) {
    std::copy_n(logits.begin() + static_cast<std::size_t>(a) * head.n_bins,
                head.n_bins, probs.begin());
    softmax_inplace(probs.data(), head.n_bins);
    out[a] = head.readout(probs);
  }
  return out;
}

double q_value(const ValueNet& net, const CategoricalHead& head,
               const std::vector<double>& x, int action) {
  if (action < 0 || action >= net.shape.n_actions)
    throw std::invalid_argument("q_value: action out of range");
  return q_values(net, head, x)[action];
}

int greedy_action(const ValueNet& net, const CategoricalHead& head,
                  const std::vector<double>& x) {
  const std::vector<double> q = q_values(net, head, x);
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

double cross_entropy_loss_and_grads(const ValueNet& net, const CategoricalBatch& batch,
                                    std::vector<double>& grads) {
  if (batch.size() == 0) throw std::invalid_argument("loss: empty batch");
  const Layout lay = layout_of(net.shape);
  const int n_bins = net.shape.n_bins;
  const std::size_t n_layers = lay.w_off.size();
  grads.assign(net.params.size(), 0.0);

  double loss = 0.0;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, delta_prev, probs(n_bins);

  for (int k = 0; k < batch.size(); ++k) {
    forward_cache(net, lay, batch.states[k], acts);
    const int a = batch.actions[k];
    if (a < 0 || a >= net.shape.n_actions)
      throw std::invalid_argument("loss: action out of range");
    const std::vector<double>& target = batch.targets[k];
    if (static_cast<int>(target.size()) != n_bins)
      throw std::invalid_argument("loss: target bin count mismatch");

    const double* logits = acts.back().data() + static_cast<std::size_t>(a) * n_bins;
    std::copy_n(logits, n_bins, probs.begin());
    softmax_inplace(probs.data(), n_bins);
    for (int b = 0; b < n_bins; ++b)
      if (target[b] > 0.0) loss -= target[b] * std::log(std::max(probs[b], 1e-300));

    // d loss / d logits: softmax minus target on the taken action's bins,
    // zero elsewhere; averaged over the batch.
    delta.assign(lay.dims.back(), 0.0);
    for (int b = 0; b < n_bins; ++b)
      delta[static_cast<std::size_t>(a) * n_bins + b] =
          (probs[b] - target[b]) / batch.size();

    for (int l = static_cast<int>(n_layers) - 1; l >= 0; --l) {
      const int in = lay.dims[l], out = lay.dims[l + 1];
      double* gw = grads.data() + lay.w_off[l];
      double* gb = grads.data() + lay.b_off[l];
      const double* xin = acts[l].data();
      for (int i = 0; i < in; ++i) {
        const double xi = xin[i];
        double* gwrow = gw + static_cast<std::size_t>(i) * out;
        for (int j = 0; j < out; ++j) gwrow[j] += xi * delta[j];
      }
      for (int j = 0; j < out; ++j) gb[j] += delta[j];
      if (l > 0) {
        delta_prev.assign(in, 0.0);
        const double* w = net.params.data() + lay.w_off[l];
        for (int i = 0; i < in; ++i) {
          const double* wrow = w + static_cast<std::size_t>(i) * out;
          double acc = 0.0;
          for (int j = 0; j < out; ++j) acc += wrow[j] * delta[j];
          // tanh'(z) = 1 - tanh(z)^2, and acts[l] stores tanh(z)
          delta_prev[i] = acc * (1.0 - xin[i] * xin[i]);
        }
        delta.swap(delta_prev);
      }
    }
  }
  loss /= batch.size();
  if (!std::isfinite(loss)) throw std::runtime_error("loss: non-finite cross entropy");
  return loss;
}

double cross_entropy_loss(const ValueNet& net, const CategoricalBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("loss: empty batch");
  const Layout lay = layout_of(net.shape);
  const int n_bins = net.shape.n_bins;
  double loss = 0.0;
  std::vector<std::vector<double>> acts;
  std::vector<double> probs(n_bins);
  for (int k = 0; k < batch.size(); ++k) {
    forward_cache(net, lay, batch.states[k], acts);
    const int a = batch.actions[k];
    const double* logits = acts.back().data() + static_cast<std::size_t>(a) * n_bins;
    std::copy_n(logits, n_bins, probs.begin());
    softmax_inplace(probs.data(), n_bins);
    for (int b = 0; b < n_bins; ++b)
      if (batch.targets[k][b] > 0.0)
        loss -= batch.targets[k][b] * std::log(std::max(probs[b], 1e-300));
  }
  return loss / batch.size();
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grads) {
  if (m.empty()) {
    m.assign(params.size(), 0.0);
    v.assign(params.size(), 0.0);
  }
  if (params.size() != grads.size() || params.size() != m.size())
    throw std::invalid_argument("adam: size mismatch");
  ++t;
  const double bc1 = 1.0 - std::pow(beta1, t);
  const double bc2 = 1.0 - std::pow(beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
    params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

namespace {
constexpr char kCheckpointMagic[8] = {'S', 'O', 'D', 'A', 'N', 'E', 'T', '1'};
}

void save_checkpoint(const ValueNet& net, std::uint64_t config_hash,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  auto put_i32 = [&](std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  put_u64(config_hash);
  put_i32(net.shape.in_dim);
  put_i32(static_cast<std::int32_t>(net.shape.hidden.size()));
  for (int h : net.shape.hidden) put_i32(h);
  put_i32(net.shape.n_actions);
  put_i32(net.shape.n_bins);
  put_u64(net.params.size());
  out.write(reinterpret_cast<const char*>(net.params.data()),
            static_cast<std::streamsize>(net.params.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error(path + ": not a checkpoint file");
  auto get_i32 = [&]() {
    std::int32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_u64 = [&]() {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  Checkpoint ck;
  ck.config_hash = get_u64();
  ck.net.shape.in_dim = get_i32();
  int n_hidden = get_i32();
  ck.net.shape.hidden.resize(n_hidden);
  for (int i = 0; i < n_hidden; ++i) ck.net.shape.hidden[i] = get_i32();
  ck.net.shape.n_actions = get_i32();
  ck.net.shape.n_bins = get_i32();
  std::uint64_t n_params = get_u64();
  if (!in || n_params != static_cast<std::uint64_t>(ck.net.shape.n_params()))
    throw std::runtime_error(path + ": corrupt checkpoint");
  ck.net.params.resize(n_params);
  in.read(reinterpret_cast<char*>(ck.net.params.data()),
          static_cast<std::streamsize>(n_params * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated checkpoint");
  return ck;
}

}  // namespace soda
