#include "softtouch/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

namespace softtouch::nn {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// out[c] += sum_r M[r, c] v[r]
inline void add_transposed(double* out, const double* m, std::size_t rows, std::size_t cols, const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double vr = v[r];
    const double* mr = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += mr[c] * vr;
  }
}

// G[r, c] += v[r] x[c]
inline void add_outer(double* g, const double* v, std::size_t rows, const double* x, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double vr = v[r];
    double* gr = g + r * cols;
    for (std::size_t c = 0; c < cols; ++c) gr[c] += vr * x[c];
  }
}

std::size_t layer_param_count(Arch arch, std::size_t in, std::size_t h) {
  const auto g = static_cast<std::size_t>(gate_count(arch));
  if (arch == Arch::MLP) return h * in + h;
  return g * (in * h + h * h + h);
}

}  // namespace

std::string_view to_string(Arch a) {
  switch (a) {
    case Arch::MLP: return "mlp";
    case Arch::RNN: return "rnn";
    case Arch::LSTM: return "lstm";
    case Arch::GRU: return "gru";
  }
  return "unknown";
}

Arch parse_arch(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "mlp") return Arch::MLP;
  if (lower == "rnn") return Arch::RNN;
  if (lower == "lstm") return Arch::LSTM;
  if (lower == "gru") return Arch::GRU;
  throw DataError("unknown architecture '" + std::string(s) + "'");
}

int gate_count(Arch a) {
  switch (a) {
    case Arch::LSTM: return 4;
    case Arch::GRU: return 3;
    default: return 1;
  }
}

void ModelSpec::validate() const {
  if (layers < 1 || hidden < 1 || in_dim < 1 || out_dim != 3) {
    std::ostringstream msg;
    msg << "invalid model spec: layers=" << layers << " hidden=" << hidden << " in_dim=" << in_dim
        << " out_dim=" << out_dim;
    throw std::invalid_argument(msg.str());
  }
}

std::size_t ModelSpec::param_count() const {
  const auto h = static_cast<std::size_t>(hidden);
  std::size_t n = 0;
  for (int l = 0; l < layers; ++l) {
    n += layer_param_count(arch, l == 0 ? static_cast<std::size_t>(in_dim) : h, h);
  }
  return n + 3 * h + 3;
}

ModelWeights ModelWeights::zeros(const ModelSpec& spec) {
  spec.validate();
  return {spec, std::vector<double>(spec.param_count(), 0.0)};
}

ModelWeights ModelWeights::xavier(const ModelSpec& spec, std::uint64_t seed) {
  ModelWeights w = zeros(spec);
  std::mt19937_64 rng(seed);
  auto fill = [&](std::size_t offset, std::size_t rows, std::size_t cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t i = 0; i < rows * cols; ++i) w.params[offset + i] = dist(rng);
  };
  const auto h = static_cast<std::size_t>(spec.hidden);
  const auto g = static_cast<std::size_t>(gate_count(spec.arch));
  std::size_t off = 0;
  for (int l = 0; l < spec.layers; ++l) {
    const std::size_t d = l == 0 ? static_cast<std::size_t>(spec.in_dim) : h;
    if (spec.arch == Arch::MLP) {
      fill(off, h, d);
      off += h * d + h;
      continue;
    }
    for (std::size_t k = 0; k < g; ++k) fill(off + k * h * d, h, d);
    off += g * h * d;
    for (std::size_t k = 0; k < g; ++k) fill(off + k * h * h, h, h);
    off += g * h * h + g * h;
  }
  fill(off, 3, h);
  return w;
}

std::string ModelWeights::to_json() const {
  nlohmann::json j;
  j["layout_version"] = kLayoutVersion;
  j["arch"] = std::string(to_string(spec.arch));
  j["layers"] = spec.layers;
  j["hidden"] = spec.hidden;
  j["in_dim"] = spec.in_dim;
  j["out_dim"] = spec.out_dim;
  j["params"] = params;
  return j.dump();
}

ModelWeights ModelWeights::from_json(const std::string& text) {
  ModelWeights w;
  try {
    const auto j = nlohmann::json::parse(text);
    const int version = j.at("layout_version").get<int>();
    if (version != kLayoutVersion) throw DataError("unsupported weights layout version " + std::to_string(version));
    w.spec.arch = parse_arch(j.at("arch").get<std::string>());
    w.spec.layers = j.at("layers").get<int>();
    w.spec.hidden = j.at("hidden").get<int>();
    w.spec.in_dim = j.at("in_dim").get<int>();
    w.spec.out_dim = j.at("out_dim").get<int>();
    w.params = j.at("params").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("weights json: ") + e.what());
  }
  w.spec.validate();
  if (w.params.size() != w.spec.param_count()) {
    throw DataError("weights json: expected " + std::to_string(w.spec.param_count()) + " params, got " +
                    std::to_string(w.params.size()));
  }
  return w;
}

Network::Network(const ModelSpec& spec) : spec_(spec) {
  spec_.validate();
  const auto h = static_cast<std::size_t>(spec_.hidden);
  std::size_t off = 0;
  layers_.resize(static_cast<std::size_t>(spec_.layers));
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    auto& lc = layers_[l];
    lc.in_dim = l == 0 ? static_cast<std::size_t>(spec_.in_dim) : h;
    lc.offset = off;
    off += layer_param_count(spec_.arch, lc.in_dim, h);
    if (spec_.arch == Arch::MLP) lc.h.assign(h, 0.0);
  }
  readout_offset_ = off;
  top_.assign(h, 0.0);
  scratch_.assign(8 * h, 0.0);
}

void Network::resize(std::size_t steps) {
  if (steps == steps_) return;
  steps_ = steps;
  const auto h = static_cast<std::size_t>(spec_.hidden);
  const auto g = static_cast<std::size_t>(gate_count(spec_.arch));
  for (auto& lc : layers_) {
    lc.h.assign((steps + 1) * h, 0.0);
    lc.gates.assign(steps * g * h, 0.0);
    if (spec_.arch == Arch::LSTM) {
      lc.c.assign((steps + 1) * h, 0.0);
      lc.tanh_c.assign(steps * h, 0.0);
    }
    lc.d_input.assign(steps * lc.in_dim, 0.0);
  }
  d_h_ext_.assign(steps * h, 0.0);
}

const double* Network::layer_input(std::size_t l, std::size_t t) const {
  if (l == 0) return x_.row(t);
  const auto h = static_cast<std::size_t>(spec_.hidden);
  return layers_[l - 1].h.data() + (t + 1) * h;
}

std::array<double, 3> Network::forward(std::span<const double> p, SequenceView x) {
  if (x.dim != static_cast<std::size_t>(spec_.in_dim) || x.steps == 0) {
    std::ostringstream msg;
    msg << "forward: window is " << x.steps << "x" << x.dim << ", model expects in_dim " << spec_.in_dim;
    throw std::invalid_argument(msg.str());
  }
  if (p.size() != spec_.param_count()) throw std::invalid_argument("forward: parameter count mismatch");
  x_ = x;
  const auto h = static_cast<std::size_t>(spec_.hidden);

  if (spec_.arch == Arch::MLP) {
    const double* in = x.row(x.steps - 1);
    for (auto& lc : layers_) {
      const double* W = p.data() + lc.offset;
      const double* b = W + h * lc.in_dim;
      for (std::size_t r = 0; r < h; ++r) lc.h[r] = std::tanh(b[r] + dot(W + r * lc.in_dim, in, lc.in_dim));
      in = lc.h.data();
    }
    std::copy(layers_.back().h.begin(), layers_.back().h.end(), top_.begin());
  } else {
    resize(x.steps);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      switch (spec_.arch) {
        case Arch::RNN: forward_rnn(p, l); break;
        case Arch::LSTM: forward_lstm(p, l); break;
        case Arch::GRU: forward_gru(p, l); break;
        case Arch::MLP: break;
      }
    }
    const auto& top = layers_.back().h;
    std::copy(top.begin() + static_cast<std::ptrdiff_t>(steps_ * h), top.end(), top_.begin());
  }

  const double* V = p.data() + readout_offset_;
  const double* c = V + 3 * h;
  return {c[0] + dot(V, top_.data(), h), c[1] + dot(V + h, top_.data(), h), c[2] + dot(V + 2 * h, top_.data(), h)};
}

void Network::forward_rnn(std::span<const double> p, std::size_t l) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + H * d;
  const double* b = U + H * H;
  for (std::size_t t = 0; t < steps_; ++t) {
    const double* x = layer_input(l, t);
    const double* hp = lc.h.data() + t * H;
    double* hn = lc.h.data() + (t + 1) * H;
    for (std::size_t r = 0; r < H; ++r) {
      hn[r] = std::tanh(b[r] + dot(W + r * d, x, d) + dot(U + r * H, hp, H));
    }
    std::copy(hn, hn + H, lc.gates.data() + t * H);
  }
}

void Network::forward_lstm(std::span<const double> p, std::size_t l) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + 4 * H * d;
  const double* b = U + 4 * H * H;
  for (std::size_t t = 0; t < steps_; ++t) {
    const double* x = layer_input(l, t);
    const double* hp = lc.h.data() + t * H;
    const double* cp = lc.c.data() + t * H;
    double* gate = lc.gates.data() + t * 4 * H;
    for (std::size_t r = 0; r < 4 * H; ++r) {
      const double a = b[r] + dot(W + r * d, x, d) + dot(U + r * H, hp, H);
      gate[r] = (r >= 2 * H && r < 3 * H) ? std::tanh(a) : sigmoid(a);
    }
    double* cn = lc.c.data() + (t + 1) * H;
    double* tc = lc.tanh_c.data() + t * H;
    double* hn = lc.h.data() + (t + 1) * H;
    for (std::size_t k = 0; k < H; ++k) {
      cn[k] = gate[H + k] * cp[k] + gate[k] * gate[2 * H + k];
      tc[k] = std::tanh(cn[k]);
      hn[k] = gate[3 * H + k] * tc[k];
    }
  }
}

void Network::forward_gru(std::span<const double> p, std::size_t l) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + 3 * H * d;
  const double* b = U + 3 * H * H;
  double* rh = scratch_.data();
  for (std::size_t t = 0; t < steps_; ++t) {
    const double* x = layer_input(l, t);
    const double* hp = lc.h.data() + t * H;
    double* gate = lc.gates.data() + t * 3 * H;
    for (std::size_t r = 0; r < 2 * H; ++r) {
      gate[r] = sigmoid(b[r] + dot(W + r * d, x, d) + dot(U + r * H, hp, H));
    }
    for (std::size_t k = 0; k < H; ++k) rh[k] = gate[H + k] * hp[k];
    double* hn = lc.h.data() + (t + 1) * H;
    for (std::size_t k = 0; k < H; ++k) {
      const std::size_t r = 2 * H + k;
      const double n = std::tanh(b[r] + dot(W + r * d, x, d) + dot(U + r * H, rh, H));
      gate[r] = n;
      const double z = gate[k];
      hn[k] = (1.0 - z) * n + z * hp[k];
    }
  }
}

void Network::backward(std::span<const double> p, const std::array<double, 3>& d_out, std::span<double> g) {
  if (g.size() != p.size()) throw std::invalid_argument("backward: gradient buffer size mismatch");
  const auto h = static_cast<std::size_t>(spec_.hidden);
  const double* V = p.data() + readout_offset_;
  double* gV = g.data() + readout_offset_;
  add_outer(gV, d_out.data(), 3, top_.data(), h);
  for (std::size_t k = 0; k < 3; ++k) gV[3 * h + k] += d_out[k];

  std::vector<double>& d_top = scratch_;  // first h entries
  std::fill(d_top.begin(), d_top.begin() + static_cast<std::ptrdiff_t>(h), 0.0);
  add_transposed(d_top.data(), V, 3, h, d_out.data());

  if (spec_.arch == Arch::MLP) {
    std::vector<double> d(d_top.begin(), d_top.begin() + static_cast<std::ptrdiff_t>(h));
    std::vector<double> dz(h);
    for (std::size_t li = layers_.size(); li-- > 0;) {
      auto& lc = layers_[li];
      const double* in = li == 0 ? x_.row(x_.steps - 1) : layers_[li - 1].h.data();
      const double* W = p.data() + lc.offset;
      double* gW = g.data() + lc.offset;
      for (std::size_t r = 0; r < h; ++r) dz[r] = d[r] * (1.0 - lc.h[r] * lc.h[r]);
      add_outer(gW, dz.data(), h, in, lc.in_dim);
      for (std::size_t r = 0; r < h; ++r) gW[h * lc.in_dim + r] += dz[r];
      if (li > 0) {
        std::fill(d.begin(), d.end(), 0.0);
        add_transposed(d.data(), W, h, lc.in_dim, dz.data());
      }
    }
    return;
  }

  std::fill(d_h_ext_.begin(), d_h_ext_.end(), 0.0);
  std::copy(d_top.begin(), d_top.begin() + static_cast<std::ptrdiff_t>(h),
            d_h_ext_.begin() + static_cast<std::ptrdiff_t>((steps_ - 1) * h));
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const bool need_input = li > 0;
    switch (spec_.arch) {
      case Arch::RNN: backward_rnn(p, li, g, d_h_ext_, need_input); break;
      case Arch::LSTM: backward_lstm(p, li, g, d_h_ext_, need_input); break;
      case Arch::GRU: backward_gru(p, li, g, d_h_ext_, need_input); break;
      case Arch::MLP: break;
    }
    if (need_input) d_h_ext_ = layers_[li].d_input;
  }
}

void Network::backward_rnn(std::span<const double> p, std::size_t l, std::span<double> g,
                           const std::vector<double>& d_h, bool need_input_grad) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + H * d;
  double* gW = g.data() + lc.offset;
  double* gU = gW + H * d;
  double* gb = gU + H * H;

  std::vector<double> dh_rec(H, 0.0), da(H);
  for (std::size_t t = steps_; t-- > 0;) {
    const double* hn = lc.h.data() + (t + 1) * H;
    const double* hp = lc.h.data() + t * H;
    const double* x = layer_input(l, t);
    for (std::size_t k = 0; k < H; ++k) da[k] = (d_h[t * H + k] + dh_rec[k]) * (1.0 - hn[k] * hn[k]);
    add_outer(gW, da.data(), H, x, d);
    add_outer(gU, da.data(), H, hp, H);
    for (std::size_t k = 0; k < H; ++k) gb[k] += da[k];
    std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
    add_transposed(dh_rec.data(), U, H, H, da.data());
    if (need_input_grad) {
      double* dx = lc.d_input.data() + t * d;
      std::fill(dx, dx + d, 0.0);
      add_transposed(dx, W, H, d, da.data());
    }
  }
}

void Network::backward_lstm(std::span<const double> p, std::size_t l, std::span<double> g,
                            const std::vector<double>& d_h, bool need_input_grad) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + 4 * H * d;
  double* gW = g.data() + lc.offset;
  double* gU = gW + 4 * H * d;
  double* gb = gU + 4 * H * H;

  std::vector<double> dh_rec(H, 0.0), dc_rec(H, 0.0), da(4 * H);
  for (std::size_t t = steps_; t-- > 0;) {
    const double* gate = lc.gates.data() + t * 4 * H;
    const double* cp = lc.c.data() + t * H;
    const double* tc = lc.tanh_c.data() + t * H;
    const double* hp = lc.h.data() + t * H;
    const double* x = layer_input(l, t);
    for (std::size_t k = 0; k < H; ++k) {
      const double i = gate[k], f = gate[H + k], gg = gate[2 * H + k], o = gate[3 * H + k];
      const double dh = d_h[t * H + k] + dh_rec[k];
      const double dc = dc_rec[k] + dh * o * (1.0 - tc[k] * tc[k]);
      da[k] = dc * gg * i * (1.0 - i);
      da[H + k] = dc * cp[k] * f * (1.0 - f);
      da[2 * H + k] = dc * i * (1.0 - gg * gg);
      da[3 * H + k] = dh * tc[k] * o * (1.0 - o);
      dc_rec[k] = dc * f;
    }
    add_outer(gW, da.data(), 4 * H, x, d);
    add_outer(gU, da.data(), 4 * H, hp, H);
    for (std::size_t r = 0; r < 4 * H; ++r) gb[r] += da[r];
    std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
    add_transposed(dh_rec.data(), U, 4 * H, H, da.data());
    if (need_input_grad) {
      double* dx = lc.d_input.data() + t * d;
      std::fill(dx, dx + d, 0.0);
      add_transposed(dx, W, 4 * H, d, da.data());
    }
  }
}

void Network::backward_gru(std::span<const double> p, std::size_t l, std::span<double> g,
                           const std::vector<double>& d_h, bool need_input_grad) {
  auto& lc = layers_[l];
  const auto H = static_cast<std::size_t>(spec_.hidden);
  const std::size_t d = lc.in_dim;
  const double* W = p.data() + lc.offset;
  const double* U = W + 3 * H * d;
  double* gW = g.data() + lc.offset;
  double* gU = gW + 3 * H * d;
  double* gb = gU + 3 * H * H;

  std::vector<double> dh_rec(H, 0.0), da(3 * H), rh(H), d_rh(H);
  for (std::size_t t = steps_; t-- > 0;) {
    const double* gate = lc.gates.data() + t * 3 * H;
    const double* hp = lc.h.data() + t * H;
    const double* x = layer_input(l, t);
    for (std::size_t k = 0; k < H; ++k) {
      const double z = gate[k], n = gate[2 * H + k];
      const double dh = d_h[t * H + k] + dh_rec[k];
      da[k] = dh * (hp[k] - n) * z * (1.0 - z);
      da[2 * H + k] = dh * (1.0 - z) * (1.0 - n * n);
      rh[k] = gate[H + k] * hp[k];
      dh_rec[k] = dh * z;  // direct path through the update gate
    }
    std::fill(d_rh.begin(), d_rh.end(), 0.0);
    add_transposed(d_rh.data(), U + 2 * H * H, H, H, da.data() + 2 * H);
    for (std::size_t k = 0; k < H; ++k) {
      const double r = gate[H + k];
      da[H + k] = d_rh[k] * hp[k] * r * (1.0 - r);
      dh_rec[k] += d_rh[k] * r;
    }
    add_outer(gW, da.data(), 3 * H, x, d);
    add_outer(gU, da.data(), 2 * H, hp, H);
    add_outer(gU + 2 * H * H, da.data() + 2 * H, H, rh.data(), H);
    for (std::size_t r = 0; r < 3 * H; ++r) gb[r] += da[r];
    add_transposed(dh_rec.data(), U, 2 * H, H, da.data());
    if (need_input_grad) {
      double* dx = lc.d_input.data() + t * d;
      std::fill(dx, dx + d, 0.0);
      add_transposed(dx, W, 3 * H, d, da.data());
    }
  }
}

ForceVector forward(const ModelWeights& w, SequenceView x) {
  Network net(w.spec);
  const auto y = net.forward(w.params, x);
  return {y[0], y[1], y[2]};
}

double loss_and_gradient(std::span<const double> params, Network& net, std::span<const Sample> batch,
                         std::vector<double>& grad) {
  if (batch.empty()) throw std::invalid_argument("backward: empty batch");
  grad.assign(params.size(), 0.0);
  const double scale = 1.0 / (3.0 * static_cast<double>(batch.size()));
  double loss = 0.0;
  for (const auto& s : batch) {
    const auto y = net.forward(params, s.x);
    const std::array<double, 3> target{s.y.fx, s.y.fy, s.y.fz};
    std::array<double, 3> d_out{};
    for (int k = 0; k < 3; ++k) {
      const double e = y[k] - target[k];
      loss += e * e;
      d_out[k] = 2.0 * e * scale;
    }
    net.backward(params, d_out, grad);
  }
  loss *= scale;
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite loss (" << loss << ") on a batch of " << batch.size() << " samples; "
        << "check input scaling and learning rate";
    throw std::runtime_error(msg.str());
  }
  return loss;
}

double batch_loss(const ModelWeights& w, std::span<const Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  Network net(w.spec);
  double loss = 0.0;
  for (const auto& s : batch) {
    const auto y = net.forward(w.params, s.x);
    loss += (y[0] - s.y.fx) * (y[0] - s.y.fx) + (y[1] - s.y.fy) * (y[1] - s.y.fy) +
            (y[2] - s.y.fz) * (y[2] - s.y.fz);
  }
  return loss / (3.0 * static_cast<double>(batch.size()));
}

std::vector<double> backward(const ModelWeights& w, std::span<const Sample> batch) {
  Network net(w.spec);
  std::vector<double> grad;
  loss_and_gradient(w.params, net, batch, grad);
  return grad;
}

}  // namespace softtouch::nn
