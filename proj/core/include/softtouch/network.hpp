#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softtouch/types.hpp"

namespace softtouch::nn {

enum class Arch { MLP, RNN, LSTM, GRU };

std::string_view to_string(Arch a);
Arch parse_arch(std::string_view s);
/// Stacked gate blocks per layer: RNN 1, LSTM 4 (i, f, g, o), GRU 3 (z, r, n), MLP 1.
int gate_count(Arch a);

struct ModelSpec {
  Arch arch = Arch::GRU;
  int layers = 1;
  int hidden = 10;
  int in_dim = 14;
  int out_dim = 3;

  void validate() const;
  /// Closed-form parameter count, e.g. a GRU layer holds 3 (in*h + h*h + h).
  std::size_t param_count() const;
  bool recurrent() const { return arch != Arch::MLP; }
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Flat parameter layout (version 1), all matrices row-major:
//   recurrent layer l: W [G*h x d_l], U [G*h x h], b [G*h]; gate g owns rows [g*h, (g+1)*h)
//   MLP layer l:       W [h x d_l], b [h]
//   readout:           V [3 x h], c [3]
// where d_0 = in_dim and d_l = hidden for l > 0.
inline constexpr int kLayoutVersion = 1;

struct ModelWeights {
  ModelSpec spec;
  std::vector<double> params;

  static ModelWeights zeros(const ModelSpec& spec);
  /// Xavier-uniform kernels (each gate block initialized as its own fan_in x fan_out matrix),
  /// zero biases.
  static ModelWeights xavier(const ModelSpec& spec, std::uint64_t seed);

  std::string to_json() const;
  static ModelWeights from_json(const std::string& text);
};

/// A window of `steps` consecutive feature rows of width `dim`, row-major.
struct SequenceView {
  const double* data = nullptr;
  std::size_t steps = 0;
  std::size_t dim = 0;

  const double* row(std::size_t t) const { return data + t * dim; }
};

/// Reusable forward/backward workspace for one architecture. Not thread-safe; use one per thread.
class Network {
 public:
  explicit Network(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }

  /// Runs the model on a window; recurrent models start from a zero state and read out from the
  /// top layer's final step, MLPs only see the final row.
  std::array<double, 3> forward(std::span<const double> params, SequenceView x);

  /// Adds d(loss)/d(params) for the most recent forward() to `grad`, given d(loss)/d(output).
  void backward(std::span<const double> params, const std::array<double, 3>& d_out, std::span<double> grad);

 private:
  struct LayerCache {
    std::size_t in_dim = 0;
    std::size_t offset = 0;           // start of this layer's parameters
    std::vector<double> h;            // (T+1) x hidden, row 0 is the zero state
    std::vector<double> gates;        // T x (G*hidden), post-activation
    std::vector<double> c;            // LSTM cell state, (T+1) x hidden
    std::vector<double> tanh_c;       // LSTM, T x hidden
    std::vector<double> d_input;      // T x in_dim, gradient w.r.t. this layer's inputs
  };

  void resize(std::size_t steps);
  const double* layer_input(std::size_t l, std::size_t t) const;

  void forward_rnn(std::span<const double> p, std::size_t l);
  void forward_lstm(std::span<const double> p, std::size_t l);
  void forward_gru(std::span<const double> p, std::size_t l);
  void backward_rnn(std::span<const double> p, std::size_t l, std::span<double> g,
                    const std::vector<double>& d_h, bool need_input_grad);
  void backward_lstm(std::span<const double> p, std::size_t l, std::span<double> g,
                     const std::vector<double>& d_h, bool need_input_grad);
  void backward_gru(std::span<const double> p, std::size_t l, std::span<double> g,
                    const std::vector<double>& d_h, bool need_input_grad);

  ModelSpec spec_;
  std::size_t steps_ = 0;
  SequenceView x_{};
  std::vector<LayerCache> layers_;
  std::size_t readout_offset_ = 0;
  std::vector<double> top_;       // hidden vector fed to the readout
  std::vector<double> d_h_ext_;   // T x hidden, gradient arriving from above
  std::vector<double> scratch_;
};

ForceVector forward(const ModelWeights& w, SequenceView x);

struct Sample {
  SequenceView x;
  ForceVector y;
};

/// Mean squared error over samples and the three outputs.
double batch_loss(const ModelWeights& w, std::span<const Sample> batch);

/// Gradient of batch_loss; same layout and length as w.params. Throws on a non-finite loss.
std::vector<double> backward(const ModelWeights& w, std::span<const Sample> batch);

/// As backward(), reusing a workspace and output buffer; returns the loss.
double loss_and_gradient(std::span<const double> params, Network& net, std::span<const Sample> batch,
                         std::vector<double>& grad);

}  // namespace softtouch::nn
