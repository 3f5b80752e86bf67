#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nqe/grid.hpp"
#include "nqe/rng.hpp"

// Per-dimension conditional quantile regressor: an MLP whose raw input is
// concatenated to every hidden layer, with a softmax-cumsum head that maps
// n_bin logits to n_bin-1 strictly increasing interior quantiles.

namespace nqe::net {

struct NetArch {
    int input_dim = 1;
    int n_hidden = 10;
    int width = 512;
    int n_bin = 16;
    double support_lo = 0.0;
    double support_hi = 1.0;
};

struct TrainConfig {
    double lambda_reg = 0.1;
    double f1 = 1.1;
    double f2 = 0.8;
    double p0_keep = 0.5;   // fraction of quantile terms kept per batch
    double f0 = 1.0;        // keep-weight exponent on the bin-average pdf
    int batch_size = 256;
    std::vector<double> lr_grid{5e-4, 1e-4, 2e-5};
    std::vector<double> weight_decay_grid{0.0, 1.0, 10.0};
    double lr_decay = 0.9;  // applied after every lr_decay_every epochs
    int lr_decay_every = 5;
    int patience = 30;
    int max_epochs = 300;
};

struct Tensor {
    int rows = 0, cols = 0;
    std::vector<double> v;
    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0.0) {}
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
    std::size_t size() const { return v.size(); }
};

class QuantileNet;

// Per-batch activations, reused across steps.
struct Workspace {
    int n = 0;
    std::vector<Tensor> in;   // input of each linear layer
    std::vector<Tensor> z;    // pre-activation
    std::vector<Tensor> h;    // post-activation
    Tensor logits, soft, quant;
};

struct Gradients {
    std::vector<Tensor> w;
    std::vector<Tensor> b;
};

class QuantileNet {
public:
    QuantileNet() = default;
    explicit QuantileNet(const NetArch& arch);

    const NetArch& arch() const { return arch_; }
    int n_layers() const { return static_cast<int>(w_.size()); }
    int n_quantiles() const { return arch_.n_bin - 1; }

    void init_params(numerics::RngState rng);

    // x: n rows of arch.input_dim; fills ws and returns the quantile matrix
    // (n x n_bin-1) inside ws.quant.
    void forward(const double* x, int n, Workspace& ws) const;
    // Convenience single-row forward.
    interp::QuantileGrid forward_grid(const double* x) const;

    // Backpropagate d(loss)/d(quantiles) through the head and the MLP.
    // Throws NonFiniteGradient on non-finite values.
    void backward(const Workspace& ws, const double* g_quant, Gradients& g) const;

    std::vector<Tensor>& weights() { return w_; }
    std::vector<Tensor>& biases() { return b_; }
    const std::vector<Tensor>& weights() const { return w_; }
    const std::vector<Tensor>& biases() const { return b_; }

private:
    NetArch arch_;
    std::vector<Tensor> w_, b_;
};

// ---- loss pieces (quantile levels are i/n_bin) ----

// Pinball loss of one predicted grid against scalar theta, summed over kept
// levels; keep_mask may be empty (= keep all).
double pinball_loss(const interp::QuantileGrid& grid, double theta,
                    const std::vector<std::uint8_t>& keep_mask);

// Smoothness penalty of one grid (Heaviside-gated squared log excess of each
// interior bin's average pdf over the interpolated neighbor value).
double smoothness_penalty(const interp::QuantileGrid& grid, double f1, double f2);

// No-replacement keep mask over quantile levels with probabilities
// proportional to avg_p^-f0; exactly ceil(p0*(n_levels)) entries set.
std::vector<std::uint8_t> dropout_mask_from_avg(const std::vector<double>& avg_p,
                                                double p0, double f0,
                                                numerics::RngState& rng);
std::vector<std::uint8_t> dropout_mask(const interp::QuantileGrid& grid, double p0, double f0,
                                       numerics::RngState& rng);

// Batch loss L = L0 * (1 + lambda * L1); outputs the mean pinball loss, the
// mean penalty and (optionally) d(total)/d(quantiles).
struct BatchLoss {
    double total = 0.0;
    double pinball = 0.0;
    double penalty = 0.0;
};
BatchLoss batch_loss(const double* quant, const double* theta, int n, int n_bin,
                     double support_lo, double support_hi,
                     const std::vector<std::uint8_t>& keep_mask, double lambda_reg,
                     double f1, double f2, double* g_quant /* nullable */);

// ---- training ----

struct EpochLog {
    int realization = 0;
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double stepsize = 0.0;
};

struct TrainResult {
    QuantileNet net;
    double best_val_loss = 0.0;
    int best_realization = 0;
    std::vector<EpochLog> log;
};

// Trains the (lr x weight_decay) grid of realizations with AdamW, stepsize
// decay and patience-based early stopping; returns the realization with the
// lowest validation loss. Throws EmptyDataset / AllRealizationsDiverged.
TrainResult train_quantile_net(const double* x_train, const double* th_train, int n_train,
                               const double* x_val, const double* th_val, int n_val,
                               const NetArch& arch, const TrainConfig& cfg,
                               numerics::RngState rng);

} // namespace nqe::net
