#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlqas/rng.hpp"

#include "json.hpp"

namespace rlqas {

struct NonFiniteLossError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully connected network: rectifier hidden layers, linear output.
class QNetwork {
public:
    explicit QNetwork(std::vector<std::size_t> layer_sizes);

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    static QNetwork uniform_fan_in(const std::vector<std::size_t>& layer_sizes, SplitMix64& rng);

    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t output_dim() const { return sizes_.back(); }
    std::size_t layer_count() const { return sizes_.size() - 1; }

    std::vector<double> forward(const std::vector<double>& input) const;

    // x: batch x input_dim row-major. Returns batch x output_dim in `out`.
    // When `activations` is non-null it receives the post-activation values of
    // every layer (index 0 = input copy), as needed for backprop.
    void forward_batch(const double* x, std::size_t batch,
                       std::vector<std::vector<double>>* activations,
                       std::vector<double>& out) const;

    std::vector<std::vector<double>>& weights() { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::vector<double>> weights_;  // layer l: (sizes_[l+1] x sizes_[l]) row-major
    std::vector<std::vector<double>> biases_;   // layer l: sizes_[l+1]
};

struct AdamState {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step = 0;
    std::vector<std::vector<double>> mw, vw, mb, vb;

    static AdamState for_network(const QNetwork& net, double lr);

    void apply(QNetwork& net, const std::vector<std::vector<double>>& grad_w,
               const std::vector<std::vector<double>>& grad_b);
};

struct EpsilonSchedule {
    double value = 1.0;
    double decay = 0.99995;
    double floor = 0.05;

    void advance() { value = std::max(floor, value * decay); }
};

struct Transition {
    std::vector<double> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool terminal = false;
};

// FIFO ring of transitions; uniform batch sampling without replacement.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 15000) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return data_.size(); }
    const Transition& operator[](std::size_t i) const { return data_[(head_ + i) % data_.size()]; }

    void push(Transition t);
    std::vector<std::size_t> sample_indices(std::size_t batch, SplitMix64& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // index of the oldest element once full
    std::vector<Transition> data_;
};

// Epsilon-greedy action choice; greedy ties resolve to the lowest index.
int select_action(const QNetwork& net, const std::vector<double>& obs, double epsilon,
                  SplitMix64& rng);

// Mean-squared TD error of a batch and its gradients: actions are selected by
// the online network on the next observation and evaluated by the target
// network; terminal transitions use the bare reward. Gradient outputs may be
// null when only the loss is wanted.
double ddqn_loss_and_grads(const QNetwork& online, const QNetwork& target,
                           const std::vector<const Transition*>& batch, double gamma,
                           std::vector<std::vector<double>>* grad_w,
                           std::vector<std::vector<double>>* grad_b);

// One DDQN step: the loss above followed by an ADAM update of the online
// network. Returns the batch loss; throws NonFiniteLossError if it diverged.
double ddqn_update(QNetwork& online, const QNetwork& target,
                   const std::vector<const Transition*>& batch, AdamState& adam, double gamma);

void sync_target(const QNetwork& online, QNetwork& target);

// --- toy MDP harness -------------------------------------------------------

struct ToyMdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::size_t start_state = 0;
    std::vector<std::vector<std::size_t>> next;  // [state][action]
    std::vector<std::vector<double>> reward;     // [state][action]
    std::vector<std::vector<int>> terminal;      // [state][action], 0/1
};

struct ToyTrainConfig {
    std::uint64_t seed = 1;
    std::size_t max_steps = 20000;
    double gamma = 0.9;
    std::vector<std::size_t> hidden = {32, 32};
    double lr = 1e-3;
    std::size_t batch = 32;
    std::size_t buffer_capacity = 2000;
    std::size_t learning_starts = 200;
    std::size_t sync_period = 100;
    double eps_decay = 0.999;
    double eps_floor = 0.05;
    std::size_t episode_cap = 64;  // steps per episode
    std::size_t eval_every = 250;
    // Early-stop predicate on the current greedy policy (may be empty).
    std::function<bool(const std::vector<std::size_t>&)> stop_when;
};

struct ToyTrainResult {
    std::vector<std::size_t> greedy_policy;
    std::vector<double> episode_returns;  // learning curve
    std::size_t steps_used = 0;
    bool stopped_early = false;
    QNetwork online;
};

ToyTrainResult train_toy_mdp(const ToyMdp& mdp, const ToyTrainConfig& cfg);

// --- checkpointing ----------------------------------------------------------

// Binary format: magic "RLQAS1", little-endian shape headers, 64-bit float
// tensors; hyperparameters go to a JSON sidecar at <path>.json.
struct AgentCheckpoint {
    QNetwork online;
    QNetwork target;
    AdamState adam;
    double epsilon = 1.0;
    std::uint64_t policy_rng_state = 0;
    std::uint64_t updates_done = 0;
    std::uint64_t env_steps = 0;
    std::uint64_t episodes_done = 0;
    std::uint64_t successes = 0;
    double total_reward = 0.0;
};

void save_checkpoint(const std::string& path, const AgentCheckpoint& ckpt,
                     const nlohmann::json& hyperparams);
AgentCheckpoint load_checkpoint(const std::string& path);

}  // namespace rlqas
