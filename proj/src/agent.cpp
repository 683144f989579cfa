#include "rlqas/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include "rlqas/kernels.hpp"

namespace rlqas {

QNetwork::QNetwork(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("QNetwork: need at least two layer sizes");
    for (std::size_t s : sizes_)
        if (s == 0) throw std::invalid_argument("QNetwork: zero-width layer");
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        weights_.emplace_back(sizes_[l + 1] * sizes_[l], 0.0);
        biases_.emplace_back(sizes_[l + 1], 0.0);
    }
}

QNetwork QNetwork::uniform_fan_in(const std::vector<std::size_t>& layer_sizes, SplitMix64& rng) {
    QNetwork net(layer_sizes);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.sizes_[l]));
        for (double& w : net.weights_[l]) w = rng.uniform(-bound, bound);
    }
    return net;
}

void QNetwork::forward_batch(const double* x, std::size_t batch,
                             std::vector<std::vector<double>>* activations,
                             std::vector<double>& out) const {
    const std::size_t layers = layer_count();
    std::vector<double> cur(x, x + batch * sizes_[0]);
    if (activations) {
        activations->clear();
        activations->push_back(cur);
    }
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = sizes_[l];
        const std::size_t width = sizes_[l + 1];
        std::vector<double> next(batch * width);
        kernels::matmul_nt(cur.data(), weights_[l].data(), next.data(), batch, width, in);
        if (l + 1 < layers) {
            kernels::add_bias_relu(next.data(), biases_[l].data(), batch, width);
        } else {
            kernels::add_bias(next.data(), biases_[l].data(), batch, width);
        }
        cur.swap(next);
        if (activations && l + 1 < layers) activations->push_back(cur);
    }
    out.swap(cur);
}

std::vector<double> QNetwork::forward(const std::vector<double>& input) const {
    if (input.size() != input_dim())
        throw std::invalid_argument("QNetwork::forward: input dimension mismatch");
    std::vector<double> out;
    forward_batch(input.data(), 1, nullptr, out);
    return out;
}

AdamState AdamState::for_network(const QNetwork& net, double lr_) {
    AdamState s;
    s.lr = lr_;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        s.mw.emplace_back(net.weights()[l].size(), 0.0);
        s.vw.emplace_back(net.weights()[l].size(), 0.0);
        s.mb.emplace_back(net.biases()[l].size(), 0.0);
        s.vb.emplace_back(net.biases()[l].size(), 0.0);
    }
    return s;
}

namespace {

void adam_tensor(std::vector<double>& w, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, double lr, double b1, double b2, double eps,
                 double bc1, double bc2) {
    const std::size_t n = w.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

void AdamState::apply(QNetwork& net, const std::vector<std::vector<double>>& grad_w,
                      const std::vector<std::vector<double>>& grad_b) {
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        adam_tensor(net.weights()[l], grad_w[l], mw[l], vw[l], lr, beta1, beta2, eps, bc1, bc2);
        adam_tensor(net.biases()[l], grad_b[l], mb[l], vb[l], lr, beta1, beta2, eps, bc1, bc2);
    }
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, SplitMix64& rng) const {
    if (batch > size()) throw std::invalid_argument("ReplayBuffer: batch larger than buffer");
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t j = 0; j < batch; ++j) {
        const std::size_t k = j + rng.uniform_below(idx.size() - j);
        std::swap(idx[j], idx[k]);
    }
    idx.resize(batch);
    return idx;
}

int select_action(const QNetwork& net, const std::vector<double>& obs, double epsilon,
                  SplitMix64& rng) {
    if (obs.size() != net.input_dim())
        throw std::invalid_argument("select_action: observation dimension mismatch");
    const double u = rng.uniform01();
    if (u < epsilon) return static_cast<int>(rng.uniform_below(net.output_dim()));
    const std::vector<double> q = net.forward(obs);
    std::size_t best = 0;
    for (std::size_t a = 1; a < q.size(); ++a)
        if (q[a] > q[best]) best = a;
    return static_cast<int>(best);
}

double ddqn_loss_and_grads(const QNetwork& online, const QNetwork& target,
                           const std::vector<const Transition*>& batch, double gamma,
                           std::vector<std::vector<double>>* grad_w,
                           std::vector<std::vector<double>>* grad_b) {
    if (batch.empty()) throw std::invalid_argument("ddqn_update: empty batch");
    const std::size_t b = batch.size();
    const std::size_t in = online.input_dim();
    const std::size_t n_actions = online.output_dim();

    std::vector<double> x(b * in), xn(b * in);
    for (std::size_t i = 0; i < b; ++i) {
        if (batch[i]->obs.size() != in || batch[i]->next_obs.size() != in)
            throw std::invalid_argument("ddqn_update: transition dimension mismatch");
        std::copy(batch[i]->obs.begin(), batch[i]->obs.end(), x.begin() + i * in);
        std::copy(batch[i]->next_obs.begin(), batch[i]->next_obs.end(), xn.begin() + i * in);
    }

    std::vector<std::vector<double>> acts;
    std::vector<double> q, q_next_online, q_next_target;
    online.forward_batch(x.data(), b, grad_w ? &acts : nullptr, q);
    online.forward_batch(xn.data(), b, nullptr, q_next_online);
    target.forward_batch(xn.data(), b, nullptr, q_next_target);

    std::vector<double> delta(b * n_actions, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        const Transition& t = *batch[i];
        double y = t.reward;
        if (!t.terminal) {
            std::size_t astar = 0;
            const double* row = q_next_online.data() + i * n_actions;
            for (std::size_t a = 1; a < n_actions; ++a)
                if (row[a] > row[astar]) astar = a;
            y += gamma * q_next_target[i * n_actions + astar];
        }
        const double td = q[i * n_actions + t.action] - y;
        loss += td * td;
        delta[i * n_actions + t.action] = 2.0 * td / static_cast<double>(b);
    }
    loss /= static_cast<double>(b);
    if (!grad_w || !grad_b) return loss;

    const std::size_t layers = online.layer_count();
    grad_w->assign(layers, {});
    grad_b->assign(layers, {});
    std::vector<double> cur_delta = std::move(delta);
    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t width = online.layer_sizes()[l + 1];
        const std::size_t in_l = online.layer_sizes()[l];
        (*grad_w)[l].resize(width * in_l);
        (*grad_b)[l].resize(width);
        kernels::matmul_tn(cur_delta.data(), acts[l].data(), (*grad_w)[l].data(), width, in_l, b);
        kernels::col_sums(cur_delta.data(), (*grad_b)[l].data(), b, width);
        if (l > 0) {
            std::vector<double> prev(b * in_l);
            kernels::matmul_nn(cur_delta.data(), online.weights()[l].data(), prev.data(), b,
                               in_l, width);
            kernels::relu_backward(prev.data(), acts[l].data(), b * in_l);
            cur_delta.swap(prev);
        }
    }
    return loss;
}

double ddqn_update(QNetwork& online, const QNetwork& target,
                   const std::vector<const Transition*>& batch, AdamState& adam, double gamma) {
    std::vector<std::vector<double>> grad_w, grad_b;
    const double loss = ddqn_loss_and_grads(online, target, batch, gamma, &grad_w, &grad_b);
    if (!std::isfinite(loss)) {
        throw NonFiniteLossError("ddqn_update: non-finite loss after " +
                                 std::to_string(adam.step) + " optimiser steps");
    }
    adam.apply(online, grad_w, grad_b);
    return loss;
}

void sync_target(const QNetwork& online, QNetwork& target) {
    if (online.layer_sizes() != target.layer_sizes())
        throw std::invalid_argument("sync_target: layer sizes differ");
    target.weights() = online.weights();
    target.biases() = online.biases();
}

ToyTrainResult train_toy_mdp(const ToyMdp& mdp, const ToyTrainConfig& cfg) {
    std::vector<std::size_t> sizes;
    sizes.push_back(mdp.n_states);
    for (std::size_t h : cfg.hidden) sizes.push_back(h);
    sizes.push_back(mdp.n_actions);

    SplitMix64 init_rng = SplitMix64::derive(cfg.seed, 1);
    SplitMix64 policy_rng = SplitMix64::derive(cfg.seed, 2);
    QNetwork online = QNetwork::uniform_fan_in(sizes, init_rng);
    QNetwork target = online;
    AdamState adam = AdamState::for_network(online, cfg.lr);
    ReplayBuffer buffer(cfg.buffer_capacity);
    EpsilonSchedule eps{1.0, cfg.eps_decay, cfg.eps_floor};

    auto one_hot = [&](std::size_t s) {
        std::vector<double> v(mdp.n_states, 0.0);
        v[s] = 1.0;
        return v;
    };
    auto greedy = [&]() {
        std::vector<std::size_t> policy(mdp.n_states);
        for (std::size_t s = 0; s < mdp.n_states; ++s) {
            const std::vector<double> q = online.forward(one_hot(s));
            std::size_t best = 0;
            for (std::size_t a = 1; a < q.size(); ++a)
                if (q[a] > q[best]) best = a;
            policy[s] = best;
        }
        return policy;
    };

    ToyTrainResult result{.greedy_policy = {}, .episode_returns = {}, .steps_used = 0,
                          .stopped_early = false, .online = online};

    std::size_t state = mdp.start_state;
    std::size_t episode_len = 0;
    double episode_return = 0.0;
    std::size_t updates = 0;

    for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
        const std::vector<double> obs = one_hot(state);
        const int action = select_action(online, obs, eps.value, policy_rng);
        eps.advance();

        const std::size_t nxt = mdp.next[state][action];
        const double r = mdp.reward[state][action];
        const bool terminal = mdp.terminal[state][action] != 0;
        episode_return += r;
        ++episode_len;

        buffer.push({obs, action, r, one_hot(nxt), terminal});

        if (buffer.size() >= std::max(cfg.batch, cfg.learning_starts)) {
            const std::vector<std::size_t> idx = buffer.sample_indices(cfg.batch, policy_rng);
            std::vector<const Transition*> batch;
            batch.reserve(idx.size());
            for (std::size_t i : idx) batch.push_back(&buffer[i]);
            ddqn_update(online, target, batch, adam, cfg.gamma);
            ++updates;
            if (updates % cfg.sync_period == 0) sync_target(online, target);
        }

        if (terminal || episode_len >= cfg.episode_cap) {
            result.episode_returns.push_back(episode_return);
            episode_return = 0.0;
            episode_len = 0;
            state = mdp.start_state;
        } else {
            state = nxt;
        }

        result.steps_used = step;
        if (cfg.stop_when && step % cfg.eval_every == 0) {
            if (cfg.stop_when(greedy())) {
                result.stopped_early = true;
                break;
            }
        }
    }

    result.greedy_policy = greedy();
    result.online = online;
    return result;
}

// --- checkpointing ----------------------------------------------------------

namespace {

constexpr char kMagic[6] = {'R', 'L', 'Q', 'A', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& f, std::uint64_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ofstream& f, double v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_tensor(std::ofstream& f, const std::vector<double>& t, std::uint32_t rows,
                  std::uint32_t cols) {
    write_u32(f, rows);
    write_u32(f, cols);
    f.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
}

std::uint32_t read_u32(std::ifstream& f) {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::uint64_t read_u64(std::ifstream& f) {
    std::uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
double read_f64(std::ifstream& f) {
    double v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::vector<double> read_tensor(std::ifstream& f, std::size_t want_rows, std::size_t want_cols) {
    const std::uint32_t rows = read_u32(f);
    const std::uint32_t cols = read_u32(f);
    if (rows != want_rows || cols != want_cols)
        throw CheckpointError("checkpoint: tensor shape mismatch");
    std::vector<double> t(static_cast<std::size_t>(rows) * cols);
    f.read(reinterpret_cast<char*>(t.data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!f) throw CheckpointError("checkpoint: truncated tensor data");
    return t;
}

}  // namespace

void save_checkpoint(const std::string& path, const AgentCheckpoint& ckpt,
                     const nlohmann::json& hyperparams) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError("checkpoint: cannot open " + path + " for writing");
    f.write(kMagic, sizeof(kMagic));
    write_u32(f, kVersion);

    const auto& sizes = ckpt.online.layer_sizes();
    write_u64(f, sizes.size());
    for (std::size_t s : sizes) write_u64(f, s);

    auto write_net = [&](const QNetwork& net) {
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            write_tensor(f, net.weights()[l], static_cast<std::uint32_t>(sizes[l + 1]),
                         static_cast<std::uint32_t>(sizes[l]));
            write_tensor(f, net.biases()[l], 1, static_cast<std::uint32_t>(sizes[l + 1]));
        }
    };
    write_net(ckpt.online);
    write_net(ckpt.target);
    for (std::size_t l = 0; l < ckpt.online.layer_count(); ++l) {
        write_tensor(f, ckpt.adam.mw[l], static_cast<std::uint32_t>(sizes[l + 1]),
                     static_cast<std::uint32_t>(sizes[l]));
        write_tensor(f, ckpt.adam.vw[l], static_cast<std::uint32_t>(sizes[l + 1]),
                     static_cast<std::uint32_t>(sizes[l]));
        write_tensor(f, ckpt.adam.mb[l], 1, static_cast<std::uint32_t>(sizes[l + 1]));
        write_tensor(f, ckpt.adam.vb[l], 1, static_cast<std::uint32_t>(sizes[l + 1]));
    }
    write_u64(f, ckpt.adam.step);
    write_f64(f, ckpt.adam.lr);
    write_f64(f, ckpt.epsilon);
    write_u64(f, ckpt.policy_rng_state);
    write_u64(f, ckpt.updates_done);
    write_u64(f, ckpt.env_steps);
    write_u64(f, ckpt.episodes_done);
    write_u64(f, ckpt.successes);
    write_f64(f, ckpt.total_reward);
    if (!f) throw CheckpointError("checkpoint: write failed for " + path);
    f.close();

    std::ofstream side(path + ".json", std::ios::trunc);
    if (!side) throw CheckpointError("checkpoint: cannot write sidecar for " + path);
    side << hyperparams.dump(2) << "\n";
}

AgentCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CheckpointError("checkpoint: cannot open " + path);
    char magic[6];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw CheckpointError("checkpoint: bad magic");
    if (read_u32(f) != kVersion) throw CheckpointError("checkpoint: unsupported version");

    const std::uint64_t n_sizes = read_u64(f);
    if (n_sizes < 2 || n_sizes > 64) throw CheckpointError("checkpoint: bad layer count");
    std::vector<std::size_t> sizes(n_sizes);
    for (auto& s : sizes) s = read_u64(f);

    QNetwork online(sizes), target(sizes);
    auto read_net = [&](QNetwork& net) {
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            net.weights()[l] = read_tensor(f, sizes[l + 1], sizes[l]);
            net.biases()[l] = read_tensor(f, 1, sizes[l + 1]);
        }
    };
    read_net(online);
    read_net(target);
    AdamState adam = AdamState::for_network(online, 1e-4);
    for (std::size_t l = 0; l < online.layer_count(); ++l) {
        adam.mw[l] = read_tensor(f, sizes[l + 1], sizes[l]);
        adam.vw[l] = read_tensor(f, sizes[l + 1], sizes[l]);
        adam.mb[l] = read_tensor(f, 1, sizes[l + 1]);
        adam.vb[l] = read_tensor(f, 1, sizes[l + 1]);
    }
    AgentCheckpoint ckpt{std::move(online), std::move(target), std::move(adam)};
    ckpt.adam.step = read_u64(f);
    ckpt.adam.lr = read_f64(f);
    ckpt.epsilon = read_f64(f);
    ckpt.policy_rng_state = read_u64(f);
    ckpt.updates_done = read_u64(f);
    ckpt.env_steps = read_u64(f);
    ckpt.episodes_done = read_u64(f);
    ckpt.successes = read_u64(f);
    ckpt.total_reward = read_f64(f);
    if (!f) throw CheckpointError("checkpoint: truncated file");
    return ckpt;
}

}  // namespace rlqas
