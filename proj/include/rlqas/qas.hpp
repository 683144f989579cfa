#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlqas/agent.hpp"
#include "rlqas/ansatz.hpp"
#include "rlqas/config.hpp"
#include "rlqas/qcore.hpp"

namespace rlqas {

// Shaped reward: success bonus below zeta + 1e-5, otherwise -ln(cost - zeta).
// The success branch wins on the overlap band.
double reward(double cost_t, double zeta, double r_success);

struct EpisodeRecord {
    std::size_t episode = 0;
    bool success = false;
    double final_cost = 0.0;
    std::size_t steps = 0;
    Circuit circuit;
    ResourceCount res;
    std::vector<double> cost_trace;
    std::vector<double> reward_trace;
    double concurrence_ansatz = 0.0;   // circuit applied to |00>
    double concurrence_evolved = 0.0;  // evolved input state, pre-dephasing
    double cond_entropy_input_q0 = 0.0;
    double cond_entropy_input_q1 = 0.0;
    double cond_entropy_evolved_q0 = 0.0;
    double cond_entropy_evolved_q1 = 0.0;
    std::vector<double> inferred_eigenvalues;  // descending
};

void to_json(nlohmann::json& j, const EpisodeRecord& r);
void from_json(const nlohmann::json& j, EpisodeRecord& r);

struct ExperimentSummary {
    std::size_t episodes_total = 0;
    std::size_t episodes_successful = 0;
    double total_reward = 0.0;
    std::size_t first_success_count = 0;  // how many successes the averages use (<= 100)
    double avg_one_qubit_gates = 0.0;
    double avg_two_qubit_gates = 0.0;
    double avg_depth = 0.0;
    double target_concurrence = 0.0;
    double effective_concurrence = 0.0;
    std::string state_id;
    nlohmann::json config_echo;
};

nlohmann::json summary_to_json(const ExperimentSummary& s);

// Mutable agent half of the environment loop; persists across episodes.
struct AgentRuntime {
    QNetwork online;
    QNetwork target;
    AdamState adam;
    ReplayBuffer buffer;
    EpsilonSchedule eps;
    SplitMix64 policy_rng;
    std::uint64_t updates_done = 0;
    std::uint64_t env_steps = 0;

    static AgentRuntime make(const ExperimentConfig& cfg, std::size_t obs_dim);
};

// One architecture-search episode: act, append, retune parameters (warm
// start), reward, store, learn; ends on success or the step cap.
EpisodeRecord run_episode(std::size_t episode_index, const DensityMatrix& effective_rho,
                          AgentRuntime& agent, const ExperimentConfig& cfg);

struct RunOptions {
    std::string resume_checkpoint;  // empty = fresh agent
    // Optional early stop, checked after each episode record.
    std::function<bool(const EpisodeRecord&)> stop_after_episode;
};

// Full experiment: writes episodes.jsonl, summary.json and periodic agent
// checkpoints under cfg.out_dir. Returns the summary.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// The state actually fed to the searched circuit: the entanglement-enhancing
// block applied to the target.
DensityMatrix effective_input_state(const DensityMatrix& target, double ee_theta);

DensityMatrix resolve_target_state(const ExperimentConfig& cfg);

}  // namespace rlqas
