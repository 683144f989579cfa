#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlqas/qcore.hpp"

#include "json.hpp"

namespace rlqas {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kCodeVersion = "1.0.0";

struct AgentHyperparams {
    double gamma = 0.88;
    std::size_t batch_size = 64;
    std::size_t sync_period = 500;
    std::size_t learning_starts = 1000;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.99995;
    double epsilon_floor = 0.05;
    std::vector<std::size_t> hidden_layers = {1000, 1000, 1000, 1000, 1000};
    double learning_rate = 1e-4;
    std::size_t buffer_capacity = 15000;
};

struct Seeds {
    std::uint64_t agent_init = 1;
    std::uint64_t sampler = 1;
    std::uint64_t policy = 1;
};

// Everything one training run needs; round-trips through JSON unchanged.
struct ExperimentConfig {
    int schema_version = 1;
    std::string state_file;  // when empty, the Hilbert-Schmidt sampler is used
    std::size_t n_qubits = 2;
    std::size_t episodes = 10000;
    double zeta = 1e-4;
    double r_success = 5.0;
    std::size_t d_max = 40;
    double ee_theta = 0.0;
    std::size_t optimizer_budget = 300;
    AgentHyperparams agent;
    Seeds seeds;
    std::string out_dir = "run";
    std::size_t checkpoint_every = 500;

    void validate() const;
    std::string state_id() const;
};

void to_json(nlohmann::json& j, const AgentHyperparams& a);
void from_json(const nlohmann::json& j, AgentHyperparams& a);
void to_json(nlohmann::json& j, const Seeds& s);
void from_json(const nlohmann::json& j, Seeds& s);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& cfg);

// State files: complex entries as [re, im] pairs.
nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& j);
DensityMatrix load_state(const std::string& path);
void save_state(const std::string& path, const DensityMatrix& rho);

}  // namespace rlqas
