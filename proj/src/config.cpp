#include "rlqas/config.hpp"

#include <fstream>

namespace rlqas {

void ExperimentConfig::validate() const {
    if (schema_version != 1) throw ConfigError("config: unsupported schema_version");
    if (n_qubits != 2) throw ConfigError("config: only 2-qubit targets are supported");
    if (zeta <= 0.0) throw ConfigError("config: zeta must be positive");
    if (d_max < 1) throw ConfigError("config: d_max must be at least 1");
    if (ee_theta < 0.0 || ee_theta > 0.5) throw ConfigError("config: ee_theta outside [0, 0.5]");
    if (optimizer_budget < 1) throw ConfigError("config: optimizer budget must be >= 1");
    if (agent.batch_size < 1) throw ConfigError("config: batch size must be >= 1");
    if (agent.buffer_capacity < agent.batch_size)
        throw ConfigError("config: buffer capacity below batch size");
    if (agent.gamma < 0.0 || agent.gamma >= 1.0) throw ConfigError("config: gamma outside [0, 1)");
    if (agent.epsilon_decay <= 0.0 || agent.epsilon_decay > 1.0)
        throw ConfigError("config: epsilon decay outside (0, 1]");
    if (agent.epsilon_floor < 0.0 || agent.epsilon_floor > agent.epsilon_start)
        throw ConfigError("config: epsilon floor above start");
    if (agent.hidden_layers.empty()) throw ConfigError("config: need at least one hidden layer");
    if (agent.learning_rate <= 0.0) throw ConfigError("config: learning rate must be positive");
    if (out_dir.empty()) throw ConfigError("config: out_dir empty");
}

std::string ExperimentConfig::state_id() const {
    if (!state_file.empty()) return state_file;
    return "hs" + std::to_string(n_qubits) + "q-seed" + std::to_string(seeds.sampler);
}

void to_json(nlohmann::json& j, const AgentHyperparams& a) {
    j = nlohmann::json{{"gamma", a.gamma},
                       {"batch_size", a.batch_size},
                       {"sync_period", a.sync_period},
                       {"learning_starts", a.learning_starts},
                       {"epsilon_start", a.epsilon_start},
                       {"epsilon_decay", a.epsilon_decay},
                       {"epsilon_floor", a.epsilon_floor},
                       {"hidden_layers", a.hidden_layers},
                       {"learning_rate", a.learning_rate},
                       {"buffer_capacity", a.buffer_capacity}};
}

void from_json(const nlohmann::json& j, AgentHyperparams& a) {
    a = AgentHyperparams{};
    j.at("gamma").get_to(a.gamma);
    j.at("batch_size").get_to(a.batch_size);
    j.at("sync_period").get_to(a.sync_period);
    j.at("learning_starts").get_to(a.learning_starts);
    j.at("epsilon_start").get_to(a.epsilon_start);
    j.at("epsilon_decay").get_to(a.epsilon_decay);
    j.at("epsilon_floor").get_to(a.epsilon_floor);
    j.at("hidden_layers").get_to(a.hidden_layers);
    j.at("learning_rate").get_to(a.learning_rate);
    j.at("buffer_capacity").get_to(a.buffer_capacity);
}

void to_json(nlohmann::json& j, const Seeds& s) {
    j = nlohmann::json{{"agent_init", s.agent_init}, {"sampler", s.sampler}, {"policy", s.policy}};
}

void from_json(const nlohmann::json& j, Seeds& s) {
    s = Seeds{};
    j.at("agent_init").get_to(s.agent_init);
    j.at("sampler").get_to(s.sampler);
    j.at("policy").get_to(s.policy);
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{{"schema_version", c.schema_version},
                       {"state_file", c.state_file},
                       {"n_qubits", c.n_qubits},
                       {"episodes", c.episodes},
                       {"zeta", c.zeta},
                       {"r_success", c.r_success},
                       {"d_max", c.d_max},
                       {"ee_theta", c.ee_theta},
                       {"optimizer_budget", c.optimizer_budget},
                       {"agent", c.agent},
                       {"seeds", c.seeds},
                       {"out_dir", c.out_dir},
                       {"checkpoint_every", c.checkpoint_every}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    c = ExperimentConfig{};
    j.at("schema_version").get_to(c.schema_version);
    j.at("state_file").get_to(c.state_file);
    j.at("n_qubits").get_to(c.n_qubits);
    j.at("episodes").get_to(c.episodes);
    j.at("zeta").get_to(c.zeta);
    j.at("r_success").get_to(c.r_success);
    j.at("d_max").get_to(c.d_max);
    j.at("ee_theta").get_to(c.ee_theta);
    j.at("optimizer_budget").get_to(c.optimizer_budget);
    j.at("agent").get_to(c.agent);
    j.at("seeds").get_to(c.seeds);
    j.at("out_dir").get_to(c.out_dir);
    j.at("checkpoint_every").get_to(c.checkpoint_every);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    ExperimentConfig cfg = j.get<ExperimentConfig>();
    cfg.validate();
    return cfg;
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("config: cannot write " + path);
    f << nlohmann::json(cfg).dump(2) << "\n";
    if (!f) throw IoError("config: write failed for " + path);
}

nlohmann::json state_to_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            const cplx z = rho.mat()(i, j);
            row.push_back({z.real(), z.imag()});
        }
        rows.push_back(row);
    }
    return nlohmann::json{{"n_qubits", rho.n_qubits()}, {"matrix", rows}};
}

DensityMatrix state_from_json(const nlohmann::json& j) {
    const std::size_t n = j.at("n_qubits").get<std::size_t>();
    const std::size_t d = std::size_t(1) << n;
    const nlohmann::json& rows = j.at("matrix");
    if (rows.size() != d) throw ConfigError("state json: wrong row count");
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw ConfigError("state json: wrong column count");
        for (std::size_t c = 0; c < d; ++c) {
            const nlohmann::json& entry = rows[i][c];
            if (!entry.is_array() || entry.size() != 2)
                throw ConfigError("state json: entries must be [re, im] pairs");
            m(i, c) = cplx(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return DensityMatrix(n, std::move(m));
}

DensityMatrix load_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("state: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("state: " + path + " is not valid JSON: " + e.what());
    }
    return state_from_json(j);
}

void save_state(const std::string& path, const DensityMatrix& rho) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("state: cannot write " + path);
    f << state_to_json(rho).dump(2) << "\n";
    if (!f) throw IoError("state: write failed for " + path);
}

}  // namespace rlqas
