#include "rlqas/qas.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "rlqas/vqsd.hpp"

namespace rlqas {

double reward(double cost_t, double zeta, double r_success) {
    if (cost_t < zeta + 1e-5) return r_success;
    return -std::log(cost_t - zeta);
}

void to_json(nlohmann::json& j, const EpisodeRecord& r) {
    j = nlohmann::json{{"episode", r.episode},
                       {"success", r.success},
                       {"final_cost", r.final_cost},
                       {"steps", r.steps},
                       {"circuit", r.circuit},
                       {"resources",
                        {{"one_qubit_gates", r.res.one_qubit_gates},
                         {"two_qubit_gates", r.res.two_qubit_gates},
                         {"depth", r.res.depth}}},
                       {"cost_trace", r.cost_trace},
                       {"reward_trace", r.reward_trace},
                       {"concurrence_ansatz", r.concurrence_ansatz},
                       {"concurrence_evolved", r.concurrence_evolved},
                       {"cond_entropy_input", {r.cond_entropy_input_q0, r.cond_entropy_input_q1}},
                       {"cond_entropy_evolved",
                        {r.cond_entropy_evolved_q0, r.cond_entropy_evolved_q1}},
                       {"inferred_eigenvalues", r.inferred_eigenvalues}};
}

void from_json(const nlohmann::json& j, EpisodeRecord& r) {
    r = EpisodeRecord{};
    j.at("episode").get_to(r.episode);
    j.at("success").get_to(r.success);
    j.at("final_cost").get_to(r.final_cost);
    j.at("steps").get_to(r.steps);
    j.at("circuit").get_to(r.circuit);
    const nlohmann::json& res = j.at("resources");
    res.at("one_qubit_gates").get_to(r.res.one_qubit_gates);
    res.at("two_qubit_gates").get_to(r.res.two_qubit_gates);
    res.at("depth").get_to(r.res.depth);
    j.at("cost_trace").get_to(r.cost_trace);
    j.at("reward_trace").get_to(r.reward_trace);
    j.at("concurrence_ansatz").get_to(r.concurrence_ansatz);
    j.at("concurrence_evolved").get_to(r.concurrence_evolved);
    r.cond_entropy_input_q0 = j.at("cond_entropy_input").at(0).get<double>();
    r.cond_entropy_input_q1 = j.at("cond_entropy_input").at(1).get<double>();
    r.cond_entropy_evolved_q0 = j.at("cond_entropy_evolved").at(0).get<double>();
    r.cond_entropy_evolved_q1 = j.at("cond_entropy_evolved").at(1).get<double>();
    j.at("inferred_eigenvalues").get_to(r.inferred_eigenvalues);
}

nlohmann::json summary_to_json(const ExperimentSummary& s) {
    return nlohmann::json{{"schema_version", 1},
                          {"code_version", kCodeVersion},
                          {"state_id", s.state_id},
                          {"episodes_total", s.episodes_total},
                          {"episodes_successful", s.episodes_successful},
                          {"total_reward", s.total_reward},
                          {"first_success_resources",
                           {{"count", s.first_success_count},
                            {"one_qubit_gates_avg", s.avg_one_qubit_gates},
                            {"two_qubit_gates_avg", s.avg_two_qubit_gates},
                            {"depth_avg", s.avg_depth}}},
                          {"target_concurrence", s.target_concurrence},
                          {"effective_concurrence", s.effective_concurrence},
                          {"config", s.config_echo}};
}

AgentRuntime AgentRuntime::make(const ExperimentConfig& cfg, std::size_t obs_dim) {
    std::vector<std::size_t> sizes;
    sizes.push_back(obs_dim);
    for (std::size_t h : cfg.agent.hidden_layers) sizes.push_back(h);
    sizes.push_back(action_space(cfg.n_qubits).size());

    SplitMix64 init_rng = SplitMix64::derive(cfg.seeds.agent_init, 0x494E4954ull);
    QNetwork online = QNetwork::uniform_fan_in(sizes, init_rng);
    QNetwork target = online;
    AdamState adam = AdamState::for_network(online, cfg.agent.learning_rate);
    return AgentRuntime{std::move(online),
                        std::move(target),
                        std::move(adam),
                        ReplayBuffer(cfg.agent.buffer_capacity),
                        EpsilonSchedule{cfg.agent.epsilon_start, cfg.agent.epsilon_decay,
                                        cfg.agent.epsilon_floor},
                        SplitMix64::derive(cfg.seeds.policy, 0x504F4Cull)};
}

DensityMatrix effective_input_state(const DensityMatrix& target, double ee_theta) {
    return apply_unitary(target, to_unitary(build_ee_block(ee_theta)));
}

DensityMatrix resolve_target_state(const ExperimentConfig& cfg) {
    if (!cfg.state_file.empty()) return load_state(cfg.state_file);
    return sample_hs_random_state(cfg.n_qubits, cfg.seeds.sampler);
}

EpisodeRecord run_episode(std::size_t episode_index, const DensityMatrix& effective_rho,
                          AgentRuntime& agent, const ExperimentConfig& cfg) {
    EpisodeRecord rec;
    rec.episode = episode_index;

    Circuit circuit;
    circuit.n_qubits = cfg.n_qubits;
    Observation obs = encode(circuit, cfg.d_max);

    for (std::size_t step = 1; step <= cfg.d_max; ++step) {
        const int action = select_action(agent.online, obs, agent.eps.value, agent.policy_rng);
        agent.eps.advance();
        ++agent.env_steps;

        Circuit next = append_action(circuit, static_cast<std::size_t>(action));
        CostReport report =
            optimize_params(effective_rho, next, next.params, cfg.optimizer_budget);
        next.params = report.params_opt;
        double cost_t = report.cost;

        bool success = cost_t < cfg.zeta + 1e-5;
        if (success) {
            // One extra polish with a 10x budget to report the final cost.
            CostReport polish =
                optimize_params(effective_rho, next, next.params, 10 * cfg.optimizer_budget);
            next.params = polish.params_opt;
            cost_t = polish.cost;
        }

        const double r = reward(cost_t, cfg.zeta, cfg.r_success);
        const bool terminal = success || step == cfg.d_max;
        Observation next_obs = encode(next, cfg.d_max);

        agent.buffer.push({obs, action, r, next_obs, terminal});
        rec.cost_trace.push_back(cost_t);
        rec.reward_trace.push_back(r);

        if (agent.buffer.size() >= std::max(cfg.agent.batch_size, cfg.agent.learning_starts)) {
            const std::vector<std::size_t> idx =
                agent.buffer.sample_indices(cfg.agent.batch_size, agent.policy_rng);
            std::vector<const Transition*> batch;
            batch.reserve(idx.size());
            for (std::size_t i : idx) batch.push_back(&agent.buffer[i]);
            ddqn_update(agent.online, agent.target, batch, agent.adam, cfg.agent.gamma);
            ++agent.updates_done;
            if (agent.updates_done % cfg.agent.sync_period == 0)
                sync_target(agent.online, agent.target);
        }

        circuit = std::move(next);
        obs = std::move(next_obs);
        rec.steps = step;
        rec.success = success;
        if (terminal) break;
    }

    rec.final_cost = rec.cost_trace.back();
    rec.circuit = circuit;
    rec.res = resources(circuit);

    const ComplexMatrix u = to_unitary(circuit);
    const DensityMatrix evolved = apply_unitary(effective_rho, u);
    rec.concurrence_evolved = concurrence_mixed(evolved);

    std::vector<cplx> zero_amps(std::size_t(1) << cfg.n_qubits, cplx(0.0, 0.0));
    zero_amps[0] = 1.0;
    const PureState on_zero = apply_unitary(PureState(cfg.n_qubits, zero_amps), u);
    rec.concurrence_ansatz = concurrence_pure(on_zero);

    rec.cond_entropy_input_q0 = conditional_entropy(effective_rho, 0);
    rec.cond_entropy_input_q1 = conditional_entropy(effective_rho, 1);
    rec.cond_entropy_evolved_q0 = conditional_entropy(evolved, 0);
    rec.cond_entropy_evolved_q1 = conditional_entropy(evolved, 1);
    rec.inferred_eigenvalues = eigen_readout(effective_rho, u).inferred_eigenvalues;
    return rec;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("run: cannot create output directory " + cfg.out_dir);

    const DensityMatrix target_rho = resolve_target_state(cfg);
    const DensityMatrix rho_eff = effective_input_state(target_rho, cfg.ee_theta);

    const std::size_t obs_dim = cfg.d_max * action_space(cfg.n_qubits).size();
    AgentRuntime agent = AgentRuntime::make(cfg, obs_dim);

    std::size_t first_episode = 0;
    std::size_t successes = 0;
    double total_reward = 0.0;

    if (!opts.resume_checkpoint.empty()) {
        AgentCheckpoint ckpt = load_checkpoint(opts.resume_checkpoint);
        if (ckpt.online.layer_sizes() != agent.online.layer_sizes())
            throw CheckpointError("resume: checkpoint layer sizes do not match config");
        agent.online = std::move(ckpt.online);
        agent.target = std::move(ckpt.target);
        agent.adam = std::move(ckpt.adam);
        agent.adam.lr = cfg.agent.learning_rate;
        agent.eps.value = ckpt.epsilon;
        agent.policy_rng.set_state(ckpt.policy_rng_state);
        agent.updates_done = ckpt.updates_done;
        agent.env_steps = ckpt.env_steps;
        first_episode = ckpt.episodes_done;
        successes = ckpt.successes;
        total_reward = ckpt.total_reward;
    }

    const std::string log_path = cfg.out_dir + "/episodes.jsonl";
    std::ofstream log(log_path, first_episode > 0 ? std::ios::app : std::ios::trunc);
    if (!log) throw IoError("run: cannot open " + log_path);

    const nlohmann::json config_echo = cfg;
    auto checkpoint_at = [&](std::size_t episodes_done, const std::string& name) {
        AgentCheckpoint ckpt{agent.online,      agent.target,      agent.adam,
                             agent.eps.value,   agent.policy_rng.state(),
                             agent.updates_done, agent.env_steps,  episodes_done,
                             successes,          total_reward};
        save_checkpoint(cfg.out_dir + "/" + name, ckpt, config_echo);
    };

    // First-100-success resource accumulators (cumulative across resumes is
    // not attempted; they describe this process's stream).
    std::size_t res_count = 0;
    double res_1q = 0.0, res_2q = 0.0, res_depth = 0.0;

    auto write_abort_manifest = [&](const std::string& reason, std::size_t episodes_done) {
        std::ofstream m(cfg.out_dir + "/manifest.json", std::ios::trunc);
        if (m) {
            m << nlohmann::json{{"status", "aborted"},
                                {"reason", reason},
                                {"episodes_written", episodes_done}}
                     .dump(2)
              << "\n";
        }
    };

    std::size_t episode = first_episode;
    try {
        for (; episode < cfg.episodes; ++episode) {
            EpisodeRecord rec = run_episode(episode, rho_eff, agent, cfg);
            for (double r : rec.reward_trace) total_reward += r;
            if (rec.success) {
                ++successes;
                if (res_count < 100) {
                    ++res_count;
                    res_1q += static_cast<double>(rec.res.one_qubit_gates);
                    res_2q += static_cast<double>(rec.res.two_qubit_gates);
                    res_depth += static_cast<double>(rec.res.depth);
                }
            }
            log << nlohmann::json(rec).dump() << "\n";
            if (!log) throw IoError("run: write failed for " + log_path);

            if (cfg.checkpoint_every > 0 && (episode + 1) % cfg.checkpoint_every == 0)
                checkpoint_at(episode + 1, "checkpoint_" + std::to_string(episode + 1) + ".ckpt");

            if (opts.stop_after_episode && opts.stop_after_episode(rec)) {
                ++episode;
                break;
            }
        }
    } catch (const NonFiniteLossError& e) {
        log.flush();
        write_abort_manifest(e.what(), episode);
        checkpoint_at(episode, "checkpoint_abort.ckpt");
        throw;
    } catch (const IoError& e) {
        write_abort_manifest(e.what(), episode);
        throw;
    }

    log.flush();
    checkpoint_at(episode, "checkpoint_final.ckpt");

    ExperimentSummary summary;
    summary.episodes_total = episode;
    summary.episodes_successful = successes;
    summary.total_reward = total_reward;
    summary.first_success_count = res_count;
    if (res_count > 0) {
        summary.avg_one_qubit_gates = res_1q / static_cast<double>(res_count);
        summary.avg_two_qubit_gates = res_2q / static_cast<double>(res_count);
        summary.avg_depth = res_depth / static_cast<double>(res_count);
    }
    summary.target_concurrence = concurrence_mixed(target_rho);
    summary.effective_concurrence = concurrence_mixed(rho_eff);
    summary.state_id = cfg.state_id();
    summary.config_echo = config_echo;

    std::ofstream sf(cfg.out_dir + "/summary.json", std::ios::trunc);
    if (!sf) throw IoError("run: cannot write summary.json");
    sf << summary_to_json(summary).dump(2) << "\n";
    if (!sf) throw IoError("run: write failed for summary.json");
    return summary;
}

}  // namespace rlqas
