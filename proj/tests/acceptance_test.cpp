// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rlqas/analysis.hpp"
#include "rlqas/cli.hpp"
#include "rlqas/qas.hpp"
#include "rlqas/vqsd.hpp"

using namespace rlqas;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct CriterionResult {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string temp_dir(const std::string& leaf) {
    const std::string d = (fs::temp_directory_path() / "rlqas_acceptance" / leaf).string();
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("rlqas");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

void fail(CriterionResult& r, const std::string& msg) {
    r.pass = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += msg;
}

void check_time(CriterionResult& r, double elapsed, double budget) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(1);
    ss << elapsed << "s";
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += ss.str();
    if (elapsed >= budget) fail(r, "runtime budget exceeded");
}

DensityMatrix bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return DensityMatrix::from_pure(PureState(2, {s, 0.0, 0.0, s}));
}

// Pearson correlation of midranks (ties get averaged ranks).
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto midranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    return pcc(midranks(x), midranks(y));
}

// --- criterion 1: quantum-information identity suite -------------------------

CriterionResult criterion1() {
    CriterionResult r;
    const auto t0 = Clock::now();

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const PureState psi = sample_haar_pure(2, 9000 + i);
        const double diff =
            std::abs(concurrence_pure(psi) - concurrence_mixed(DensityMatrix::from_pure(psi)));
        worst = std::max(worst, diff);
    }
    if (worst > 1e-8) fail(r, "pure/mixed concurrence disagree by " + format_g10(worst));

    for (std::size_t q = 0; q < 2; ++q) {
        const double s = conditional_entropy(bell_phi_plus(), q);
        if (std::abs(s + 1.0) > 1e-10)
            fail(r, "Bell conditional entropy " + format_g10(s) + " for qubit " +
                        std::to_string(q));
    }

    const DensityMatrix bell = bell_phi_plus();
    for (int i = 0; i < 50; ++i) {
        const double p = static_cast<double>(i) / 49.0;
        ComplexMatrix m(4, 4);
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) m(a, b) = p * bell.mat()(a, b);
            m(a, a) += (1.0 - p) * 0.25;
        }
        const double got = concurrence_mixed(DensityMatrix(2, std::move(m)));
        const double want = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        if (std::abs(got - want) > 1e-8)
            fail(r, "Werner concurrence off by " + format_g10(got - want) + " at p=" +
                        format_g10(p));
    }

    check_time(r, seconds_since(t0), 10.0);
    return r;
}

// --- criterion 2: cost-function oracle ---------------------------------------

CriterionResult criterion2() {
    CriterionResult r;
    const auto t0 = Clock::now();

    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = sample_hs_random_state(2, 2000 + i);
        const Spectrum spec = hermitian_eig(rho.mat());
        const ComplexMatrix diagonalizer = spec.eigenvectors.dagger();
        const double c = cost(rho, diagonalizer);
        if (c >= 1e-10)
            fail(r, "diagonalizer cost " + format_g10(c) + " at state " + std::to_string(i));
        const EigenReadout ro = eigen_readout(rho, diagonalizer);
        for (std::size_t k = 0; k < 4; ++k) {
            if (std::abs(ro.inferred_eigenvalues[k] - spec.eigenvalues[k]) > 1e-8)
                fail(r, "readout eigenvalue mismatch at state " + std::to_string(i));
        }
    }

    check_time(r, seconds_since(t0), 5.0);
    return r;
}

// --- criterion 3: DDQN correctness --------------------------------------------

CriterionResult criterion3() {
    CriterionResult r;
    const auto t0 = Clock::now();

    // Finite-difference gradient check on a small rectifier net.
    {
        SplitMix64 init(11);
        QNetwork online = QNetwork::uniform_fan_in({3, 8, 6, 4}, init);
        QNetwork target = QNetwork::uniform_fan_in({3, 8, 6, 4}, init);
        SplitMix64 rng(13);
        std::vector<Transition> storage(5);
        std::vector<const Transition*> batch;
        for (std::size_t i = 0; i < storage.size(); ++i) {
            Transition& t = storage[i];
            t.obs = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            t.next_obs = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            t.action = static_cast<int>(rng.uniform_below(4));
            t.reward = rng.uniform(-1, 1);
            t.terminal = (i % 2 == 0);
            batch.push_back(&t);
        }
        std::vector<std::vector<double>> gw, gb;
        ddqn_loss_and_grads(online, target, batch, 0.9, &gw, &gb);
        const double h = 1e-5;
        double worst = 0.0;
        auto fd_tensor = [&](std::vector<double>& tensor, const std::vector<double>& grad) {
            for (std::size_t i = 0; i < tensor.size(); ++i) {
                const double keep = tensor[i];
                tensor[i] = keep + h;
                const double up =
                    ddqn_loss_and_grads(online, target, batch, 0.9, nullptr, nullptr);
                tensor[i] = keep - h;
                const double dn =
                    ddqn_loss_and_grads(online, target, batch, 0.9, nullptr, nullptr);
                tensor[i] = keep;
                const double fd = (up - dn) / (2.0 * h);
                const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
                worst = std::max(worst, std::abs(grad[i] - fd) / scale);
            }
        };
        for (std::size_t l = 0; l < online.layer_count(); ++l) {
            fd_tensor(online.weights()[l], gw[l]);
            fd_tensor(online.biases()[l], gb[l]);
        }
        if (worst > 1e-4) fail(r, "gradient check worst relative error " + format_g10(worst));
    }

    // 4-state chain to the value-iteration optimum, 3 of 3 seeds.
    {
        ToyMdp mdp;
        mdp.n_states = 4;
        mdp.n_actions = 2;
        mdp.start_state = 0;
        mdp.next.assign(4, {0, 0});
        mdp.reward.assign(4, {0.0, 0.0});
        mdp.terminal.assign(4, {0, 0});
        for (std::size_t s = 0; s < 3; ++s) {
            mdp.next[s] = {s + 1, s};
            mdp.reward[s] = {s == 2 ? 1.0 : 0.0, 0.0};
            mdp.terminal[s] = {s == 2 ? 1 : 0, 0};
        }
        mdp.next[3] = {3, 3};
        mdp.terminal[3] = {1, 1};
        // Value iteration gives "advance" in every non-terminal state.
        const std::vector<std::size_t> optimal = {0, 0, 0};

        for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
            ToyTrainConfig cfg;
            cfg.seed = seed;
            cfg.max_steps = 20000;
            cfg.stop_when = [&](const std::vector<std::size_t>& greedy) {
                return greedy[0] == optimal[0] && greedy[1] == optimal[1] &&
                       greedy[2] == optimal[2];
            };
            const ToyTrainResult result = train_toy_mdp(mdp, cfg);
            const bool solved = result.greedy_policy[0] == optimal[0] &&
                                result.greedy_policy[1] == optimal[1] &&
                                result.greedy_policy[2] == optimal[2];
            if (!solved || result.steps_used > 20000)
                fail(r, "chain not solved for seed " + std::to_string(seed) + " within " +
                            std::to_string(result.steps_used) + " steps");
        }
    }

    check_time(r, seconds_since(t0), 60.0);
    return r;
}

// --- criterion 4: desk-scale search with revalidation -------------------------

CriterionResult criterion4() {
    CriterionResult r;
    const auto t0 = Clock::now();

    std::size_t runs_with_success = 0;
    for (std::uint64_t sampler_seed = 101; sampler_seed <= 105; ++sampler_seed) {
        ExperimentConfig cfg;  // agent block keeps the full defaults
        cfg.episodes = 1500;
        cfg.zeta = 1e-3;
        cfg.d_max = 40;
        cfg.optimizer_budget = 300;
        cfg.seeds.sampler = sampler_seed;
        cfg.seeds.agent_init = 1;
        cfg.seeds.policy = 42;
        cfg.out_dir = temp_dir("crit4_" + std::to_string(sampler_seed));
        cfg.checkpoint_every = 0;
        RunOptions opts;
        opts.stop_after_episode = [](const EpisodeRecord& rec) { return rec.success; };
        const ExperimentSummary sum = run_experiment(cfg, opts);
        if (sum.episodes_successful == 0) continue;
        ++runs_with_success;

        // Criterion-independent revalidation from the serialized circuits.
        const DensityMatrix rho = sample_hs_random_state(2, sampler_seed);
        const RunLog log = load_run_log(cfg.out_dir);
        for (const EpisodeRecord& rec : log.episodes) {
            if (!rec.success) continue;
            const Circuit rebuilt = nlohmann::json(rec.circuit).get<Circuit>();
            const double c =
                purity(rho) - purity(dephase(apply_unitary(rho, to_unitary(rebuilt))));
            if (c >= cfg.zeta + 1e-5)
                fail(r, "success at episode " + std::to_string(rec.episode) +
                            " fails revalidation with cost " + format_g10(c));
        }
    }
    if (runs_with_success < 4)
        fail(r, "only " + std::to_string(runs_with_success) + " of 5 runs found an ansatz");

    // Interval-correlation pipeline on constructed data: planted regime
    // change at 0.30 with exact anti/positive correlation on the two sides.
    {
        std::vector<ConcurrencePoint> points;
        for (int i = 0;; ++i) {
            const double x = 0.05 + 0.004 * i;
            if (x > 0.6) break;
            const double u = 0.3 + x;
            points.push_back({x, u, (x < 0.3) ? 10.0 - 5.0 * u : u - 0.2});
        }
        std::vector<double> grid;
        for (int j = 0;; ++j) {
            const double k = 0.1 + 0.005 * j;
            if (k > 0.55) break;
            grid.push_back(k);
        }
        const EtaScan scan = eta_scan(points, grid);
        const EtaPoint* at_boundary = nullptr;
        for (const EtaPoint& p : scan.points)
            if (std::abs(p.k - 0.3) < 1e-12) at_boundary = &p;
        if (!at_boundary || !at_boundary->pcc_ik || !at_boundary->pcc_kj) {
            fail(r, "scan lacks the boundary grid point");
        } else {
            if (std::abs(*at_boundary->pcc_ik + 1.0) > 1e-10)
                fail(r, "constructed scan pcc_ik " + format_g10(*at_boundary->pcc_ik));
            if (std::abs(*at_boundary->pcc_kj - 1.0) > 1e-10)
                fail(r, "constructed scan pcc_kj " + format_g10(*at_boundary->pcc_kj));
        }
        if (!scan.k_star || std::abs(*scan.k_star - 0.3) > 0.005 + 1e-12)
            fail(r, std::string("crossing ") +
                        (scan.k_star ? format_g10(*scan.k_star) : "missing") +
                        " not within one grid step of 0.3");
    }

    check_time(r, seconds_since(t0), 1800.0);
    return r;
}

// --- criterion 5: entanglement-enhancing block --------------------------------

CriterionResult criterion5() {
    CriterionResult r;
    const auto t0 = Clock::now();

    const ComplexMatrix u0 = to_unitary(build_ee_block(0.0));
    const double ident_err = u0.max_abs_diff(ComplexMatrix::identity(4));
    if (ident_err > 1e-10) fail(r, "theta=0 unitary deviates by " + format_g10(ident_err));

    std::vector<cplx> zero = {1.0, 0.0, 0.0, 0.0};
    auto ee_concurrence = [&](double theta) {
        return concurrence_pure(
            apply_unitary(PureState(2, zero), to_unitary(build_ee_block(theta))));
    };
    const double at0 = ee_concurrence(0.0);
    const double at_half = ee_concurrence(0.5);
    if (std::abs(at0) > 1e-9) fail(r, "concurrence at theta=0 is " + format_g10(at0));
    if (std::abs(at_half - 1.0) > 1e-9)
        fail(r, "concurrence at theta=0.5 is " + format_g10(at_half));

    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double c = ee_concurrence(0.5 * i / 100.0);
        if (c < prev - 1e-12) {
            fail(r, "concurrence not monotone at grid point " + std::to_string(i));
            break;
        }
        prev = c;
    }

    check_time(r, seconds_since(t0), 1.0);
    return r;
}

// --- criterion 6: enhancement direction ---------------------------------------

CriterionResult criterion6() {
    CriterionResult r;
    const auto t0 = Clock::now();

    int favourable = 0;
    std::string counts;
    for (std::uint64_t agent_seed = 1; agent_seed <= 3; ++agent_seed) {
        std::size_t successes[2] = {0, 0};
        int arm = 0;
        for (const double theta : {0.5, 0.0}) {
            ExperimentConfig cfg;
            cfg.episodes = 500;
            cfg.zeta = 1e-3;
            cfg.d_max = 40;
            cfg.optimizer_budget = 300;
            cfg.ee_theta = theta;
            // Reduced value-net capacity for the paired smoke runs; the
            // search setup itself is unchanged.
            cfg.agent.hidden_layers = {64, 64};
            cfg.agent.batch_size = 32;
            cfg.agent.learning_starts = 500;
            cfg.agent.learning_rate = 1e-3;
            cfg.seeds.sampler = 8;  // pinned low-concurrence target
            cfg.seeds.agent_init = agent_seed;
            cfg.seeds.policy = agent_seed + 7000;
            cfg.out_dir = temp_dir("crit6_" + std::to_string(agent_seed) + "_" +
                                   (theta == 0.5 ? "on" : "off"));
            cfg.checkpoint_every = 0;
            successes[arm++] = run_experiment(cfg).episodes_successful;
        }
        if (successes[0] >= successes[1]) ++favourable;
        counts += " [" + std::to_string(successes[0]) + ":" + std::to_string(successes[1]) + "]";
    }
    if (favourable < 2)
        fail(r, "enhanced arm ahead in only " + std::to_string(favourable) + " of 3 pairs");
    r.detail += "enhanced:default" + counts;

    check_time(r, seconds_since(t0), 1200.0);
    return r;
}

// --- criterion 7: ensemble study ----------------------------------------------

CriterionResult criterion7() {
    CriterionResult r;
    const auto t0 = Clock::now();

    const std::size_t n = 100000;
    const std::vector<EnsembleRow> rows = ensemble_study(n, 1);

    std::vector<double> conc(n), lead(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        conc[i] = rows[i].concurrence;
        lead[i] = rows[i].eigenvalues[0];
        ds[i] = std::abs(rows[i].cond_entropy_diff);
    }

    const double rho_s = spearman(conc, lead);
    if (rho_s <= 0.0)
        fail(r, "Spearman(concurrence, leading eigenvalue) = " + format_g10(rho_s));

    // Quintile means of |dS| with stable concurrence ordering.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return conc[a] < conc[b]; });
    double mean[5];
    for (int q = 0; q < 5; ++q) {
        const std::size_t lo = n * q / 5, hi = n * (q + 1) / 5;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += ds[order[i]];
        mean[q] = acc / static_cast<double>(hi - lo);
    }
    // Calibrated against a pre-build run of the independent reference sampler
    // (std::mt19937_64 Ginibre, 200000 draws): about 24.4% of 2-qubit states
    // are exactly separable, so the zero-concurrence atom fills the bottom
    // quintile, and its mean |dS| sits 0.0035 +/- 0.0007 BELOW the first
    // entangled quintile. The decrease is therefore required strictly from
    // quintile 1 on, with the reference-fixed allowance at that boundary.
    const double kBoundaryAllowance = 0.0055;  // reference delta + 3 combined SE
    if (mean[1] >= mean[0] + kBoundaryAllowance)
        fail(r, "quintile 1 exceeds the separable-atom allowance");
    for (int q = 1; q < 4; ++q) {
        if (mean[q + 1] >= mean[q])
            fail(r, "quintile means not decreasing at " + std::to_string(q) + "->" +
                        std::to_string(q + 1));
    }
    if (mean[4] >= mean[0]) fail(r, "top quintile not below the bottom quintile");

    // Fraction of concurrence > 0.6; reference value 0.00097 from the same
    // pre-build 200000-draw run, with 3 combined standard errors of headroom.
    std::size_t hits = 0;
    for (double c : conc)
        if (c > 0.6) ++hits;
    const double frac = static_cast<double>(hits) / static_cast<double>(n);
    const double p_ref = 0.00097;
    const double se =
        std::sqrt(p_ref * (1.0 - p_ref) * (1.0 / static_cast<double>(n) + 1.0 / 200000.0));
    if (frac >= p_ref + 3.0 * se)
        fail(r, "fraction above 0.6 is " + format_g10(frac) + " vs limit " +
                    format_g10(p_ref + 3.0 * se));

    check_time(r, seconds_since(t0), 120.0);
    return r;
}

// --- criterion 8: analysis fixtures -------------------------------------------

CriterionResult criterion8() {
    CriterionResult r;
    const auto t0 = Clock::now();

    // 9 states x 5 agent seeds with injected per-seed extremes m + s*d,
    // d = (-1,-1,0,1,1): the sample standard deviation is exactly s.
    const double spread[5] = {-1.0, -1.0, 0.0, 1.0, 1.0};
    const double table[9][4] = {
        {0.874, 0.002, 0.183, 0.004}, {0.849, 0.002, 0.108, 0.028},
        {0.975, 0.001, 0.084, 0.006}, {0.936, 0.002, 0.118, 0.009},
        {0.880, 0.001, 0.188, 0.013}, {0.911, 0.003, 0.156, 0.024},
        {0.933, 0.001, 0.235, 0.013}, {0.928, 0.005, 0.208, 0.013},
        {0.831, 0.011, 0.302, 0.010},
    };
    std::vector<RunLog> runs;
    for (int state = 0; state < 9; ++state) {
        for (int seed = 0; seed < 5; ++seed) {
            RunLog run;
            run.state_id = "state" + std::to_string(state + 1);
            run.agent_seed = static_cast<std::uint64_t>(seed);
            auto success = [](double c) {
                EpisodeRecord rec;
                rec.success = true;
                rec.concurrence_ansatz = c;
                return rec;
            };
            run.episodes.push_back(success(table[state][2] + table[state][3] * spread[seed]));
            run.episodes.push_back(success(table[state][0] + table[state][1] * spread[seed]));
            runs.push_back(std::move(run));
        }
    }
    const std::vector<BoundsRecord> recs = extract_concurrence_bounds(runs);
    if (recs.size() != 9) {
        fail(r, "expected 9 grouped states");
    } else {
        for (int state = 0; state < 9; ++state) {
            const BoundsRecord& b = recs[state];
            if (std::abs(b.max_mean - table[state][0]) > 1e-12 ||
                std::abs(b.max_std - table[state][1]) > 1e-12 ||
                std::abs(b.min_mean - table[state][2]) > 1e-12 ||
                std::abs(b.min_std - table[state][3]) > 1e-12)
                fail(r, "bounds fixture mismatch at state " + std::to_string(state + 1));
        }
    }

    // Cumulative weight on a constructed set.
    std::vector<Contribution> pts(3);
    pts[0].delta = -0.2;
    pts[1].delta = 0.3;
    pts[2].delta = -0.1;
    const CumulativeWeight w = cumulative_weight(pts);
    if (std::abs(w.neg_region - 0.3) > 1e-12 || std::abs(w.pos_region - 0.3) > 1e-12)
        fail(r, "cumulative weights " + format_g10(w.neg_region) + "/" +
                    format_g10(w.pos_region));

    // Constructed +/-1 correlation cases for the eigenvalue study.
    {
        RunLog corr;
        corr.state_id = "corr";
        RunLog anti;
        anti.state_id = "anti";
        for (int i = 0; i < 3; ++i) {
            EpisodeRecord rec;
            rec.success = true;
            rec.inferred_eigenvalues = {0.4, 0.3, 0.2, 0.1};
            rec.cond_entropy_evolved_q0 = 0.1 * (i + 1);
            rec.cond_entropy_evolved_q1 = 0.1 * (i + 1);
            corr.episodes.push_back(rec);
            rec.cond_entropy_evolved_q1 = 0.5 - 0.1 * (i + 1);
            anti.episodes.push_back(rec);
        }
        for (const EigenCorrelationRow& row : eigenvalue_correlation_study({corr, anti})) {
            const double want = row.state_id == "corr" ? 1.0 : -1.0;
            if (std::abs(row.pcc_cond_entropy - want) > 1e-10)
                fail(r, "constructed correlation " + format_g10(row.pcc_cond_entropy) +
                            " for " + row.state_id);
        }
    }

    check_time(r, seconds_since(t0), 30.0);
    return r;
}

// --- criterion 9: determinism of seeded commands -------------------------------

CriterionResult criterion9() {
    CriterionResult r;
    const auto t0 = Clock::now();

    // sample: byte-identical state files and ensemble csv.
    const std::string s1 = temp_dir("det_sample");
    if (cli({"sample", "--count", "4", "--seed", "11", "--out", s1, "--ensemble"}) != 0)
        fail(r, "sample run failed");
    const std::string state_bytes = read_file(s1 + "/state_0.json");
    const std::string csv_bytes = read_file(s1 + "/fig1_ensemble.csv");
    if (cli({"sample", "--count", "4", "--seed", "11", "--out", s1, "--ensemble"}) != 0)
        fail(r, "sample re-run failed");
    if (read_file(s1 + "/state_0.json") != state_bytes) fail(r, "state file bytes changed");
    if (read_file(s1 + "/fig1_ensemble.csv") != csv_bytes) fail(r, "ensemble csv bytes changed");

    // train: byte-identical episode log, summary and checkpoint.
    const std::string tdir = temp_dir("det_train");
    ExperimentConfig cfg;
    cfg.episodes = 6;
    cfg.zeta = 1e-3;
    cfg.d_max = 40;  // deep enough that the runs collect successes
    cfg.optimizer_budget = 300;
    cfg.agent.hidden_layers = {32, 32};
    cfg.agent.batch_size = 16;
    cfg.agent.buffer_capacity = 256;
    cfg.agent.learning_starts = 24;
    cfg.seeds = {5, 13, 7};
    cfg.out_dir = tdir + "/run";
    cfg.checkpoint_every = 0;
    save_config(tdir + "/config.json", cfg);
    if (cli({"train", "--config", tdir + "/config.json"}) != 0) fail(r, "train failed");
    const std::string log_bytes = read_file(tdir + "/run/episodes.jsonl");
    const std::string sum_bytes = read_file(tdir + "/run/summary.json");
    const std::string ckpt_bytes = read_file(tdir + "/run/checkpoint_final.ckpt");
    if (cli({"train", "--config", tdir + "/config.json"}) != 0) fail(r, "train re-run failed");
    if (read_file(tdir + "/run/episodes.jsonl") != log_bytes) fail(r, "episode log changed");
    if (read_file(tdir + "/run/summary.json") != sum_bytes) fail(r, "summary changed");
    if (read_file(tdir + "/run/checkpoint_final.ckpt") != ckpt_bytes)
        fail(r, "checkpoint changed");

    // analyze: byte-identical study outputs.
    const std::string adir = temp_dir("det_analyze");
    if (cli({"analyze", "bounds", tdir + "/run", "--out", adir}) != 0)
        fail(r, "analyze bounds failed");
    const std::string bounds_bytes = read_file(adir + "/bounds.csv");
    if (cli({"analyze", "bounds", tdir + "/run", "--out", adir}) != 0)
        fail(r, "analyze bounds re-run failed");
    if (read_file(adir + "/bounds.csv") != bounds_bytes) fail(r, "bounds csv changed");

    check_time(r, seconds_since(t0), 300.0);
    return r;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        CriterionResult (*fn)();
    };
    const Entry entries[] = {
        {"1 quantum-information identities", criterion1},
        {"2 exact-diagonalizer cost oracle", criterion2},
        {"3 DDQN gradient and toy-MDP convergence", criterion3},
        {"4 desk-scale architecture search with revalidation", criterion4},
        {"5 entanglement-enhancing block curve", criterion5},
        {"6 enhancement direction on paired runs", criterion6},
        {"7 Hilbert-Schmidt ensemble study", criterion7},
        {"8 analysis fixtures", criterion8},
        {"9 seeded-command determinism", criterion9},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const CriterionResult r = e.fn();
        std::printf("%s criterion %s%s%s\n", r.pass ? "PASS" : "FAIL", e.name,
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
