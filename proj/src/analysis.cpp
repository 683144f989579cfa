#include "rlqas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace rlqas {

double pcc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw LengthMismatchError("pcc: vector lengths differ");
    if (x.size() < 2) throw LengthMismatchError("pcc: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("pcc: zero variance input");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation (N-1); zero for a single value.
double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<BoundsRecord> extract_concurrence_bounds(const std::vector<RunLog>& runs,
                                                     ConcurrenceVariant variant) {
    // Group by state, then by agent seed within the state.
    std::map<std::string, std::map<std::uint64_t, const RunLog*>> by_state;
    for (const RunLog& run : runs) by_state[run.state_id][run.agent_seed] = &run;

    std::vector<BoundsRecord> out;
    for (const auto& [state_id, seeds] : by_state) {
        BoundsRecord rec;
        rec.state_id = state_id;
        for (const auto& [seed, run] : seeds) {
            rec.input_concurrence = run->input_concurrence;
            double cmax = 0.0, cmin = 0.0;
            bool any = false;
            for (const EpisodeRecord& ep : run->episodes) {
                if (!ep.success) continue;
                const double c = concurrence_of(ep, variant);
                if (!any) {
                    cmax = cmin = c;
                    any = true;
                } else {
                    cmax = std::max(cmax, c);
                    cmin = std::min(cmin, c);
                }
            }
            if (!any)
                throw NoSuccessesError("bounds: no successful episode for state " + state_id +
                                       ", agent seed " + std::to_string(seed));
            rec.per_seed_max.push_back(cmax);
            rec.per_seed_min.push_back(cmin);
        }
        rec.max_mean = mean_of(rec.per_seed_max);
        rec.max_std = sample_std(rec.per_seed_max);
        rec.min_mean = mean_of(rec.per_seed_min);
        rec.min_std = sample_std(rec.per_seed_min);
        out.push_back(std::move(rec));
    }
    return out;
}

EtaScan eta_scan(const std::vector<ConcurrencePoint>& points, const std::vector<double>& k_grid) {
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (k_grid[i] <= k_grid[i - 1])
            throw InsufficientDataError("eta_scan: k grid must be strictly increasing");

    EtaScan scan;
    for (double k : k_grid) {
        EtaPoint p;
        p.k = k;
        std::vector<double> lo_u, lo_l, hi_u, hi_l;
        for (const ConcurrencePoint& cp : points) {
            if (cp.input_concurrence < k) {
                lo_u.push_back(cp.upper);
                lo_l.push_back(cp.lower);
            } else {
                hi_u.push_back(cp.upper);
                hi_l.push_back(cp.lower);
            }
        }
        if (lo_u.size() < 3 || hi_u.size() < 3) {
            p.flag = "insufficient_data";
        } else {
            try {
                p.pcc_ik = pcc(lo_u, lo_l);
                p.pcc_kj = pcc(hi_u, hi_l);
            } catch (const ZeroVarianceError&) {
                p.pcc_ik.reset();
                p.pcc_kj.reset();
                p.flag = "zero_variance";
            }
        }
        scan.points.push_back(p);
    }

    // Crossing of pcc_kj by sign change, linearly interpolated on the grid.
    for (std::size_t i = 1; i < scan.points.size(); ++i) {
        const EtaPoint& a = scan.points[i - 1];
        const EtaPoint& b = scan.points[i];
        if (!a.pcc_kj || !b.pcc_kj) continue;
        const double fa = *a.pcc_kj;
        const double fb = *b.pcc_kj;
        if (fa == 0.0) {
            scan.k_star = a.k;
            break;
        }
        if ((fa < 0.0 && fb >= 0.0) || (fa > 0.0 && fb <= 0.0)) {
            const double t = fa / (fa - fb);
            scan.k_star = a.k + t * (b.k - a.k);
            break;
        }
    }
    return scan;
}

double eta_weighted(const EtaPoint& p, double w) {
    if (!p.pcc_ik || !p.pcc_kj)
        throw InsufficientDataError("eta_weighted: interval correlation missing at this k");
    return w * (*p.pcc_ik) + (1.0 - w) * (*p.pcc_kj);
}

Contribution delta_contribution(const DensityMatrix& rho, const DensityMatrix& rho_prime) {
    Contribution c;
    const double s_q0_before = conditional_entropy(rho, 0);
    const double s_q1_before = conditional_entropy(rho, 1);
    const double s_q0_after = conditional_entropy(rho_prime, 0);
    const double s_q1_after = conditional_entropy(rho_prime, 1);
    c.delta = (s_q0_after - s_q0_before) - (s_q1_after - s_q1_before);
    c.delta_c = concurrence_mixed(rho) - concurrence_mixed(rho_prime);
    return c;
}

CumulativeWeight cumulative_weight(const std::vector<Contribution>& points) {
    CumulativeWeight w;
    for (const Contribution& p : points) {
        if (p.delta < 0.0) w.neg_region += -p.delta;
        if (p.delta > 0.0) w.pos_region += p.delta;
    }
    return w;
}

std::vector<Contribution> contributions_from_logs(const std::vector<RunLog>& runs) {
    std::vector<Contribution> out;
    for (const RunLog& run : runs) {
        for (const EpisodeRecord& ep : run.episodes) {
            if (!ep.success) continue;
            Contribution c;
            c.delta = (ep.cond_entropy_evolved_q0 - ep.cond_entropy_input_q0) -
                      (ep.cond_entropy_evolved_q1 - ep.cond_entropy_input_q1);
            c.delta_c = run.input_concurrence - ep.concurrence_evolved;
            out.push_back(c);
        }
    }
    return out;
}

std::vector<EigenCorrelationRow> eigenvalue_correlation_study(const std::vector<RunLog>& runs) {
    std::map<std::string, std::vector<const EpisodeRecord*>> by_state;
    for (const RunLog& run : runs)
        for (const EpisodeRecord& ep : run.episodes)
            if (ep.success) by_state[run.state_id].push_back(&ep);

    std::vector<EigenCorrelationRow> out;
    for (const auto& [state_id, eps] : by_state) {
        if (eps.size() < 3)
            throw InsufficientAnsatzesError("eigenvalue_correlation_study: fewer than 3 "
                                            "admissible ansatzes for state " +
                                            state_id);
        std::vector<double> s_q0, s_q1;
        for (const EpisodeRecord* ep : eps) {
            s_q0.push_back(ep->cond_entropy_evolved_q0);
            s_q1.push_back(ep->cond_entropy_evolved_q1);
        }
        const double corr = pcc(s_q0, s_q1);
        const std::size_t ranks = eps.front()->inferred_eigenvalues.size();
        for (std::size_t rank = 0; rank < ranks; ++rank) {
            std::vector<double> vals;
            for (const EpisodeRecord* ep : eps) vals.push_back(ep->inferred_eigenvalues[rank]);
            EigenCorrelationRow row;
            row.state_id = state_id;
            row.rank = rank;
            row.median_eigenvalue = median_of(vals);
            row.pcc_cond_entropy = corr;
            row.n_ansatzes = eps.size();
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<EnsembleRow> ensemble_study(std::size_t n_samples, std::uint64_t seed) {
    std::vector<EnsembleRow> rows(n_samples);
    // Each sample draws from its own counter-derived stream, so the result is
    // identical for any thread count.
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n_samples; ++i) {
        const DensityMatrix rho =
            sample_hs_random_state(2, SplitMix64::mix(seed + 0x9E3779B97F4A7C15ull * i));
        EnsembleRow& row = rows[i];
        row.concurrence = concurrence_mixed(rho);
        const Spectrum spec = hermitian_eig(rho.mat());
        for (std::size_t r = 0; r < 4; ++r) row.eigenvalues[r] = spec.eigenvalues[r];
        row.cond_entropy_diff = conditional_entropy(rho, 0) - conditional_entropy(rho, 1);
    }
    return rows;
}

ResourceStats resource_stats(const std::vector<RunLog>& runs, ConcurrenceVariant variant) {
    std::map<std::string, std::vector<const EpisodeRecord*>> by_state;
    for (const RunLog& run : runs)
        for (const EpisodeRecord& ep : run.episodes)
            if (ep.success) by_state[run.state_id].push_back(&ep);
    if (by_state.empty()) throw NoSuccessesError("resource_stats: no successful episodes");

    ResourceStats stats;
    double n = 0.0;
    for (const auto& [state_id, eps] : by_state) {
        const EpisodeRecord* best = eps.front();
        const EpisodeRecord* worst = eps.front();
        for (const EpisodeRecord* ep : eps) {
            if (concurrence_of(*ep, variant) > concurrence_of(*best, variant)) best = ep;
            if (concurrence_of(*ep, variant) < concurrence_of(*worst, variant)) worst = ep;
        }
        stats.per_state.push_back({state_id, "max", best->res});
        stats.per_state.push_back({state_id, "min", worst->res});
        stats.max_avg_depth += static_cast<double>(best->res.depth);
        stats.max_avg_gates +=
            static_cast<double>(best->res.one_qubit_gates + best->res.two_qubit_gates);
        stats.max_avg_two_qubit += static_cast<double>(best->res.two_qubit_gates);
        stats.min_avg_depth += static_cast<double>(worst->res.depth);
        stats.min_avg_gates +=
            static_cast<double>(worst->res.one_qubit_gates + worst->res.two_qubit_gates);
        stats.min_avg_two_qubit += static_cast<double>(worst->res.two_qubit_gates);
        n += 1.0;
    }
    stats.max_avg_depth /= n;
    stats.max_avg_gates /= n;
    stats.max_avg_two_qubit /= n;
    stats.min_avg_depth /= n;
    stats.min_avg_gates /= n;
    stats.min_avg_two_qubit /= n;
    return stats;
}

// --- CSV output -------------------------------------------------------------

std::string format_g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("csv: cannot write " + path);
    return f;
}

}  // namespace

void write_bounds_csv(const std::string& path, const std::vector<BoundsRecord>& rows,
                      ConcurrenceVariant variant) {
    std::ofstream f = open_csv(path);
    f << "# admissible-circuit concurrence extremes over successful episodes, per state;"
         " mean/std across agent seeds\n";
    f << "# concurrence_variant="
      << (variant == ConcurrenceVariant::Ansatz ? "ansatz_on_zero" : "evolved_input") << "\n";
    f << "state_id,input_concurrence,n_seeds,max_mean,max_std,min_mean,min_std\n";
    for (const BoundsRecord& r : rows) {
        f << r.state_id << ',' << format_g10(r.input_concurrence) << ',' << r.per_seed_max.size()
          << ',' << format_g10(r.max_mean) << ',' << format_g10(r.max_std) << ','
          << format_g10(r.min_mean) << ',' << format_g10(r.min_std) << '\n';
    }
    if (!f) throw IoError("csv: write failed for " + path);
}

void write_eta_scan_csv(const std::string& path, const EtaScan& scan) {
    std::ofstream f = open_csv(path);
    f << "# interval correlations between upper and lower concurrence bounds;"
         " split at k into [i,k) and [k,j]\n";
    if (scan.k_star)
        f << "# k_star=" << format_g10(*scan.k_star) << "\n";
    else
        f << "# k_star=none\n";
    f << "k,pcc_ik,pcc_kj,flag\n";
    for (const EtaPoint& p : scan.points) {
        f << format_g10(p.k) << ',' << (p.pcc_ik ? format_g10(*p.pcc_ik) : "") << ','
          << (p.pcc_kj ? format_g10(*p.pcc_kj) : "") << ',' << p.flag << '\n';
    }
    if (!f) throw IoError("csv: write failed for " + path);
}

void write_contribution_csv(const std::string& path, const std::vector<Contribution>& points) {
    std::ofstream f = open_csv(path);
    const CumulativeWeight w = cumulative_weight(points);
    f << "# per-success qubit contribution asymmetry vs concurrence change\n";
    f << "# cumulative_weight_neg=" << format_g10(w.neg_region)
      << " cumulative_weight_pos=" << format_g10(w.pos_region) << "\n";
    f << "delta_c,delta\n";
    for (const Contribution& p : points)
        f << format_g10(p.delta_c) << ',' << format_g10(p.delta) << '\n';
    if (!f) throw IoError("csv: write failed for " + path);
}

void write_eigen_correlation_csv(const std::string& path,
                                 const std::vector<EigenCorrelationRow>& rows) {
    std::ofstream f = open_csv(path);
    f << "# median inferred eigenvalue per rank and the PCC between the qubits'"
         " evolved-state conditional entropies\n";
    f << "state_id,rank,median_eigenvalue,pcc_cond_entropy,n_ansatzes\n";
    for (const EigenCorrelationRow& r : rows) {
        f << r.state_id << ',' << r.rank << ',' << format_g10(r.median_eigenvalue) << ','
          << format_g10(r.pcc_cond_entropy) << ',' << r.n_ansatzes << '\n';
    }
    if (!f) throw IoError("csv: write failed for " + path);
}

void write_ensemble_csv(const std::string& path, const std::vector<EnsembleRow>& rows) {
    std::ofstream f = open_csv(path);
    f << "# Hilbert-Schmidt random 2-qubit states: concurrence, spectrum,"
         " conditional-entropy difference\n";
    f << "index,concurrence,eig1,eig2,eig3,eig4,cond_entropy_diff\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const EnsembleRow& r = rows[i];
        f << i << ',' << format_g10(r.concurrence) << ',' << format_g10(r.eigenvalues[0]) << ','
          << format_g10(r.eigenvalues[1]) << ',' << format_g10(r.eigenvalues[2]) << ','
          << format_g10(r.eigenvalues[3]) << ',' << format_g10(r.cond_entropy_diff) << '\n';
    }
    if (!f) throw IoError("csv: write failed for " + path);
}

void write_resources_csv(const std::string& path, const ResourceStats& stats) {
    std::ofstream f = open_csv(path);
    f << "# resources of the max- and min-concurrence admissible ansatz per state\n";
    f << "state_id,bound,one_qubit_gates,two_qubit_gates,total_gates,depth\n";
    for (const ResourceStatsRow& r : stats.per_state) {
        f << r.state_id << ',' << r.bound << ',' << r.res.one_qubit_gates << ','
          << r.res.two_qubit_gates << ',' << (r.res.one_qubit_gates + r.res.two_qubit_gates)
          << ',' << r.res.depth << '\n';
    }
    f << "AVERAGE,max,," << format_g10(stats.max_avg_two_qubit) << ','
      << format_g10(stats.max_avg_gates) << ',' << format_g10(stats.max_avg_depth) << '\n';
    f << "AVERAGE,min,," << format_g10(stats.min_avg_two_qubit) << ','
      << format_g10(stats.min_avg_gates) << ',' << format_g10(stats.min_avg_depth) << '\n';
    if (!f) throw IoError("csv: write failed for " + path);
}

RunLog load_run_log(const std::string& run_dir) {
    RunLog run;
    const std::string summary_path = run_dir + "/summary.json";
    std::ifstream sf(summary_path);
    if (!sf) throw IoError("logs: cannot open " + summary_path);
    nlohmann::json summary;
    try {
        sf >> summary;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("logs: " + summary_path + " is not valid JSON: " + e.what());
    }
    run.state_id = summary.at("state_id").get<std::string>();
    run.agent_seed = summary.at("config").at("seeds").at("agent_init").get<std::uint64_t>();
    run.input_concurrence = summary.at("effective_concurrence").get<double>();

    const std::string log_path = run_dir + "/episodes.jsonl";
    std::ifstream lf(log_path);
    if (!lf) throw IoError("logs: cannot open " + log_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lf, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            run.episodes.push_back(nlohmann::json::parse(line).get<EpisodeRecord>());
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLogError("logs: malformed record at " + log_path + " line " +
                                    std::to_string(line_no) + ": " + e.what());
        }
    }
    return run;
}

}  // namespace rlqas
