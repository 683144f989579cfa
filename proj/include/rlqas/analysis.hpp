#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlqas/qas.hpp"
#include "rlqas/qcore.hpp"

namespace rlqas {

struct ZeroVarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoSuccessesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientAnsatzesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedLogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pearson correlation coefficient (population moments).
double pcc(const std::vector<double>& x, const std::vector<double>& y);

// One training run's episode log plus the identifying metadata pulled from
// its summary.
struct RunLog {
    std::string state_id;
    std::uint64_t agent_seed = 0;
    double input_concurrence = 0.0;  // concurrence of the effective input
    std::vector<EpisodeRecord> episodes;
};

struct BoundsRecord {
    std::string state_id;
    double input_concurrence = 0.0;
    std::vector<double> per_seed_max;  // one entry per DDQN seed
    std::vector<double> per_seed_min;
    double max_mean = 0.0, max_std = 0.0;
    double min_mean = 0.0, min_std = 0.0;
};

// Which per-episode concurrence the bound studies rank. An admissible circuit
// leaves the evolved input nearly diagonal, hence nearly separable, so the
// evolved-state variant is degenerate (all bounds ~0); the entanglement the
// circuit induces on |00> is the informative quantity and the default.
enum class ConcurrenceVariant { Ansatz, Evolved };

inline double concurrence_of(const EpisodeRecord& rec, ConcurrenceVariant v) {
    return v == ConcurrenceVariant::Ansatz ? rec.concurrence_ansatz : rec.concurrence_evolved;
}

// Per state: extreme circuit concurrences over the successful episodes of
// each agent seed, then mean / sample standard deviation across seeds.
// A (state, seed) group without a single success raises NoSuccessesError.
std::vector<BoundsRecord> extract_concurrence_bounds(
    const std::vector<RunLog>& runs, ConcurrenceVariant variant = ConcurrenceVariant::Ansatz);

struct EtaPoint {
    double k = 0.0;
    std::optional<double> pcc_ik;  // missing when the interval was skipped
    std::optional<double> pcc_kj;
    std::string flag;  // "", "insufficient_data", "zero_variance"
};

struct EtaScan {
    std::vector<EtaPoint> points;
    std::optional<double> k_star;  // sign change of pcc_kj, linearly interpolated
};

struct ConcurrencePoint {
    double input_concurrence = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

// Correlation between upper and lower bounds on the two concurrence
// intervals [i, k) and [k, j] for every k in the grid.
EtaScan eta_scan(const std::vector<ConcurrencePoint>& points, const std::vector<double>& k_grid);

// Weighted blend of the two interval correlations at a given k. The scan
// itself only reports the w = 0 and w = 1 endpoints; strictly intermediate
// weights are exploratory and not established as a correlation measure.
double eta_weighted(const EtaPoint& p, double w);

struct Contribution {
    double delta = 0.0;    // change asymmetry of the qubits' conditional entropies
    double delta_c = 0.0;  // concurrence change C(rho) - C(rho')
};

Contribution delta_contribution(const DensityMatrix& rho, const DensityMatrix& rho_prime);

struct CumulativeWeight {
    double neg_region = 0.0;  // sum of |delta| over delta < 0
    double pos_region = 0.0;  // sum of |delta| over delta > 0
};

CumulativeWeight cumulative_weight(const std::vector<Contribution>& points);

struct EigenCorrelationRow {
    std::string state_id;
    std::size_t rank = 0;  // 0 = largest
    double median_eigenvalue = 0.0;
    double pcc_cond_entropy = 0.0;  // between the qubits' conditional entropies
    std::size_t n_ansatzes = 0;
};

// Per state, over its successful episodes: PCC between the two qubits'
// evolved-state conditional entropies, and the median inferred eigenvalue of
// each rank. Needs at least 3 successes per state.
std::vector<EigenCorrelationRow> eigenvalue_correlation_study(const std::vector<RunLog>& runs);

struct EnsembleRow {
    double concurrence = 0.0;
    double eigenvalues[4] = {0, 0, 0, 0};  // descending
    double cond_entropy_diff = 0.0;        // S_{q0|q1} - S_{q1|q0}
};

// Hilbert-Schmidt sample study over n 2-qubit states; rows in sample order.
std::vector<EnsembleRow> ensemble_study(std::size_t n_samples, std::uint64_t seed);

struct ResourceStatsRow {
    std::string state_id;
    std::string bound;  // "max" or "min"
    ResourceCount res;
};

struct ResourceStats {
    std::vector<ResourceStatsRow> per_state;
    double max_avg_depth = 0.0, max_avg_gates = 0.0, max_avg_two_qubit = 0.0;
    double min_avg_depth = 0.0, min_avg_gates = 0.0, min_avg_two_qubit = 0.0;
};

// Resources of each state's extreme-concurrence admissible ansatzes, with
// averages across states.
ResourceStats resource_stats(const std::vector<RunLog>& runs,
                             ConcurrenceVariant variant = ConcurrenceVariant::Ansatz);

// Contribution points assembled from a run's logged metrics.
std::vector<Contribution> contributions_from_logs(const std::vector<RunLog>& runs);

// --- CSV output -------------------------------------------------------------

std::string format_g10(double v);  // 10 significant digits

void write_bounds_csv(const std::string& path, const std::vector<BoundsRecord>& rows,
                      ConcurrenceVariant variant = ConcurrenceVariant::Ansatz);
void write_eta_scan_csv(const std::string& path, const EtaScan& scan);
void write_contribution_csv(const std::string& path, const std::vector<Contribution>& points);
void write_eigen_correlation_csv(const std::string& path,
                                 const std::vector<EigenCorrelationRow>& rows);
void write_ensemble_csv(const std::string& path, const std::vector<EnsembleRow>& rows);
void write_resources_csv(const std::string& path, const ResourceStats& stats);

// Parses a run directory (summary.json + episodes.jsonl). Malformed JSONL
// raises IoError mentioning the 1-based line number.
RunLog load_run_log(const std::string& run_dir);

}  // namespace rlqas
