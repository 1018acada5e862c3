#pragma once

#include "core/encoding.hpp"
#include "core/hamiltonian.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace symqfi::experiments {

struct ThetaPolicy {
    bool random = false; // uniform on [0, 2 pi) per sample when set
    double value = 0.0;
};

struct GeneratorConfig {
    std::string name = "linear-phase";
    ThetaPolicy theta;
};

struct OptimizeConfig {
    int restarts = 20;
    int budget = 2000; // objective evaluations per restart after the seed point
};

struct GapScanConfig {
    // Size of the diagonal-only series; negative means "same as samples".
    int diagonal_samples = -1;
    bool lmg_control = true;
};

struct CampaignConfig {
    std::vector<int> N_list;
    std::vector<int> k_list;
    int samples = 1;
    GeneratorConfig generator;
    std::uint64_t master_seed = 0;
    double degeneracy_tol = hamiltonian::kDefaultDegeneracyTol;
    bool keep_degenerate = true;
    // Wall-clock timing makes outputs run-dependent, so it is opt-in.
    bool record_timing = false;
    OptimizeConfig optimize;
    GapScanConfig gap_scan;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

struct SampleRecord {
    std::int64_t sample_id = 0;
    int n_qubits = 0;
    int k = 0;
    std::uint64_t sample_seed = 0;
    double theta = 0.0;
    double qfi = 0.0;
    double gap = 0.0; // of the normalized operator
    double energy0 = 0.0;
    bool degenerate = false;
    double elapsed_ms = 0.0;
};

struct Histogram {
    std::vector<double> edges; // bins + 1 edges over [0, upper bound]
    std::vector<std::int64_t> counts;
};

struct SummaryRow {
    int n_qubits = 0;
    int k = 0;
    double mean_qfi = 0.0;
    double sem_qfi = 0.0;
    std::int64_t n_kept = 0;
    std::int64_t n_degenerate = 0;
    double haar_reference = 0.0;
    Histogram histogram;
    std::string warning; // set for a cell with no kept samples
};

struct CampaignResult {
    std::vector<SampleRecord> records;
    // Per keep_degenerate, and filtered to nondegenerate samples regardless of it.
    std::vector<SummaryRow> summaries;
    std::vector<SummaryRow> summaries_nondegenerate;
};

inline constexpr int kHistogramBins = 40;

// Counter-based seed for (master, N, k, index) in a given stream; independent
// of evaluation order.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, int n_qubits, int k, std::int64_t index,
                                        std::uint64_t stream = 0);

// Average QFI of Haar-random symmetric states under sigma_x/2 encoding.
[[nodiscard]] double haar_reference(int n_qubits);

// Runs fn(i, cache) for i in [0, n) on `workers` threads; each thread owns its
// CorrelatorCache. The first exception by task index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, symspace::CorrelatorCache &)> &fn);

// Ground state of -S^2 + H(spec), normalized gap, and QFI at theta. Shared by
// all campaigns.
[[nodiscard]] SampleRecord evaluate_spec(const hamiltonian::PiHamiltonianSpec &spec,
                                         const encoding::GeneratorModel &gen, double theta, double degeneracy_tol,
                                         symspace::CorrelatorCache &cache);

[[nodiscard]] CampaignResult sampling_campaign(const CampaignConfig &cfg, int workers = 1);

// Aggregates records of one (N, k) cell.
[[nodiscard]] SummaryRow summarize(int n_qubits, int k, const std::vector<SampleRecord> &cell, bool keep_degenerate,
                                   double histogram_upper);

struct ViolationReport {
    std::int64_t checked = 0;
    std::int64_t violations = 0;
    double max_excess = 0.0; // largest qfi - bound over violating records
};

struct ControlPoint {
    double gap = 0.0;
    double qfi = 0.0;
    double expected_gap = 0.0;
    double expected_qfi = 0.0;
    bool degenerate = false;
};

struct GapScanResult {
    int n_qubits = 0;
    int k = 0;
    std::vector<SampleRecord> general;
    std::vector<SampleRecord> diagonal; // only Gamma_k00, Gamma_0k0, Gamma_00k nonzero
    ViolationReport general_violations;
    ViolationReport diagonal_violations;
    std::optional<ControlPoint> lmg; // k = 2 only
};

// Margin above the tradeoff bound counted as a violation.
inline constexpr double kTradeoffMargin = 1e-6;

// Requires a single N and a single k in cfg.
[[nodiscard]] GapScanResult gap_qfi_scan(const CampaignConfig &cfg, int workers = 1);

[[nodiscard]] ViolationReport count_violations(const std::vector<SampleRecord> &records);

struct HaarSet {
    int n_qubits = 0;
    std::vector<CorrelatorIndex> indices; // starts with the identity
    int final_rank = 0;
};

inline constexpr double kRankTolerance = 1e-9;

// Greedy spanning set of Hermitian operators on the symmetric subspace, taken
// from S_abc in ascending k, lexicographic (a, b, c). Throws NumericalError if
// the candidates run out before rank (N+1)^2.
[[nodiscard]] HaarSet haar_minimal_set(int n_qubits);

struct OptimumResult {
    hamiltonian::PiHamiltonianSpec best_spec;
    double best_qfi = 0.0;
    double theta = 0.0;
    double upper_bound = 0.0; // N^2 ||K_theta||_sn^2
    std::int64_t evaluations = 0;
    int best_restart = -1;
};

// Pattern search on the unit sphere of Gamma coefficients, maximizing the QFI
// of the ground state of -S^2 + H(Gamma). Degenerate points score -infinity.
// Restart r starts from a normal draw seeded by derive_seed(seed, N, k, r, 3).
[[nodiscard]] OptimumResult optimize_qfi(int n_qubits, int k, const encoding::GeneratorModel &gen, double theta,
                                         int restarts, int budget, std::uint64_t seed,
                                         double degeneracy_tol = hamiltonian::kDefaultDegeneracyTol, int workers = 1);

// theta used by optimize for a config: the fixed value, or one uniform draw from master_seed.
[[nodiscard]] double optimization_theta(const CampaignConfig &cfg, int n_qubits, int k);

} // namespace symqfi::experiments
