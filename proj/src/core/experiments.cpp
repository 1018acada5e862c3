#include "core/experiments.hpp"

#include "core/error.hpp"
#include "core/qfi.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <thread>

namespace symqfi::experiments {

namespace {

constexpr std::uint64_t kStreamSampling = 0;
constexpr std::uint64_t kStreamDiagonal = 1;
constexpr std::uint64_t kStreamOptimize = 3;
constexpr std::uint64_t kStreamTheta = 4;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double draw_theta(const ThetaPolicy &policy, std::mt19937_64 &rng) {
    if(!policy.random) return policy.value;
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    return uniform(rng);
}

template <class Body>
double timed(bool enabled, Body &&body) {
    if(!enabled) {
        body();
        return 0.0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double cell_upper_bound(const encoding::GeneratorModel &gen, int n, const std::vector<SampleRecord> &cell) {
    double hi = 0.0;
    for(const auto &r : cell) hi = std::max({hi, encoding::qfi_upper_bound(gen, r.theta, n), r.qfi});
    return hi > 0.0 ? hi : 1.0;
}

void require_single_cell(const CampaignConfig &cfg) {
    if(cfg.N_list.size() != 1) throw ConfigError("N_list", "gap scan needs exactly one N");
    if(cfg.k_list.size() != 1) throw ConfigError("k_list", "gap scan needs exactly one k");
}

} // namespace

void CampaignConfig::validate() const {
    if(N_list.empty()) throw ConfigError("N_list", "must list at least one system size");
    if(k_list.empty()) throw ConfigError("k_list", "must list at least one interaction order");
    if(std::set<int>(N_list.begin(), N_list.end()).size() != N_list.size())
        throw ConfigError("N_list", "duplicate entries");
    if(std::set<int>(k_list.begin(), k_list.end()).size() != k_list.size())
        throw ConfigError("k_list", "duplicate entries");
    for(std::size_t i = 0; i < N_list.size(); ++i)
        if(N_list[i] < 1) throw ConfigError("N_list[" + std::to_string(i) + "]", "system size must be >= 1");
    const int n_min = *std::min_element(N_list.begin(), N_list.end());
    for(std::size_t i = 0; i < k_list.size(); ++i) {
        if(k_list[i] < 1) throw ConfigError("k_list[" + std::to_string(i) + "]", "interaction order must be >= 1");
        if(k_list[i] > n_min)
            throw ConfigError("k_list[" + std::to_string(i) + "]",
                              "k = " + std::to_string(k_list[i]) + " exceeds N = " + std::to_string(n_min));
    }
    if(samples < 1) throw ConfigError("samples", "must be >= 1");
    try {
        (void)encoding::GeneratorModel::from_name(generator.name);
    } catch(const InvalidArgument &e) {
        throw ConfigError("generator.name", e.what());
    }
    if(!generator.theta.random && !std::isfinite(generator.theta.value))
        throw ConfigError("generator.theta", "must be finite or \"random\"");
    if(!(degeneracy_tol > 0.0) || !std::isfinite(degeneracy_tol))
        throw ConfigError("degeneracy_tol", "must be a positive finite number");
    if(optimize.restarts < 1) throw ConfigError("optimize.restarts", "must be >= 1");
    if(optimize.budget < 0) throw ConfigError("optimize.budget", "must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t master, int n_qubits, int k, std::int64_t index, std::uint64_t stream) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n_qubits));
    h = splitmix64(h ^ static_cast<std::uint64_t>(k));
    h = splitmix64(h ^ static_cast<std::uint64_t>(index));
    return splitmix64(h ^ stream);
}

double haar_reference(int n_qubits) { return n_qubits * (n_qubits + 1.0) / 3.0; }

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, symspace::CorrelatorCache &)> &fn) {
    if(workers < 1) throw InvalidArgument("worker count must be >= 1");
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto worker = [&] {
        symspace::CorrelatorCache cache;
        for(std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                fn(i, cache);
            } catch(...) {
                std::lock_guard lock(error_mutex);
                if(i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if(threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for(std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for(auto &t : pool) t.join();
    }
    if(error) std::rethrow_exception(error);
}

SampleRecord evaluate_spec(const hamiltonian::PiHamiltonianSpec &spec, const encoding::GeneratorModel &gen,
                           double theta, double degeneracy_tol, symspace::CorrelatorCache &cache) {
    const SymOperator h = hamiltonian::symmetrize(hamiltonian::assemble(spec, cache));
    const hamiltonian::GroundStateResult gs = hamiltonian::ground_state(h, degeneracy_tol);
    const Eigen::VectorXd normalized = hamiltonian::normalize_spectrum(gs.spectrum);

    SampleRecord rec;
    rec.n_qubits = spec.n_qubits;
    rec.k = spec.k;
    rec.sample_seed = spec.seed.value_or(0);
    rec.theta = theta;
    rec.qfi = qfi::qfi_symmetric(gs.state, encoding::collective_encoding(gen, theta, spec.n_qubits)).value;
    rec.gap = std::max(0.0, normalized(1) - normalized(0));
    rec.energy0 = gs.energy0;
    rec.degenerate = gs.degenerate;
    return rec;
}

SummaryRow summarize(int n_qubits, int k, const std::vector<SampleRecord> &cell, bool keep_degenerate,
                     double histogram_upper) {
    SummaryRow row;
    row.n_qubits = n_qubits;
    row.k = k;
    row.haar_reference = haar_reference(n_qubits);
    row.histogram.edges.resize(kHistogramBins + 1);
    row.histogram.counts.assign(kHistogramBins, 0);
    for(int i = 0; i <= kHistogramBins; ++i) row.histogram.edges[i] = histogram_upper * i / kHistogramBins;

    double sum = 0.0;
    std::vector<double> kept;
    for(const auto &r : cell) {
        if(r.degenerate) ++row.n_degenerate;
        if(r.degenerate && !keep_degenerate) continue;
        kept.push_back(r.qfi);
        sum += r.qfi;
        const int bin = static_cast<int>(std::floor(r.qfi / histogram_upper * kHistogramBins));
        ++row.histogram.counts[std::clamp(bin, 0, kHistogramBins - 1)];
    }
    row.n_kept = static_cast<std::int64_t>(kept.size());
    if(kept.empty()) {
        row.mean_qfi = row.sem_qfi = std::numeric_limits<double>::quiet_NaN();
        row.warning = "no kept samples in cell N=" + std::to_string(n_qubits) + " k=" + std::to_string(k);
        return row;
    }
    row.mean_qfi = sum / static_cast<double>(kept.size());
    if(kept.size() > 1) {
        double ss = 0.0;
        for(double q : kept) ss += (q - row.mean_qfi) * (q - row.mean_qfi);
        const double n = static_cast<double>(kept.size());
        row.sem_qfi = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return row;
}

CampaignResult sampling_campaign(const CampaignConfig &cfg, int workers) {
    cfg.validate();
    const encoding::GeneratorModel gen = encoding::GeneratorModel::from_name(cfg.generator.name);

    struct Task {
        int n, k;
        std::int64_t index;
    };
    std::vector<Task> tasks;
    for(int n : cfg.N_list)
        for(int k : cfg.k_list)
            for(std::int64_t i = 0; i < cfg.samples; ++i) tasks.push_back({n, k, i});

    CampaignResult out;
    out.records.resize(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t t, symspace::CorrelatorCache &cache) {
        const Task &task = tasks[t];
        SampleRecord rec;
        const double ms = timed(cfg.record_timing, [&] {
            const std::uint64_t seed = derive_seed(cfg.master_seed, task.n, task.k, task.index, kStreamSampling);
            std::mt19937_64 rng(seed);
            hamiltonian::PiHamiltonianSpec spec = hamiltonian::sample_spec(task.n, task.k, rng);
            spec.seed = seed;
            const double theta = draw_theta(cfg.generator.theta, rng);
            rec = evaluate_spec(spec, gen, theta, cfg.degeneracy_tol, cache);
        });
        rec.sample_id = task.index;
        rec.elapsed_ms = ms;
        out.records[t] = rec;
    });

    const std::size_t per_cell = static_cast<std::size_t>(cfg.samples);
    for(std::size_t begin = 0; begin < out.records.size(); begin += per_cell) {
        const std::vector<SampleRecord> cell(out.records.begin() + static_cast<std::ptrdiff_t>(begin),
                                             out.records.begin() + static_cast<std::ptrdiff_t>(begin + per_cell));
        const int n = cell.front().n_qubits, k = cell.front().k;
        const double hi = cell_upper_bound(gen, n, cell);
        out.summaries.push_back(summarize(n, k, cell, cfg.keep_degenerate, hi));
        out.summaries_nondegenerate.push_back(summarize(n, k, cell, false, hi));
    }
    return out;
}

ViolationReport count_violations(const std::vector<SampleRecord> &records) {
    ViolationReport rep;
    for(const auto &r : records) {
        ++rep.checked;
        const double excess = r.qfi - qfi::tradeoff_bound(r.n_qubits, r.gap);
        if(excess > kTradeoffMargin) {
            ++rep.violations;
            rep.max_excess = std::max(rep.max_excess, excess);
        }
    }
    return rep;
}

GapScanResult gap_qfi_scan(const CampaignConfig &cfg, int workers) {
    cfg.validate();
    require_single_cell(cfg);
    const encoding::GeneratorModel gen = encoding::GeneratorModel::from_name(cfg.generator.name);
    const int n = cfg.N_list.front(), k = cfg.k_list.front();
    const std::int64_t n_general = cfg.samples;
    const std::int64_t n_diagonal = cfg.gap_scan.diagonal_samples < 0 ? cfg.samples : cfg.gap_scan.diagonal_samples;

    GapScanResult out;
    out.n_qubits = n;
    out.k = k;
    out.general.resize(static_cast<std::size_t>(n_general));
    out.diagonal.resize(static_cast<std::size_t>(n_diagonal));

    parallel_for(static_cast<std::size_t>(n_general + n_diagonal), workers,
                 [&](std::size_t t, symspace::CorrelatorCache &cache) {
                     const bool diagonal = static_cast<std::int64_t>(t) >= n_general;
                     const std::int64_t index = diagonal ? static_cast<std::int64_t>(t) - n_general : static_cast<std::int64_t>(t);
                     SampleRecord rec;
                     const double ms = timed(cfg.record_timing, [&] {
                         const std::uint64_t seed =
                             derive_seed(cfg.master_seed, n, k, index, diagonal ? kStreamDiagonal : kStreamSampling);
                         std::mt19937_64 rng(seed);
                         hamiltonian::PiHamiltonianSpec spec;
                         if(diagonal) {
                             spec = hamiltonian::zero_spec(n, k);
                             std::normal_distribution<double> normal(0.0, 1.0);
                             for(auto &[idx, gamma] : spec.coeffs)
                                 if(idx.a == k || idx.b == k || idx.c == k) gamma = normal(rng);
                         } else {
                             spec = hamiltonian::sample_spec(n, k, rng);
                         }
                         spec.seed = seed;
                         const double theta = draw_theta(cfg.generator.theta, rng);
                         rec = evaluate_spec(spec, gen, theta, cfg.degeneracy_tol, cache);
                     });
                     rec.sample_id = index;
                     rec.elapsed_ms = ms;
                     (diagonal ? out.diagonal : out.general)[static_cast<std::size_t>(index)] = rec;
                 });

    out.general_violations = count_violations(out.general);
    out.diagonal_violations = count_violations(out.diagonal);

    if(k == 2 && cfg.gap_scan.lmg_control) {
        hamiltonian::PiHamiltonianSpec lmg = hamiltonian::zero_spec(n, 2);
        lmg.coeffs[{0, 0, 2}] = 1.0;
        symspace::CorrelatorCache cache;
        const double theta = cfg.generator.theta.random ? 0.0 : cfg.generator.theta.value;
        const SampleRecord rec = evaluate_spec(lmg, gen, theta, cfg.degeneracy_tol, cache);
        out.lmg = ControlPoint{rec.gap, rec.qfi, 12.0 / (n * (n + 2.0)), n * (n / 2.0 + 1.0), rec.degenerate};
    }
    return out;
}

HaarSet haar_minimal_set(int n_qubits) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    const Eigen::Index dim = n_qubits + 1;
    const Eigen::Index target = dim * dim;
    const Eigen::Index len = 2 * target;

    HaarSet out;
    out.n_qubits = n_qubits;
    Eigen::MatrixXd basis(len, target);
    Eigen::Index rank = 0;
    symspace::CorrelatorCache cache;

    for(int k = 0; k <= n_qubits && rank < target; ++k) {
        for(const CorrelatorIndex &idx : symspace::indices_of_order(k)) {
            const Eigen::MatrixXcd &m = symspace::correlator(n_qubits, idx, cache).matrix();
            Eigen::VectorXd v(len);
            // Row-major real parts, then imaginary parts.
            for(Eigen::Index r = 0; r < dim; ++r)
                for(Eigen::Index c = 0; c < dim; ++c) {
                    v(r * dim + c) = m(r, c).real();
                    v(target + r * dim + c) = m(r, c).imag();
                }
            const double norm = v.norm();
            if(norm == 0.0) continue;
            v /= norm;
            // Two Gram-Schmidt passes keep the basis orthonormal to working precision.
            for(int pass = 0; pass < 2; ++pass)
                if(rank > 0) v -= basis.leftCols(rank) * (basis.leftCols(rank).transpose() * v);
            const double residual = v.norm();
            if(residual <= kRankTolerance) continue;
            basis.col(rank++) = v / residual;
            out.indices.push_back(idx);
            if(rank == target) break;
        }
    }
    out.final_rank = static_cast<int>(rank);
    if(rank < target)
        throw NumericalError("rank deficiency: candidates exhausted at rank " + std::to_string(rank) + " of " +
                             std::to_string(target));
    return out;
}

double optimization_theta(const CampaignConfig &cfg, int n_qubits, int k) {
    std::mt19937_64 rng(derive_seed(cfg.master_seed, n_qubits, k, 0, kStreamTheta));
    return draw_theta(cfg.generator.theta, rng);
}

OptimumResult optimize_qfi(int n_qubits, int k, const encoding::GeneratorModel &gen, double theta, int restarts,
                           int budget, std::uint64_t seed, double degeneracy_tol, int workers) {
    if(restarts < 1) throw InvalidArgument("restarts must be >= 1");
    if(budget < 0) throw InvalidArgument("budget must be >= 0");
    const hamiltonian::PiHamiltonianSpec shape = hamiltonian::zero_spec(n_qubits, k);
    const encoding::CollectiveEncoding enc = encoding::collective_encoding(gen, theta, n_qubits);
    const Eigen::Index d = static_cast<Eigen::Index>(shape.coeffs.size());
    constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

    auto to_spec = [&](const Eigen::VectorXd &x) {
        hamiltonian::PiHamiltonianSpec spec = shape;
        Eigen::Index i = 0;
        for(auto &entry : spec.coeffs) entry.second = x(i++);
        return spec;
    };
    auto objective = [&](const Eigen::VectorXd &x, symspace::CorrelatorCache &cache) {
        const SymOperator h = hamiltonian::symmetrize(hamiltonian::assemble(to_spec(x), cache));
        const hamiltonian::GroundStateResult gs = hamiltonian::ground_state(h, degeneracy_tol);
        if(gs.degenerate) return kMinusInf;
        return qfi::qfi_symmetric(gs.state, enc).value;
    };

    struct Run {
        Eigen::VectorXd x;
        double value = kMinusInf;
        std::int64_t evaluations = 0;
    };
    std::vector<Run> runs(static_cast<std::size_t>(restarts));

    parallel_for(runs.size(), workers, [&](std::size_t r, symspace::CorrelatorCache &cache) {
        std::mt19937_64 rng(derive_seed(seed, n_qubits, k, static_cast<std::int64_t>(r), kStreamOptimize));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd x(d);
        do {
            for(Eigen::Index i = 0; i < d; ++i) x(i) = normal(rng);
        } while(x.norm() == 0.0);
        x.normalize();
        double fx = objective(x, cache);
        std::int64_t evals = 0;

        double step = 0.5;
        while(evals < budget && step > 1e-9) {
            bool improved = false;
            for(Eigen::Index i = 0; i < d && evals < budget; ++i) {
                for(double sign : {1.0, -1.0}) {
                    if(evals >= budget) break;
                    Eigen::VectorXd y = x;
                    y(i) += sign * step;
                    const double ny = y.norm();
                    if(ny == 0.0) continue;
                    y /= ny;
                    const double fy = objective(y, cache);
                    ++evals;
                    if(fy > fx) {
                        x = std::move(y);
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
            }
            if(!improved) step *= 0.5;
        }
        runs[r] = Run{std::move(x), fx, evals};
    });

    OptimumResult out;
    out.theta = theta;
    out.upper_bound = encoding::qfi_upper_bound(gen, theta, n_qubits);
    out.best_qfi = kMinusInf;
    for(std::size_t r = 0; r < runs.size(); ++r) {
        out.evaluations += runs[r].evaluations + 1;
        if(out.best_restart < 0 || runs[r].value > out.best_qfi) {
            out.best_qfi = runs[r].value;
            out.best_restart = static_cast<int>(r);
        }
    }
    out.best_spec = to_spec(runs[static_cast<std::size_t>(out.best_restart)].x);
    out.best_spec.seed = derive_seed(seed, n_qubits, k, out.best_restart, kStreamOptimize);
    return out;
}

} // namespace symqfi::experiments
