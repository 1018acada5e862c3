// symqfi command-line driver. All numerics go through the C API.

#include "symqfi/symqfi.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kSuccess = 0, kConfigError = 1, kNumericalError = 2, kInternalError = 3 };

struct Failure {
    symqfi_status status;
    std::string message;
};

int exit_code(symqfi_status status) {
    switch(status) {
    case SYMQFI_OK: return kSuccess;
    case SYMQFI_ERR_NUMERICAL: return kNumericalError;
    case SYMQFI_ERR_INTERNAL: return kInternalError;
    default: return kConfigError;
    }
}

void check(symqfi_status status) {
    if(status != SYMQFI_OK) throw Failure{status, symqfi_last_error()};
}

[[noreturn]] void config_failure(const std::string &message) { throw Failure{SYMQFI_ERR_CONFIG, message}; }

template <class T, void (*Free)(T *)>
struct Deleter {
    void operator()(T *p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<symqfi_config, Deleter<symqfi_config, symqfi_config_free>>;
using StatePtr = std::unique_ptr<symqfi_state, Deleter<symqfi_state, symqfi_state_free>>;
using OperatorPtr = std::unique_ptr<symqfi_operator, Deleter<symqfi_operator, symqfi_operator_free>>;
using CampaignPtr = std::unique_ptr<symqfi_campaign, Deleter<symqfi_campaign, symqfi_campaign_free>>;
using ScanPtr = std::unique_ptr<symqfi_gap_scan, Deleter<symqfi_gap_scan, symqfi_gap_scan_free>>;
using HaarPtr = std::unique_ptr<symqfi_haar_set, Deleter<symqfi_haar_set, symqfi_haar_set_free>>;
using OptimumPtr = std::unique_ptr<symqfi_optimum, Deleter<symqfi_optimum, symqfi_optimum_free>>;

std::string take(char *s) {
    std::string out = s ? s : "";
    symqfi_string_free(s);
    return out;
}

std::optional<double> parse_number(const std::string &text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if(used == text.size()) return v;
    } catch(const std::exception &) {
    }
    return std::nullopt;
}

// Options shared by the campaign-style subcommands.
struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::vector<int> n_list;
    std::vector<int> k_list;
    std::optional<int> samples;
    std::optional<std::string> generator;
    std::optional<std::string> theta;
    std::optional<double> tol_degeneracy;
    std::optional<bool> keep_degenerate;
    std::optional<int> restarts;
    std::optional<int> budget;

    // correlator / qfi
    int a = 0, b = 0, c = 0;
    bool brute_force = false;
    std::string state_file;
    std::string route = "symmetric";
};

void add_campaign_options(CLI::App *sub, Options &o) {
    sub->add_option("--config", o.config_path, "JSON config or run manifest");
    sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", o.workers, "worker threads (default: $SYMQFI_WORKERS or 1)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--N", o.n_list, "system sizes")->delimiter(',');
    sub->add_option("--k", o.k_list, "interaction orders")->delimiter(',');
    sub->add_option("--samples", o.samples, "samples per (N, k) cell");
    sub->add_option("--generator", o.generator, "linear-phase | rotating");
    sub->add_option("--theta", o.theta, "encoding parameter, or \"random\"");
    sub->add_option("--tol-degeneracy", o.tol_degeneracy, "relative degeneracy tolerance");
    sub->add_flag_function(
        "--keep-degenerate,!--no-keep-degenerate", [&o](std::int64_t count) { o.keep_degenerate = count > 0; },
        "include (or drop) degenerate samples in summary.csv");
}

int resolve_workers(const Options &o) {
    if(o.workers) {
        if(*o.workers < 1) config_failure("--workers must be >= 1");
        return *o.workers;
    }
    if(const char *env = std::getenv("SYMQFI_WORKERS")) {
        const auto v = parse_number(env);
        if(!v || *v < 1 || *v != static_cast<int>(*v)) config_failure("SYMQFI_WORKERS must be a positive integer");
        return static_cast<int>(*v);
    }
    return 1;
}

ConfigPtr resolve_config(const Options &o) {
    symqfi_config *raw = nullptr;
    if(o.config_path.empty())
        check(symqfi_config_new(&raw));
    else
        check(symqfi_config_from_file(o.config_path.c_str(), &raw));
    ConfigPtr cfg(raw);
    if(!o.n_list.empty()) check(symqfi_config_set_n_list(cfg.get(), o.n_list.data(), o.n_list.size()));
    if(!o.k_list.empty()) check(symqfi_config_set_k_list(cfg.get(), o.k_list.data(), o.k_list.size()));
    if(o.samples) check(symqfi_config_set_samples(cfg.get(), *o.samples));
    if(o.generator) check(symqfi_config_set_generator(cfg.get(), o.generator->c_str()));
    if(o.theta) {
        if(*o.theta == "random") {
            check(symqfi_config_set_theta_random(cfg.get()));
        } else if(const auto v = parse_number(*o.theta)) {
            check(symqfi_config_set_theta(cfg.get(), *v));
        } else {
            config_failure("--theta: expected a number or \"random\", got '" + *o.theta + "'");
        }
    }
    if(o.seed) check(symqfi_config_set_master_seed(cfg.get(), *o.seed));
    if(o.tol_degeneracy) check(symqfi_config_set_degeneracy_tol(cfg.get(), *o.tol_degeneracy));
    if(o.keep_degenerate) check(symqfi_config_set_keep_degenerate(cfg.get(), *o.keep_degenerate ? 1 : 0));
    if(o.restarts || o.budget) {
        const json current = json::parse(take([&] {
            char *s = nullptr;
            check(symqfi_config_to_json(cfg.get(), &s));
            return s;
        }()));
        check(symqfi_config_set_optimize(cfg.get(), o.restarts.value_or(current["optimize"]["restarts"].get<int>()),
                                         o.budget.value_or(current["optimize"]["budget"].get<int>())));
    }
    check(symqfi_config_validate(cfg.get()));
    return cfg;
}

json config_json(const symqfi_config *cfg) {
    char *s = nullptr;
    check(symqfi_config_to_json(cfg, &s));
    return json::parse(take(s));
}

// Files written by a run; removed again if the run fails.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    std::string add(const std::string &name) {
        const fs::path p = dir_ / name;
        paths_.push_back(p);
        return p.string();
    }
    [[nodiscard]] std::vector<std::string> names() const {
        std::vector<std::string> out;
        for(const auto &p : paths_) out.push_back(p.filename().string());
        return out;
    }
    void commit() { committed_ = true; }
    ~OutputSet() {
        if(committed_) return;
        std::error_code ec;
        for(const auto &p : paths_)
            if(fs::is_regular_file(p, ec)) fs::remove(p, ec);
    }

private:
    fs::path dir_;
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

void prepare_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if(ec || !fs::is_directory(dir)) throw Failure{SYMQFI_ERR_IO, "cannot create output directory '" + dir + "'"};
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << text;
    os.flush();
    if(!os) throw Failure{SYMQFI_ERR_IO, "cannot write '" + path + "'"};
}

using Clock = std::chrono::steady_clock;

void write_manifest(OutputSet &outputs, const std::string &subcommand, const symqfi_config *cfg, int workers,
                    Clock::time_point started) {
    std::uint64_t seed = 0;
    check(symqfi_config_master_seed(cfg, &seed));
    const std::vector<std::string> files = outputs.names();
    const json manifest = {{"version", symqfi_version()},
                           {"subcommand", subcommand},
                           {"config", config_json(cfg)},
                           {"master_seed", seed},
                           {"workers", workers},
                           {"wall_time_s", std::chrono::duration<double>(Clock::now() - started).count()},
                           {"outputs", files}};
    write_text(outputs.add("manifest.json"), manifest.dump(2) + "\n");
}

int run_correlator(const Options &o) {
    if(o.n_list.size() != 1) config_failure("--N: correlator needs exactly one system size");
    symqfi_operator *raw = nullptr;
    if(o.brute_force)
        check(symqfi_brute_force_correlator(o.n_list.front(), o.a, o.b, o.c, &raw));
    else
        check(symqfi_correlator(o.n_list.front(), o.a, o.b, o.c, &raw));
    OperatorPtr op(raw);
    char *s = nullptr;
    check(symqfi_operator_to_json(op.get(), &s));
    std::cout << take(s) << '\n';
    return kSuccess;
}

int run_qfi(const Options &o) {
    if(o.state_file.empty()) config_failure("--state-file is required");
    double theta = 0.0;
    if(o.theta) {
        const auto v = parse_number(*o.theta);
        if(!v) config_failure("--theta: qfi needs a number");
        theta = *v;
    }
    symqfi_route route = SYMQFI_ROUTE_SYMMETRIC;
    if(o.route == "variance")
        route = SYMQFI_ROUTE_VARIANCE;
    else if(o.route == "full_oracle" || o.route == "full-oracle")
        route = SYMQFI_ROUTE_FULL_ORACLE;
    else if(o.route != "symmetric")
        config_failure("--route: expected symmetric, variance or full_oracle");

    symqfi_state *raw = nullptr;
    double deviation = 0.0;
    check(symqfi_state_from_file(o.state_file.c_str(), &deviation, &raw));
    StatePtr state(raw);
    if(deviation > 1e-6)
        std::cerr << "warning: state norm deviates from 1 by " << deviation << "; amplitudes were renormalized\n";
    char *s = nullptr;
    check(symqfi_qfi_json(state.get(), o.generator.value_or("linear-phase").c_str(), theta, route, &s));
    std::cout << take(s) << '\n';
    return kSuccess;
}

int run_sample(const Options &o) {
    const auto started = Clock::now();
    ConfigPtr cfg = resolve_config(o);
    const int workers = resolve_workers(o);
    prepare_dir(o.out_dir);

    symqfi_campaign *raw = nullptr;
    check(symqfi_sampling_campaign(cfg.get(), workers, &raw));
    CampaignPtr campaign(raw);
    for(std::size_t i = 0; i < symqfi_campaign_summary_count(campaign.get()); ++i) {
        const std::string warning = symqfi_campaign_warning(campaign.get(), i);
        if(!warning.empty()) std::cerr << "warning: " << warning << '\n';
    }

    OutputSet outputs(o.out_dir);
    check(symqfi_campaign_write_records(campaign.get(), outputs.add("records.csv").c_str()));
    check(symqfi_campaign_write_summary(campaign.get(), 0, outputs.add("summary.csv").c_str()));
    check(symqfi_campaign_write_summary(campaign.get(), 1, outputs.add("summary_nondegenerate.csv").c_str()));
    check(symqfi_campaign_write_histogram(campaign.get(), outputs.add("histogram.csv").c_str()));
    write_manifest(outputs, "sample", cfg.get(), workers, started);
    outputs.commit();
    return kSuccess;
}

int run_gap_scan(const Options &o) {
    const auto started = Clock::now();
    ConfigPtr cfg = resolve_config(o);
    const int workers = resolve_workers(o);
    prepare_dir(o.out_dir);

    symqfi_gap_scan *raw = nullptr;
    check(symqfi_gap_scan_run(cfg.get(), workers, &raw));
    ScanPtr scan(raw);

    OutputSet outputs(o.out_dir);
    check(symqfi_gap_scan_write_records(scan.get(), 0, outputs.add("gap_scan_general.csv").c_str()));
    check(symqfi_gap_scan_write_records(scan.get(), 1, outputs.add("gap_scan_diagonal.csv").c_str()));
    char *s = nullptr;
    check(symqfi_gap_scan_report_json(scan.get(), &s));
    const std::string report = json::parse(take(s)).dump(2);
    write_text(outputs.add("gap_scan_report.json"), report + "\n");
    write_manifest(outputs, "gap-scan", cfg.get(), workers, started);
    outputs.commit();
    std::cout << report << '\n';
    return kSuccess;
}

int run_haar_rank(const Options &o) {
    const auto started = Clock::now();
    if(o.n_list.empty() && o.config_path.empty()) config_failure("--N: at least one system size is required");
    ConfigPtr cfg = [&] {
        // Only N_list matters here; keep validation from insisting on k_list.
        Options relaxed = o;
        if(relaxed.k_list.empty()) relaxed.k_list = {1};
        return resolve_config(relaxed);
    }();
    const int workers = resolve_workers(o);
    const std::vector<int> sizes = config_json(cfg.get())["N_list"].get<std::vector<int>>();
    prepare_dir(o.out_dir);

    OutputSet outputs(o.out_dir);
    json all = json::array();
    for(int n : sizes) {
        symqfi_haar_set *raw = nullptr;
        check(symqfi_haar_minimal_set(n, &raw));
        HaarPtr set(raw);
        char *s = nullptr;
        check(symqfi_haar_set_to_json(set.get(), &s));
        json j = json::parse(take(s));
        write_text(outputs.add("haar_set_N" + std::to_string(n) + ".json"), j.dump(2) + "\n");
        all.push_back(std::move(j));
    }
    write_manifest(outputs, "haar-rank", cfg.get(), workers, started);
    outputs.commit();
    std::cout << (all.size() == 1 ? all[0] : all).dump() << '\n';
    return kSuccess;
}

int run_optimize(const Options &o) {
    const auto started = Clock::now();
    ConfigPtr cfg = resolve_config(o);
    const int workers = resolve_workers(o);
    const json c = config_json(cfg.get());
    prepare_dir(o.out_dir);

    json results = json::array();
    for(int n : c["N_list"].get<std::vector<int>>()) {
        for(int k : c["k_list"].get<std::vector<int>>()) {
            double theta = 0.0;
            check(symqfi_config_optimization_theta(cfg.get(), n, k, &theta));
            symqfi_optimum *raw = nullptr;
            check(symqfi_optimize(n, k, c["generator"]["name"].get<std::string>().c_str(), theta,
                                  c["optimize"]["restarts"].get<int>(), c["optimize"]["budget"].get<int>(),
                                  c["master_seed"].get<std::uint64_t>(), c["degeneracy_tol"].get<double>(), workers, &raw));
            OptimumPtr opt(raw);
            char *s = nullptr;
            check(symqfi_optimum_to_json(opt.get(), &s));
            results.push_back(json::parse(take(s)));
        }
    }
    OutputSet outputs(o.out_dir);
    write_text(outputs.add("optimize.json"), results.dump(2) + "\n");
    write_manifest(outputs, "optimize", cfg.get(), workers, started);
    outputs.commit();
    std::cout << results.dump() << '\n';
    return kSuccess;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum Fisher information of permutation-invariant ground states"};
    app.set_version_flag("--version", std::string(symqfi_version()));
    app.require_subcommand(1);

    Options o;

    auto *correlator = app.add_subcommand("correlator", "print S_abc on the symmetric subspace as JSON");
    correlator->add_option("--N", o.n_list, "number of qubits")->required()->expected(1);
    correlator->add_option("--a", o.a, "sigma_x count");
    correlator->add_option("--b", o.b, "sigma_y count");
    correlator->add_option("--c", o.c, "sigma_z count");
    correlator->add_flag("--brute-force", o.brute_force, "build in the full 2^N space (N <= 12)");

    auto *qfi = app.add_subcommand("qfi", "QFI of a symmetric state file under an encoding");
    qfi->add_option("--state-file", o.state_file, "JSON {n_qubits, re, im}")->required();
    qfi->add_option("--generator", o.generator, "linear-phase | rotating");
    qfi->add_option("--theta", o.theta, "encoding parameter");
    qfi->add_option("--route", o.route, "symmetric | variance | full_oracle")->capture_default_str();

    auto *sample = app.add_subcommand("sample", "QFI sampling campaign over random Hamiltonians");
    add_campaign_options(sample, o);
    auto *gap_scan = app.add_subcommand("gap-scan", "gap vs QFI scan with tradeoff-bound check");
    add_campaign_options(gap_scan, o);
    auto *haar = app.add_subcommand("haar-rank", "minimal correlator sets spanning all Hermitian operators");
    add_campaign_options(haar, o);
    auto *optimize = app.add_subcommand("optimize", "direct QFI maximization over Hamiltonian coefficients");
    add_campaign_options(optimize, o);
    optimize->add_option("--restarts", o.restarts, "random restarts");
    optimize->add_option("--budget", o.budget, "objective evaluations per restart");

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        if(*correlator) return run_correlator(o);
        if(*qfi) return run_qfi(o);
        if(*sample) return run_sample(o);
        if(*gap_scan) return run_gap_scan(o);
        if(*haar) return run_haar_rank(o);
        if(*optimize) return run_optimize(o);
    } catch(const Failure &f) {
        std::cerr << "error (" << symqfi_status_name(f.status) << "): " << f.message << '\n';
        return exit_code(f.status);
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kConfigError;
}
