#include "core/serialize.hpp"

#include "core/error.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

namespace symqfi::io {

namespace {

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json &obj, const std::string &path, const std::set<std::string> &allowed) {
    for(const auto &[key, value] : obj.items())
        if(!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
}

const json &require_object(const json &j, const std::string &path) {
    if(!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

long long get_int(const json &j, const std::string &path) {
    if(!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
}

double get_number(const json &j, const std::string &path) {
    if(!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

bool get_bool(const json &j, const std::string &path) {
    if(!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

int to_int(long long v, const std::string &path) {
    if(v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(path, "integer out of range");
    return static_cast<int>(v);
}

std::vector<int> get_int_list(const json &j, const std::string &path) {
    if(!j.is_array()) throw ConfigError(path, "expected an array of integers");
    std::vector<int> out;
    for(std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        out.push_back(to_int(get_int(j[i], p), p));
    }
    return out;
}

std::vector<double> flatten(const Eigen::MatrixXcd &m, bool imag) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for(Eigen::Index r = 0; r < m.rows(); ++r)
        for(Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(imag ? m(r, c).imag() : m(r, c).real());
    return out;
}

std::vector<double> number_array(const json &j, const char *key) {
    if(!j.contains(key) || !j.at(key).is_array()) throw InvalidArgument(std::string("missing array '") + key + "'");
    std::vector<double> out;
    for(const auto &v : j.at(key)) {
        if(!v.is_number()) throw InvalidArgument(std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

int n_qubits_field(const json &j) {
    if(!j.is_object() || !j.contains("n_qubits") || !j.at("n_qubits").is_number_integer())
        throw InvalidArgument("missing integer 'n_qubits'");
    const long long n = j.at("n_qubits").get<long long>();
    if(n < 1 || n > 1 << 20) throw InvalidArgument("invalid n_qubits " + std::to_string(n));
    return static_cast<int>(n);
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

} // namespace

json to_json(const SymOperator &op) {
    return {{"n_qubits", op.n_qubits()}, {"re", flatten(op.matrix(), false)}, {"im", flatten(op.matrix(), true)}};
}

json to_json(const SymState &state) {
    std::vector<double> re, im;
    for(const Complex &z : state.amplitudes()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return {{"n_qubits", state.n_qubits()}, {"re", re}, {"im", im}};
}

json to_json(const hamiltonian::PiHamiltonianSpec &spec) {
    json coeffs = json::array();
    for(const auto &[idx, gamma] : spec.coeffs) coeffs.push_back({{"a", idx.a}, {"b", idx.b}, {"c", idx.c}, {"gamma", gamma}});
    json j = {{"n_qubits", spec.n_qubits}, {"k", spec.k}, {"coeffs", coeffs}};
    if(spec.seed) j["seed"] = *spec.seed;
    return j;
}

json to_json(const qfi::QfiResult &r) {
    return {{"value", r.value},
            {"route", qfi::route_name(r.route)},
            {"theta", r.theta},
            {"n_qubits", r.n_qubits},
            {"clamped_residual", r.clamped_residual}};
}

json to_json(const experiments::HaarSet &set) {
    json indices = json::array();
    for(const auto &idx : set.indices) indices.push_back({{"k", idx.order()}, {"a", idx.a}, {"b", idx.b}, {"c", idx.c}});
    return {{"N", set.n_qubits}, {"final_rank", set.final_rank}, {"indices", indices}};
}

json to_json(const experiments::CampaignConfig &cfg) {
    json theta = cfg.generator.theta.random ? json("random") : json(cfg.generator.theta.value);
    return {{"N_list", cfg.N_list},
            {"k_list", cfg.k_list},
            {"samples", cfg.samples},
            {"generator", {{"name", cfg.generator.name}, {"theta", theta}}},
            {"master_seed", cfg.master_seed},
            {"degeneracy_tol", cfg.degeneracy_tol},
            {"keep_degenerate", cfg.keep_degenerate},
            {"record_timing", cfg.record_timing},
            {"optimize", {{"restarts", cfg.optimize.restarts}, {"budget", cfg.optimize.budget}}},
            {"gap_scan", {{"diagonal_samples", cfg.gap_scan.diagonal_samples}, {"lmg_control", cfg.gap_scan.lmg_control}}}};
}

json to_json(const experiments::OptimumResult &opt) {
    const double best = std::isfinite(opt.best_qfi) ? opt.best_qfi : std::numeric_limits<double>::quiet_NaN();
    return {{"N", opt.best_spec.n_qubits},
            {"k", opt.best_spec.k},
            {"theta", opt.theta},
            {"best_qfi", best}, // null when every point was degenerate
            {"upper_bound", opt.upper_bound},
            {"ratio", best / opt.upper_bound},
            {"evaluations", opt.evaluations},
            {"best_restart", opt.best_restart},
            {"best_spec", to_json(opt.best_spec)}};
}

json report_json(const experiments::GapScanResult &scan) {
    auto violations = [](const experiments::ViolationReport &v) {
        return json{{"checked", v.checked}, {"violations", v.violations}, {"max_excess", v.max_excess}};
    };
    json j = {{"N", scan.n_qubits},
              {"k", scan.k},
              {"margin", experiments::kTradeoffMargin},
              {"general", violations(scan.general_violations)},
              {"diagonal", violations(scan.diagonal_violations)}};
    if(scan.lmg)
        j["lmg_control"] = {{"gap", scan.lmg->gap},
                            {"qfi", scan.lmg->qfi},
                            {"expected_gap", scan.lmg->expected_gap},
                            {"expected_qfi", scan.lmg->expected_qfi},
                            {"degenerate", scan.lmg->degenerate}};
    return j;
}

SymOperator operator_from_json(const json &j) {
    const int n = n_qubits_field(j);
    const std::vector<double> re = number_array(j, "re"), im = number_array(j, "im");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    if(re.size() != dim * dim || im.size() != dim * dim)
        throw InvalidArgument("operator arrays must hold (N+1)^2 = " + std::to_string(dim * dim) + " entries");
    Eigen::MatrixXcd m(dim, dim);
    for(std::size_t r = 0; r < dim; ++r)
        for(std::size_t c = 0; c < dim; ++c) m(r, c) = {re[r * dim + c], im[r * dim + c]};
    return {n, std::move(m)};
}

hamiltonian::PiHamiltonianSpec spec_from_json(const json &j) {
    hamiltonian::PiHamiltonianSpec spec;
    spec.n_qubits = n_qubits_field(j);
    if(!j.contains("k") || !j.at("k").is_number_integer()) throw InvalidArgument("missing integer 'k'");
    spec.k = j.at("k").get<int>();
    if(j.contains("seed")) {
        if(!j.at("seed").is_number_unsigned()) throw InvalidArgument("'seed' must be an unsigned integer");
        spec.seed = j.at("seed").get<std::uint64_t>();
    }
    if(!j.contains("coeffs") || !j.at("coeffs").is_array()) throw InvalidArgument("missing array 'coeffs'");
    for(const auto &entry : j.at("coeffs")) {
        for(const char *key : {"a", "b", "c"})
            if(!entry.contains(key) || !entry.at(key).is_number_integer())
                throw InvalidArgument(std::string("coefficient entry lacks integer '") + key + "'");
        if(!entry.contains("gamma") || !entry.at("gamma").is_number())
            throw InvalidArgument("coefficient entry lacks numeric 'gamma'");
        const CorrelatorIndex idx{entry.at("a").get<int>(), entry.at("b").get<int>(), entry.at("c").get<int>()};
        if(!spec.coeffs.emplace(idx, entry.at("gamma").get<double>()).second)
            throw InvalidArgument("duplicate coefficient key");
    }
    spec.validate();
    return spec;
}

LoadedState state_from_json(const json &j) {
    const int n = n_qubits_field(j);
    const std::vector<double> re = number_array(j, "re"), im = number_array(j, "im");
    if(re.size() != static_cast<std::size_t>(n) + 1 || im.size() != re.size())
        throw InvalidArgument("state arrays must hold N+1 = " + std::to_string(n + 1) + " entries");
    Eigen::VectorXcd a(n + 1);
    for(int i = 0; i <= n; ++i) a(i) = {re[i], im[i]};
    const double deviation = std::abs(a.norm() - 1.0);
    return {SymState::normalized(n, std::move(a)), deviation};
}

experiments::CampaignConfig config_from_json(const json &root) {
    require_object(root, "");
    const json *cfg_obj = &root;
    if(root.contains("config")) {
        // Run manifest.
        reject_unknown(root, "", {"version", "subcommand", "config", "master_seed", "workers", "wall_time_s", "outputs"});
        cfg_obj = &require_object(root.at("config"), "config");
    }
    const json &j = *cfg_obj;
    const std::string base = cfg_obj == &root ? "" : "config";
    reject_unknown(j, base,
                   {"N_list", "k_list", "samples", "generator", "master_seed", "degeneracy_tol", "keep_degenerate",
                    "record_timing", "optimize", "gap_scan"});

    experiments::CampaignConfig cfg;
    if(j.contains("N_list")) cfg.N_list = get_int_list(j.at("N_list"), join(base, "N_list"));
    if(j.contains("k_list")) cfg.k_list = get_int_list(j.at("k_list"), join(base, "k_list"));
    if(j.contains("samples")) cfg.samples = to_int(get_int(j.at("samples"), join(base, "samples")), join(base, "samples"));
    if(j.contains("generator")) {
        const std::string path = join(base, "generator");
        const json &g = j.at("generator");
        if(g.is_string()) {
            cfg.generator.name = g.get<std::string>();
        } else {
            require_object(g, path);
            reject_unknown(g, path, {"name", "theta"});
            if(g.contains("name")) {
                if(!g.at("name").is_string()) throw ConfigError(join(path, "name"), "expected a string");
                cfg.generator.name = g.at("name").get<std::string>();
            }
            if(g.contains("theta")) {
                const json &t = g.at("theta");
                if(t.is_string()) {
                    if(t.get<std::string>() != "random")
                        throw ConfigError(join(path, "theta"), "expected a number or \"random\"");
                    cfg.generator.theta = {true, 0.0};
                } else {
                    cfg.generator.theta = {false, get_number(t, join(path, "theta"))};
                }
            }
        }
    }
    if(j.contains("master_seed")) {
        const json &s = j.at("master_seed");
        if(!s.is_number_unsigned()) throw ConfigError(join(base, "master_seed"), "expected a non-negative integer");
        cfg.master_seed = s.get<std::uint64_t>();
    }
    if(j.contains("degeneracy_tol")) cfg.degeneracy_tol = get_number(j.at("degeneracy_tol"), join(base, "degeneracy_tol"));
    if(j.contains("keep_degenerate")) cfg.keep_degenerate = get_bool(j.at("keep_degenerate"), join(base, "keep_degenerate"));
    if(j.contains("record_timing")) cfg.record_timing = get_bool(j.at("record_timing"), join(base, "record_timing"));
    if(j.contains("optimize")) {
        const std::string path = join(base, "optimize");
        const json &o = require_object(j.at("optimize"), path);
        reject_unknown(o, path, {"restarts", "budget"});
        if(o.contains("restarts"))
            cfg.optimize.restarts = to_int(get_int(o.at("restarts"), join(path, "restarts")), join(path, "restarts"));
        if(o.contains("budget")) cfg.optimize.budget = to_int(get_int(o.at("budget"), join(path, "budget")), join(path, "budget"));
    }
    if(j.contains("gap_scan")) {
        const std::string path = join(base, "gap_scan");
        const json &g = require_object(j.at("gap_scan"), path);
        reject_unknown(g, path, {"diagonal_samples", "lmg_control"});
        if(g.contains("diagonal_samples"))
            cfg.gap_scan.diagonal_samples =
                to_int(get_int(g.at("diagonal_samples"), join(path, "diagonal_samples")), join(path, "diagonal_samples"));
        if(g.contains("lmg_control")) cfg.gap_scan.lmg_control = get_bool(g.at("lmg_control"), join(path, "lmg_control"));
    }
    return cfg;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError("", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch(const json::parse_error &e) {
        throw ConfigError("", "'" + path + "' is not valid JSON: " + e.what());
    }
}

std::string format_double(double v) {
    if(std::isnan(v)) return "nan";
    if(std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_records_csv(std::ostream &os, const std::vector<experiments::SampleRecord> &records) {
    os << "sample_id,N,k,sample_seed,theta,qfi,gap,energy0,degenerate,elapsed_ms\n";
    for(const auto &r : records)
        os << r.sample_id << ',' << r.n_qubits << ',' << r.k << ',' << r.sample_seed << ',' << format_double(r.theta) << ','
           << format_double(r.qfi) << ',' << format_double(r.gap) << ',' << format_double(r.energy0) << ','
           << csv_bool(r.degenerate) << ',' << format_double(r.elapsed_ms) << '\n';
}

void write_summary_csv(std::ostream &os, const std::vector<experiments::SummaryRow> &rows) {
    os << "N,k,mean_qfi,sem_qfi,n_kept,n_degenerate,haar_reference\n";
    for(const auto &r : rows)
        os << r.n_qubits << ',' << r.k << ',' << format_double(r.mean_qfi) << ',' << format_double(r.sem_qfi) << ','
           << r.n_kept << ',' << r.n_degenerate << ',' << format_double(r.haar_reference) << '\n';
}

void write_histogram_csv(std::ostream &os, const std::vector<experiments::SummaryRow> &rows) {
    os << "N,k,bin,lower,upper,count\n";
    for(const auto &r : rows)
        for(std::size_t b = 0; b < r.histogram.counts.size(); ++b)
            os << r.n_qubits << ',' << r.k << ',' << b << ',' << format_double(r.histogram.edges[b]) << ','
               << format_double(r.histogram.edges[b + 1]) << ',' << r.histogram.counts[b] << '\n';
}

} // namespace symqfi::io
