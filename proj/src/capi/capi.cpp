#include "symqfi/symqfi.h"

#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/qfi.hpp"
#include "core/serialize.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

using namespace symqfi;

struct symqfi_operator {
    SymOperator op;
};
struct symqfi_state {
    SymState state;
};
struct symqfi_config {
    experiments::CampaignConfig cfg;
};
struct symqfi_campaign {
    experiments::CampaignResult result;
};
struct symqfi_gap_scan {
    experiments::GapScanResult result;
};
struct symqfi_haar_set {
    experiments::HaarSet set;
};
struct symqfi_optimum {
    experiments::OptimumResult result;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_key;

symqfi_status fail(symqfi_status status, const char *what, std::string key = {}) {
    g_last_error = what;
    g_last_error_key = std::move(key);
    return status;
}

template <class F>
symqfi_status guard(F &&body) {
    try {
        body();
        return SYMQFI_OK;
    } catch(const ConfigError &e) {
        return fail(SYMQFI_ERR_CONFIG, e.what(), e.key_path());
    } catch(const InvalidArgument &e) {
        return fail(SYMQFI_ERR_INVALID_ARGUMENT, e.what());
    } catch(const NumericalError &e) {
        return fail(SYMQFI_ERR_NUMERICAL, e.what());
    } catch(const IoError &e) {
        return fail(SYMQFI_ERR_IO, e.what());
    } catch(const std::bad_alloc &) {
        return fail(SYMQFI_ERR_INTERNAL, "out of memory");
    } catch(const std::exception &e) {
        return fail(SYMQFI_ERR_INTERNAL, e.what());
    } catch(...) {
        return fail(SYMQFI_ERR_INTERNAL, "unknown exception");
    }
}

template <class T>
void require(const T *p, const char *name) {
    if(!p) throw InvalidArgument(std::string(name) + " is null");
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if(!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit_json(const io::json &j, char **json_out) {
    require(json_out, "json_out");
    *json_out = dup_string(j.dump());
}

template <class Writer>
void write_file(const char *path, Writer &&writer) {
    require(path, "path");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if(!os) throw IoError(std::string("cannot open '") + path + "' for writing");
    writer(os);
    os.flush();
    if(!os) throw IoError(std::string("write to '") + path + "' failed");
}

symqfi_status make_operator(symqfi_operator **out, const std::function<SymOperator()> &build) {
    return guard([&] {
        require(out, "out");
        *out = new symqfi_operator{build()};
    });
}

encoding::GeneratorModel generator(const char *name) {
    require(name, "generator");
    return encoding::GeneratorModel::from_name(name);
}

Axis axis_from(char axis) {
    switch(axis) {
    case 'x': case 'X': return Axis::x;
    case 'y': case 'Y': return Axis::y;
    case 'z': case 'Z': return Axis::z;
    default: throw InvalidArgument(std::string("unknown axis '") + axis + "'");
    }
}

qfi::QfiResult evaluate_qfi(const symqfi_state *state, const char *gen_name, double theta, symqfi_route route) {
    require(state, "state");
    const encoding::GeneratorModel gen = generator(gen_name);
    const int n = state->state.n_qubits();
    switch(route) {
    case SYMQFI_ROUTE_SYMMETRIC: return qfi::qfi_symmetric(state->state, encoding::collective_encoding(gen, theta, n));
    case SYMQFI_ROUTE_VARIANCE: {
        // K_theta is taken on the evolved state; it commutes with U only for linear phase.
        const auto enc = encoding::collective_encoding(gen, theta, n);
        const SymState evolved = SymState::normalized(n, enc.c * state->state.amplitudes());
        qfi::QfiResult r = qfi::qfi_variance(evolved, encoding::collective_operator(encoding::local_k_theta(gen, theta), n));
        r.theta = theta;
        return r;
    }
    case SYMQFI_ROUTE_FULL_ORACLE: return qfi::qfi_full_oracle(state->state, gen, theta);
    }
    throw InvalidArgument("unknown QFI route");
}

const experiments::SummaryRow &summary_row(const symqfi_campaign *c, size_t i, bool nondegenerate) {
    require(c, "campaign");
    const auto &rows = nondegenerate ? c->result.summaries_nondegenerate : c->result.summaries;
    if(i >= rows.size()) throw InvalidArgument("summary row out of range");
    return rows[i];
}

const std::vector<experiments::SampleRecord> &series(const symqfi_gap_scan *s, int which) {
    require(s, "scan");
    if(which == 0) return s->result.general;
    if(which == 1) return s->result.diagonal;
    throw InvalidArgument("series must be 0 (general) or 1 (diagonal)");
}

} // namespace

extern "C" {

const char *symqfi_version(void) { return SYMQFI_VERSION; }
const char *symqfi_last_error(void) { return g_last_error.c_str(); }
const char *symqfi_last_error_key(void) { return g_last_error_key.c_str(); }

const char *symqfi_status_name(symqfi_status status) {
    switch(status) {
    case SYMQFI_OK: return "ok";
    case SYMQFI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SYMQFI_ERR_CONFIG: return "configuration error";
    case SYMQFI_ERR_NUMERICAL: return "numerical failure";
    case SYMQFI_ERR_IO: return "i/o error";
    case SYMQFI_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void symqfi_string_free(char *s) { std::free(s); }

// operators

symqfi_status symqfi_one_body_operator(char axis, int n_qubits, symqfi_operator **out) {
    return make_operator(out, [&] { return symspace::one_body_operator(axis_from(axis), n_qubits); });
}

symqfi_status symqfi_correlator(int n_qubits, int a, int b, int c, symqfi_operator **out) {
    return make_operator(out, [&] { return symspace::correlator(n_qubits, CorrelatorIndex{a, b, c}); });
}

symqfi_status symqfi_brute_force_correlator(int n_qubits, int a, int b, int c, symqfi_operator **out) {
    return make_operator(out, [&] { return symspace::brute_force_correlator(n_qubits, CorrelatorIndex{a, b, c}); });
}

symqfi_status symqfi_total_spin_squared(int n_qubits, symqfi_operator **out) {
    return make_operator(out, [&] { return symspace::total_spin_squared(n_qubits); });
}

int symqfi_operator_n_qubits(const symqfi_operator *op) { return op ? op->op.n_qubits() : -1; }

symqfi_status symqfi_operator_entry(const symqfi_operator *op, int row, int col, double *re, double *im) {
    return guard([&] {
        require(op, "operator");
        if(row < 0 || col < 0 || row >= op->op.dim() || col >= op->op.dim()) throw InvalidArgument("entry out of range");
        const Complex z = op->op.matrix()(row, col);
        if(re) *re = z.real();
        if(im) *im = z.imag();
    });
}

symqfi_status symqfi_operator_to_json(const symqfi_operator *op, char **json_out) {
    return guard([&] {
        require(op, "operator");
        emit_json(io::to_json(op->op), json_out);
    });
}

void symqfi_operator_free(symqfi_operator *op) { delete op; }

int64_t symqfi_count_correlators(int k) { return symspace::count_correlators(k); }
int64_t symqfi_total_terms(int n_qubits) { return symspace::total_terms(n_qubits); }

// states

symqfi_status symqfi_state_dicke(int n_qubits, int excitations, symqfi_state **out) {
    return guard([&] {
        require(out, "out");
        *out = new symqfi_state{SymState::dicke(n_qubits, excitations)};
    });
}

symqfi_status symqfi_state_from_amplitudes(int n_qubits, const double *re, const double *im, size_t len,
                                           double *norm_deviation, symqfi_state **out) {
    return guard([&] {
        require(out, "out");
        require(re, "re");
        require(im, "im");
        if(n_qubits < 1 || len != static_cast<size_t>(n_qubits) + 1)
            throw InvalidArgument("amplitude count must be N+1");
        Eigen::VectorXcd a(static_cast<Eigen::Index>(len));
        for(size_t i = 0; i < len; ++i) a(static_cast<Eigen::Index>(i)) = {re[i], im[i]};
        const double deviation = std::abs(a.norm() - 1.0);
        *out = new symqfi_state{SymState::normalized(n_qubits, std::move(a))};
        if(norm_deviation) *norm_deviation = deviation;
    });
}

symqfi_status symqfi_state_from_file(const char *path, double *norm_deviation, symqfi_state **out) {
    return guard([&] {
        require(out, "out");
        require(path, "path");
        io::LoadedState loaded = [&] {
            const io::json j = io::read_json_file(path);
            try {
                return io::state_from_json(j);
            } catch(const InvalidArgument &e) {
                throw ConfigError("state-file", std::string(path) + ": " + e.what());
            }
        }();
        *out = new symqfi_state{std::move(loaded.state)};
        if(norm_deviation) *norm_deviation = loaded.norm_deviation;
    });
}

int symqfi_state_n_qubits(const symqfi_state *state) { return state ? state->state.n_qubits() : -1; }

symqfi_status symqfi_state_to_json(const symqfi_state *state, char **json_out) {
    return guard([&] {
        require(state, "state");
        emit_json(io::to_json(state->state), json_out);
    });
}

void symqfi_state_free(symqfi_state *state) { delete state; }

// QFI and bounds

symqfi_status symqfi_qfi(const symqfi_state *state, const char *gen, double theta, symqfi_route route, double *value) {
    return guard([&] {
        require(value, "value");
        *value = evaluate_qfi(state, gen, theta, route).value;
    });
}

symqfi_status symqfi_qfi_json(const symqfi_state *state, const char *gen, double theta, symqfi_route route,
                              char **json_out) {
    return guard([&] { emit_json(io::to_json(evaluate_qfi(state, gen, theta, route)), json_out); });
}

symqfi_status symqfi_qfi_upper_bound(const char *gen, double theta, int n_qubits, double *value) {
    return guard([&] {
        require(value, "value");
        *value = encoding::qfi_upper_bound(generator(gen), theta, n_qubits);
    });
}

symqfi_status symqfi_rotating_envelope(int n_qubits, double *value) {
    return guard([&] {
        require(value, "value");
        *value = encoding::rotating_envelope(n_qubits);
    });
}

symqfi_status symqfi_cramer_rao(double fisher, double *value) {
    return guard([&] {
        require(value, "value");
        *value = qfi::cramer_rao(fisher);
    });
}

symqfi_status symqfi_tradeoff_bound(int n_qubits, double gap, double *value) {
    return guard([&] {
        require(value, "value");
        *value = qfi::tradeoff_bound(n_qubits, gap);
    });
}

// configuration

symqfi_status symqfi_config_new(symqfi_config **out) {
    return guard([&] {
        require(out, "out");
        *out = new symqfi_config{};
    });
}

symqfi_status symqfi_config_from_json(const char *json_text, symqfi_config **out) {
    return guard([&] {
        require(out, "out");
        require(json_text, "json_text");
        io::json j;
        try {
            j = io::json::parse(json_text);
        } catch(const io::json::parse_error &e) {
            throw ConfigError("", std::string("invalid JSON: ") + e.what());
        }
        *out = new symqfi_config{io::config_from_json(j)};
    });
}

symqfi_status symqfi_config_from_file(const char *path, symqfi_config **out) {
    return guard([&] {
        require(out, "out");
        require(path, "path");
        *out = new symqfi_config{io::config_from_json(io::read_json_file(path))};
    });
}

symqfi_status symqfi_config_set_n_list(symqfi_config *cfg, const int *values, size_t len) {
    return guard([&] {
        require(cfg, "config");
        if(len > 0) require(values, "values");
        cfg->cfg.N_list.assign(values, values + len);
    });
}

symqfi_status symqfi_config_set_k_list(symqfi_config *cfg, const int *values, size_t len) {
    return guard([&] {
        require(cfg, "config");
        if(len > 0) require(values, "values");
        cfg->cfg.k_list.assign(values, values + len);
    });
}

symqfi_status symqfi_config_set_samples(symqfi_config *cfg, int samples) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.samples = samples;
    });
}

symqfi_status symqfi_config_set_generator(symqfi_config *cfg, const char *name) {
    return guard([&] {
        require(cfg, "config");
        require(name, "name");
        cfg->cfg.generator.name = name;
    });
}

symqfi_status symqfi_config_set_theta(symqfi_config *cfg, double theta) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.generator.theta = {false, theta};
    });
}

symqfi_status symqfi_config_set_theta_random(symqfi_config *cfg) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.generator.theta = {true, 0.0};
    });
}

symqfi_status symqfi_config_set_master_seed(symqfi_config *cfg, uint64_t seed) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.master_seed = seed;
    });
}

symqfi_status symqfi_config_set_degeneracy_tol(symqfi_config *cfg, double tol) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.degeneracy_tol = tol;
    });
}

symqfi_status symqfi_config_set_keep_degenerate(symqfi_config *cfg, int keep) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.keep_degenerate = keep != 0;
    });
}

symqfi_status symqfi_config_set_record_timing(symqfi_config *cfg, int enabled) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.record_timing = enabled != 0;
    });
}

symqfi_status symqfi_config_set_optimize(symqfi_config *cfg, int restarts, int budget) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.optimize = {restarts, budget};
    });
}

symqfi_status symqfi_config_master_seed(const symqfi_config *cfg, uint64_t *seed) {
    return guard([&] {
        require(cfg, "config");
        require(seed, "seed");
        *seed = cfg->cfg.master_seed;
    });
}

symqfi_status symqfi_config_validate(const symqfi_config *cfg) {
    return guard([&] {
        require(cfg, "config");
        cfg->cfg.validate();
    });
}

symqfi_status symqfi_config_to_json(const symqfi_config *cfg, char **json_out) {
    return guard([&] {
        require(cfg, "config");
        emit_json(io::to_json(cfg->cfg), json_out);
    });
}

void symqfi_config_free(symqfi_config *cfg) { delete cfg; }

// sampling campaign

symqfi_status symqfi_sampling_campaign(const symqfi_config *cfg, int workers, symqfi_campaign **out) {
    return guard([&] {
        require(cfg, "config");
        require(out, "out");
        *out = new symqfi_campaign{experiments::sampling_campaign(cfg->cfg, workers)};
    });
}

size_t symqfi_campaign_record_count(const symqfi_campaign *c) { return c ? c->result.records.size() : 0; }
size_t symqfi_campaign_summary_count(const symqfi_campaign *c) { return c ? c->result.summaries.size() : 0; }

symqfi_status symqfi_campaign_summary(const symqfi_campaign *c, size_t i, int nondegenerate, int *n_qubits, int *k,
                                      double *mean_qfi, double *sem_qfi, int64_t *n_kept, int64_t *n_degenerate) {
    return guard([&] {
        const experiments::SummaryRow &row = summary_row(c, i, nondegenerate != 0);
        if(n_qubits) *n_qubits = row.n_qubits;
        if(k) *k = row.k;
        if(mean_qfi) *mean_qfi = row.mean_qfi;
        if(sem_qfi) *sem_qfi = row.sem_qfi;
        if(n_kept) *n_kept = row.n_kept;
        if(n_degenerate) *n_degenerate = row.n_degenerate;
    });
}

const char *symqfi_campaign_warning(const symqfi_campaign *c, size_t i) {
    if(!c || i >= c->result.summaries.size()) return "";
    return c->result.summaries[i].warning.c_str();
}

symqfi_status symqfi_campaign_write_records(const symqfi_campaign *c, const char *path) {
    return guard([&] {
        require(c, "campaign");
        write_file(path, [&](std::ostream &os) { io::write_records_csv(os, c->result.records); });
    });
}

symqfi_status symqfi_campaign_write_summary(const symqfi_campaign *c, int nondegenerate, const char *path) {
    return guard([&] {
        require(c, "campaign");
        const auto &rows = nondegenerate ? c->result.summaries_nondegenerate : c->result.summaries;
        write_file(path, [&](std::ostream &os) { io::write_summary_csv(os, rows); });
    });
}

symqfi_status symqfi_campaign_write_histogram(const symqfi_campaign *c, const char *path) {
    return guard([&] {
        require(c, "campaign");
        write_file(path, [&](std::ostream &os) { io::write_histogram_csv(os, c->result.summaries); });
    });
}

void symqfi_campaign_free(symqfi_campaign *c) { delete c; }

// gap scan

symqfi_status symqfi_gap_scan_run(const symqfi_config *cfg, int workers, symqfi_gap_scan **out) {
    return guard([&] {
        require(cfg, "config");
        require(out, "out");
        *out = new symqfi_gap_scan{experiments::gap_qfi_scan(cfg->cfg, workers)};
    });
}

symqfi_status symqfi_gap_scan_write_records(const symqfi_gap_scan *s, int which, const char *path) {
    return guard([&] {
        const auto &records = series(s, which);
        write_file(path, [&](std::ostream &os) { io::write_records_csv(os, records); });
    });
}

symqfi_status symqfi_gap_scan_violations(const symqfi_gap_scan *s, int which, int64_t *checked, int64_t *violations,
                                         double *max_excess) {
    return guard([&] {
        (void)series(s, which);
        const experiments::ViolationReport &v = which == 0 ? s->result.general_violations : s->result.diagonal_violations;
        if(checked) *checked = v.checked;
        if(violations) *violations = v.violations;
        if(max_excess) *max_excess = v.max_excess;
    });
}

symqfi_status symqfi_gap_scan_report_json(const symqfi_gap_scan *s, char **json_out) {
    return guard([&] {
        require(s, "scan");
        emit_json(io::report_json(s->result), json_out);
    });
}

void symqfi_gap_scan_free(symqfi_gap_scan *s) { delete s; }

// Haar sets

symqfi_status symqfi_haar_minimal_set(int n_qubits, symqfi_haar_set **out) {
    return guard([&] {
        require(out, "out");
        *out = new symqfi_haar_set{experiments::haar_minimal_set(n_qubits)};
    });
}

int symqfi_haar_set_final_rank(const symqfi_haar_set *h) { return h ? h->set.final_rank : -1; }
size_t symqfi_haar_set_size(const symqfi_haar_set *h) { return h ? h->set.indices.size() : 0; }

symqfi_status symqfi_haar_set_index(const symqfi_haar_set *h, size_t i, int *a, int *b, int *c) {
    return guard([&] {
        require(h, "haar set");
        if(i >= h->set.indices.size()) throw InvalidArgument("index out of range");
        const CorrelatorIndex &idx = h->set.indices[i];
        if(a) *a = idx.a;
        if(b) *b = idx.b;
        if(c) *c = idx.c;
    });
}

symqfi_status symqfi_haar_set_to_json(const symqfi_haar_set *h, char **json_out) {
    return guard([&] {
        require(h, "haar set");
        emit_json(io::to_json(h->set), json_out);
    });
}

void symqfi_haar_set_free(symqfi_haar_set *h) { delete h; }

// optimization

symqfi_status symqfi_optimize(int n_qubits, int k, const char *gen, double theta, int restarts, int budget,
                              uint64_t seed, double degeneracy_tol, int workers, symqfi_optimum **out) {
    return guard([&] {
        require(out, "out");
        *out = new symqfi_optimum{
            experiments::optimize_qfi(n_qubits, k, generator(gen), theta, restarts, budget, seed, degeneracy_tol, workers)};
    });
}

symqfi_status symqfi_config_optimization_theta(const symqfi_config *cfg, int n_qubits, int k, double *theta) {
    return guard([&] {
        require(cfg, "config");
        require(theta, "theta");
        *theta = experiments::optimization_theta(cfg->cfg, n_qubits, k);
    });
}

double symqfi_optimum_best_qfi(const symqfi_optimum *o) { return o ? o->result.best_qfi : std::nan(""); }
double symqfi_optimum_upper_bound(const symqfi_optimum *o) { return o ? o->result.upper_bound : std::nan(""); }

symqfi_status symqfi_optimum_to_json(const symqfi_optimum *o, char **json_out) {
    return guard([&] {
        require(o, "optimum");
        emit_json(io::to_json(o->result), json_out);
    });
}

void symqfi_optimum_free(symqfi_optimum *o) { delete o; }

} // extern "C"
