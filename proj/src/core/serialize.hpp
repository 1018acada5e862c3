#pragma once

#include "core/experiments.hpp"
#include "core/qfi.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace symqfi::io {

using nlohmann::json;

json to_json(const SymOperator &op);
json to_json(const SymState &state);
json to_json(const hamiltonian::PiHamiltonianSpec &spec);
json to_json(const qfi::QfiResult &result);
json to_json(const experiments::HaarSet &set);
json to_json(const experiments::CampaignConfig &cfg);
json to_json(const experiments::OptimumResult &opt);
// Violation counts and the LMG control point; records go to CSV.
json report_json(const experiments::GapScanResult &scan);

SymOperator operator_from_json(const json &j);
hamiltonian::PiHamiltonianSpec spec_from_json(const json &j);

struct LoadedState {
    SymState state;
    double norm_deviation; // | ||alpha|| - 1 | before normalization
};
// {n_qubits, re, im}; rescaled to unit norm.
LoadedState state_from_json(const json &j);

// Accepts a config object or a run manifest carrying one under "config".
// Unknown keys and type mismatches raise ConfigError with the key path.
// Does not validate ranges; call validate() after applying overrides.
experiments::CampaignConfig config_from_json(const json &j);

// Reads and parses a JSON file; ConfigError on I/O or syntax problems.
json read_json_file(const std::string &path);

// "%.17g" for finite doubles, "nan" / "inf" / "-inf" otherwise.
std::string format_double(double v);

void write_records_csv(std::ostream &os, const std::vector<experiments::SampleRecord> &records);
void write_summary_csv(std::ostream &os, const std::vector<experiments::SummaryRow> &rows);
// Long format: N,k,bin,lower,upper,count.
void write_histogram_csv(std::ostream &os, const std::vector<experiments::SummaryRow> &rows);

} // namespace symqfi::io
