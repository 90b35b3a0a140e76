#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridmc/engine.hpp"

namespace gridmc {

// Bad config input (unknown key, malformed value, invariant violation).
// Carries the offending line number when the source is a config file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    // grid geometry
    int rows = 18;
    int cols = 6;
    double cell_width_m = 5.0;
    double cell_height_m = 55.56;
    double tz_depth_m = 10.0;

    // kinematics & run control
    double speed_kmh = 50.0;
    double duration_s = 60.0;
    std::string scheme = "grid"; // "grid" | "dcf-baseline"
    std::vector<int> node_counts = {20, 40, 60, 80, 100};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string out = "results.csv";

    MacParams mac{};
    TrafficParams traffic{};
    SimKnobs knobs{};

    void validate() const; // throws ConfigError
};

// `key = value` lines, '#' starts a comment, unknown keys rejected with the
// line number. Missing keys keep their defaults.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

// One `key = value` line per config key, suitable for re-parsing.
void print_effective_config(const ScenarioConfig& cfg, std::ostream& out);

Scheme scheme_from_string(const std::string& s); // throws ConfigError

struct RunResult {
    std::string scheme_label; // "grid" | "dcf-baseline"
    int n_nodes = 0;
    std::uint64_t seed = 0;
    double tz_depth_m = 0.0;
    MetricsLedger metrics;
};

World make_world(const ScenarioConfig& cfg, Scheme scheme, int n_nodes,
                 double tz_depth_m, std::uint64_t seed);

RunResult run_single(const ScenarioConfig& cfg, Scheme scheme, int n_nodes,
                     double tz_depth_m, std::uint64_t seed,
                     std::ostream* trace = nullptr);

// All scheme variants (dcf-baseline, grid tz=0, grid tz=cfg.tz_depth_m)
// crossed with node_counts and seeds; rows sorted by
// (scheme, tz_depth, n_nodes, seed).
std::vector<RunResult> run_sweep(const ScenarioConfig& cfg,
                                 std::ostream* progress = nullptr);

extern const char* const kCsvHeader;
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const RunResult& r);
void write_csv(std::ostream& out, const std::vector<RunResult>& rows);

// Reads rows previously produced by write_csv (header required).
// Only the columns needed for aggregation are recovered.
struct CsvRow {
    std::string scheme_label;
    int n_nodes = 0;
    std::uint64_t seed = 0;
    double tz_depth_m = 0.0;
    double mean_delay_s = 0.0;
    double throughput_bps = 0.0;
};
std::vector<CsvRow> read_csv(std::istream& in);

// Per-plot aggregation: for each metric one table with a column pair
// (mean, stderr over seeds) per scheme variant, one row per node count.
// Throws ConfigError when variants cover different (n, seed) sets.
void emit_plot_data(const std::vector<CsvRow>& rows, std::ostream& delay_out,
                    std::ostream& throughput_out);

} // namespace gridmc
