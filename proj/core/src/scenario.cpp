#include "gridmc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "gridmc/metrics.hpp"
#include "gridmc/mobility.hpp"
#include "gridmc/plan.hpp"

namespace gridmc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        bad_line(line, "malformed number '" + v + "'");
    return x;
}

long long parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        bad_line(line, "malformed integer '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_line(line, "malformed boolean '" + v + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& v, int line, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) bad_line(line, "empty list element");
        out.push_back(static_cast<T>(parse(item, line)));
    }
    if (out.empty()) bad_line(line, "empty list");
    return out;
}

std::string fmt_g(double x) {
    char buf[40];
    if (std::isnan(x)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

template <typename T>
std::string fmt_list(const std::vector<T>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

// single dispatch table used by both the parser and the banner printer
void apply_key(ScenarioConfig& c, const std::string& key,
               const std::string& value, int line) {
    auto d = [&] { return parse_double(value, line); };
    auto i = [&] { return static_cast<int>(parse_int(value, line)); };
    auto i64 = [&] { return static_cast<std::int64_t>(parse_int(value, line)); };
    auto b = [&] { return parse_bool(value, line); };

    if (key == "scheme") c.scheme = value;
    else if (key == "rows") c.rows = i();
    else if (key == "cols") c.cols = i();
    else if (key == "cell_width_m") c.cell_width_m = d();
    else if (key == "cell_height_m") c.cell_height_m = d();
    else if (key == "tz_depth_m") c.tz_depth_m = d();
    else if (key == "speed_kmh") c.speed_kmh = d();
    else if (key == "duration_s") c.duration_s = d();
    else if (key == "warmup_s") c.knobs.warmup_s = d();
    else if (key == "node_counts")
        c.node_counts = parse_list<int>(value, line, parse_int);
    else if (key == "seeds")
        c.seeds = parse_list<std::uint64_t>(value, line, parse_int);
    else if (key == "out") c.out = value;
    else if (key == "slot_us") c.mac.slot_s = d() * 1e-6;
    else if (key == "sifs_us") c.mac.sifs_s = d() * 1e-6;
    else if (key == "difs_us") c.mac.difs_s = d() * 1e-6;
    else if (key == "cw_min") c.mac.cw_min = i();
    else if (key == "cw_max") c.mac.cw_max = i();
    else if (key == "data_rate_mbps") c.mac.data_rate_bps = d() * 1e6;
    else if (key == "phy_overhead_us") c.mac.phy_overhead_s = d() * 1e-6;
    else if (key == "max_retries") c.mac.max_retries = i();
    else if (key == "tx_range_m") c.mac.tx_range_m = d();
    else if (key == "switch_latency_ms") c.mac.switch_latency_s = d() * 1e-3;
    else if (key == "safety_hz") c.traffic.safety_hz = d();
    else if (key == "safety_payload_bytes")
        c.traffic.safety_payload_bits = i64() * 8;
    else if (key == "nonsafety_rate_hz") c.traffic.nonsafety_rate_hz = d();
    else if (key == "nonsafety_payload_bytes")
        c.traffic.nonsafety_payload_bits = i64() * 8;
    else if (key == "nonsafety_ttl_s") c.traffic.nonsafety_ttl_s = d();
    else if (key == "mobility_step_ms") c.knobs.mobility_step_s = d() * 1e-3;
    else if (key == "rsu_enabled") c.knobs.rsu_enabled = b();
    else if (key == "rsu_period_s") c.knobs.rsu_period_s = d();
    else if (key == "rsu_payload_bytes") c.knobs.rsu_payload_bits = i64() * 8;
    else if (key == "start_configured") c.knobs.start_configured = b();
    else if (key == "dwell_ms") c.knobs.dwell_s = d() * 1e-3;
    else if (key == "epoch_s") c.knobs.epoch_s = d();
    else bad_line(line, "unknown key '" + key + "'");
}

} // namespace

void ScenarioConfig::validate() const {
    try {
        scheme_from_string(scheme);
        build_grid(rows, cols, cell_width_m, cell_height_m, {0.0, 0.0},
                   tz_depth_m);
        mac.validate();
        traffic.validate();
        knobs.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config invalid: ") + e.what());
    }
    if (speed_kmh <= 0.0) throw ConfigError("config invalid: speed_kmh <= 0");
    if (duration_s <= 0.0)
        throw ConfigError("config invalid: duration_s <= 0");
    if (knobs.warmup_s >= duration_s)
        throw ConfigError("config invalid: warmup_s must be < duration_s");
    if (node_counts.empty()) throw ConfigError("config invalid: no node_counts");
    for (int n : node_counts)
        if (n < 0) throw ConfigError("config invalid: negative node count");
    if (seeds.empty()) throw ConfigError("config invalid: no seeds");
}

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) bad_line(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) bad_line(line, "empty key");
        apply_key(cfg, key, value, line);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void print_effective_config(const ScenarioConfig& c, std::ostream& out) {
    out << "scheme = " << c.scheme << "\n";
    out << "rows = " << c.rows << "\n";
    out << "cols = " << c.cols << "\n";
    out << "cell_width_m = " << fmt_g(c.cell_width_m) << "\n";
    out << "cell_height_m = " << fmt_g(c.cell_height_m) << "\n";
    out << "tz_depth_m = " << fmt_g(c.tz_depth_m) << "\n";
    out << "speed_kmh = " << fmt_g(c.speed_kmh) << "\n";
    out << "duration_s = " << fmt_g(c.duration_s) << "\n";
    out << "warmup_s = " << fmt_g(c.knobs.warmup_s) << "\n";
    out << "node_counts = " << fmt_list(c.node_counts) << "\n";
    out << "seeds = " << fmt_list(c.seeds) << "\n";
    out << "out = " << c.out << "\n";
    out << "slot_us = " << fmt_g(c.mac.slot_s * 1e6) << "\n";
    out << "sifs_us = " << fmt_g(c.mac.sifs_s * 1e6) << "\n";
    out << "difs_us = " << fmt_g(c.mac.difs_s * 1e6) << "\n";
    out << "cw_min = " << c.mac.cw_min << "\n";
    out << "cw_max = " << c.mac.cw_max << "\n";
    out << "data_rate_mbps = " << fmt_g(c.mac.data_rate_bps / 1e6) << "\n";
    out << "phy_overhead_us = " << fmt_g(c.mac.phy_overhead_s * 1e6) << "\n";
    out << "max_retries = " << c.mac.max_retries << "\n";
    out << "tx_range_m = " << fmt_g(c.mac.tx_range_m) << "\n";
    out << "switch_latency_ms = " << fmt_g(c.mac.switch_latency_s * 1e3)
        << "\n";
    out << "safety_hz = " << fmt_g(c.traffic.safety_hz) << "\n";
    out << "safety_payload_bytes = " << c.traffic.safety_payload_bits / 8
        << "\n";
    out << "nonsafety_rate_hz = " << fmt_g(c.traffic.nonsafety_rate_hz)
        << "\n";
    out << "nonsafety_payload_bytes = "
        << c.traffic.nonsafety_payload_bits / 8 << "\n";
    out << "nonsafety_ttl_s = " << fmt_g(c.traffic.nonsafety_ttl_s) << "\n";
    out << "mobility_step_ms = " << fmt_g(c.knobs.mobility_step_s * 1e3)
        << "\n";
    out << "rsu_enabled = " << (c.knobs.rsu_enabled ? "true" : "false")
        << "\n";
    out << "rsu_period_s = " << fmt_g(c.knobs.rsu_period_s) << "\n";
    out << "rsu_payload_bytes = " << c.knobs.rsu_payload_bits / 8 << "\n";
    out << "start_configured = "
        << (c.knobs.start_configured ? "true" : "false") << "\n";
    out << "dwell_ms = " << fmt_g(c.knobs.dwell_s * 1e3) << "\n";
    out << "epoch_s = " << fmt_g(c.knobs.epoch_s) << "\n";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "grid") return Scheme::grid;
    if (s == "dcf-baseline") return Scheme::dcf_baseline;
    throw ConfigError("unknown scheme '" + s +
                      "' (expected grid or dcf-baseline)");
}

World make_world(const ScenarioConfig& cfg, Scheme scheme, int n_nodes,
                 double tz_depth_m, std::uint64_t seed) {
    GridMap grid = build_grid(cfg.rows, cfg.cols, cfg.cell_width_m,
                              cfg.cell_height_m, {0.0, 0.0}, tz_depth_m);
    World w{
        .scheme = scheme,
        .grid = grid,
        .plan = scheme == Scheme::grid ? build_plan(cfg.rows, cfg.cols)
                                       : ChannelPlan{},
        .vehicles =
            spawn_scenario(n_nodes, grid, seed, cfg.speed_kmh / 3.6),
        .mac = cfg.mac,
        .traffic = cfg.traffic,
        .knobs = cfg.knobs,
    };
    return w;
}

RunResult run_single(const ScenarioConfig& cfg, Scheme scheme, int n_nodes,
                     double tz_depth_m, std::uint64_t seed,
                     std::ostream* trace) {
    const double tz = scheme == Scheme::grid ? tz_depth_m : 0.0;
    World w = make_world(cfg, scheme, n_nodes, tz, seed);
    RunResult r;
    r.scheme_label = scheme == Scheme::grid ? "grid" : "dcf-baseline";
    r.n_nodes = n_nodes;
    r.seed = seed;
    r.tz_depth_m = tz;
    r.metrics = run(w, cfg.duration_s, seed, trace);
    return r;
}

std::vector<RunResult> run_sweep(const ScenarioConfig& cfg,
                                 std::ostream* progress) {
    std::vector<std::pair<Scheme, double>> variants = {
        {Scheme::dcf_baseline, 0.0}, {Scheme::grid, 0.0}};
    if (cfg.tz_depth_m != 0.0)
        variants.emplace_back(Scheme::grid, cfg.tz_depth_m);

    std::vector<RunResult> rows;
    const size_t total =
        variants.size() * cfg.node_counts.size() * cfg.seeds.size();
    size_t done = 0;
    for (const auto& [scheme, tz] : variants) {
        for (int n : cfg.node_counts) {
            for (std::uint64_t seed : cfg.seeds) {
                rows.push_back(run_single(cfg, scheme, n, tz, seed));
                ++done;
                if (progress)
                    *progress << "[" << done << "/" << total << "] "
                              << rows.back().scheme_label << " tz="
                              << fmt_g(tz) << " n=" << n << " seed=" << seed
                              << "\n";
            }
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const RunResult& a, const RunResult& b) {
                  return std::tie(a.scheme_label, a.tz_depth_m, a.n_nodes,
                                  a.seed) < std::tie(b.scheme_label,
                                                     b.tz_depth_m, b.n_nodes,
                                                     b.seed);
              });
    return rows;
}

const char* const kCsvHeader =
    "scheme,n_nodes,seed,tz_depth_m,mean_delay_s,p95_delay_s,throughput_bps,"
    "jain_index,cch_util,mean_sch_util,relay_opportunity_s,drops_collision,"
    "drops_switch,drops_ttl";

void write_csv_header(std::ostream& out) { out << kCsvHeader << "\n"; }

void write_csv_row(std::ostream& out, const RunResult& r) {
    const MetricsLedger& m = r.metrics;
    const bool has_delay = !m.delay_samples.empty();
    double jain = std::nan("");
    try {
        jain = jain_index(m);
    } catch (const std::domain_error&) {
    }
    out << r.scheme_label << ',' << r.n_nodes << ',' << r.seed << ','
        << fmt_g(r.tz_depth_m) << ','
        << (has_delay ? fmt_g(mean_delay(m)) : "nan") << ','
        << (has_delay ? fmt_g(p95_delay(m)) : "nan") << ','
        << fmt_g(throughput_bps(m)) << ',' << fmt_g(jain) << ','
        << fmt_g(channel_utilization(m, kCch)) << ','
        << fmt_g(mean_sch_utilization(m)) << ','
        << fmt_g(m.tz_relay_seconds) << ',' << m.drops_collision << ','
        << m.drops_switch << ',' << m.drops_ttl << "\n";
}

void write_csv(std::ostream& out, const std::vector<RunResult>& rows) {
    write_csv_header(out);
    for (const RunResult& r : rows) write_csv_row(out, r);
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader)
        throw ConfigError("csv: missing or mismatched header");
    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 14)
            throw ConfigError("csv line " + std::to_string(lineno) +
                              ": expected 14 fields");
        CsvRow r;
        r.scheme_label = f[0];
        r.n_nodes = static_cast<int>(parse_int(f[1], lineno));
        r.seed = static_cast<std::uint64_t>(parse_int(f[2], lineno));
        r.tz_depth_m = parse_double(f[3], lineno);
        r.mean_delay_s = f[4] == "nan" ? std::nan("") : parse_double(f[4], lineno);
        r.throughput_bps = parse_double(f[6], lineno);
        rows.push_back(r);
    }
    return rows;
}

namespace {

std::string variant_name(const CsvRow& r) {
    if (r.scheme_label == "grid") return "grid_tz" + fmt_g(r.tz_depth_m);
    std::string s = r.scheme_label;
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

struct Stat {
    double mean = 0.0;
    double stderr_ = 0.0;
};

Stat mean_stderr(const std::vector<double>& xs) {
    Stat s;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) s.mean += x;
    s.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

} // namespace

void emit_plot_data(const std::vector<CsvRow>& rows, std::ostream& delay_out,
                    std::ostream& throughput_out) {
    if (rows.empty()) throw ConfigError("plot-data: empty csv");

    // variant -> n -> samples, plus cross-variant consistency bookkeeping
    std::map<std::string, std::map<int, std::vector<double>>> delay, tput;
    std::map<std::string, std::set<std::pair<int, std::uint64_t>>> points;
    for (const CsvRow& r : rows) {
        const std::string v = variant_name(r);
        delay[v][r.n_nodes].push_back(r.mean_delay_s);
        tput[v][r.n_nodes].push_back(r.throughput_bps);
        if (!points[v].insert({r.n_nodes, r.seed}).second)
            throw ConfigError("plot-data: duplicate row for " + v);
    }
    const auto& ref = points.begin()->second;
    for (const auto& [v, pts] : points)
        if (pts != ref)
            throw ConfigError(
                "plot-data: inconsistent sweep points across schemes");

    for (auto [metric, out] :
         {std::pair{&delay, &delay_out}, std::pair{&tput, &throughput_out}}) {
        *out << "# n_nodes";
        for (const auto& kv : *metric)
            *out << ' ' << kv.first << "_mean " << kv.first << "_stderr";
        *out << "\n";
        std::set<int> ns;
        for (const auto& [n, s] : metric->begin()->second) ns.insert(n);
        for (int n : ns) {
            *out << n;
            for (auto& [v, per_n] : *metric) {
                const Stat s = mean_stderr(per_n.at(n));
                *out << ' ' << fmt_g(s.mean) << ' ' << fmt_g(s.stderr_);
            }
            *out << "\n";
        }
    }
}

} // namespace gridmc
