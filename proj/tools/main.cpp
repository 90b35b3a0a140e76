#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gridmc/metrics.hpp"
#include "gridmc/plan.hpp"
#include "gridmc/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;

struct Overrides {
    std::optional<std::string> scheme;
    std::optional<int> nodes;
    std::optional<double> tz;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<std::string> out;
    std::optional<std::string> trace;
};

gridmc::ScenarioConfig load_config(const std::string& path,
                                   const Overrides& ov) {
    gridmc::ScenarioConfig cfg;
    if (!path.empty()) cfg = gridmc::parse_config_file(path);
    if (ov.scheme) cfg.scheme = *ov.scheme;
    if (ov.nodes) cfg.node_counts = {*ov.nodes};
    if (ov.tz) cfg.tz_depth_m = *ov.tz;
    if (ov.seed) cfg.seeds = {*ov.seed};
    if (ov.duration) cfg.duration_s = *ov.duration;
    if (ov.out) cfg.out = *ov.out;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw gridmc::ConfigError("cannot open output file: " + path);
    return f;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    const gridmc::ScenarioConfig cfg = load_config(config_path, ov);
    gridmc::print_effective_config(cfg, std::cerr);
    const gridmc::Scheme scheme = gridmc::scheme_from_string(cfg.scheme);

    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (ov.trace) {
        trace_file = open_out(*ov.trace);
        trace = &trace_file;
    }
    std::vector<gridmc::RunResult> rows;
    for (int n : cfg.node_counts)
        for (std::uint64_t seed : cfg.seeds)
            rows.push_back(gridmc::run_single(cfg, scheme, n, cfg.tz_depth_m,
                                              seed, trace));
    std::ofstream out = open_out(cfg.out);
    gridmc::write_csv(out, rows);
    std::cerr << "wrote " << rows.size() << " row(s) to " << cfg.out << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov) {
    const gridmc::ScenarioConfig cfg = load_config(config_path, ov);
    gridmc::print_effective_config(cfg, std::cerr);
    const auto rows = gridmc::run_sweep(cfg, &std::cerr);
    std::ofstream out = open_out(cfg.out);
    gridmc::write_csv(out, rows);
    std::cerr << "wrote " << rows.size() << " row(s) to " << cfg.out << "\n";
    return kExitOk;
}

int cmd_plot_data(const std::string& in_path, const std::string& out_prefix) {
    std::ifstream in(in_path);
    if (!in) throw gridmc::ConfigError("cannot open csv: " + in_path);
    const auto rows = gridmc::read_csv(in);
    std::ofstream delay = open_out(out_prefix + "delay.dat");
    std::ofstream tput = open_out(out_prefix + "throughput.dat");
    gridmc::emit_plot_data(rows, delay, tput);
    std::cerr << "wrote " << out_prefix << "delay.dat and " << out_prefix
              << "throughput.dat\n";
    return kExitOk;
}

int cmd_plan(int rows, int cols, const std::string& out_path) {
    const gridmc::ChannelPlan plan = gridmc::build_plan(rows, cols);
    if (out_path.empty()) {
        gridmc::save_plan(plan, std::cout);
    } else {
        std::ofstream out = open_out(out_path);
        gridmc::save_plan(plan, out);
    }
    return kExitOk;
}

int cmd_verify_plan(const std::string& in_path) {
    const gridmc::ChannelPlan plan = gridmc::load_plan_file(in_path);
    const gridmc::PlanReport rep = gridmc::verify_plan(plan);
    std::cout << "rows " << plan.rows << " cols " << plan.cols << "\n";
    std::cout << "latin_rows " << (rep.latin_rows ? "yes" : "no") << "\n";
    std::cout << "latin_cols " << (rep.latin_cols ? "yes" : "no") << "\n";
    std::cout << "min_same_channel_chebyshev ";
    if (rep.min_same_channel_chebyshev >= gridmc::PlanReport::kNoSameChannelPair)
        std::cout << "none\n";
    else
        std::cout << rep.min_same_channel_chebyshev << "\n";
    std::cout << "seam_ok " << (rep.seam_ok ? "yes" : "no") << "\n";
    for (const auto& [ch, count] : rep.per_channel_counts)
        std::cout << "count " << ch << " " << count << "\n";
    return rep.giz_ok() && rep.latin_rows && rep.latin_cols && rep.seam_ok
               ? kExitOk
               : kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-based DSRC multichannel access simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key = value)");
        sub->add_option("--out", ov.out, "output CSV path");
    };
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--scheme", ov.scheme, "grid | dcf-baseline");
        sub->add_option("--nodes", ov.nodes, "vehicle count");
        sub->add_option("--tz", ov.tz, "transition-zone depth (m)");
        sub->add_option("--seed", ov.seed, "RNG seed");
        sub->add_option("--duration", ov.duration, "simulated seconds");
        sub->add_option("--trace", ov.trace, "per-event trace file");
    };

    CLI::App* run = app.add_subcommand("run", "single-configuration run(s)");
    add_common(run);
    add_run_flags(run);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "all scheme variants x node counts x seeds");
    add_common(sweep);

    std::string plot_in = "results.csv", plot_prefix = "";
    CLI::App* plot = app.add_subcommand(
        "plot-data", "aggregate a sweep CSV into plottable tables");
    plot->add_option("--in", plot_in, "sweep CSV path");
    plot->add_option("--out-prefix", plot_prefix, "output file prefix");

    int plan_rows = 18, plan_cols = 6;
    std::string plan_out;
    CLI::App* plan = app.add_subcommand("plan", "emit the channel plan");
    plan->add_option("--rows", plan_rows, "grid rows (multiple of 6)");
    plan->add_option("--cols", plan_cols, "grid cols (must be 6)");
    plan->add_option("--out", plan_out, "plan file (default stdout)");

    std::string verify_in;
    CLI::App* verify =
        app.add_subcommand("verify-plan", "check a plan file's invariants");
    verify->add_option("--in", verify_in, "plan file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, ov);
        if (sweep->parsed()) return cmd_sweep(config_path, ov);
        if (plot->parsed()) return cmd_plot_data(plot_in, plot_prefix);
        if (plan->parsed()) return cmd_plan(plan_rows, plan_cols, plan_out);
        if (verify->parsed()) return cmd_verify_plan(verify_in);
    } catch (const gridmc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::logic_error& e) {
        std::cerr << "engine fault: " << e.what() << "\n";
        return kExitEngine;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEngine;
    }
    return kExitOk;
}
