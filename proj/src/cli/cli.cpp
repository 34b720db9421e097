#include <forksim/cli/cli.hpp>

#include <forksim/metrics/report.hpp>
#include <forksim/scenario/builtins.hpp>
#include <forksim/scenario/json_io.hpp>
#include <forksim/scenario/runner.hpp>
#include <forksim/scenario/sweep.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace forksim::cli {

namespace fs = std::filesystem;
using scenario::ScenarioError;
using scenario::ScenarioScript;

std::optional<std::vector<std::uint64_t>> parse_difficulties(const std::string& spec) {
    std::vector<std::uint64_t> out;
    if (auto dots = spec.find(".."); dots != std::string::npos) {
        auto lo = parse_u64(spec.substr(0, dots));
        auto hi = parse_u64(spec.substr(dots + 2));
        if (!lo || !hi || *lo == 0 || *lo > *hi) return std::nullopt;
        for (std::uint64_t d = *lo; d <= *hi; d *= 2) {
            out.push_back(d);
            if (d > UINT64_MAX / 2) break;
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = parse_u64(item);
        if (!v || *v == 0) return std::nullopt;
        out.push_back(*v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

namespace {

struct Source {
    std::string scenario_path;
    std::string builtin_name;
    std::optional<std::uint64_t> k;
    std::string difficulty;
};

void add_source(CLI::App* cmd, Source& src) {
    auto* file = cmd->add_option("--scenario", src.scenario_path, "Scenario JSON file");
    auto* b = cmd->add_option("--builtin", src.builtin_name, "Built-in scenario name");
    file->excludes(b);
    cmd->add_option("--k", src.k, "Override the confirmation depth k");
}

ScenarioScript load(const Source& src) {
    ScenarioScript s;
    if (!src.builtin_name.empty()) {
        auto b = scenario::builtin(src.builtin_name);
        if (!b) throw ScenarioError("--builtin: unknown scenario '" + src.builtin_name + "'");
        s = *b;
    } else if (!src.scenario_path.empty()) {
        s = scenario::load_file(src.scenario_path);
    } else {
        throw ScenarioError("one of --scenario or --builtin is required");
    }
    if (src.k) s.k = *src.k;
    return s;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    if (!f) throw std::runtime_error("cannot write " + p.string());
}

void print_summary(std::ostream& out, const scenario::RunResult& r) {
    const auto& t = r.trace;
    const auto& m = r.metrics;
    out << "scenario " << t.scenario << " seed " << t.seed << " difficulty " << hex_u64(t.difficulty)
        << " k " << t.k << "\n";
    out << "stopped: " << t.stop_reason << " at " << t.end_time.str() << " s\n";
    out << "final height " << t.final_chain.back()->height << " (observer " << t.observer << ", "
        << (t.converged ? "converged" : "not converged") << ")\n";
    for (const auto& p : r.report.pairs)
        out << "pair " << p.first << " -> " << p.second << ": " << (p.swap ? "SWAP" : "in order") << "\n";
    out << "uncommits: " << r.report.uncommits.size();
    for (const auto& u : r.report.uncommits) out << " " << u.tx << "@" << u.node;
    out << "\n";
    out << "double spends: " << r.report.double_spends.size();
    for (const auto& d : r.report.double_spends) out << " " << d.address << " x" << d.redemption_count;
    out << "\n";
    if (m.termination_time_s) out << "termination time " << metrics::fixed6(*m.termination_time_s) << " s\n";
    if (m.dissemination_time_s)
        out << "dissemination time " << metrics::fixed6(*m.dissemination_time_s) << " s"
            << (m.dissemination_withheld ? " (withheld)" : "") << "\n";
}

int cmd_run(const Source& src, std::uint64_t seed, const std::string& out_dir, bool trace, std::ostream& out) {
    ScenarioScript s = load(src);
    if (!src.difficulty.empty()) {
        auto d = parse_u64(src.difficulty);
        if (!d || *d == 0) throw ScenarioError("--difficulty: not a positive number '" + src.difficulty + "'");
        s.difficulty = *d;
    }
    scenario::validate(s);
    const auto r = scenario::run(s, seed);
    print_summary(out, r);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const metrics::Provenance prov{s.name, scenario::script_sha256(s), seed, s.difficulty, s.k};
        write_file(fs::path(out_dir) / "report.json",
                   metrics::report_json(r.trace, r.report, r.metrics, prov).dump(2) + "\n");
        write_file(fs::path(out_dir) / "metrics.csv",
                   metrics::metrics_csv_header() + "\n" +
                       metrics::metrics_csv_row(0, seed, s.difficulty, s.k, r.metrics) + "\n");
        if (trace) {
            std::ostringstream t;
            sim::write_trace(t, r.trace.log);
            write_file(fs::path(out_dir) / "trace.log", t.str());
        }
        out << "wrote " << out_dir << "\n";
    }
    return kOk;
}

int cmd_sweep(const Source& src, std::size_t runs, std::uint64_t seed_base, const std::string& out_dir,
              bool serial, std::ostream& out) {
    ScenarioScript s = load(src);
    if (src.difficulty.empty()) throw ScenarioError("--difficulty: a list or range is required for sweep");
    auto ds = parse_difficulties(src.difficulty);
    if (!ds) throw ScenarioError("--difficulty: cannot parse '" + src.difficulty + "'");
    if (runs == 0) throw ScenarioError("--runs: must be positive");
    scenario::validate(s);
    const auto res = scenario::sweep(s, *ds, runs, seed_base, !serial);
    out << scenario::sweep_csv(res);
    out << "overall swap frequency " << metrics::fixed6(res.overall_swap_frequency) << ", spearman "
        << metrics::fixed6(res.swap_spearman) << ", termination R^2 " << metrics::fixed6(res.termination_r2)
        << ", dissemination max/min " << metrics::fixed6(res.dissemination_ratio) << "\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string csv = metrics::metrics_csv_header() + "\n";
        for (const auto& r : res.runs)
            csv += metrics::metrics_csv_row(r.run_id, r.seed, r.difficulty, r.k, r.metrics) + "\n";
        write_file(fs::path(out_dir) / "metrics.csv", csv);
        write_file(fs::path(out_dir) / "sweep.csv", scenario::sweep_csv(res));
        out << "wrote " << out_dir << "\n";
    }
    return kOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"forksim: proof-of-work fork and reorganisation simulator"};
    app.require_subcommand(1);

    Source run_src;
    std::uint64_t seed = 1;
    std::string run_out;
    bool trace = false;
    auto* run = app.add_subcommand("run", "Run one scenario");
    add_source(run, run_src);
    run->add_option("--difficulty", run_src.difficulty, "Override difficulty (decimal or 0x hex)");
    run->add_option("--seed", seed, "Run seed");
    run->add_option("--out", run_out, "Directory for report.json, metrics.csv and trace.log");
    run->add_flag("--trace", trace, "Also write trace.log");

    Source sweep_src;
    std::size_t runs = 10;
    std::uint64_t seed_base = 1;
    std::string sweep_out;
    bool serial = false;
    auto* sw = app.add_subcommand("sweep", "Seeded runs over several difficulties");
    add_source(sw, sweep_src);
    sw->add_option("--difficulty", sweep_src.difficulty, "Range lo..hi (doubling) or comma list")->required();
    sw->add_option("--runs", runs, "Runs per difficulty");
    sw->add_option("--seed-base", seed_base, "Seed of the first run at each difficulty");
    sw->add_option("--out", sweep_out, "Directory for metrics.csv and sweep.csv");
    sw->add_flag("--serial", serial, "Use the single-threaded reference path");

    std::string builtin_name;
    std::string builtin_out;
    auto* bi = app.add_subcommand("builtin", "List built-in scenarios or print one as JSON");
    bi->add_option("name", builtin_name, "Scenario name");
    bi->add_option("--out", builtin_out, "Write to this file instead of stdout");

    std::string validate_path;
    auto* va = app.add_subcommand("validate", "Check a scenario file");
    va->add_option("file", validate_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (run->parsed()) return cmd_run(run_src, seed, run_out, trace, out);
        if (sw->parsed()) return cmd_sweep(sweep_src, runs, seed_base, sweep_out, serial, out);
        if (bi->parsed()) {
            if (builtin_name.empty()) {
                for (const auto& n : scenario::builtin_names()) out << n << "\n";
                return kOk;
            }
            auto s = scenario::builtin(builtin_name);
            if (!s) throw ScenarioError("unknown built-in '" + builtin_name + "'");
            if (builtin_out.empty())
                out << scenario::dump(*s);
            else
                write_file(builtin_out, scenario::dump(*s));
            return kOk;
        }
        if (va->parsed()) {
            const auto s = scenario::load_file(validate_path);
            out << "ok: " << s.name << " (" << s.nodes.size() << " nodes, " << s.steps.size() << " steps)\n";
            return kOk;
        }
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        err << "fault: " << e.what() << "\n";
        return kFault;
    }
    return kInvalid;
}

} // namespace forksim::cli
