#include <forksim/scenario/sweep.hpp>

#include <forksim/metrics/report.hpp>
#include <forksim/metrics/stats.hpp>
#include <forksim/scenario/runner.hpp>

#include <algorithm>
#include <exception>
#include <map>
#include <tuple>

namespace forksim::scenario {

bool RunSummary::operator==(const RunSummary& o) const {
    const auto& a = metrics;
    const auto& b = o.metrics;
    return std::tie(run_id, seed, difficulty, k, double_spends, final_height, converged, ledger_checks,
                    ledger_mismatches, stop_reason) ==
               std::tie(o.run_id, o.seed, o.difficulty, o.k, o.double_spends, o.final_height, o.converged,
                        o.ledger_checks, o.ledger_mismatches, o.stop_reason) &&
           std::tie(a.swap, a.uncommit_count, a.t2_final_height, a.termination_time_s, a.dissemination_time_s,
                    a.dissemination_withheld) ==
               std::tie(b.swap, b.uncommit_count, b.t2_final_height, b.termination_time_s, b.dissemination_time_s,
                        b.dissemination_withheld);
}

RunSummary summarize(const RunJob& job) {
    RunOptions opts;
    opts.record_messages = false;
    const RunResult r = run(*job.script, job.seed, opts);
    RunSummary s;
    s.run_id = job.run_id;
    s.seed = job.seed;
    s.difficulty = job.script->difficulty;
    s.k = job.script->k;
    s.metrics = r.metrics;
    s.double_spends = r.report.double_spends.size();
    s.final_height = r.trace.final_chain.back()->height;
    s.converged = r.trace.converged;
    for (const auto& n : r.trace.nodes) {
        s.ledger_checks += n.ledger_checks;
        s.ledger_mismatches += n.ledger_mismatches;
    }
    s.stop_reason = r.trace.stop_reason;
    return s;
}

std::vector<RunSummary> run_batch_serial(const std::vector<RunJob>& jobs) {
    std::vector<RunSummary> out;
    out.reserve(jobs.size());
    for (const auto& j : jobs) out.push_back(summarize(j));
    return out;
}

std::vector<RunSummary> run_batch_parallel(const std::vector<RunJob>& jobs) {
    std::vector<RunSummary> out(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    const auto n = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        try {
            out[u] = summarize(jobs[u]);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<RunJob> sweep_jobs(const ScenarioScript& base, const std::vector<std::uint64_t>& difficulties,
                               std::size_t runs_per_difficulty, std::uint64_t seed_base) {
    std::vector<RunJob> jobs;
    std::size_t id = 0;
    for (auto d : difficulties) {
        auto s = std::make_shared<ScenarioScript>(base);
        s->difficulty = d;
        for (std::size_t r = 0; r < runs_per_difficulty; ++r) jobs.push_back({s, seed_base + r, id++});
    }
    return jobs;
}

SweepResult aggregate(std::vector<RunSummary> runs) {
    SweepResult res;
    std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
        return std::tie(a.difficulty, a.seed, a.run_id) < std::tie(b.difficulty, b.seed, b.run_id);
    });
    std::map<std::uint64_t, std::vector<const RunSummary*>> by_d;
    for (const auto& r : runs) by_d[r.difficulty].push_back(&r);
    std::size_t total_swaps = 0;
    std::vector<double> xs, freq, xt, term, diss;
    for (const auto& [d, rs] : by_d) {
        DifficultyAggregate a;
        a.difficulty = d;
        a.runs = rs.size();
        std::vector<double> t, ds;
        for (const auto* r : rs) {
            if (r->metrics.swap) ++a.swaps;
            if (r->metrics.termination_time_s) t.push_back(*r->metrics.termination_time_s);
            if (r->metrics.dissemination_time_s) ds.push_back(*r->metrics.dissemination_time_s);
        }
        a.swap_frequency = a.runs ? static_cast<double>(a.swaps) / static_cast<double>(a.runs) : 0.0;
        if (!t.empty()) a.mean_termination_s = metrics::mean(t);
        if (!ds.empty()) a.mean_dissemination_s = metrics::mean(ds);
        total_swaps += a.swaps;
        xs.push_back(static_cast<double>(d));
        freq.push_back(a.swap_frequency);
        if (a.mean_termination_s) {
            xt.push_back(static_cast<double>(d));
            term.push_back(*a.mean_termination_s);
        }
        if (a.mean_dissemination_s) diss.push_back(*a.mean_dissemination_s);
        res.per_difficulty.push_back(a);
    }
    res.overall_swap_frequency = runs.empty() ? 0.0 : static_cast<double>(total_swaps) / static_cast<double>(runs.size());
    if (xs.size() >= 2) res.swap_spearman = metrics::spearman(xs, freq);
    if (xt.size() >= 2) res.termination_r2 = metrics::linear_fit_r2(xt, term);
    if (!diss.empty()) {
        const auto [lo, hi] = std::minmax_element(diss.begin(), diss.end());
        res.dissemination_ratio = *lo > 0 ? *hi / *lo : 0.0;
    }
    res.runs = std::move(runs);
    return res;
}

SweepResult sweep(const ScenarioScript& base, const std::vector<std::uint64_t>& difficulties,
                  std::size_t runs_per_difficulty, std::uint64_t seed_base, bool parallel) {
    const auto jobs = sweep_jobs(base, difficulties, runs_per_difficulty, seed_base);
    return aggregate(parallel ? run_batch_parallel(jobs) : run_batch_serial(jobs));
}

std::string sweep_csv(const SweepResult& r) {
    std::string s = "difficulty,runs,swaps,swap_frequency,mean_termination_time_s,mean_dissemination_time_s\n";
    for (const auto& a : r.per_difficulty) {
        s += hex_u64(a.difficulty) + "," + std::to_string(a.runs) + "," + std::to_string(a.swaps) + "," +
             metrics::fixed6(a.swap_frequency) + ",";
        if (a.mean_termination_s) s += metrics::fixed6(*a.mean_termination_s);
        s += ",";
        if (a.mean_dissemination_s) s += metrics::fixed6(*a.mean_dissemination_s);
        s += "\n";
    }
    return s;
}

} // namespace forksim::scenario
