#pragma once

/**
 * @file experiment.hpp
 * @brief Trial runner and resumable CSV experiment grids.
 *
 * Every trial is a pure function of its parameters, variant, options and
 * seed. Per-trial seeds are derived from the master seed and a hash of the
 * cell's instance parameters (N, m, n, k, l, gen_len), so cells that differ
 * only in M or in the variant see the same instances, and adding cells never
 * changes the seeds of existing ones.
 */

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "instance.hpp"
#include "parallel.hpp"
#include "solver.hpp"

namespace braidlen {

enum class Variant { plain, conjugacy, membership, parametric, backtracking };

inline constexpr std::array<Variant, 5> all_variants{Variant::plain, Variant::conjugacy, Variant::membership,
                                                     Variant::parametric, Variant::backtracking};

inline std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::plain: return "plain";
    case Variant::conjugacy: return "conjugacy";
    case Variant::membership: return "membership";
    case Variant::parametric: return "parametric";
    case Variant::backtracking: return "backtracking";
    }
    return "unknown";
}

inline Variant parse_variant(std::string_view s) {
    for (auto v : all_variants)
        if (to_string(v) == s) return v;
    throw braid_error("unknown variant '" + std::string(s) + "'");
}

struct TrialOptions {
    double tau = 0.5;
    std::size_t patience = 1;
    bool prune_inverse = true;
    BacktrackConfig backtrack{};
    /// conjugacy variant: search without the conjugated element P
    bool unknown_parameter = false;
    /// false writes wall_time_ms = 0 so reruns are byte-identical
    bool timing = true;
    unsigned solver_threads = 1;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    int N = 0, m = 0, n = 0, k = 0, l = 0, M = 0;
    Variant variant = Variant::plain;
    bool success = false;
    std::size_t rank = 0;
    std::size_t steps = 0;
    std::string halt_reason;
    std::uint64_t multiplications = 0;
    std::uint64_t length_evals = 0;
    double wall_time_ms = 0;

    bool operator==(const TrialRecord&) const = default;

    [[nodiscard]] auto key() const { return std::tuple(N, m, n, k, l, M, static_cast<int>(variant), seed); }
};

struct TrialOutcome {
    TrialRecord record;
    Instance instance;
    SolveResult result;
};

/// Open-ended halting rules stop here at the latest.
inline std::size_t trial_step_cap(const ExperimentParams& p) { return static_cast<std::size_t>(2 * p.n + 2 * p.l + 4); }

/// Instance for one trial. Conjugacy instances are b_i = X W_i X^{-1} with
/// P_i = W_i; parametric ones publish all but the last letter of W_i.
inline Instance trial_instance(ExperimentParams p, Variant v) {
    validate(p);
    switch (v) {
    case Variant::membership:
        if (p.k != 1 || p.l != 0) throw braid_error("membership trials need k = 1 and l = 0");
        return random_instance(p);
    case Variant::parametric:
        if (p.l < 1) throw braid_error("parametric trials need l >= 1");
        p.param_len = std::max(1, p.l - 1);
        return random_instance(p);
    case Variant::conjugacy: {
        Rng rng = make_rng(p.seed);
        Instance inst;
        inst.strands = p.N;
        inst.generators = random_subgroup(p, rng);
        PeelSequence x = random_reduced_sequence(rng, p.n, p.m);
        const BraidWord xw = expand_sequence(inst.generators, x, p.N);
        for (int i = 0; i < p.k; ++i) {
            const BraidWord w = expand_sequence(inst.generators, random_reduced_sequence(rng, p.l, p.m), p.N);
            inst.b.push_back(xw.concat(w).concat(xw.inverse()));
            inst.P.emplace_back(w);
            inst.W_hint.emplace_back(w);
        }
        inst.truth = std::move(x);
        return inst;
    }
    case Variant::plain:
    case Variant::backtracking:
        p.param_len = 0;
        return random_instance(p);
    }
    throw braid_error("unknown variant");
}

inline BeamConfig trial_config(const ExperimentParams& p, Variant v, const TrialOptions& opt) {
    BeamConfig cfg;
    cfg.beam_width = static_cast<std::size_t>(p.M);
    cfg.prune_immediate_inverse = opt.prune_inverse;
    cfg.tau = opt.tau;
    cfg.patience = opt.patience;
    cfg.threads = opt.solver_threads;
    cfg.step_cap = trial_step_cap(p);
    switch (v) {
    case Variant::plain:
        cfg.max_steps = static_cast<std::size_t>(p.n);
        break;
    case Variant::backtracking:
        cfg.max_steps = static_cast<std::size_t>(p.n);
        cfg.backtrack = opt.backtrack;
        break;
    case Variant::parametric:
        cfg.halt = HaltPolicy::parametric;
        break;
    case Variant::membership:
        cfg.halt = HaltPolicy::score_sum_rises;
        break;
    case Variant::conjugacy:
        if (opt.unknown_parameter) {
            cfg.max_steps = static_cast<std::size_t>(p.n);
        } else {
            cfg.halt = HaltPolicy::parametric;
            cfg.two_sided = true;
        }
        break;
    }
    return cfg;
}

/// Runs one seeded trial. p.seed selects the instance.
inline TrialOutcome run_trial(const ExperimentParams& p, Variant v, const TrialOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    TrialOutcome out;
    out.instance = trial_instance(p, v);
    const BeamConfig cfg = trial_config(p, v, opt);
    const auto sys = out.instance.system();
    const bool known_parameter = v == Variant::conjugacy && !opt.unknown_parameter;
    const bool two_sided = known_parameter;

    switch (v) {
    case Variant::membership:
        out.result = solve_membership(sys.equations().front().b, out.instance.generators, cfg, out.instance.truth);
        break;
    case Variant::backtracking:
        out.result = solve_with_backtracking(sys, cfg, out.instance.truth);
        break;
    default:
        out.result = solve(sys, cfg, out.instance.truth);
        break;
    }

    auto& r = out.record;
    r.seed = p.seed;
    r.N = p.N, r.m = p.m, r.n = p.n, r.k = p.k, r.l = p.l, r.M = p.M;
    r.variant = v;
    const auto& ranked = out.result.ranked;
    if (v == Variant::membership) {
        auto hit = std::find_if(ranked.begin(), ranked.end(), detail::all_identity);
        r.rank = out.result.presentation && hit != ranked.end() ? static_cast<std::size_t>(hit - ranked.begin()) + 1 : 0;
    } else if (known_parameter) {
        // any candidate conjugating every P_i to b_i solves the instance
        for (std::size_t i = 0; i < ranked.size() && r.rank == 0; ++i) {
            bool ok = true;
            for (std::size_t e = 0; e < sys.equation_count() && ok; ++e)
                ok = ranked[i].residuals[e] == *sys.equations()[e].P;
            if (ok) r.rank = i + 1;
        }
    } else {
        const auto truth_res = detail::truth_residuals(sys, *out.instance.truth, two_sided);
        r.rank = detail::rank_of(ranked, truth_res.back());
    }
    r.success = r.rank >= 1;
    r.steps = out.result.halted_at_step;
    r.halt_reason = std::string(to_string(out.result.halt_reason));
    r.multiplications = out.result.ops.multiplications;
    r.length_evals = out.result.ops.length_evaluations;
    if (opt.timing) {
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.wall_time_ms = std::round(ms * 1000) / 1000;
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view csv_header =
    "seed,N,m,n,k,l,M,variant,success,rank,steps,halt_reason,multiplications,length_evals,wall_time_ms";

inline std::string csv_preamble() { return "# rng: " + std::string(rng_algorithm) + "\n" + std::string(csv_header) + "\n"; }

inline std::string format_record(const TrialRecord& r) {
    char time[64];
    std::snprintf(time, sizeof time, "%.3f", r.wall_time_ms);
    std::ostringstream out;
    out << r.seed << ',' << r.N << ',' << r.m << ',' << r.n << ',' << r.k << ',' << r.l << ',' << r.M << ','
        << to_string(r.variant) << ',' << (r.success ? 1 : 0) << ',' << r.rank << ',' << r.steps << ','
        << r.halt_reason << ',' << r.multiplications << ',' << r.length_evals << ',' << time;
    return out.str();
}

inline TrialRecord parse_record(std::string_view line) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            f.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    f.push_back(cur);
    if (f.size() != 15) throw braid_error("CSV row has " + std::to_string(f.size()) + " fields, expected 15");
    auto u64 = [](const std::string& s) -> std::uint64_t {
        std::size_t pos = 0;
        if (s.empty() || s[0] == '-') throw braid_error("bad unsigned field '" + s + "'");
        auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw braid_error("bad unsigned field '" + s + "'");
        return v;
    };
    auto i32 = [&](const std::string& s) { return static_cast<int>(u64(s)); };
    try {
        TrialRecord r;
        r.seed = u64(f[0]);
        r.N = i32(f[1]), r.m = i32(f[2]), r.n = i32(f[3]), r.k = i32(f[4]), r.l = i32(f[5]), r.M = i32(f[6]);
        r.variant = parse_variant(f[7]);
        if (f[8] != "0" && f[8] != "1") throw braid_error("success must be 0 or 1");
        r.success = f[8] == "1";
        r.rank = u64(f[9]);
        r.steps = u64(f[10]);
        r.halt_reason = f[11];
        r.multiplications = u64(f[12]);
        r.length_evals = u64(f[13]);
        std::size_t pos = 0;
        r.wall_time_ms = std::stod(f[14], &pos);
        if (pos != f[14].size()) throw braid_error("bad wall_time_ms");
        if (r.success != (r.rank >= 1)) throw braid_error("success and rank disagree");
        return r;
    } catch (const std::logic_error& e) {
        throw braid_error(std::string("bad CSV field: ") + e.what());
    }
}

/// Rows of a results file; comment lines start with '#'. A header other than
/// csv_header is a schema mismatch.
inline std::vector<TrialRecord> parse_csv(std::string_view text) {
    std::vector<TrialRecord> rows;
    bool header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != csv_header) throw braid_error("CSV schema mismatch: unexpected header '" + std::string(line) + "'");
            header = true;
            continue;
        }
        try {
            rows.push_back(parse_record(line));
        } catch (const braid_error& e) {
            throw braid_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header) throw braid_error("CSV schema mismatch: header missing");
    return rows;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw braid_error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<TrialRecord> load_csv(const std::string& path) { return parse_csv(read_text(path)); }

inline void sort_records(std::vector<TrialRecord>& rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
}

inline std::string format_csv(std::vector<TrialRecord> rows) {
    sort_records(rows);
    std::string out = csv_preamble();
    for (const auto& r : rows) out += format_record(r) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    GridSpec grid;
    std::vector<Variant> variants{Variant::plain};
    int trials = 16;
    std::uint64_t seed = 1;
    TrialOptions options;
};

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        auto ints = [&](const char* key, std::vector<int>& dst) {
            if (!j.contains(key)) return;
            dst = j[key].is_array() ? j[key].get<std::vector<int>>() : std::vector<int>{j[key].get<int>()};
            if (dst.empty()) throw braid_error(std::string("grid value list '") + key + "' is empty");
        };
        ints("N", c.grid.N);
        ints("m", c.grid.m);
        ints("n", c.grid.n);
        ints("k", c.grid.k);
        ints("l", c.grid.l);
        ints("M", c.grid.M);
        c.grid.gen_len = j.value("gen_len", c.grid.gen_len);
        if (j.contains("variants")) {
            c.variants.clear();
            for (const auto& v : j["variants"]) c.variants.push_back(parse_variant(v.get<std::string>()));
            if (c.variants.empty()) throw braid_error("grid has no variants");
        }
        c.trials = j.value("trials", c.trials);
        c.seed = j.value("seed", c.seed);
        auto& o = c.options;
        o.tau = j.value("tau", o.tau);
        o.patience = j.value("patience", o.patience);
        o.prune_inverse = j.value("prune_inverse", o.prune_inverse);
        o.unknown_parameter = j.value("unknown_parameter", o.unknown_parameter);
        if (j.contains("backtrack")) {
            const auto& b = j["backtrack"];
            o.backtrack.lookback = b.value("lookback", o.backtrack.lookback);
            o.backtrack.multiplier = b.value("multiplier", o.backtrack.multiplier);
            o.backtrack.window = b.value("window", o.backtrack.window);
            o.backtrack.epsilon = b.value("epsilon", o.backtrack.epsilon);
            o.backtrack.max_backtracks = b.value("max_backtracks", o.backtrack.max_backtracks);
        }
        if (c.trials < 1) throw braid_error("trials must be positive");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw braid_error(std::string("malformed grid config: ") + e.what());
    }
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw braid_error("grid config is not valid JSON: " + std::string(e.what()));
    }
    return experiment_config_from_json(j);
}

/// Seed stream of a cell: depends on the instance parameters only.
inline std::uint64_t cell_seed(std::uint64_t master, const ExperimentParams& p) {
    std::uint64_t h = splitmix64(master);
    for (int v : {p.N, p.m, p.n, p.k, p.l, p.gen_len}) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return h;
}

inline std::uint64_t trial_seed(std::uint64_t master, const ExperimentParams& p, int trial) {
    return derive_seed(cell_seed(master, p), static_cast<std::uint64_t>(trial));
}

struct TrialJob {
    ExperimentParams params; // seed filled in
    Variant variant = Variant::plain;
};

/// Every (cell, variant, trial) of the config in grid order.
inline std::vector<TrialJob> experiment_jobs(const ExperimentConfig& c) {
    std::vector<TrialJob> jobs;
    for (auto p : parameter_grid(c.grid))
        for (auto v : c.variants)
            for (int t = 0; t < c.trials; ++t) {
                p.seed = trial_seed(c.seed, p, t);
                jobs.push_back({p, v});
            }
    return jobs;
}

inline auto job_key(const TrialJob& j) {
    const auto& p = j.params;
    return std::tuple(p.N, p.m, p.n, p.k, p.l, p.M, static_cast<int>(j.variant), p.seed);
}

struct ResumeState {
    std::vector<TrialRecord> rows;
    bool partial_line = false; // trailing line without newline was discarded
};

/// Reads an existing results file for resuming. A last line without a
/// terminating newline is an interrupted write and is dropped.
inline ResumeState read_resume_state(const std::string& path) {
    ResumeState st;
    if (!std::filesystem::exists(path)) return st;
    std::string text = read_text(path);
    if (!text.empty() && text.back() != '\n') {
        const auto nl = text.rfind('\n');
        text.erase(nl == std::string::npos ? 0 : nl + 1);
        st.partial_line = true;
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return st;
    st.rows = parse_csv(text);
    return st;
}

struct ExperimentRun {
    std::vector<TrialRecord> rows; // all rows, sorted by key
    std::size_t reused = 0;
    std::size_t ran = 0;
    bool partial_line = false;
};

/// Runs every missing trial of the config, appending each finished row to
/// `out_path` as it completes, then rewrites the file sorted by key. Rows
/// already present (same key) are kept and not rerun. An empty path runs in
/// memory only.
inline ExperimentRun run_experiment(const ExperimentConfig& c, const std::string& out_path, unsigned threads,
                                    const std::function<void(const TrialRecord&)>& on_row = {}) {
    ExperimentRun run;
    std::set<std::tuple<int, int, int, int, int, int, int, std::uint64_t>> done;
    if (!out_path.empty()) {
        auto st = read_resume_state(out_path);
        run.partial_line = st.partial_line;
        for (auto& r : st.rows)
            if (done.insert(r.key()).second) run.rows.push_back(std::move(r));
        run.reused = run.rows.size();
    }
    std::vector<TrialJob> todo;
    for (auto& j : experiment_jobs(c))
        if (!done.count(job_key(j))) todo.push_back(j);

    std::ofstream append;
    if (!out_path.empty()) {
        // start over from the kept rows so the file never holds a torn line
        std::ofstream(out_path, std::ios::trunc) << format_csv(run.rows);
        append.open(out_path, std::ios::app);
        if (!append) throw braid_error("cannot write " + out_path);
    }
    std::mutex collect;
    std::vector<TrialRecord> fresh(todo.size());
    parallel_for(todo.size(), threads, [&](std::size_t i) {
        auto rec = run_trial(todo[i].params, todo[i].variant, c.options).record;
        std::lock_guard lock(collect);
        if (append.is_open()) append << format_record(rec) << '\n' << std::flush;
        if (on_row) on_row(rec);
        fresh[i] = std::move(rec);
    });
    run.ran = fresh.size();
    for (auto& r : fresh) run.rows.push_back(std::move(r));
    sort_records(run.rows);
    if (append.is_open()) {
        append.close();
        const std::string tmp = out_path + ".tmp";
        std::ofstream(tmp, std::ios::trunc) << format_csv(run.rows);
        std::filesystem::rename(tmp, out_path);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct CellSummary {
    int N = 0, m = 0, n = 0, k = 0, l = 0, M = 0;
    Variant variant = Variant::plain;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t rank_one = 0;
    double mean_multiplications = 0;
    double mean_wall_time_ms = 0;

    [[nodiscard]] double success_rate() const { return trials ? double(successes) / double(trials) : 0; }
};

inline std::vector<CellSummary> aggregate(const std::vector<TrialRecord>& rows) {
    std::map<std::tuple<int, int, int, int, int, int, int>, CellSummary> cells;
    for (const auto& r : rows) {
        auto& c = cells[std::tuple(r.N, r.m, r.n, r.k, r.l, r.M, static_cast<int>(r.variant))];
        c.N = r.N, c.m = r.m, c.n = r.n, c.k = r.k, c.l = r.l, c.M = r.M, c.variant = r.variant;
        ++c.trials;
        c.successes += r.success;
        c.rank_one += r.rank == 1;
        c.mean_multiplications += static_cast<double>(r.multiplications);
        c.mean_wall_time_ms += r.wall_time_ms;
    }
    std::vector<CellSummary> out;
    for (auto& [key, c] : cells) {
        c.mean_multiplications /= static_cast<double>(c.trials);
        c.mean_wall_time_ms /= static_cast<double>(c.trials);
        out.push_back(c);
    }
    return out;
}

inline std::string format_summary(const std::vector<CellSummary>& cells) {
    std::ostringstream out;
    out << "   N    m    n    k    l     M  variant        trials  success  rate   rank1\n";
    for (const auto& c : cells) {
        char line[160];
        std::snprintf(line, sizeof line, "%4d %4d %4d %4d %4d %5d  %-13s %7zu %8zu  %5.3f %6zu\n", c.N, c.m, c.n, c.k,
                      c.l, c.M, std::string(to_string(c.variant)).c_str(), c.trials, c.successes, c.success_rate(),
                      c.rank_one);
        out << line;
    }
    return out.str();
}

} // namespace braidlen
