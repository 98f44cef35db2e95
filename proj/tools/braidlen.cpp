// braidlen: command-line front end for the beam solver and the experiment harness.
//
// Exit codes: 0 found / ok, 1 not found, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include <braidlen/experiment.hpp>
#include <braidlen/parallel.hpp>
#include <braidlen/stats.hpp>
#include <braidlen/svg.hpp>

using namespace braidlen;

namespace {

constexpr int exit_found = 0;
constexpr int exit_not_found = 1;
constexpr int exit_input = 2;

struct SearchFlags {
    std::size_t beam = 16;
    std::optional<std::size_t> steps;
    std::string halt; // fixed | sum | parametric, empty = choose
    double tau = 0.5;
    std::size_t patience = 1;
    bool prune = true;
    std::string backtrack; // "B,g"
    unsigned threads = default_thread_count();
    std::string out;
    std::string trace;
    bool unknown_parameter = false;
};

BacktrackConfig parse_backtrack(const std::string& text) {
    BacktrackConfig bt;
    unsigned long b = 0, g = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lu,%lu%c", &b, &g, &tail) != 2 || g < 1)
        throw braid_error("--backtrack expects B,g with g >= 1, got '" + text + "'");
    bt.lookback = b;
    bt.multiplier = g;
    return bt;
}

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
    cmd->add_option("-M,--beam", f.beam, "beam width M")->capture_default_str();
    cmd->add_option("-n,--steps", f.steps, "number of peeling steps (default: length of truth, if present)");
    cmd->add_option("--halt", f.halt, "halting rule: fixed, sum or parametric")
        ->check(CLI::IsMember({"fixed", "sum", "parametric"}));
    cmd->add_option("--tau", f.tau, "parametric halting threshold")->capture_default_str();
    cmd->add_option("--patience", f.patience, "score-sum halting patience")->capture_default_str();
    cmd->add_flag("--prune-inverse,!--no-prune-inverse", f.prune, "skip extensions that undo the previous letter")
        ->capture_default_str();
    cmd->add_option("--backtrack", f.backtrack, "enable backtracking with lookback B and width multiplier g");
    cmd->add_option("--threads", f.threads, "worker threads (default: BRAID_THREADS or hardware)");
    cmd->add_option("-o,--out", f.out, "result file (JSON)");
    cmd->add_option("--trace", f.trace, "per-step trace file (CSV)");
}

BeamConfig beam_config(const SearchFlags& f, const Instance& inst) {
    BeamConfig cfg;
    cfg.beam_width = f.beam;
    cfg.tau = f.tau;
    cfg.patience = f.patience;
    cfg.prune_immediate_inverse = f.prune;
    cfg.threads = std::max(1u, f.threads);
    cfg.max_steps = f.steps;
    if (!cfg.max_steps && inst.truth) cfg.max_steps = inst.truth->size();
    if (!f.backtrack.empty()) cfg.backtrack = parse_backtrack(f.backtrack);

    bool has_p = std::all_of(inst.P.begin(), inst.P.end(), [](const auto& p) { return p.has_value(); });
    if (f.halt == "fixed") cfg.halt = HaltPolicy::fixed_steps;
    else if (f.halt == "sum") cfg.halt = HaltPolicy::score_sum_rises;
    else if (f.halt == "parametric") cfg.halt = HaltPolicy::parametric;
    else if (cfg.max_steps) cfg.halt = HaltPolicy::fixed_steps;
    else if (has_p) cfg.halt = HaltPolicy::parametric;
    else cfg.halt = HaltPolicy::score_sum_rises;
    if (cfg.halt != HaltPolicy::fixed_steps && !f.steps) cfg.max_steps.reset();
    return cfg;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw braid_error("cannot write " + path);
}

/// Writes the result and trace files and prints a summary.
int report(const SearchFlags& f, const Instance& inst, const SolveResult& res, bool success, std::size_t rank,
           const std::string& how) {
    nlohmann::json j;
    j["success"] = success;
    j["halt_reason"] = std::string(to_string(res.halt_reason));
    j["steps"] = res.halted_at_step;
    j["multiplications"] = res.ops.multiplications;
    j["length_evals"] = res.ops.length_evaluations;
    j["backtracks"] = res.backtracks;
    if (inst.truth) j["rank"] = rank;
    if (res.presentation) j["presentation"] = format_sequence(*res.presentation);
    j["candidates"] = nlohmann::json::array();
    for (std::size_t i = 0; i < res.ranked.size(); ++i) {
        const auto& c = res.ranked[i];
        j["candidates"].push_back({{"rank", i + 1}, {"letters", format_sequence(c.letters)}, {"score", c.score}});
    }
    if (!f.out.empty()) write_file(f.out, j.dump(2) + "\n");
    if (!f.trace.empty()) write_file(f.trace, format_trace(res.trace));

    std::cout << "halt: " << to_string(res.halt_reason) << " after " << res.halted_at_step << " steps, "
              << res.ops.multiplications << " multiplications\n";
    if (res.presentation) std::cout << "presentation: " << format_sequence(*res.presentation) << "\n";
    if (inst.truth) std::cout << "truth rank: " << rank << (rank ? "" : " (absent)") << "\n";
    const std::size_t show = std::min<std::size_t>(res.ranked.size(), 5);
    for (std::size_t i = 0; i < show; ++i)
        std::cout << "  #" << i + 1 << "  score " << res.ranked[i].score << "  " << format_sequence(res.ranked[i].letters)
                  << "\n";
    std::cout << (success ? "found" : "not found") << " (" << how << ")\n";
    return success ? exit_found : exit_not_found;
}

std::size_t truth_rank(const Instance& inst, const EquationSystem& sys, const SolveResult& res, bool two_sided) {
    if (!inst.truth) return 0;
    if (res.ranked.empty()) return 0;
    const auto tr = detail::truth_residuals(sys, *inst.truth, two_sided);
    return tr.empty() ? 0 : detail::rank_of(res.ranked, tr.back());
}

int cmd_solve(const std::string& path, const SearchFlags& f) {
    const Instance inst = load_instance(path);
    const auto sys = inst.system();
    const BeamConfig cfg = beam_config(f, inst);
    const auto res = solve(sys, cfg, inst.truth);
    const std::size_t rank = truth_rank(inst, sys, res, false);
    bool success = false;
    std::string how;
    if (inst.truth) {
        success = rank >= 1;
        how = "truth in final list";
    } else if (cfg.halt == HaltPolicy::parametric) {
        success = res.halt_reason == HaltReason::parametric;
        how = "parametric test fired";
    } else {
        success = res.halt_reason != HaltReason::step_cap;
        how = "halting rule fired";
    }
    return report(f, inst, res, success, rank, how);
}

int cmd_conjugacy(const std::string& path, const SearchFlags& f) {
    const Instance inst = load_instance(path);
    BeamConfig cfg = beam_config(f, inst);
    const bool has_p = std::all_of(inst.P.begin(), inst.P.end(), [](const auto& p) { return p.has_value(); });
    const bool known = has_p && !f.unknown_parameter;
    std::vector<Equation> eqs;
    for (std::size_t i = 0; i < inst.b.size(); ++i)
        eqs.push_back({normal_form(inst.b[i]), known ? std::optional(normal_form(*inst.P[i])) : std::nullopt});
    const EquationSystem sys(inst.strands, inst.generators, std::move(eqs));
    if (known) {
        cfg.two_sided = true;
        if (f.halt.empty()) cfg.halt = HaltPolicy::parametric;
        if (cfg.halt != HaltPolicy::fixed_steps && !f.steps) cfg.max_steps.reset();
    } else {
        if (!cfg.max_steps) throw braid_error("conjugacy without P needs --steps or a truth sequence");
        cfg.halt = HaltPolicy::fixed_steps;
    }
    const auto res = solve(sys, cfg, inst.truth);
    const std::size_t rank = truth_rank(inst, sys, res, known);
    bool success = false;
    if (known) {
        success = std::any_of(res.ranked.begin(), res.ranked.end(), [&](const Candidate& c) {
            for (std::size_t e = 0; e < sys.equation_count(); ++e)
                if (!(c.residuals[e] == *sys.equations()[e].P)) return false;
            return true;
        });
    } else {
        success = rank >= 1;
    }
    return report(f, inst, res, success, rank, known ? "conjugator recovered" : "truth in final list");
}

int cmd_membership(const std::string& path, const SearchFlags& f) {
    const Instance inst = load_instance(path);
    if (inst.b.size() != 1) throw braid_error("membership instance must have exactly one equation");
    BeamConfig cfg = beam_config(f, inst);
    if (f.halt.empty()) {
        cfg.halt = HaltPolicy::score_sum_rises;
        if (!f.steps) cfg.max_steps.reset();
    }
    const auto sys = inst.system();
    const auto res = solve_membership(sys.equations()[0].b, inst.generators, cfg, inst.truth);
    const std::size_t rank = truth_rank(inst, sys, res, false);
    return report(f, inst, res, res.presentation.has_value(), rank, "presentation over the generators");
}

struct ExperimentFlags {
    std::string grid;
    std::string out;
    int trials = 16;
    std::uint64_t seed = 1;
    unsigned threads = default_thread_count();
    double tau = 0.5;
    std::size_t patience = 1;
    bool prune = true;
    std::string backtrack;
    bool no_timing = false;
    bool unknown_parameter = false;
};

int cmd_experiment(const ExperimentFlags& f, CLI::App* cmd) {
    ExperimentConfig c = load_experiment_config(f.grid);
    if (cmd->count("--trials")) c.trials = f.trials;
    if (cmd->count("--seed")) c.seed = f.seed;
    if (cmd->count("--tau")) c.options.tau = f.tau;
    if (cmd->count("--patience")) c.options.patience = f.patience;
    if (cmd->count("--prune-inverse") || cmd->count("--no-prune-inverse")) c.options.prune_inverse = f.prune;
    if (!f.backtrack.empty()) {
        auto bt = parse_backtrack(f.backtrack);
        c.options.backtrack.lookback = bt.lookback;
        c.options.backtrack.multiplier = bt.multiplier;
    }
    if (f.no_timing) c.options.timing = false;
    if (f.unknown_parameter) c.options.unknown_parameter = true;
    if (c.trials < 1) throw braid_error("--trials must be positive");

    const auto total = experiment_jobs(c).size();
    std::size_t done = 0;
    auto run = run_experiment(c, f.out, std::max(1u, f.threads), [&](const TrialRecord&) {
        ++done;
        if (done % 50 == 0 || done == total) std::cerr << "\r" << done << " trials" << std::flush;
    });
    if (done) std::cerr << "\n";
    if (run.partial_line) std::cerr << "note: discarded a partially written last row\n";
    std::cerr << run.reused << " rows reused, " << run.ran << " run\n";
    std::cout << format_summary(aggregate(run.rows));
    return exit_found;
}

std::vector<TrialRecord> select_variant(const std::vector<TrialRecord>& rows, const std::string& variant) {
    std::set<Variant> present;
    for (const auto& r : rows) present.insert(r.variant);
    Variant v{};
    if (!variant.empty()) v = parse_variant(variant);
    else if (present.size() == 1) v = *present.begin();
    else if (present.empty()) throw braid_error("no rows");
    else throw braid_error("rows mix several variants; choose one with --variant");
    std::vector<TrialRecord> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [&](const TrialRecord& r) { return r.variant == v; });
    if (out.empty()) throw braid_error("no rows for variant " + variant);
    return out;
}

int cmd_fit(const std::string& path, const std::string& variant, const std::string& out, bool eliminate) {
    const auto rows = select_variant(load_csv(path), variant);
    std::vector<FitRow> fit_rows;
    for (const auto& r : rows) {
        ExperimentParams p;
        p.m = r.m, p.n = r.n, p.k = r.k, p.l = r.l, p.M = r.M;
        fit_rows.push_back(fit_row(p, r.success));
    }
    FitOptions opt;
    opt.eliminate = eliminate;
    const auto model = fit_logistic(fit_rows, opt);
    std::cout << model_summary(model);
    if (!out.empty()) write_file(out, to_json(model).dump(2) + "\n");
    return exit_found;
}

LogisticModel load_model(const std::string& path) {
    if (path.empty()) return reference_model();
    try {
        return model_from_json(nlohmann::json::parse(read_text(path)));
    } catch (const nlohmann::json::exception& e) {
        throw braid_error("model file is not valid JSON: " + std::string(e.what()));
    }
}

int cmd_predict(const std::vector<double>& v, const std::string& model_path, bool doubling, bool memory) {
    const auto model = load_model(model_path);
    char buf[64];
    if (doubling) {
        if (!v.empty()) throw braid_error("--doubling takes no parameters");
        std::snprintf(buf, sizeof buf, "%.2f\n", memory_doubling_factor(model, 0));
    } else if (memory) {
        if (v.size() != 3 && v.size() != 4) throw braid_error("--memory expects m n k [l]");
        const double l = v.size() == 4 ? v[3] : 1;
        std::snprintf(buf, sizeof buf, "%.1f\n", required_memory(model, v[0], v[1], v[2], l));
    } else {
        if (v.size() != 5) throw braid_error("predict expects m n k l M");
        std::snprintf(buf, sizeof buf, "%.3f\n", predict_success(model, v[0], v[1], v[2], v[3], v[4]));
    }
    std::cout << buf;
    return exit_found;
}

struct PlotFlags {
    std::string kind;
    std::string input;
    std::string out;
    std::string variant;
    std::string model;
    bool predicted = false;
    double m = 8, k = 1, l = 4;
};

int cmd_plot(const PlotFlags& f) {
    std::vector<Chart> panels;
    if (f.kind == "memory" || f.kind == "a") {
        if (f.predicted) {
            std::vector<int> Ms;
            for (int e = 1; e <= 10; ++e) Ms.push_back(1 << e);
            panels.push_back(memory_curves(load_model(f.model), f.m, f.k, f.l, Ms, {16, 32, 64, 128, 256}));
        } else {
            if (f.input.empty()) throw braid_error("memory plot needs a results CSV or --predicted");
            panels.push_back(memory_curves(select_variant(load_csv(f.input), f.variant)));
        }
    } else if (f.kind == "trace" || f.kind == "b") {
        if (f.input.empty()) throw braid_error("trace plot needs a trace CSV");
        panels = trace_charts(parse_trace(read_text(f.input)));
    } else {
        if (f.input.empty()) throw braid_error("sweep plot needs a results CSV");
        panels.push_back(strand_sweep_chart(select_variant(load_csv(f.input), f.variant)));
    }
    const auto svg = render_svg(panels);
    if (f.out.empty()) std::cout << svg;
    else write_file(f.out, svg);
    return exit_found;
}

BraidWord word_arg(const std::vector<std::string>& tokens, int strands) {
    std::string text;
    for (const auto& t : tokens) text += t + " ";
    return parse_word(text, strands);
}

int cmd_len(const std::vector<std::string>& word, int strands) {
    const auto nf = normal_form(word_arg(word, strands));
    std::cout << "rg " << rg_length(nf) << "\nnaive " << naive_garside_length(nf) << "\n";
    return exit_found;
}

int cmd_nf(const std::vector<std::string>& word, int strands) {
    const auto nf = normal_form(word_arg(word, strands));
    std::cout << format_normal_form(nf) << "\n" << format_word(nf.word()) << "\n";
    return exit_found;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Length-based beam search in braid groups"};
    app.require_subcommand(1);

    SearchFlags solve_flags, conj_flags, memb_flags;
    std::string solve_path, conj_path, memb_path;
    auto* solve_cmd = app.add_subcommand("solve", "solve X W_i = b_i for an instance file");
    solve_cmd->add_option("instance", solve_path, "instance file (JSON)")->required();
    add_search_flags(solve_cmd, solve_flags);

    auto* conj_cmd = app.add_subcommand("conjugacy", "find X from b_i = X P_i X^-1");
    conj_cmd->add_option("instance", conj_path, "instance file (JSON)")->required();
    add_search_flags(conj_cmd, conj_flags);
    conj_cmd->add_flag("--unknown-parameter", conj_flags.unknown_parameter, "ignore P_i and peel from one side");

    auto* memb_cmd = app.add_subcommand("membership", "look for a presentation of b over the generators");
    memb_cmd->add_option("instance", memb_path, "instance file with one equation")->required();
    add_search_flags(memb_cmd, memb_flags);

    ExperimentFlags ex;
    auto* ex_cmd = app.add_subcommand("experiment", "run a parameter grid and write one CSV row per trial");
    ex_cmd->add_option("--grid", ex.grid, "grid configuration (JSON)")->required();
    ex_cmd->add_option("-o,--out", ex.out, "results CSV; existing rows are kept and skipped");
    ex_cmd->add_option("--trials", ex.trials, "trials per cell");
    ex_cmd->add_option("--seed", ex.seed, "master seed");
    ex_cmd->add_option("--threads", ex.threads, "worker threads (default: BRAID_THREADS or hardware)");
    ex_cmd->add_option("--tau", ex.tau, "parametric halting threshold");
    ex_cmd->add_option("--patience", ex.patience, "score-sum halting patience");
    ex_cmd->add_flag("--prune-inverse,!--no-prune-inverse", ex.prune, "skip extensions that undo the previous letter");
    ex_cmd->add_option("--backtrack", ex.backtrack, "lookback B and width multiplier g for the backtracking variant");
    ex_cmd->add_flag("--no-timing", ex.no_timing, "write wall_time_ms = 0 so reruns are byte-identical");
    ex_cmd->add_flag("--unknown-parameter", ex.unknown_parameter, "conjugacy variant without P_i");

    std::string fit_path, fit_variant, fit_out;
    bool fit_no_elim = false;
    auto* fit_cmd = app.add_subcommand("fit", "fit the logistic success model to a results CSV");
    fit_cmd->add_option("csv", fit_path, "results CSV")->required();
    fit_cmd->add_option("--variant", fit_variant, "rows to use (needed when the file mixes variants)");
    fit_cmd->add_option("-o,--out", fit_out, "write the fitted model (JSON)");
    fit_cmd->add_flag("--no-eliminate", fit_no_elim, "keep every predictor");

    std::vector<double> pred_values;
    std::string pred_model;
    bool pred_doubling = false, pred_memory = false;
    auto* pred_cmd = app.add_subcommand("predict", "success probability for m n k l M");
    pred_cmd->add_option("values", pred_values, "m n k l M (or m n k [l] with --memory)");
    pred_cmd->add_option("--model", pred_model, "fitted model file (default: built-in model)");
    pred_cmd->add_flag("--doubling", pred_doubling, "factor by which M must grow when m doubles");
    pred_cmd->add_flag("--memory", pred_memory, "beam width for even odds");

    PlotFlags plot;
    auto* plot_cmd = app.add_subcommand("plot", "SVG chart: memory (a), trace (b) or sweep (c)");
    plot_cmd->add_option("kind", plot.kind, "memory, trace or sweep")
        ->required()
        ->check(CLI::IsMember({"memory", "trace", "sweep", "a", "b", "c"}));
    plot_cmd->add_option("input", plot.input, "results CSV, or trace CSV for kind trace");
    plot_cmd->add_option("-o,--out", plot.out, "SVG file (default: stdout)");
    plot_cmd->add_option("--variant", plot.variant, "rows to plot");
    plot_cmd->add_flag("--predicted", plot.predicted, "memory curves from the model instead of data");
    plot_cmd->add_option("--model", plot.model, "model file for --predicted");
    plot_cmd->add_option("--m", plot.m, "m for --predicted")->capture_default_str();
    plot_cmd->add_option("--k", plot.k, "k for --predicted")->capture_default_str();
    plot_cmd->add_option("--l", plot.l, "l for --predicted")->capture_default_str();

    int len_strands = 8, nf_strands = 8;
    std::vector<std::string> len_word, nf_word;
    auto* len_cmd = app.add_subcommand("len", "length of a braid word (letters +-i; put -- before negative letters)");
    len_cmd->add_option("-N,--strands", len_strands, "strand count")->capture_default_str();
    len_cmd->add_option("word", len_word, "Artin letters");
    auto* nf_cmd = app.add_subcommand("nf", "left canonical form of a braid word");
    nf_cmd->add_option("-N,--strands", nf_strands, "strand count")->capture_default_str();
    nf_cmd->add_option("word", nf_word, "Artin letters");

    ExperimentParams gen;
    std::string gen_out, gen_variant;
    auto* gen_cmd = app.add_subcommand("gen", "write a random instance file");
    gen_cmd->add_option("-N,--strands", gen.N)->capture_default_str();
    gen_cmd->add_option("--m", gen.m)->capture_default_str();
    gen_cmd->add_option("--n", gen.n)->capture_default_str();
    gen_cmd->add_option("--k", gen.k)->capture_default_str();
    gen_cmd->add_option("--l", gen.l)->capture_default_str();
    gen_cmd->add_option("--gen-len", gen.gen_len)->capture_default_str();
    gen_cmd->add_option("--param-len", gen.param_len, "leading letters of W_i published as P_i")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "instance seed (the seed column of a results CSV)")->capture_default_str();
    gen_cmd->add_option("--variant", gen_variant, "instance shape of a harness variant (conjugacy: b_i = X W_i X^-1)");
    gen_cmd->add_option("-o,--out", gen_out, "instance file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_input;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_path, solve_flags);
        if (*conj_cmd) return cmd_conjugacy(conj_path, conj_flags);
        if (*memb_cmd) return cmd_membership(memb_path, memb_flags);
        if (*ex_cmd) return cmd_experiment(ex, ex_cmd);
        if (*fit_cmd) return cmd_fit(fit_path, fit_variant, fit_out, !fit_no_elim);
        if (*pred_cmd) return cmd_predict(pred_values, pred_model, pred_doubling, pred_memory);
        if (*plot_cmd) return cmd_plot(plot);
        if (*len_cmd) return cmd_len(len_word, len_strands);
        if (*nf_cmd) return cmd_nf(nf_word, nf_strands);
        if (*gen_cmd) {
            const auto inst = gen_variant.empty() ? random_instance(gen) : trial_instance(gen, parse_variant(gen_variant));
            const auto text = write_instance(inst);
            if (gen_out.empty()) std::cout << text;
            else write_file(gen_out, text);
            return exit_found;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
