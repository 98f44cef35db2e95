#pragma once

/**
 * @file solver.hpp
 * @brief Memory-bounded length-based search for the leading variable X of a
 *        system X W_i = b_i over a finitely generated subgroup of B_N.
 *
 * A candidate is a peel sequence ((j_1,s_1),...,(j_t,s_t)): the elements
 * a_{j}^{-s} are multiplied on the left of every b_i in order, and the
 * candidate's score is the sum of the Reduced Garside lengths of the
 * resulting residuals. Each step extends every kept candidate by all 2m
 * letters and keeps the M lowest-scored sequences. The candidate value of X
 * is a_{j_1}^{s_1} ... a_{j_t}^{s_t}, i.e. the sequence read in order with its
 * original signs.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braid.hpp"
#include "length.hpp"
#include "parallel.hpp"

namespace braidlen {

// ---------------------------------------------------------------------------
// Letters over the subgroup generators
// ---------------------------------------------------------------------------

/// a_generator^{sign}, generator 1-based.
struct PeelLetter {
    int generator = 1;
    int sign = 1;

    /// Dense index: (1,+1) -> 0, (1,-1) -> 1, (2,+1) -> 2, ...
    [[nodiscard]] constexpr int code() const { return 2 * (generator - 1) + (sign < 0 ? 1 : 0); }
    static constexpr PeelLetter from_code(int c) { return {c / 2 + 1, c % 2 ? -1 : 1}; }
    [[nodiscard]] constexpr PeelLetter inverse() const { return {generator, -sign}; }

    constexpr bool operator==(const PeelLetter&) const = default;
    constexpr bool operator<(const PeelLetter& o) const { return code() < o.code(); }
};

using PeelSequence = std::vector<PeelLetter>;

/// "j:s" tokens separated by spaces, e.g. "1:1 2:-1".
inline std::string format_sequence(const PeelSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(seq[i].generator) + ":" + std::to_string(seq[i].sign);
    }
    return out;
}

/// Signed generator indices (+j / -j), the instance-file encoding.
inline std::vector<int> to_signed(const PeelSequence& seq) {
    std::vector<int> out;
    for (auto l : seq) out.push_back(l.sign * l.generator);
    return out;
}

inline PeelSequence from_signed(const std::vector<int>& v, int generator_count) {
    PeelSequence out;
    for (int x : v) {
        if (x == 0 || x > generator_count || -x > generator_count)
            throw braid_error("generator letter " + std::to_string(x) + " out of range");
        out.push_back({x > 0 ? x : -x, x > 0 ? 1 : -1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Problem, configuration, results
// ---------------------------------------------------------------------------

struct Equation {
    GarsideNormalForm b;                 // X W_i
    std::optional<GarsideNormalForm> P;  // known prefix of W_i
};

/// Generators a_1..a_m of the subgroup plus the k equations X W_i = b_i.
class EquationSystem {
public:
    EquationSystem(int strands, std::vector<BraidWord> generator_words, std::vector<Equation> equations)
        : strands_(strands), words_(std::move(generator_words)), equations_(std::move(equations)) {
        check_strands(strands);
        if (words_.empty()) throw braid_error("equation system needs at least one generator");
        if (equations_.empty()) throw braid_error("equation system needs at least one equation");
        for (const auto& w : words_) {
            if (w.strands != strands) throw braid_error("generator strand count mismatch");
            generators_.push_back(normal_form(w));
        }
        for (const auto& e : equations_) {
            if (e.b.strands() != strands || (e.P && e.P->strands() != strands))
                throw braid_error("equation strand count mismatch");
            param_inverse_.push_back(e.P ? std::optional(gnf_inverse(*e.P)) : std::nullopt);
        }
        for (std::size_t j = 0; j < generators_.size(); ++j) {
            auto inv = gnf_inverse(generators_[j]);
            peel_left_.push_back(inv); // (j,+1): a_j^{-1}
            peel_left_.push_back(generators_[j]);
            peel_right_.push_back(generators_[j]);
            peel_right_.push_back(std::move(inv));
        }
    }

    [[nodiscard]] int strands() const { return strands_; }
    [[nodiscard]] std::size_t generator_count() const { return generators_.size(); }
    [[nodiscard]] std::size_t equation_count() const { return equations_.size(); }
    [[nodiscard]] const std::vector<BraidWord>& generator_words() const { return words_; }
    [[nodiscard]] const std::vector<GarsideNormalForm>& generators() const { return generators_; }
    [[nodiscard]] const std::vector<Equation>& equations() const { return equations_; }
    [[nodiscard]] bool has_parameters() const {
        return std::all_of(equations_.begin(), equations_.end(), [](const Equation& e) { return e.P.has_value(); });
    }

    /// a_j^{-s}, multiplied on the left when peeling (j,s).
    [[nodiscard]] const GarsideNormalForm& peel_left(PeelLetter l) const { return peel_left_[static_cast<std::size_t>(l.code())]; }
    /// a_j^{s}, multiplied on the right in two-sided peeling.
    [[nodiscard]] const GarsideNormalForm& peel_right(PeelLetter l) const { return peel_right_[static_cast<std::size_t>(l.code())]; }
    [[nodiscard]] const std::optional<GarsideNormalForm>& parameter_inverse(std::size_t i) const { return param_inverse_[i]; }

    /// Generators whose normal form is much shorter than the defining word;
    /// such cancellations break the length heuristic.
    [[nodiscard]] std::vector<std::size_t> short_generators() const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < generators_.size(); ++j)
            if (2 * rg_length(generators_[j]) < static_cast<LengthValue>(words_[j].letters.size())) out.push_back(j + 1);
        return out;
    }

private:
    int strands_;
    std::vector<BraidWord> words_;
    std::vector<GarsideNormalForm> generators_;
    std::vector<Equation> equations_;
    std::vector<std::optional<GarsideNormalForm>> param_inverse_;
    std::vector<GarsideNormalForm> peel_left_;
    std::vector<GarsideNormalForm> peel_right_;
};

struct Candidate {
    PeelSequence letters;
    std::vector<GarsideNormalForm> residuals; // a_{j_t}^{-s_t} ... a_{j_1}^{-s_1} b_i
    LengthValue score = 0;
};

enum class HaltPolicy { fixed_steps, score_sum_rises, parametric };

enum class HaltReason { fixed_steps, score_sum_rises, parametric, identity_found, identity_at_start, step_cap };

inline std::string_view to_string(HaltReason r) {
    switch (r) {
    case HaltReason::fixed_steps: return "fixed_steps";
    case HaltReason::score_sum_rises: return "score_sum_rises";
    case HaltReason::parametric: return "parametric";
    case HaltReason::identity_found: return "identity_found";
    case HaltReason::identity_at_start: return "identity_at_start";
    case HaltReason::step_cap: return "step_cap";
    }
    return "unknown";
}

inline std::string_view to_string(HaltPolicy p) {
    switch (p) {
    case HaltPolicy::fixed_steps: return "fixed";
    case HaltPolicy::score_sum_rises: return "sum";
    case HaltPolicy::parametric: return "parametric";
    }
    return "unknown";
}

struct BacktrackConfig {
    std::size_t lookback = 5;      // B
    std::size_t multiplier = 8;    // g
    std::size_t window = 4;        // W_f
    double epsilon = 0.01;
    std::size_t max_backtracks = 3;
};

struct BeamConfig {
    std::size_t beam_width = 16;              // M
    std::optional<std::size_t> max_steps;     // known n
    HaltPolicy halt = HaltPolicy::fixed_steps;
    double tau = 0.5;
    std::size_t patience = 1;
    bool two_sided = false;
    /// Skip the extension that undoes the previous letter.
    bool prune_immediate_inverse = true;
    std::optional<BacktrackConfig> backtrack;
    /// Keep residuals from the previous step; off recomputes every prefix from b_i.
    bool reuse_residuals = true;
    /// Stop as soon as some candidate peels every b_i to the identity.
    bool stop_on_identity = false;
    /// Parametric halting: steps without a better ratio before stopping.
    std::size_t parametric_lookahead = 1;
    /// Hard limit for the open-ended halting policies.
    std::size_t step_cap = 512;
    unsigned threads = 1;
};

inline void validate(const BeamConfig& cfg) {
    if (cfg.beam_width < 1) throw braid_error("beam width must be at least 1");
    if (cfg.patience < 1) throw braid_error("patience must be at least 1");
    if (cfg.halt == HaltPolicy::fixed_steps && !cfg.max_steps)
        throw braid_error("fixed_steps halting needs the number of steps n");
    if (!(cfg.tau > 0)) throw braid_error("tau must be positive");
    if (cfg.parametric_lookahead < 1) throw braid_error("parametric lookahead must be at least 1");
    if (cfg.backtrack && (cfg.backtrack->window < 1 || cfg.backtrack->multiplier < 1))
        throw braid_error("backtrack window and multiplier must be positive");
}

struct OpCounts {
    std::uint64_t multiplications = 0;
    std::uint64_t length_evaluations = 0;

    OpCounts& operator+=(const OpCounts& o) {
        multiplications += o.multiplications;
        length_evaluations += o.length_evaluations;
        return *this;
    }
};

struct StepTrace {
    std::vector<LengthValue> scores;
    double mean_score = 0;
    std::size_t truth_rank = 0; // 1-based position of the truth prefix, 0 if absent or unknown
    std::size_t beam_width = 0;
};

struct SolveResult {
    std::vector<Candidate> ranked;
    std::size_t halted_at_step = 0;
    HaltReason halt_reason = HaltReason::fixed_steps;
    std::vector<StepTrace> trace;
    OpCounts ops;
    std::optional<PeelSequence> presentation;
    std::size_t backtracks = 0;
};

// ---------------------------------------------------------------------------
// Core step
// ---------------------------------------------------------------------------

namespace detail {

inline GarsideNormalForm peel(const EquationSystem& sys, const GarsideNormalForm& residual, PeelLetter l,
                              bool two_sided, OpCounts& ops) {
    auto out = gnf_multiply(sys.peel_left(l), residual);
    ++ops.multiplications;
    if (two_sided) {
        out = gnf_multiply(out, sys.peel_right(l));
        ++ops.multiplications;
    }
    return out;
}

inline bool ranks_before(const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score < b.score;
    return std::lexicographical_compare(a.letters.begin(), a.letters.end(), b.letters.begin(), b.letters.end());
}

inline double mean_score(const std::vector<Candidate>& beam) {
    if (beam.empty()) return 0;
    double total = 0;
    for (const auto& c : beam) total += static_cast<double>(c.score);
    return total / static_cast<double>(beam.size());
}

inline LengthValue score_sum(const std::vector<Candidate>& beam) {
    LengthValue total = 0;
    for (const auto& c : beam) total += c.score;
    return total;
}

inline bool all_identity(const Candidate& c) {
    return std::all_of(c.residuals.begin(), c.residuals.end(), [](const auto& r) { return r.is_identity(); });
}

} // namespace detail

/// The candidate that has peeled nothing: residuals are the b_i themselves.
inline Candidate initial_candidate(const EquationSystem& sys) {
    Candidate c;
    for (const auto& e : sys.equations()) {
        c.residuals.push_back(e.b);
        c.score += rg_length(e.b);
    }
    return c;
}

/// One search step: extend every candidate by every letter, score, and keep
/// the `width` best by (score, letters). Defaults to cfg.beam_width.
inline std::vector<Candidate> beam_step(const std::vector<Candidate>& beam, const EquationSystem& sys,
                                        const BeamConfig& cfg, OpCounts* counts = nullptr,
                                        std::optional<std::size_t> width = std::nullopt) {
    const int letters = static_cast<int>(2 * sys.generator_count());
    const std::size_t keep = width.value_or(cfg.beam_width);

    std::vector<std::vector<Candidate>> children(beam.size());
    std::vector<OpCounts> local(beam.size());
    parallel_for(beam.size(), cfg.threads, [&](std::size_t ci) {
        const Candidate& parent = beam[ci];
        OpCounts& ops = local[ci];
        const std::vector<GarsideNormalForm>* base = &parent.residuals;
        std::vector<GarsideNormalForm> recomputed;
        if (!cfg.reuse_residuals && !parent.letters.empty()) {
            for (const auto& e : sys.equations()) {
                GarsideNormalForm r = e.b;
                for (auto l : parent.letters) r = detail::peel(sys, r, l, cfg.two_sided, ops);
                recomputed.push_back(std::move(r));
            }
            base = &recomputed;
        }
        auto& out = children[ci];
        out.reserve(static_cast<std::size_t>(letters));
        for (int code = 0; code < letters; ++code) {
            const auto l = PeelLetter::from_code(code);
            if (cfg.prune_immediate_inverse && !parent.letters.empty() && parent.letters.back() == l.inverse())
                continue;
            Candidate child;
            child.letters.reserve(parent.letters.size() + 1);
            child.letters = parent.letters;
            child.letters.push_back(l);
            child.residuals.reserve(base->size());
            for (const auto& r : *base) {
                child.residuals.push_back(detail::peel(sys, r, l, cfg.two_sided, ops));
                child.score += rg_length(child.residuals.back());
                ++ops.length_evaluations;
            }
            out.push_back(std::move(child));
        }
    });

    std::vector<Candidate> pool;
    for (auto& group : children)
        for (auto& c : group) pool.push_back(std::move(c));
    if (counts)
        for (const auto& o : local) *counts += o;

    const std::size_t n = std::min(keep, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n), pool.end(), detail::ranks_before);
    pool.resize(n);
    return pool;
}

// ---------------------------------------------------------------------------
// Halting and failure tests
// ---------------------------------------------------------------------------

/// Sum of l(P_i^{-1} W_i) and sum of l(W_i), with W_i the candidate's residuals.
inline std::pair<LengthValue, LengthValue> parametric_lengths(const Candidate& c, const EquationSystem& sys) {
    LengthValue peeled = 0, plain = 0;
    for (std::size_t i = 0; i < sys.equation_count(); ++i) {
        const auto& pinv = sys.parameter_inverse(i);
        if (!pinv) throw braid_error("parametric test needs a known parameter P_i for every equation");
        peeled += rg_length(gnf_multiply(*pinv, c.residuals[i]));
        plain += rg_length(c.residuals[i]);
    }
    return {peeled, plain};
}

/// True iff peeling the known parameters shrinks the residuals to at most
/// tau times their length, i.e. X looks completely peeled.
inline bool parametric_halt_test(const Candidate& c, const EquationSystem& sys, double tau) {
    auto [peeled, plain] = parametric_lengths(c, sys);
    return static_cast<double>(peeled) <= tau * static_cast<double>(plain);
}

/// Mean beam score has not dropped by a relative `epsilon` across the last
/// `window` trace entries.
inline bool detect_failure(const std::vector<StepTrace>& trace, std::size_t window, double epsilon) {
    if (window < 1 || trace.size() < window) return false;
    const double first = trace[trace.size() - window].mean_score;
    const double last = trace.back().mean_score;
    if (first <= 0) return false;
    return first - last < epsilon * first;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

namespace detail {

inline double parametric_ratio(const Candidate& c, const EquationSystem& sys) {
    auto [peeled, plain] = parametric_lengths(c, sys);
    if (plain > 0) return static_cast<double>(peeled) / static_cast<double>(plain);
    return peeled == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

inline double best_parametric_ratio(const std::vector<Candidate>& beam, const EquationSystem& sys) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : beam) best = std::min(best, parametric_ratio(c, sys));
    return best;
}

inline void rank_parametric(std::vector<Candidate>& beam, const EquationSystem& sys) {
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t i = 0; i < beam.size(); ++i) keyed.emplace_back(parametric_ratio(beam[i], sys), i);
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return ranks_before(beam[a.second], beam[b.second]);
    });
    std::vector<Candidate> out;
    for (auto& [ratio, i] : keyed) out.push_back(std::move(beam[i]));
    beam = std::move(out);
}

/// Residual of the first equation after peeling the first s truth letters, s = 0..n.
inline std::vector<GarsideNormalForm> truth_residuals(const EquationSystem& sys, const PeelSequence& truth,
                                                      bool two_sided) {
    std::vector<GarsideNormalForm> out{sys.equations().front().b};
    OpCounts scratch;
    for (auto l : truth) out.push_back(peel(sys, out.back(), l, two_sided, scratch));
    return out;
}

inline std::size_t rank_of(const std::vector<Candidate>& beam, const GarsideNormalForm& residual) {
    for (std::size_t i = 0; i < beam.size(); ++i)
        if (beam[i].residuals.front() == residual) return i + 1;
    return 0;
}

} // namespace detail

/// Runs the search until the configured halting rule fires. When `truth` is
/// given, the trace records the position of its prefix at every step.
inline SolveResult solve(const EquationSystem& sys, const BeamConfig& cfg,
                         const std::optional<PeelSequence>& truth = std::nullopt) {
    validate(cfg);
    if (cfg.halt == HaltPolicy::parametric && !sys.has_parameters())
        throw braid_error("parametric halting needs a known parameter P_i for every equation");

    SolveResult result;
    std::vector<GarsideNormalForm> truth_res;
    if (truth) truth_res = detail::truth_residuals(sys, *truth, cfg.two_sided);

    std::vector<Candidate> beam{initial_candidate(sys)};
    auto finish = [&](std::vector<Candidate> ranked, std::size_t step, HaltReason why) {
        // a run can end inside a widened stretch
        if (ranked.size() > cfg.beam_width) ranked.resize(cfg.beam_width);
        if (why == HaltReason::parametric) detail::rank_parametric(ranked, sys);
        result.ranked = std::move(ranked);
        result.halted_at_step = step;
        result.halt_reason = why;
        return result;
    };

    if (detail::all_identity(beam.front())) {
        if (cfg.stop_on_identity) result.presentation = PeelSequence{};
        return finish(beam, 0, HaltReason::identity_at_start);
    }
    // Parametric halting: once the test fires, keep going for up to
    // parametric_lookahead steps looking for a lower best ratio, and report
    // the beam where it was lowest.
    std::optional<std::vector<Candidate>> fired;
    std::size_t fired_step = 0;
    std::size_t since_fired = 0;
    double fired_ratio = 0;
    auto parametric_done = [&](std::size_t s) {
        const double ratio = detail::best_parametric_ratio(beam, sys);
        if (fired ? ratio < fired_ratio : ratio <= cfg.tau) {
            fired = beam;
            fired_step = s;
            fired_ratio = ratio;
            since_fired = 0;
        } else if (fired) {
            ++since_fired;
        }
        return fired && (fired_ratio == 0 || since_fired >= cfg.parametric_lookahead);
    };
    auto finish_fired = [&] {
        result.trace.resize(fired_step);
        return finish(*fired, fired_step, HaltReason::parametric);
    };
    if (cfg.halt == HaltPolicy::parametric && parametric_done(0)) return finish_fired();

    const std::size_t limit = cfg.halt == HaltPolicy::fixed_steps ? *cfg.max_steps : cfg.max_steps.value_or(cfg.step_cap);

    // score_sum_rises bookkeeping
    LengthValue previous_sum = detail::score_sum(beam);
    std::size_t previous_size = beam.size();
    std::size_t stalled = 0;
    std::vector<Candidate> best_beam = beam;
    LengthValue best_sum = std::numeric_limits<LengthValue>::max();

    // backtracking bookkeeping
    std::vector<std::vector<Candidate>> history;
    if (cfg.backtrack) history.push_back(beam);
    std::vector<std::size_t> sites;
    std::size_t wide_until = 0;

    std::size_t step = 0;
    while (step < limit) {
        const bool wide = cfg.backtrack && step < wide_until;
        const std::size_t width = wide ? cfg.beam_width * cfg.backtrack->multiplier : cfg.beam_width;
        beam = beam_step(beam, sys, cfg, &result.ops, width);
        ++step;

        StepTrace t;
        for (const auto& c : beam) t.scores.push_back(c.score);
        t.mean_score = detail::mean_score(beam);
        t.beam_width = width;
        if (step < truth_res.size()) t.truth_rank = detail::rank_of(beam, truth_res[step]);
        result.trace.push_back(std::move(t));

        if (cfg.stop_on_identity) {
            auto hit = std::find_if(beam.begin(), beam.end(), detail::all_identity);
            if (hit != beam.end()) {
                result.presentation = hit->letters;
                return finish(beam, step, HaltReason::identity_found);
            }
        }

        if (cfg.backtrack) {
            const auto& bt = *cfg.backtrack;
            history.resize(step);
            history.push_back(beam);
            const bool fresh_site = std::find(sites.begin(), sites.end(), step) == sites.end();
            if (step >= wide_until && result.backtracks < bt.max_backtracks && fresh_site &&
                detect_failure(result.trace, bt.window, bt.epsilon)) {
                sites.push_back(step);
                const std::size_t target = step > bt.lookback ? step - bt.lookback : 0;
                beam = history[target];
                history.resize(target + 1);
                result.trace.resize(target);
                wide_until = target + bt.lookback + bt.window;
                step = target;
                ++result.backtracks;
                continue;
            }
        }

        switch (cfg.halt) {
        case HaltPolicy::fixed_steps:
            break;
        case HaltPolicy::score_sum_rises: {
            const LengthValue sum = detail::score_sum(beam);
            if (sum < best_sum) {
                best_sum = sum;
                best_beam = beam;
            }
            // a growing beam raises the sum by itself; only compare like with like
            if (beam.size() == previous_size) {
                stalled = sum < previous_sum ? 0 : stalled + 1;
                if (stalled >= cfg.patience) return finish(best_beam, step, HaltReason::score_sum_rises);
            }
            previous_sum = sum;
            previous_size = beam.size();
            break;
        }
        case HaltPolicy::parametric:
            if (parametric_done(step)) return finish_fired();
            break;
        }
    }
    if (fired) return finish_fired();
    if (cfg.halt == HaltPolicy::fixed_steps) return finish(beam, step, HaltReason::fixed_steps);
    if (cfg.halt == HaltPolicy::score_sum_rises) return finish(best_beam, step, HaltReason::step_cap);
    return finish(beam, step, HaltReason::step_cap);
}

/// Same driver with failure detection and local beam widening switched on.
inline SolveResult solve_with_backtracking(const EquationSystem& sys, const BeamConfig& cfg,
                                           const std::optional<PeelSequence>& truth = std::nullopt) {
    if (!cfg.backtrack) throw braid_error("backtracking configuration missing");
    return solve(sys, cfg, truth);
}

/// Finds X from b = X P X^{-1}. With P known, letters are peeled from both
/// sides and the run stops once P^{-1} times the residual is short. Without
/// P the one-sided search runs for exactly cfg.max_steps steps.
inline SolveResult solve_conjugacy(const GarsideNormalForm& b, const std::optional<GarsideNormalForm>& P,
                                   const std::vector<BraidWord>& generators, BeamConfig cfg,
                                   const std::optional<PeelSequence>& truth = std::nullopt) {
    if (P) {
        EquationSystem sys(b.strands(), generators, {Equation{b, P}});
        cfg.two_sided = true;
        cfg.halt = HaltPolicy::parametric;
        return solve(sys, cfg, truth);
    }
    if (!cfg.max_steps) throw braid_error("conjugacy without P needs the number of steps n");
    EquationSystem sys(b.strands(), generators, {Equation{b, std::nullopt}});
    cfg.two_sided = false;
    cfg.halt = HaltPolicy::fixed_steps;
    return solve(sys, cfg, truth);
}

/// Searches for a presentation of g over the generators; result.presentation
/// is set when some candidate peels g down to the identity. A missing
/// presentation does not prove non-membership.
inline SolveResult solve_membership(const GarsideNormalForm& g, const std::vector<BraidWord>& generators,
                                    BeamConfig cfg, const std::optional<PeelSequence>& truth = std::nullopt) {
    EquationSystem sys(g.strands(), generators, {Equation{g, std::nullopt}});
    cfg.stop_on_identity = true;
    cfg.two_sided = false;
    if (cfg.halt == HaltPolicy::parametric) cfg.halt = HaltPolicy::score_sum_rises;
    return solve(sys, cfg, truth);
}

/// X = a_{j_1}^{s_1} ... a_{j_t}^{s_t} for a peel sequence.
inline GarsideNormalForm reconstruct(const EquationSystem& sys, const PeelSequence& seq) {
    GarsideNormalForm x = identity_form(sys.strands());
    for (auto l : seq) x = gnf_multiply(x, sys.peel_right(l));
    return x;
}

} // namespace braidlen
