#pragma once

/**
 * @file instance.hpp
 * @brief Seeded random subgroups and equation systems, the experiment
 *        parameter grid, and the JSON instance file format.
 *
 * Randomness comes from std::mt19937_64 seeded through splitmix64. Integers
 * below a bound are drawn by rejection sampling on the raw 64-bit output, so
 * the streams do not depend on the standard library's distributions.
 */

#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "braid.hpp"
#include "length.hpp"
#include "solver.hpp"

namespace braidlen {

inline constexpr std::string_view rng_algorithm = "mt19937_64+splitmix64";

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for item `index` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw braid_error("empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

struct ExperimentParams {
    int N = 8;
    int m = 2;       // subgroup generators
    int n = 16;      // generator letters in X
    int k = 1;       // equations
    int l = 4;       // generator letters in each W_i
    int M = 16;      // beam width
    int gen_len = 10; // Artin letters per subgroup generator
    int param_len = 0; // leading letters of W_i published as P_i (0: none)
    std::uint64_t seed = 0;

    bool operator==(const ExperimentParams&) const = default;
};

inline void validate(const ExperimentParams& p) {
    check_strands(p.N);
    if (p.m < 1 || p.k < 1 || p.M < 1 || p.gen_len < 1 || p.n < 0 || p.l < 0)
        throw braid_error("experiment parameters out of range");
    if (p.param_len < 0 || p.param_len > p.l) throw braid_error("param_len must lie in [0, l]");
}

/// Uniform signed Artin letter of B_N.
inline int random_artin_letter(Rng& rng, int strands) {
    const auto c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(2 * (strands - 1))));
    return c % 2 ? -(c / 2 + 1) : c / 2 + 1;
}

inline PeelLetter random_peel_letter(Rng& rng, int generators) {
    return PeelLetter::from_code(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(2 * generators))));
}

/// Uniform over freely reduced sequences of the given length: the first
/// letter is one of 2m, every later one avoids cancelling its predecessor.
inline PeelSequence random_reduced_sequence(Rng& rng, int length, int generators) {
    PeelSequence out;
    for (int t = 0; t < length; ++t) {
        if (out.empty() || generators == 0) {
            out.push_back(random_peel_letter(rng, generators));
            continue;
        }
        const int forbidden = out.back().inverse().code();
        int c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(2 * generators - 1)));
        if (c >= forbidden) ++c;
        out.push_back(PeelLetter::from_code(c));
    }
    return out;
}

/// m words of gen_len uniform signed Artin letters each.
inline std::vector<BraidWord> random_subgroup(const ExperimentParams& p, Rng& rng) {
    check_strands(p.N);
    std::vector<BraidWord> out;
    for (int j = 0; j < p.m; ++j) {
        std::vector<int> letters;
        for (int t = 0; t < p.gen_len; ++t) letters.push_back(random_artin_letter(rng, p.N));
        out.emplace_back(p.N, std::move(letters));
    }
    return out;
}

/// Artin word of a product of subgroup letters.
inline BraidWord expand_sequence(const std::vector<BraidWord>& generators, const PeelSequence& seq, int strands) {
    BraidWord out(strands, {});
    for (auto l : seq) out = out.concat(l.sign > 0 ? generators[static_cast<std::size_t>(l.generator - 1)]
                                                   : generators[static_cast<std::size_t>(l.generator - 1)].inverse());
    return out;
}

struct Instance {
    int strands = 8;
    std::vector<BraidWord> generators;
    std::vector<BraidWord> b;                       // Artin words of X W_i
    std::vector<std::optional<BraidWord>> P;        // published prefixes
    std::vector<std::optional<BraidWord>> W_hint;   // W_i, for reporting only
    std::optional<PeelSequence> truth;              // letters of X

    [[nodiscard]] EquationSystem system() const {
        std::vector<Equation> eqs;
        for (std::size_t i = 0; i < b.size(); ++i)
            eqs.push_back({normal_form(b[i]), P[i] ? std::optional(normal_form(*P[i])) : std::nullopt});
        return {strands, generators, std::move(eqs)};
    }

    bool operator==(const Instance&) const = default;
};

/// X and every W_i are freely reduced products of subgroup letters (so the
/// n letters of X are its shortest coding); b_i = X W_i.
inline Instance random_instance(const ExperimentParams& p, Rng& rng) {
    validate(p);
    Instance inst;
    inst.strands = p.N;
    inst.generators = random_subgroup(p, rng);
    PeelSequence x = random_reduced_sequence(rng, p.n, p.m);
    const BraidWord xw = expand_sequence(inst.generators, x, p.N);
    for (int i = 0; i < p.k; ++i) {
        PeelSequence w = random_reduced_sequence(rng, p.l, p.m);
        const BraidWord ww = expand_sequence(inst.generators, w, p.N);
        inst.b.push_back(xw.concat(ww));
        inst.W_hint.emplace_back(ww);
        if (p.param_len > 0)
            inst.P.emplace_back(expand_sequence(inst.generators, PeelSequence(w.begin(), w.begin() + p.param_len), p.N));
        else
            inst.P.emplace_back(std::nullopt);
    }
    inst.truth = std::move(x);
    return inst;
}

inline Instance random_instance(const ExperimentParams& p) {
    Rng rng = make_rng(p.seed);
    return random_instance(p, rng);
}

// ---------------------------------------------------------------------------
// Parameter grids
// ---------------------------------------------------------------------------

struct GridSpec {
    std::vector<int> N{8};
    std::vector<int> m{2, 4, 8};
    std::vector<int> n{16, 32, 64};
    std::vector<int> k{1, 2, 4, 8};
    std::vector<int> l{4, 8};
    std::vector<int> M{2, 4, 8, 16, 32, 64, 128, 256, 512};
    int gen_len = 10;
};

/// Cross product in the order N, m, n, k, l, M (M varies fastest).
inline std::vector<ExperimentParams> parameter_grid(const GridSpec& g = {}) {
    std::vector<ExperimentParams> out;
    for (int N : g.N)
        for (int m : g.m)
            for (int n : g.n)
                for (int k : g.k)
                    for (int l : g.l)
                        for (int M : g.M) {
                            ExperimentParams p;
                            p.N = N, p.m = m, p.n = n, p.k = k, p.l = l, p.M = M, p.gen_len = g.gen_len;
                            out.push_back(p);
                        }
    return out;
}

inline const std::vector<int>& strand_sweep() {
    static const std::vector<int> values{8, 10, 12, 14, 16, 20, 24, 28, 32, 36, 40, 50, 60, 70, 80, 96, 100};
    return values;
}

/// Fixed (m,n,k,l,M) evaluated at every N of the strand sweep.
inline std::vector<ExperimentParams> strand_sweep_grid(int m, int n, int k, int l, int M,
                                                       const std::vector<int>& strands = strand_sweep()) {
    GridSpec g;
    g.N = strands, g.m = {m}, g.n = {n}, g.k = {k}, g.l = {l}, g.M = {M};
    return parameter_grid(g);
}

// ---------------------------------------------------------------------------
// Instance file (JSON)
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const Instance& inst) {
    nlohmann::json j;
    j["N"] = inst.strands;
    j["generators"] = nlohmann::json::array();
    for (const auto& g : inst.generators) j["generators"].push_back(g.letters);
    j["equations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.b.size(); ++i) {
        nlohmann::json e;
        e["b"] = inst.b[i].letters;
        if (inst.P[i]) e["P"] = inst.P[i]->letters;
        if (inst.W_hint[i]) e["W_hint"] = inst.W_hint[i]->letters;
        j["equations"].push_back(std::move(e));
    }
    if (inst.truth) j["truth"] = to_signed(*inst.truth);
    return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    try {
        Instance inst;
        inst.strands = j.at("N").get<int>();
        check_strands(inst.strands);
        for (const auto& g : j.at("generators")) inst.generators.emplace_back(inst.strands, g.get<std::vector<int>>());
        if (inst.generators.empty()) throw braid_error("instance has no generators");
        for (const auto& e : j.at("equations")) {
            inst.b.emplace_back(inst.strands, e.at("b").get<std::vector<int>>());
            inst.P.push_back(e.contains("P") ? std::optional(BraidWord(inst.strands, e["P"].get<std::vector<int>>()))
                                             : std::nullopt);
            inst.W_hint.push_back(e.contains("W_hint")
                                      ? std::optional(BraidWord(inst.strands, e["W_hint"].get<std::vector<int>>()))
                                      : std::nullopt);
        }
        if (inst.b.empty()) throw braid_error("instance has no equations");
        if (j.contains("truth"))
            inst.truth = from_signed(j["truth"].get<std::vector<int>>(), static_cast<int>(inst.generators.size()));
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw braid_error(std::string("malformed instance: ") + e.what());
    }
}

inline std::string write_instance(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline Instance read_instance(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw braid_error(std::string("instance is not valid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw braid_error("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_instance(text);
}

} // namespace braidlen
