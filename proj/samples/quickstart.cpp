// Builds a random instance X W_i = b_i, runs the beam search and prints
// where the hidden X ended up.

#include <iostream>

#include <braidlen/experiment.hpp>

using namespace braidlen;

int main() {
    ExperimentParams p;
    p.N = 8, p.m = 2, p.n = 16, p.k = 1, p.l = 4, p.M = 16, p.seed = 2024;
    const Instance inst = random_instance(p);
    const auto sys = inst.system();

    std::cout << "generators:\n";
    for (const auto& g : inst.generators) std::cout << "  " << format_word(g) << "\n";
    std::cout << "b_1 = " << format_normal_form(sys.equations()[0].b) << "\n";
    std::cout << "hidden X: " << format_sequence(*inst.truth) << "\n\n";

    BeamConfig cfg;
    cfg.beam_width = static_cast<std::size_t>(p.M);
    cfg.max_steps = static_cast<std::size_t>(p.n);
    const auto res = solve(sys, cfg, inst.truth);

    for (std::size_t s = 0; s < res.trace.size(); ++s)
        std::cout << "step " << s + 1 << ": truth rank " << res.trace[s].truth_rank << ", mean score "
                  << res.trace[s].mean_score << "\n";
    const auto& best = res.ranked.front();
    std::cout << "\nbest candidate: " << format_sequence(best.letters) << " (score " << best.score << ")\n";
    const bool hit = best.letters == *inst.truth;
    std::cout << (hit ? "recovered X" : "top candidate differs from X") << ", " << res.ops.multiplications
              << " multiplications\n";
}
