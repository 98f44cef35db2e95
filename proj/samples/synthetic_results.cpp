// Writes a results CSV whose outcomes are drawn from the built-in success
// model over the 648-cell grid. Useful for trying `braidlen fit`.
//
//   synthetic_results out.csv [trials per cell] [seed]

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <braidlen/experiment.hpp>
#include <braidlen/stats.hpp>

using namespace braidlen;

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: synthetic_results out.csv [trials] [seed]\n";
        return 2;
    }
    const int trials = argc > 2 ? std::atoi(argv[2]) : 16;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
    if (trials < 1) {
        std::cerr << "trials must be positive\n";
        return 2;
    }

    const auto model = reference_model();
    const auto cells = parameter_grid();
    Rng rng = make_rng(seed);
    std::vector<TrialRecord> rows;
    for (const auto& p : cells) {
        const double prob = predict_success(model, p);
        for (int t = 0; t < trials; ++t) {
            TrialRecord r;
            r.seed = trial_seed(seed, p, t);
            r.N = p.N, r.m = p.m, r.n = p.n, r.k = p.k, r.l = p.l, r.M = p.M;
            r.success = static_cast<double>(rng() >> 11) * 0x1.0p-53 < prob;
            r.rank = r.success ? 1 : 0;
            r.steps = static_cast<std::size_t>(p.n);
            r.halt_reason = "fixed_steps";
            const auto ops = multiplication_count(p.n, p.m, p.k, p.M);
            r.multiplications = ops.multiplications;
            r.length_evals = ops.length_evaluations;
            rows.push_back(r);
        }
    }
    std::ofstream out(argv[1], std::ios::binary);
    out << format_csv(std::move(rows));
    if (!out) {
        std::cerr << "cannot write " << argv[1] << "\n";
        return 2;
    }
    std::cout << cells.size() * static_cast<std::size_t>(trials) << " rows\n";
}
