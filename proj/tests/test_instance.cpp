#include <map>

#include <gtest/gtest.h>

#include <braidlen/instance.hpp>

using namespace braidlen;

namespace {

ExperimentParams params(int N, int m, int n, int k, int l, std::uint64_t seed) {
    ExperimentParams p;
    p.N = N, p.m = m, p.n = n, p.k = k, p.l = l, p.seed = seed;
    return p;
}

} // namespace

TEST(Rng, SeedDerivationIsStable) {
    EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
    Rng a = make_rng(9), b = make_rng(9);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(a(), b());
    EXPECT_EQ(rng_algorithm, "mt19937_64+splitmix64");
}

TEST(Rng, UniformBelow) {
    Rng rng = make_rng(1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[uniform_below(rng, 7)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
    EXPECT_THROW(uniform_below(rng, 0), braid_error);
}

TEST(RandomSubgroup, TwoStrandsUseOnlySigmaOne) {
    Rng rng = make_rng(3);
    auto gens = random_subgroup(params(2, 3, 4, 1, 4, 0), rng);
    ASSERT_EQ(gens.size(), 3u);
    for (const auto& g : gens)
        for (int e : g.letters) EXPECT_EQ(std::abs(e), 1);
}

TEST(RandomSubgroup, LengthsAndRange) {
    Rng rng = make_rng(4);
    auto gens = random_subgroup(params(8, 4, 4, 1, 4, 0), rng);
    ASSERT_EQ(gens.size(), 4u);
    for (const auto& g : gens) {
        EXPECT_EQ(g.letters.size(), 10u);
        for (int e : g.letters) {
            EXPECT_GE(std::abs(e), 1);
            EXPECT_LE(std::abs(e), 7);
        }
    }
}

TEST(RandomSubgroup, SameSeedSameGenerators) {
    Rng a = make_rng(42), b = make_rng(42);
    auto p = params(8, 4, 4, 1, 4, 0);
    EXPECT_EQ(random_subgroup(p, a), random_subgroup(p, b));
}

TEST(RandomSubgroup, LetterFrequencies) {
    Rng rng = make_rng(5);
    std::map<int, int> freq;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) ++freq[random_artin_letter(rng, 8)];
    ASSERT_EQ(freq.size(), 14u);
    for (auto [letter, count] : freq) EXPECT_NEAR(count / double(draws), 1.0 / 14, 0.01) << letter;
}

TEST(RandomSequence, ReducedAndUniformish) {
    Rng rng = make_rng(6);
    std::map<int, int> freq;
    for (int t = 0; t < 2000; ++t) {
        auto s = random_reduced_sequence(rng, 10, 3);
        ASSERT_EQ(s.size(), 10u);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) ASSERT_NE(s[i + 1], s[i].inverse());
        for (auto l : s) ++freq[l.code()];
    }
    ASSERT_EQ(freq.size(), 6u);
    for (auto [c, count] : freq) EXPECT_NEAR(count / 20000.0, 1.0 / 6, 0.02);
}

TEST(RandomInstance, EmptySecret) {
    auto inst = random_instance(params(8, 2, 0, 2, 4, 1));
    ASSERT_TRUE(inst.truth.has_value());
    EXPECT_TRUE(inst.truth->empty());
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(normal_form(inst.b[i]), normal_form(*inst.W_hint[i]));
}

TEST(RandomInstance, MembershipStyle) {
    auto inst = random_instance(params(8, 2, 6, 1, 0, 2));
    ASSERT_EQ(inst.b.size(), 1u);
    EXPECT_EQ(normal_form(inst.b[0]), normal_form(expand_sequence(inst.generators, *inst.truth, 8)));
    EXPECT_FALSE(inst.P[0].has_value());
}

TEST(RandomInstance, StructureAndParameters) {
    auto p = params(8, 3, 16, 4, 4, 7);
    p.param_len = 3;
    auto inst = random_instance(p);
    EXPECT_EQ(inst.b.size(), 4u);
    EXPECT_EQ(inst.truth->size(), 16u);
    const auto x = expand_sequence(inst.generators, *inst.truth, 8);
    for (std::size_t i = 0; i < 4; ++i) {
        ASSERT_TRUE(inst.P[i].has_value());
        EXPECT_EQ(normal_form(inst.b[i]), normal_form(x.concat(*inst.W_hint[i])));
        // P_i is the leading part of W_i: P_i^{-1} W_i is a product of one letter
        EXPECT_EQ(inst.P[i]->letters.size(), 30u);
        auto rest = gnf_multiply(gnf_inverse(normal_form(*inst.P[i])), normal_form(*inst.W_hint[i]));
        bool one_letter = false;
        for (int c = 0; c < 6; ++c)
            one_letter |= rest == normal_form(expand_sequence(inst.generators, {PeelLetter::from_code(c)}, 8));
        EXPECT_TRUE(one_letter);
    }
    for (std::size_t i = 0; i + 1 < inst.truth->size(); ++i)
        EXPECT_NE((*inst.truth)[i + 1], (*inst.truth)[i].inverse());
}

TEST(RandomInstance, Deterministic) {
    auto p = params(8, 2, 16, 2, 4, 99);
    EXPECT_EQ(random_instance(p), random_instance(p));
    auto q = p;
    q.seed = 100;
    EXPECT_NE(random_instance(p), random_instance(q));
}

TEST(RandomInstance, ValidatesParameters) {
    EXPECT_THROW(random_instance(params(1, 2, 4, 1, 4, 0)), braid_error);
    EXPECT_THROW(random_instance(params(8, 0, 4, 1, 4, 0)), braid_error);
    auto p = params(8, 2, 4, 1, 4, 0);
    p.param_len = 5;
    EXPECT_THROW(random_instance(p), braid_error);
}

TEST(InstanceFile, RoundTripKeepsLengths) {
    auto p = params(8, 16, 8, 8, 4, 1234);
    p.param_len = 2;
    auto inst = random_instance(p);
    auto text = write_instance(inst);
    auto back = read_instance(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(write_instance(back), text);
    LengthValue a = 0, b = 0;
    for (const auto& w : inst.b) a += rg_length(normal_form(w));
    const auto sys = back.system();
    for (const auto& e : sys.equations()) b += rg_length(e.b);
    EXPECT_EQ(a, b);
}

TEST(InstanceFile, OptionalFields) {
    auto inst = read_instance(R"({"N": 4, "generators": [[1, 2]], "equations": [{"b": [1, 2, -3]}]})");
    EXPECT_EQ(inst.strands, 4);
    EXPECT_FALSE(inst.truth.has_value());
    EXPECT_FALSE(inst.P[0].has_value());
    EXPECT_FALSE(inst.system().has_parameters());
}

TEST(InstanceFile, RejectsMalformed) {
    EXPECT_THROW(read_instance("{"), braid_error);
    EXPECT_THROW(read_instance(R"({"N": 4})"), braid_error);
    EXPECT_THROW(read_instance(R"({"N": 4, "generators": [[5]], "equations": [{"b": []}]})"), braid_error);
    EXPECT_THROW(read_instance(R"({"N": 4, "generators": [], "equations": [{"b": []}]})"), braid_error);
    EXPECT_THROW(read_instance(R"({"N": 4, "generators": [[1]], "equations": []})"), braid_error);
    EXPECT_THROW(read_instance(R"({"N": 4, "generators": [[1]], "equations": [{"b": []}], "truth": [2]})"),
                 braid_error);
    EXPECT_THROW(load_instance("/nonexistent/instance.json"), braid_error);
}

TEST(ParameterGrid, Sizes) {
    auto grid = parameter_grid();
    EXPECT_EQ(grid.size(), 648u);
    EXPECT_EQ(grid.front().M, 2);
    EXPECT_EQ(grid[1].M, 4);
    EXPECT_EQ(grid.back().m, 8);
    EXPECT_EQ(grid.back().M, 512);
    for (const auto& p : grid) EXPECT_EQ(p.N, 8);

    GridSpec one;
    one.m = {2}, one.n = {16}, one.k = {1}, one.l = {4}, one.M = {16};
    EXPECT_EQ(parameter_grid(one).size(), 1u);

    auto sweep = strand_sweep_grid(2, 16, 8, 8, 2);
    ASSERT_EQ(sweep.size(), 17u);
    EXPECT_EQ(sweep.front().N, 8);
    EXPECT_EQ(sweep.back().N, 100);
    for (const auto& p : sweep) EXPECT_EQ(p.k, 8);
}
