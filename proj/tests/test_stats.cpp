#include <gtest/gtest.h>

#include <braidlen/stats.hpp>

using namespace braidlen;

TEST(Predict, ReferenceModelExamples) {
    const auto model = reference_model();
    EXPECT_NEAR(predict_success(model, 16, 128, 8, 8, 1024), 0.668, 0.001);
    EXPECT_NEAR(predict_success(model, 2, 16, 1, 4, 16), 0.989, 0.001);
    EXPECT_NEAR(predict_success(model, 8, 32, 1, 4, 32), 0.71, 0.01);
}

TEST(Predict, ZeroModelIsEvenOdds) {
    LogisticModel zero;
    EXPECT_DOUBLE_EQ(predict_success(zero, 2, 16, 1, 4, 16), 0.5);
    EXPECT_DOUBLE_EQ(predict_success(zero, 64, 3, 7, 9, 1000), 0.5);
}

TEST(Predict, DoublingMAddsCoefficient) {
    const auto model = reference_model();
    const auto x = predictors(4, 32, 2, 4, 16);
    auto y = x;
    y[4] += 1;
    EXPECT_NEAR(model.logit(y) - model.logit(x), 0.5437, 1e-12);
    const double p = predict_success(model, 4, 32, 2, 4, 16);
    const double q = predict_success(model, 4, 32, 2, 4, 32);
    EXPECT_NEAR(q, p + p * (1 - p) * 0.5437, 0.02);
}

TEST(Predict, MonotoneInMemoryAndSize) {
    const auto model = reference_model();
    for (int M = 2; M <= 512; M *= 2)
        EXPECT_LT(predict_success(model, 4, 32, 2, 4, M), predict_success(model, 4, 32, 2, 4, 2 * M));
    for (int m = 2; m <= 16; m *= 2)
        EXPECT_GT(predict_success(model, m, 32, 2, 4, 64), predict_success(model, 2 * m, 32, 2, 4, 64));
    for (int n = 8; n <= 128; n *= 2)
        EXPECT_GT(predict_success(model, 4, n, 2, 4, 64), predict_success(model, 4, 2 * n, 2, 4, 64));
    // l is excluded
    EXPECT_DOUBLE_EQ(predict_success(model, 4, 32, 2, 4, 64), predict_success(model, 4, 32, 2, 64, 64));
    EXPECT_THROW(predict_success(model, 0, 32, 2, 4, 64), braid_error);
}

TEST(RequiredMemory, DoublingLaw) {
    const auto model = reference_model();
    EXPECT_NEAR(memory_doubling_factor(model, 0), 8.92, 0.01);
    EXPECT_NEAR(memory_for_even_odds(model, 8, 32, 1) / memory_for_even_odds(model, 4, 32, 1), 8.92, 0.01);
    EXPECT_DOUBLE_EQ(memory_doubling_factor(model, 3), 1.0);
}

TEST(RequiredMemory, FloorAtOne) {
    EXPECT_DOUBLE_EQ(required_memory(1, 1, 1), 1.0);
    EXPECT_NEAR(memory_for_even_odds(reference_model(), 1, 1, 1), 0.00012, 0.000005);
    EXPECT_DOUBLE_EQ(required_memory(reference_model(), 1, 1, 1), 1.0);
}

TEST(RequiredMemory, ClosedFormMatchesInversionOnGrid) {
    const auto model = reference_model();
    EXPECT_NEAR(required_memory(8, 32, 1) / memory_for_even_odds(model, 8, 32, 1), 1.0, 0.05);
    for (int m : {2, 4, 8})
        for (int n : {16, 32, 64})
            for (int k : {1, 2, 4, 8}) {
                const double exact = memory_for_even_odds(model, m, n, k);
                const double closed = 0.00012 * std::pow(m, 3.16) * std::pow(n, 1.39) / std::pow(k, 0.2);
                EXPECT_NEAR(closed / exact, 1.0, 0.05) << m << " " << n << " " << k;
            }
}

TEST(MultiplicationCount, Examples) {
    auto a = multiplication_count(2, 1, 1, 1);
    EXPECT_EQ(a.multiplications, 7u);
    EXPECT_EQ(a.length_evaluations, 4u);
    auto b = multiplication_count(16, 2, 1, 16);
    EXPECT_EQ(b.multiplications, 3200u);
    EXPECT_EQ(b.length_evaluations, 1024u);
    // sum form
    std::uint64_t sum = 0;
    for (std::uint64_t s = 1; s <= 16; ++s) sum += 16 * (s + 4);
    EXPECT_EQ(sum, b.multiplications);
}

TEST(Fit, SeparatedDataIsAnError) {
    std::vector<FitRow> rows;
    for (const auto& p : parameter_grid()) rows.push_back(fit_row(p, true));
    EXPECT_THROW(fit_logistic(rows), braid_error);
    EXPECT_THROW(fit_logistic({}), braid_error);

    // complete separation on M
    rows.clear();
    for (const auto& p : parameter_grid()) rows.push_back(fit_row(p, p.M >= 32));
    EXPECT_THROW(fit_logistic(rows), braid_error);
}

TEST(Fit, RankDeficiencyIsAnError) {
    // n always equals m: two identical columns
    std::vector<FitRow> rows;
    Rng rng = make_rng(1);
    for (const auto& p : parameter_grid()) {
        auto q = p;
        q.n = q.m;
        rows.push_back(fit_row(q, uniform_below(rng, 2) == 1));
    }
    EXPECT_THROW(fit_logistic(rows), braid_error);
}

TEST(Fit, ConstantPredictorIsLeftOut) {
    GridSpec g;
    g.l = {4};
    Rng rng = make_rng(2);
    auto rows = simulate_outcomes(reference_model(), parameter_grid(g), 16, rng);
    for (bool eliminate : {true, false}) {
        FitOptions opt;
        opt.eliminate = eliminate;
        auto fit = fit_logistic(rows, opt);
        EXPECT_FALSE(fit.included[3]);
        EXPECT_TRUE(std::isnan(fit.p_value[4]));
        EXPECT_TRUE(fit.included[4]);
        EXPECT_NEAR(fit.coef[4], 0.5437, 0.15);
    }
}

TEST(Fit, RecoversSyntheticCoefficients) {
    const auto truth = reference_model();
    Rng rng = make_rng(11);
    auto rows = simulate_outcomes(truth, parameter_grid(), 16, rng);
    ASSERT_EQ(rows.size(), 648u * 16u);
    auto fit = fit_logistic(rows);
    EXPECT_LE(std::abs(fit.intercept - truth.intercept), 3 * fit.std_error[0]);
    for (std::size_t j : {0u, 1u, 2u, 4u}) {
        ASSERT_TRUE(fit.included[j]);
        EXPECT_LE(std::abs(fit.coef[j] - truth.coef[j]), 3 * fit.std_error[j + 1]) << predictor_names[j];
    }
    // a dropped predictor keeps the p-value it was dropped with
    if (!fit.included[3]) {
        EXPECT_GT(fit.p_value[4], 0.05);
    }
}

TEST(Fit, IrrelevantPredictorUsuallyExcluded) {
    const auto truth = reference_model();
    int excluded = 0;
    for (int r = 0; r < 100; ++r) {
        Rng rng = make_rng(derive_seed(31, static_cast<std::uint64_t>(r)));
        auto fit = fit_logistic(simulate_outcomes(truth, parameter_grid(), 16, rng));
        excluded += !fit.included[3];
        if (!fit.included[3]) {
            EXPECT_GT(fit.p_value[4], 0.05);
        }
    }
    EXPECT_GE(excluded, 90);
}

TEST(Fit, UnpenalizedFitKeepsEverything) {
    Rng rng = make_rng(12);
    auto rows = simulate_outcomes(reference_model(), parameter_grid(), 16, rng);
    FitOptions opt;
    opt.eliminate = false;
    auto fit = fit_logistic(rows, opt);
    for (bool inc : fit.included) EXPECT_TRUE(inc);
    EXPECT_LE(fit.iterations, 50);
}

TEST(Fit, MatchesKnownOneVariableSolution) {
    // Two groups: x = 0 with 1/4 successes, x = 1 with 3/4. MLE: a = log(1/3), b = 2 log 3.
    std::vector<FitRow> rows;
    for (int i = 0; i < 400; ++i) {
        FitRow r;
        r.x = {0, 0, 0, 0, static_cast<double>(i % 2)};
        r.success = (i % 2 == 0) ? (i % 8 == 0) : (i % 8 != 1);
        rows.push_back(r);
    }
    // columns 0..3 are constant zero: fit only x_5
    std::array<bool, predictor_count> mask{false, false, false, false, true};
    auto fit = detail::irls(rows, mask, {});
    EXPECT_NEAR(fit.intercept, std::log(1.0 / 3), 1e-6);
    EXPECT_NEAR(fit.coef[4], 2 * std::log(3.0), 1e-6);
    // SE of the log odds ratio: sqrt(sum 1/cell counts)
    EXPECT_NEAR(fit.std_error[5], std::sqrt(1 / 50.0 + 1 / 150.0 + 1 / 150.0 + 1 / 50.0), 1e-6);
}

TEST(ModelFile, RoundTrip) {
    Rng rng = make_rng(13);
    auto fit = fit_logistic(simulate_outcomes(reference_model(), parameter_grid(), 4, rng));
    auto back = model_from_json(to_json(fit));
    EXPECT_DOUBLE_EQ(back.intercept, fit.intercept);
    for (std::size_t j = 0; j < predictor_count; ++j) {
        EXPECT_DOUBLE_EQ(back.coef[j], fit.coef[j]);
        EXPECT_EQ(back.included[j], fit.included[j]);
    }
    auto builtin = model_from_json(to_json(reference_model()));
    EXPECT_NEAR(predict_success(builtin, 16, 128, 8, 8, 1024), 0.668, 0.001);
    EXPECT_THROW(model_from_json(nlohmann::json::object()), braid_error);
}

TEST(ModelSummary, ListsEveryTerm) {
    auto text = model_summary(reference_model());
    for (auto name : {"intercept", "log2(m)", "log2(n)", "log2(k)", "log2(l)", "log2(M)"})
        EXPECT_NE(text.find(name), std::string::npos);
    EXPECT_NE(text.find("7.0814"), std::string::npos);
    EXPECT_NE(text.find("0.0960"), std::string::npos);
}
