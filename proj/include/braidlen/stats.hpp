#pragma once

/**
 * @file stats.hpp
 * @brief Logistic success model over x = log2(m, n, k, l, M): evaluation,
 *        maximum-likelihood fitting with Wald significance and backward
 *        elimination, and the memory / complexity formulas derived from it.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "braid.hpp"
#include "instance.hpp"

namespace braidlen {

inline constexpr std::size_t predictor_count = 5;
inline constexpr std::array<std::string_view, predictor_count> predictor_names{"m", "n", "k", "l", "M"};

using Predictors = std::array<double, predictor_count>;

inline Predictors predictors(double m, double n, double k, double l, double M) {
    if (!(m > 0 && n > 0 && k > 0 && l > 0 && M > 0)) throw braid_error("model parameters must be positive");
    return {std::log2(m), std::log2(n), std::log2(k), std::log2(l), std::log2(M)};
}

inline Predictors predictors(const ExperimentParams& p) { return predictors(p.m, p.n, p.k, p.l, p.M); }

struct LogisticModel {
    double intercept = 0;
    Predictors coef{};
    // index 0 is the intercept, 1..5 the predictors; NaN when unknown
    std::array<double, predictor_count + 1> std_error{};
    std::array<double, predictor_count + 1> p_value{};
    std::array<bool, predictor_count> included{true, true, true, true, true};
    std::size_t observations = 0;
    int iterations = 0;
    double log_likelihood = 0;

    [[nodiscard]] double logit(const Predictors& x) const {
        double L = intercept;
        for (std::size_t j = 0; j < predictor_count; ++j)
            if (included[j]) L += coef[j] * x[j];
        return L;
    }
};

inline double logistic(double L) { return L >= 0 ? 1 / (1 + std::exp(-L)) : std::exp(L) / (1 + std::exp(L)); }

/// Built-in model used when no fitted model is given; l is left out (p = 0.096).
inline LogisticModel reference_model() {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    LogisticModel model;
    model.intercept = 7.0814;
    model.coef = {-1.7165, -0.7547, 0.1094, 0.0, 0.5437};
    model.included = {true, true, true, false, true};
    model.std_error.fill(nan);
    model.p_value.fill(nan);
    model.p_value[4] = 0.096;
    return model;
}

inline double predict_success(const LogisticModel& model, double m, double n, double k, double l, double M) {
    return logistic(model.logit(predictors(m, n, k, l, M)));
}

inline double predict_success(const LogisticModel& model, const ExperimentParams& p) {
    return logistic(model.logit(predictors(p)));
}

/// Beam width at which the model predicts p = 1/2, before flooring.
inline double memory_for_even_odds(const LogisticModel& model, double m, double n, double k, double l = 1) {
    if (!model.included[4] || !(model.coef[4] > 0)) throw braid_error("model has no positive M coefficient");
    auto x = predictors(m, n, k, l, 1);
    const double rest = model.logit(x); // x_5 = 0 here
    return std::exp2(-rest / model.coef[4]);
}

/// memory_for_even_odds floored at 1.
inline double required_memory(const LogisticModel& model, double m, double n, double k, double l = 1) {
    return std::max(1.0, memory_for_even_odds(model, m, n, k, l));
}

/// Published closed form 0.00012 m^3.16 n^1.39 / k^0.2, floored at 1.
inline double required_memory(double m, double n, double k) {
    if (!(m > 0 && n > 0 && k > 0)) throw braid_error("model parameters must be positive");
    return std::max(1.0, 0.00012 * std::pow(m, 3.16) * std::pow(n, 1.39) / std::pow(k, 0.2));
}

/// Factor by which M must grow to keep p fixed when predictor j doubles.
inline double memory_doubling_factor(const LogisticModel& model, std::size_t j) {
    if (j >= predictor_count) throw braid_error("predictor index out of range");
    if (!model.included[4] || !(model.coef[4] > 0)) throw braid_error("model has no positive M coefficient");
    return model.included[j] ? std::exp2(-model.coef[j] / model.coef[4]) : 1.0;
}

struct OperationEstimate {
    std::uint64_t multiplications = 0;
    std::uint64_t length_evaluations = 0;
};

/// sum_{s=1..n} kM(s + 2m) multiplications and 2kmnM length evaluations.
inline OperationEstimate multiplication_count(std::uint64_t n, std::uint64_t m, std::uint64_t k, std::uint64_t M) {
    return {n * (n + 4 * m + 1) * k * M / 2, 2 * k * m * n * M};
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

struct FitRow {
    Predictors x{};
    bool success = false;
};

inline FitRow fit_row(const ExperimentParams& p, bool success) { return {predictors(p), success}; }

struct FitOptions {
    double alpha = 0.05;
    int max_iterations = 50;
    double tolerance = 1e-8;
    bool eliminate = true;
};

namespace detail {

inline double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // log(1 + e^eta) without overflow
        const double e = eta[i];
        const double softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y[i] * e - softplus;
    }
    return ll;
}

/// IRLS on the columns flagged in `included` (intercept always present).
inline LogisticModel irls(const std::vector<FitRow>& rows, const std::array<bool, predictor_count>& included,
                          const FitOptions& opt) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < predictor_count; ++j)
        if (included[j]) cols.push_back(j);
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(cols.size() + 1);

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        X(i, 0) = 1;
        for (std::size_t c = 0; c < cols.size(); ++c) X(i, static_cast<Eigen::Index>(c + 1)) = r.x[cols[c]];
        y[i] = r.success ? 1 : 0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw braid_error("design matrix is rank deficient on the included predictors");

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = X * beta;
    double ll = log_likelihood(eta, y);
    bool converged = false;
    int it = 0;
    Eigen::MatrixXd info;
    while (it < opt.max_iterations) {
        ++it;
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu[i] = logistic(eta[i]);
            w[i] = std::max(mu[i] * (1 - mu[i]), 1e-12);
        }
        info = X.transpose() * w.asDiagonal() * X;
        Eigen::VectorXd step = info.ldlt().solve(X.transpose() * (y - mu));
        beta += step;
        eta = X * beta;
        const double next = log_likelihood(eta, y);
        const double change = std::abs(next - ll) / std::max(std::abs(ll), 1e-300);
        ll = next;
        if (change < opt.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged || eta.cwiseAbs().maxCoeff() > 30)
        throw braid_error("logistic fit does not converge: the outcomes are (quasi-)separated");

    {
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = logistic(eta[i]);
            w[i] = mu * (1 - mu);
        }
        info = X.transpose() * w.asDiagonal() * X;
    }
    const Eigen::MatrixXd cov = info.inverse();

    LogisticModel model;
    model.included = included;
    model.observations = rows.size();
    model.iterations = it;
    model.log_likelihood = ll;
    model.std_error.fill(std::numeric_limits<double>::quiet_NaN());
    model.p_value.fill(std::numeric_limits<double>::quiet_NaN());
    auto wald = [&](Eigen::Index c, std::size_t slot) {
        const double se = std::sqrt(cov(c, c));
        model.std_error[slot] = se;
        model.p_value[slot] = std::erfc(std::abs(beta[c] / se) / std::sqrt(2.0));
    };
    model.intercept = beta[0];
    wald(0, 0);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        model.coef[cols[c]] = beta[static_cast<Eigen::Index>(c + 1)];
        wald(static_cast<Eigen::Index>(c + 1), cols[c] + 1);
    }
    return model;
}

} // namespace detail

/// Maximum-likelihood logistic fit; with opt.eliminate, the least significant
/// predictor above opt.alpha is dropped and the model refit until all
/// remaining ones are significant. Predictors that are constant over the data
/// are left out from the start.
inline LogisticModel fit_logistic(const std::vector<FitRow>& rows, const FitOptions& opt = {}) {
    std::size_t successes = 0;
    for (const auto& r : rows) successes += r.success;
    if (rows.empty() || successes == 0 || successes == rows.size())
        throw braid_error("logistic fit needs both outcomes: the data are separated");

    std::array<bool, predictor_count> included{true, true, true, true, true};
    // dropped predictors keep the coefficient statistics of the fit that dropped them
    LogisticModel dropped;
    // a parameter held fixed across the data cannot be estimated
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < predictor_count; ++j) {
        const double first = rows.front().x[j];
        if (std::all_of(rows.begin(), rows.end(), [&](const FitRow& r) { return r.x[j] == first; })) {
            included[j] = false;
            dropped.std_error[j + 1] = nan;
            dropped.p_value[j + 1] = nan;
        }
    }
    for (;;) {
        LogisticModel model = detail::irls(rows, included, opt);
        if (!opt.eliminate) {
            for (std::size_t j = 0; j < predictor_count; ++j)
                if (!included[j]) model.std_error[j + 1] = model.p_value[j + 1] = nan;
            return model;
        }
        std::size_t worst = predictor_count;
        for (std::size_t j = 0; j < predictor_count; ++j)
            if (included[j] && model.p_value[j + 1] > opt.alpha &&
                (worst == predictor_count || model.p_value[j + 1] > model.p_value[worst + 1]))
                worst = j;
        if (worst == predictor_count) {
            for (std::size_t j = 0; j < predictor_count; ++j)
                if (!included[j]) {
                    model.std_error[j + 1] = dropped.std_error[j + 1];
                    model.p_value[j + 1] = dropped.p_value[j + 1];
                }
            return model;
        }
        included[worst] = false;
        dropped.std_error[worst + 1] = model.std_error[worst + 1];
        dropped.p_value[worst + 1] = model.p_value[worst + 1];
    }
}

/// Bernoulli outcomes drawn from `model` for every grid cell, `trials` each.
inline std::vector<FitRow> simulate_outcomes(const LogisticModel& model, const std::vector<ExperimentParams>& cells,
                                             int trials, Rng& rng) {
    std::vector<FitRow> rows;
    rows.reserve(cells.size() * static_cast<std::size_t>(trials));
    for (const auto& cell : cells) {
        const auto x = predictors(cell);
        const double p = logistic(model.logit(x));
        for (int t = 0; t < trials; ++t) {
            // 53 random bits as a uniform double in [0, 1)
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            rows.push_back({x, u < p});
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

inline std::string model_summary(const LogisticModel& model) {
    std::ostringstream out;
    auto num = [](double v, int prec) {
        if (std::isnan(v)) return std::string("-");
        std::ostringstream s;
        s << std::setprecision(prec) << std::fixed << v;
        return s.str();
    };
    out << "term        coef        se      p_value  included\n";
    auto line = [&](std::string name, double c, double se, double p, bool inc) {
        out << std::left << std::setw(10) << name << std::right << std::setw(9) << num(c, 4) << std::setw(10)
            << num(se, 4) << std::setw(11) << num(p, 4) << "  " << (inc ? "yes" : "no") << "\n";
    };
    line("intercept", model.intercept, model.std_error[0], model.p_value[0], true);
    for (std::size_t j = 0; j < predictor_count; ++j)
        line("log2(" + std::string(predictor_names[j]) + ")", model.coef[j], model.std_error[j + 1],
             model.p_value[j + 1], model.included[j]);
    if (model.observations) {
        out << "observations " << model.observations << ", iterations " << model.iterations << ", log-likelihood "
            << num(model.log_likelihood, 3) << "\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const LogisticModel& model) {
    auto opt = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    nlohmann::json j;
    j["intercept"] = {{"coef", model.intercept}, {"se", opt(model.std_error[0])}, {"p", opt(model.p_value[0])}};
    for (std::size_t i = 0; i < predictor_count; ++i) {
        j["log2_" + std::string(predictor_names[i])] = {{"coef", model.coef[i]},
                                                         {"se", opt(model.std_error[i + 1])},
                                                         {"p", opt(model.p_value[i + 1])},
                                                         {"included", model.included[i]}};
    }
    j["observations"] = model.observations;
    return j;
}

inline LogisticModel model_from_json(const nlohmann::json& j) {
    try {
        auto get = [](const nlohmann::json& v) {
            return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        };
        LogisticModel model;
        const auto& ic = j.at("intercept");
        model.intercept = ic.at("coef").get<double>();
        model.std_error[0] = ic.contains("se") ? get(ic["se"]) : std::numeric_limits<double>::quiet_NaN();
        model.p_value[0] = ic.contains("p") ? get(ic["p"]) : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < predictor_count; ++i) {
            const auto& t = j.at("log2_" + std::string(predictor_names[i]));
            model.coef[i] = t.at("coef").get<double>();
            model.std_error[i + 1] = t.contains("se") ? get(t["se"]) : std::numeric_limits<double>::quiet_NaN();
            model.p_value[i + 1] = t.contains("p") ? get(t["p"]) : std::numeric_limits<double>::quiet_NaN();
            model.included[i] = t.value("included", true);
        }
        model.observations = j.value("observations", std::size_t{0});
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw braid_error(std::string("malformed model file: ") + e.what());
    }
}

} // namespace braidlen
