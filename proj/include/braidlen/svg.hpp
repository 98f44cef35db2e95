#pragma once

/**
 * @file svg.hpp
 * @brief Self-contained SVG line charts for experiment results and traces.
 *
 * Output depends only on the input numbers (fixed formatting, no clocks or
 * fonts), so reruns produce identical files.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "braid.hpp"
#include "experiment.hpp"
#include "stats.hpp"

namespace braidlen {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points; // sorted by x when drawn
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::optional<std::pair<double, double>> y_range;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v + 0.0);
    std::string out = buf;
    if (out.find_first_not_of("-0.") == std::string::npos) out = decimals ? "0." + std::string(decimals, '0') : "0";
    return out;
}

inline int decimals_for(double step) {
    int d = 0;
    while (d < 6 && std::abs(step * std::pow(10.0, d) - std::round(step * std::pow(10.0, d))) > 1e-6) ++d;
    return d;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

inline std::vector<double> ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) out.push_back(t);
    return out;
}

inline std::string render_panel(const Chart& chart, double ox, double oy, double w, double h) {
    const double left = 70, right = 170, top = 40, bottom = 55;
    const double pw = w - left - right, ph = h - top - bottom;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : chart.series)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
    if (xmin > xmax) throw braid_error("nothing to plot");
    if (chart.y_range) std::tie(ymin, ymax) = *chart.y_range;
    if (xmax - xmin < 1e-12) xmin -= 1, xmax += 1;
    if (ymax - ymin < 1e-12) ymin -= 1, ymax += 1;
    auto X = [&](double x) { return ox + left + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return oy + top + (1 - (y - ymin) / (ymax - ymin)) * ph; };

    std::string out;
    out += "<text x=\"" + fmt(ox + left + pw / 2) + "\" y=\"" + fmt(oy + 22) +
           "\" text-anchor=\"middle\" font-size=\"15\">" + escape(chart.title) + "</text>\n";
    out += "<rect x=\"" + fmt(ox + left) + "\" y=\"" + fmt(oy + top) + "\" width=\"" + fmt(pw) + "\" height=\"" +
           fmt(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    const auto xt = ticks(xmin, xmax), yt = ticks(ymin, ymax);
    const int xd = xt.size() > 1 ? decimals_for(xt[1] - xt[0]) : 0;
    const int yd = yt.size() > 1 ? decimals_for(yt[1] - yt[0]) : 0;
    for (double t : xt) {
        out += "<line x1=\"" + fmt(X(t)) + "\" y1=\"" + fmt(oy + top + ph) + "\" x2=\"" + fmt(X(t)) + "\" y2=\"" +
               fmt(oy + top + ph + 5) + "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + fmt(X(t)) + "\" y=\"" + fmt(oy + top + ph + 19) +
               "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(t, xd) + "</text>\n";
    }
    for (double t : yt) {
        out += "<line x1=\"" + fmt(ox + left) + "\" y1=\"" + fmt(Y(t)) + "\" x2=\"" + fmt(ox + left + pw) + "\" y2=\"" +
               fmt(Y(t)) + "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + fmt(ox + left - 8) + "\" y=\"" + fmt(Y(t) + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(t, yd) + "</text>\n";
    }
    out += "<text x=\"" + fmt(ox + left + pw / 2) + "\" y=\"" + fmt(oy + h - 12) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(chart.x_label) + "</text>\n";
    out += "<text transform=\"translate(" + fmt(ox + 18) + "," + fmt(oy + top + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" + escape(chart.y_label) + "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        auto pts = chart.series[i].points;
        std::sort(pts.begin(), pts.end());
        std::string path;
        for (auto [x, y] : pts) path += (path.empty() ? "" : " ") + fmt(X(x)) + "," + fmt(Y(y));
        out += "<polyline fill=\"none\" stroke=\"" + std::string(palette(i)) + "\" stroke-width=\"2\" points=\"" +
               path + "\"/>\n";
        for (auto [x, y] : pts)
            out += "<circle cx=\"" + fmt(X(x)) + "\" cy=\"" + fmt(Y(y)) + "\" r=\"3\" fill=\"" + palette(i) + "\"/>\n";
        const double ly = oy + top + 10 + 18.0 * static_cast<double>(i);
        out += "<line x1=\"" + fmt(ox + left + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
               fmt(ox + left + pw + 32) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + palette(i) +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(ox + left + pw + 38) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"11\">" +
               escape(chart.series[i].label) + "</text>\n";
    }
    return out;
}

} // namespace detail

/// Panels stacked vertically in one document.
inline std::string render_svg(const std::vector<Chart>& panels, double width = 720, double panel_height = 420) {
    if (panels.empty()) throw braid_error("nothing to plot");
    const double height = panel_height * static_cast<double>(panels.size());
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(width) + "\" height=\"" +
                      detail::fmt(height) + "\" viewBox=\"0 0 " + detail::fmt(width) + " " + detail::fmt(height) +
                      "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        out += detail::render_panel(panels[i], 0, panel_height * static_cast<double>(i), width, panel_height);
    out += "</svg>\n";
    return out;
}

// ---------------------------------------------------------------------------
// The three figure kinds
// ---------------------------------------------------------------------------

/// Success rate against log2(n), one curve per M; trials are pooled over the
/// remaining parameters.
inline Chart memory_curves(const std::vector<TrialRecord>& rows) {
    std::map<int, std::map<int, std::pair<double, double>>> acc; // M -> n -> (successes, trials)
    for (const auto& r : rows) {
        auto& a = acc[r.M][r.n];
        a.first += r.success;
        a.second += 1;
    }
    Chart c{"Success rate by beam width", "log2(n)", "success rate", {}, std::pair(0.0, 1.0)};
    for (const auto& [M, byn] : acc) {
        Series s{"M = " + std::to_string(M), {}};
        for (const auto& [n, a] : byn) s.points.emplace_back(std::log2(n), a.first / a.second);
        c.series.push_back(std::move(s));
    }
    if (c.series.empty()) throw braid_error("no rows to plot");
    return c;
}

/// Model predictions in the same layout as memory_curves.
inline Chart memory_curves(const LogisticModel& model, double m, double k, double l, const std::vector<int>& Ms,
                           const std::vector<int>& ns) {
    Chart c{"Predicted success by beam width (m = " + detail::tick_label(m, detail::decimals_for(m)) + ", k = " +
                detail::tick_label(k, detail::decimals_for(k)) + ")",
            "log2(n)", "predicted success", {}, std::pair(0.0, 1.0)};
    for (int M : Ms) {
        Series s{"M = " + std::to_string(M), {}};
        for (int n : ns) s.points.emplace_back(std::log2(n), predict_success(model, m, n, k, l, M));
        c.series.push_back(std::move(s));
    }
    if (c.series.empty() || ns.empty()) throw braid_error("no cells to plot");
    return c;
}

/// Rank of the true prefix and the mean score (relative to the first step)
/// per step of one run.
inline std::vector<Chart> trace_charts(const std::vector<StepTrace>& trace) {
    if (trace.empty()) throw braid_error("empty trace");
    Series rank{"rank (0 = absent)", {}};
    Series mean{"mean / first step", {}};
    const double first = trace.front().mean_score > 0 ? trace.front().mean_score : 1;
    for (std::size_t s = 0; s < trace.size(); ++s) {
        rank.points.emplace_back(static_cast<double>(s + 1), static_cast<double>(trace[s].truth_rank));
        mean.points.emplace_back(static_cast<double>(s + 1), trace[s].mean_score / first);
    }
    return {Chart{"Position of the true prefix", "step", "rank", {rank}, {}},
            Chart{"Average score", "step", "normalized mean score", {mean}, {}}};
}

/// Success rate against the strand count N.
inline Chart strand_sweep_chart(const std::vector<TrialRecord>& rows) {
    std::map<int, std::pair<double, double>> acc;
    for (const auto& r : rows) {
        acc[r.N].first += r.success;
        acc[r.N].second += 1;
    }
    Series s{"observed", {}};
    for (const auto& [N, a] : acc) s.points.emplace_back(N, a.first / a.second);
    if (s.points.empty()) throw braid_error("no rows to plot");
    return Chart{"Success rate by number of strands", "N", "success rate", {s}, std::pair(0.0, 1.0)};
}

// Trace file: one row per step.

inline constexpr std::string_view trace_header = "step,truth_rank,mean_score,beam_width,min_score,max_score";

inline std::string format_trace(const std::vector<StepTrace>& trace) {
    std::string out = std::string(trace_header) + "\n";
    for (std::size_t s = 0; s < trace.size(); ++s) {
        const auto& t = trace[s];
        const auto mm = std::minmax_element(t.scores.begin(), t.scores.end());
        char line[160];
        std::snprintf(line, sizeof line, "%zu,%zu,%.4f,%zu,%lld,%lld\n", s + 1, t.truth_rank, t.mean_score,
                      t.beam_width, t.scores.empty() ? 0LL : static_cast<long long>(*mm.first),
                      t.scores.empty() ? 0LL : static_cast<long long>(*mm.second));
        out += line;
    }
    return out;
}

inline std::vector<StepTrace> parse_trace(std::string_view text) {
    std::vector<StepTrace> out;
    bool header = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string line(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != trace_header) throw braid_error("trace schema mismatch");
            header = true;
            continue;
        }
        std::size_t step = 0, rank = 0, width = 0;
        double mean = 0;
        long long lo = 0, hi = 0;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%zu,%lld,%lld", &step, &rank, &mean, &width, &lo, &hi) != 6)
            throw braid_error("bad trace row '" + line + "'");
        out.push_back({{}, mean, rank, width});
    }
    if (!header) throw braid_error("trace schema mismatch");
    return out;
}

} // namespace braidlen
