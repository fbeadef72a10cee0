#include "kea/harness/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kea/core/error.hpp"
#include "kea/env/gridnav.hpp"

namespace kea {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

// Dark blue to yellow; t in [0, 1].
std::string ramp(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
    }};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - static_cast<double>(i);
    char buf[8];
    std::array<int, 3> rgb{};
    for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

}  // namespace

std::string render_plot(const std::vector<RunRecord>& rows, const std::string& title) {
    if (rows.empty()) throw std::runtime_error("plot: no data rows");

    double x0 = static_cast<double>(rows.front().step);
    double x1 = static_cast<double>(rows.back().step);
    double y0 = rows.front().return_mean - rows.front().return_std;
    double y1 = rows.front().return_mean + rows.front().return_std;
    for (const auto& r : rows) {
        x0 = std::min(x0, static_cast<double>(r.step));
        x1 = std::max(x1, static_cast<double>(r.step));
        y0 = std::min(y0, r.return_mean - r.return_std);
        y1 = std::max(y1, r.return_mean + r.return_std);
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream line;
    std::ostringstream upper;
    std::ostringstream lower;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = px(static_cast<double>(rows[i].step));
        line << (i ? " " : "") << num(x) << ',' << num(py(rows[i].return_mean));
        upper << (i ? " " : "") << num(x) << ',' << num(py(rows[i].return_mean + rows[i].return_std));
    }
    for (std::size_t i = rows.size(); i-- > 0;) {
        lower << ' ' << num(px(static_cast<double>(rows[i].step))) << ','
              << num(py(rows[i].return_mean - rows[i].return_std));
    }

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    if (!title.empty()) {
        s << "<text x=\"" << num(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
          << "</text>\n";
    }
    s << "<polygon class=\"band\" points=\"" << upper.str() << lower.str()
      << "\" fill=\"#1f77b4\" fill-opacity=\"0.25\" stroke=\"none\"/>\n"
      << "<polyline class=\"mean\" points=\"" << line.str() << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
      << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << kTop + ph << "\" stroke=\"black\"/>\n"
      << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
    for (double x : {x0, x1}) {
        s << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\" font-size=\"11\">"
          << num(x) << "</text>\n";
    }
    for (double y : {y0, y1}) {
        s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
          << num(y) << "</text>\n";
    }
    s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\">step</text>\n"
      << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << num(kTop + ph / 2) << ")\">mean episodic return</text>\n"
      << "</svg>\n";
    return s.str();
}

std::string emit_plot(const std::string& csv_path, const std::string& svg_path) {
    const auto rows = read_metrics_csv(csv_path);
    std::string out = svg_path;
    if (out.empty()) out = std::filesystem::path(csv_path).replace_extension(".svg").string();
    write_file(out, render_plot(rows, std::filesystem::path(csv_path).filename().string()));
    return out;
}

namespace {

std::string render_grid(const GridNavConfig& g, const std::vector<double>& values, const std::string& title) {
    constexpr int kCell = 12;
    constexpr int kPad = 24;
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (g.in_obstacle({x, y})) continue;
            const double v = values[static_cast<std::size_t>(y * g.width + x)];
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    const int w = g.width * kCell + 2 * kPad;
    const int h = g.height * kCell + 2 * kPad + 16;
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' '
      << h << "\">\n"
      << "<text x=\"" << w / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << " (min "
      << num(lo) << ", max " << num(hi) << ")</text>\n";
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (g.in_obstacle({x, y})) continue;
            const double v = values[static_cast<std::size_t>(y * g.width + x)];
            const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
            s << "<rect class=\"cell\" x=\"" << kPad + x * kCell << "\" y=\"" << kPad + y * kCell << "\" width=\"" << kCell
              << "\" height=\"" << kCell << "\" fill=\"" << ramp(t) << "\"><title>(" << x << "," << y << ") " << num(v)
              << "</title></rect>\n";
        }
    }
    s << "<rect class=\"mask\" x=\"" << kPad + g.obstacle_x0() * kCell << "\" y=\"" << kPad + g.obstacle_y0() * kCell
      << "\" width=\"" << g.obstacle_width * kCell << "\" height=\"" << g.obstacle_height * kCell
      << "\" fill=\"#808080\"/>\n"
      << "</svg>\n";
    return s.str();
}

}  // namespace

HeatmapSvgs render_heatmaps(const Learner& agent, const IntrinsicModel& intrinsic, const Environment& env) {
    const auto* grid = dynamic_cast<const GridNav*>(&env);
    require(grid != nullptr, "heatmap: environment '" + env.name() + "' has no enumerable 2D cell layout");
    const GridNavConfig& g = grid->config();
    std::vector<double> reward(static_cast<std::size_t>(g.width * g.height), 0.0);
    std::vector<double> entropy(reward.size(), 0.0);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (g.in_obstacle({x, y})) continue;
            const auto obs = grid->observe({x, y});
            const auto i = static_cast<std::size_t>(y * g.width + x);
            reward[i] = intrinsic.state_reward(obs);
            entropy[i] = agent.policy_entropy(obs);
        }
    }
    return {render_grid(g, reward, "intrinsic reward"), render_grid(g, entropy, "policy entropy")};
}

void emit_heatmaps(const Learner& agent, const IntrinsicModel& intrinsic, const Environment& env,
                   const std::string& out_dir) {
    const HeatmapSvgs svgs = render_heatmaps(agent, intrinsic, env);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + out_dir + "': " + ec.message());
    write_file((std::filesystem::path(out_dir) / "intrinsic.svg").string(), svgs.intrinsic);
    write_file((std::filesystem::path(out_dir) / "entropy.svg").string(), svgs.entropy);
}

}  // namespace kea
