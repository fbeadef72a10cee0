#include "kea/harness/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kea {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string format_metrics_csv(const std::vector<RunRecord>& rows) {
    std::string out = std::string(kMetricsHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.step) + "," + num(r.episode) + "," + num(r.return_mean) + "," + num(r.return_std) +
               "," + num(r.intrinsic_mean) + "," + num(r.usage_s) + "," + num(r.entropy_mean) + "," +
               num(r.loss_critic) + "," + num(r.loss_actor) + "\n";
    }
    return out;
}

void write_metrics_csv(const std::string& path, const std::vector<RunRecord>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write metrics file '" + path + "'");
    out << format_metrics_csv(rows);
    if (!out) throw std::runtime_error("failed writing metrics file '" + path + "'");
}

std::vector<RunRecord> parse_metrics_csv(const std::string& text, const std::string& origin) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != kMetricsHeader) {
        throw std::runtime_error(origin + ": unexpected metrics header");
    }
    std::vector<RunRecord> rows;
    int line_no = 1;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": malformed value '" + cell + "'");
            }
            cells.push_back(v);
        }
        if (cells.size() != 9) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected 9 columns");
        }
        RunRecord r;
        r.step = static_cast<std::uint64_t>(cells[0]);
        r.episode = cells[1];
        r.return_mean = cells[2];
        r.return_std = cells[3];
        r.intrinsic_mean = cells[4];
        r.usage_s = cells[5];
        r.entropy_mean = cells[6];
        r.loss_critic = cells[7];
        r.loss_actor = cells[8];
        rows.push_back(r);
    }
    return rows;
}

std::vector<RunRecord> read_metrics_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read metrics file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metrics_csv(ss.str(), path);
}

}  // namespace kea
