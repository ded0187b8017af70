#include "qst/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qst/version.hpp"

namespace qst {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::vector<std::pair<std::string, std::string>> common_metadata(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("qst_version", std::string(version_string));
    meta.emplace_back("written_utc", timestamp());
    for (auto& [key, value] : config_echo(config)) meta.emplace_back(key, value);
    return meta;
}

}  // namespace

ResultTable to_table(const SweepResult& result) {
    ResultTable table;
    table.metadata = common_metadata(result.provenance);
    table.metadata.emplace_back("sweep_kind", to_string(result.kind));
    table.metadata.emplace_back("rows", std::to_string(result.rows.size()));
    table.metadata.emplace_back("min_fidelity", fmt(result.min_fidelity));
    table.metadata.emplace_back("mean_fidelity", fmt(result.mean_fidelity));
    table.metadata.emplace_back("max_fidelity", fmt(result.max_fidelity));
    for (size_t i = 0; i < result.notes.size(); ++i)
        table.metadata.emplace_back("note" + std::to_string(i), result.notes[i]);
    table.columns = result.columns;
    table.rows.reserve(result.rows.size());
    for (const auto& r : result.rows)
        table.rows.push_back({r.x1, r.x2, r.fidelity, r.lambda_ratio, r.t1_ns, r.t2_ns,
                              r.peak_photon, r.min_eigenvalue, r.max_trace_error});
    return table;
}

ResultTable to_table(const TransferResult& result, const RunConfig& config) {
    ResultTable table;
    table.metadata = common_metadata(config);
    table.metadata.emplace_back("sweep_kind", "transfer");
    table.columns = {"fidelity",    "lambda1_mhz",    "lambda2_mhz", "t1_ns",
                     "t2_ns",       "q_a",            "q_b",         "peak_photon",
                     "min_eigenvalue", "max_trace_error"};
    table.rows.push_back({result.fidelity, angular_to_mhz(result.schedule.lambda1),
                          angular_to_mhz(result.schedule.lambda2), result.schedule.t1,
                          result.schedule.t2, result.q_a, result.q_b, result.peak_photon,
                          std::min(result.stage1.min_eigenvalue(), result.stage2.min_eigenvalue()),
                          std::max(result.stage1.max_trace_error(),
                                   result.stage2.max_trace_error())});
    return table;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot write " + path);
    for (const auto& [key, value] : table.metadata) out << "# " << key << " = " << value << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c)
        out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (size_t c = 0; c < row.size(); ++c) out << fmt(row[c]) << (c + 1 < row.size() ? "," : "\n");
    if (!out) throw std::runtime_error("emit_csv: write failure on " + path);
}

ResultTable parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
    ResultTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                std::string value = line.substr(eq + 1);
                auto strip = [](std::string& s) {
                    const size_t a = s.find_first_not_of(" \t");
                    const size_t b = s.find_last_not_of(" \t\r");
                    s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
                };
                strip(key);
                strip(value);
                table.metadata.emplace_back(key, value);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            table.columns = cells;
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

// Compact diverging color ramp for the heatmaps (low = dark blue, high =
// yellow), good enough to read the fidelity valleys.
std::string ramp_color(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const double r = 255.0 * std::clamp(1.8 * u - 0.4, 0.0, 1.0);
    const double g = 255.0 * std::clamp(1.4 * u, 0.0, 1.0);
    const double b = 255.0 * std::clamp(0.9 - 1.2 * u, 0.0, 1.0);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g),
                  static_cast<int>(b));
    return buf;
}

struct Frame {
    static constexpr int width = 720, height = 520;
    static constexpr int left = 80, right = 40, top = 40, bottom = 60;
    static double x(double u) { return left + u * (width - left - right); }
    static double y(double u) { return height - bottom - u * (height - top - bottom); }
};

void svg_open(std::ostream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << Frame::width
        << "\" height=\"" << Frame::height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_text(std::ostream& out, double x, double y, const std::string& s,
              const std::string& anchor = "middle", int size = 13) {
    out << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
}

void svg_axes(std::ostream& out, const std::string& x_label, const std::string& y_label) {
    out << "<line x1=\"" << Frame::x(0) << "\" y1=\"" << Frame::y(0) << "\" x2=\"" << Frame::x(1)
        << "\" y2=\"" << Frame::y(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << Frame::x(0) << "\" y1=\"" << Frame::y(0) << "\" x2=\"" << Frame::x(0)
        << "\" y2=\"" << Frame::y(1) << "\" stroke=\"black\"/>\n";
    svg_text(out, Frame::x(0.5), Frame::height - 15, x_label);
    out << "<text x=\"20\" y=\"" << Frame::y(0.5)
        << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 "
        << Frame::y(0.5) << ")\">" << y_label << "</text>\n";
}

std::string trim_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void emit_line_plot(const SweepResult& result, std::ostream& out) {
    std::map<double, std::vector<std::pair<double, double>>> series;  // kappa -> (D, F)
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& r : result.rows) {
        series[r.x2].emplace_back(r.x1, r.fidelity);
        x_min = std::min(x_min, r.x1);
        x_max = std::max(x_max, r.x1);
        y_min = std::min(y_min, r.fidelity);
        y_max = std::max(y_max, r.fidelity);
    }
    const double pad = std::max(1e-4, 0.05 * (y_max - y_min));
    y_min -= pad;
    y_max += pad;
    auto ux = [&](double v) { return Frame::x((v - x_min) / std::max(1e-300, x_max - x_min)); };
    auto uy = [&](double v) { return Frame::y((v - y_min) / std::max(1e-300, y_max - y_min)); };

    svg_open(out);
    svg_axes(out, "D", "fidelity");
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_min + (x_max - x_min) * k / 4.0;
        const double yv = y_min + (y_max - y_min) * k / 4.0;
        svg_text(out, ux(xv), Frame::y(0) + 20, trim_number(xv));
        svg_text(out, Frame::x(0) - 8, uy(yv) + 4, trim_number(yv), "end", 11);
    }
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int idx = 0;
    for (const auto& [kappa, pts] : series) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[idx % 5] << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : pts) out << ux(x) << "," << uy(y) << " ";
        out << "\"/>\n";
        svg_text(out, Frame::x(1) - 10, Frame::y(1) + 16 + 18 * idx,
                 "kappa_inv = " + trim_number(kappa) + " us", "end", 12);
        out << "<line x1=\"" << Frame::x(1) - 130 << "\" y1=\"" << Frame::y(1) + 11 + 18 * idx
            << "\" x2=\"" << Frame::x(1) - 110 << "\" y2=\"" << Frame::y(1) + 11 + 18 * idx
            << "\" stroke=\"" << colors[idx % 5] << "\" stroke-width=\"2\"/>\n";
        ++idx;
    }
    out << "</svg>\n";
}

void emit_heatmap(const SweepResult& result, std::ostream& out, const std::string& x_label,
                  const std::string& y_label) {
    std::vector<double> xs, ys;
    for (const auto& r : result.rows) {
        xs.push_back(r.x2);
        ys.push_back(r.x1);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const int nx = static_cast<int>(xs.size());
    const int ny = static_cast<int>(ys.size());
    double f_min = result.min_fidelity, f_max = result.max_fidelity;
    if (f_max - f_min < 1e-12) f_max = f_min + 1e-12;

    svg_open(out);
    svg_axes(out, x_label, y_label);
    const double cell_w = (Frame::x(1) - Frame::x(0)) / nx;
    const double cell_h = (Frame::y(0) - Frame::y(1)) / ny;
    for (const auto& r : result.rows) {
        const int ix = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), r.x2) - xs.begin());
        const int iy = static_cast<int>(std::lower_bound(ys.begin(), ys.end(), r.x1) - ys.begin());
        const double u = (r.fidelity - f_min) / (f_max - f_min);
        out << "<rect x=\"" << Frame::x(0) + ix * cell_w << "\" y=\""
            << Frame::y(0) - (iy + 1) * cell_h << "\" width=\"" << cell_w + 0.5 << "\" height=\""
            << cell_h + 0.5 << "\" fill=\"" << ramp_color(u) << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        svg_text(out, Frame::x(k / 4.0), Frame::y(0) + 20,
                 trim_number(xs.front() + (xs.back() - xs.front()) * k / 4.0));
        svg_text(out, Frame::x(0) - 8, Frame::y(k / 4.0) + 4,
                 trim_number(ys.front() + (ys.back() - ys.front()) * k / 4.0), "end", 11);
    }
    svg_text(out, Frame::x(1) - 10, Frame::y(1) + 16,
             "fidelity " + trim_number(f_min) + " .. " + trim_number(f_max), "end", 12);
    out << "</svg>\n";
}

}  // namespace

void emit_svg(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_svg: cannot write " + path);
    switch (result.kind) {
        case SweepKind::detuning: emit_line_plot(result, out); break;
        case SweepKind::state_grid: emit_heatmap(result, out, "theta", "gamma"); break;
        case SweepKind::coupling: emit_heatmap(result, out, "d", "c"); break;
        case SweepKind::convergence:
            throw std::runtime_error("emit_svg: no plot defined for the convergence study");
    }
    if (!out) throw std::runtime_error("emit_svg: write failure on " + path);
}

}  // namespace qst
