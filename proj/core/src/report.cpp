#include "tscache/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "tscache/errors.hpp"

namespace tscache {

std::string format_number(double v) {
    if (v == 0.0) return "0";  // drop the sign of -0
    return fmt::format("{:.6g}", v);
}

CsvTable::CsvTable(std::string schema_name, std::vector<std::string> columns)
    : schema_("ts-cache-sim/" + std::move(schema_name) + "/v1"), columns_(std::move(columns)) {
    if (columns_.empty()) throw ParameterError("csv table needs at least one column");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw InvariantViolation(fmt::format("csv row has {} cells, expected {}", cells.size(), columns_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out = "# schema: " + schema_ + "\n";
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
}

namespace {

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

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

} // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    const double pw = W - L - R, ph = H - T - B;

    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (spec.log_y && !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (spec.log_y) ymin = std::floor(ymin), ymax = std::ceil(ymax);
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return T + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    out += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", L + pw / 2,
                       escape(spec.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                       pw, ph);

    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double x = px(xv);
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\"/>\n", x, T + ph, x,
                           T + ph + 4);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, T + ph + 16,
                           format_number(xv));
    }
    const int yticks = spec.log_y ? static_cast<int>(ymax - ymin) : 5;
    for (int i = 0; i <= yticks; ++i) {
        const double tv = ymin + (ymax - ymin) * i / yticks;
        const double y = T + ph - (tv - ymin) / (ymax - ymin) * ph;
        const std::string label = spec.log_y ? fmt::format("1e{}", static_cast<int>(std::lround(tv))) : format_number(tv);
        out += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", L, y, L + pw, y);
        out += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", L - 6, y + 4, label);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + pw / 2, H - 12,
                       escape(spec.x_label));
    out += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
                       T + ph / 2, T + ph / 2, escape(spec.y_label));

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* colour = kPalette[si % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (spec.log_y && !(s.y[i] > 0.0)) continue;
            pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        }
        if (!pts.empty()) pts.pop_back();
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, pts);
        const double ly = T + 14 + 16.0 * static_cast<double>(si);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           L + pw + 10, ly - 4, L + pw + 30, ly - 4, colour);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", L + pw + 34, ly, escape(s.name));
    }
    out += "</svg>\n";
    return out;
}

} // namespace tscache
