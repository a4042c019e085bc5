#pragma once

#include <string>
#include <vector>

namespace tscache {

// Six significant digits, "{:.6g}".
std::string format_number(double v);

class CsvTable {
public:
    // Schema id becomes the first line: "# schema: ts-cache-sim/<name>/v1".
    CsvTable(std::string schema_name, std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::string str() const;

private:
    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
};

// Static line chart; non-positive y values are dropped on a log axis.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

} // namespace tscache
