#pragma once

#include <string>
#include <utility>
#include <vector>

namespace momnes::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), positive values only
};

// Static log-log line chart. Output depends only on the inputs (no
// timestamps), so identical data gives byte-identical files.
void write_loglog_chart(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series);

}  // namespace momnes::svg
