#include "momnes/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace momnes::svg {

namespace {

constexpr double kWidth = 760, kHeight = 540;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(int exp10) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "1e%d", exp10);
  return buf;
}

}  // namespace

void write_loglog_chart(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax))
    throw std::runtime_error("svg chart: no positive data points");
  if (xmin == xmax) xmax = xmin * 10.0;
  if (ymin == ymax) ymax = ymin * 10.0;

  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * plot_w; };
  auto py = [&](double y) { return kTop + (ly1 - std::log10(y)) / (ly1 - ly0) * plot_h; };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // grid and ticks at powers of ten
  f << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int e = int(std::ceil(lx0)); e <= int(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    f << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  }
  for (int e = int(std::ceil(ly0)); e <= int(std::floor(ly1)); ++e) {
    const double y = py(std::pow(10.0, e));
    f << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(kLeft + plot_w) << "\" y2=\"" << num(y) << "\"/>\n";
  }
  f << "</g>\n";

  f << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (int e = int(std::ceil(lx0)); e <= int(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    f << "<text x=\"" << num(x - 10) << "\" y=\"" << num(kTop + plot_h + 16) << "\">"
      << tick_label(e) << "</text>\n";
  }
  for (int e = int(std::ceil(ly0)); e <= int(std::floor(ly1)); ++e) {
    const double y = py(std::pow(10.0, e));
    f << "<text x=\"" << num(kLeft - 38) << "\" y=\"" << num(y + 4) << "\">" << tick_label(e)
      << "</text>\n";
  }
  f << "</g>\n";

  // axes frame
  f << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
    << "\" height=\"" << num(plot_h)
    << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // series
  std::size_t ci = 0;
  for (const auto& s : series) {
    const char* color = kPalette[ci++ % (sizeof kPalette / sizeof *kPalette)];
    f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      if (!first) f << ' ';
      f << num(px(x)) << ',' << num(py(y));
      first = false;
    }
    f << "\"/>\n";
  }

  // legend
  double ly = kTop + 12;
  ci = 0;
  for (const auto& s : series) {
    const char* color = kPalette[ci++ % (sizeof kPalette / sizeof *kPalette)];
    const double lx = kLeft + plot_w - 170;
    f << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" << s.label
      << "</text>\n";
    ly += 16;
  }

  // labels
  f << "<text x=\"" << num(kLeft + plot_w / 2 - 4.0 * double(title.size()) / 2.0)
    << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#111111\">" << title
    << "</text>\n";
  f << "<text x=\"" << num(kLeft + plot_w / 2 - 40) << "\" y=\"" << num(kHeight - 14)
    << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\">" << x_label
    << "</text>\n";
  f << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2)
    << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\" transform=\"rotate(-90 16 "
    << num(kTop + plot_h / 2) << ")\">" << y_label << "</text>\n";
  f << "</svg>\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace momnes::svg
