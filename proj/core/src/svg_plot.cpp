#include "mbe/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mbe/error.hpp"

namespace mbe {

namespace {

constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  double map(double v) const { return log ? std::log10(v) : v; }
  double unit(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis make_axis(bool log, double lo, double hi) {
  Axis a{log, log ? std::log10(lo) : lo, log ? std::log10(hi) : hi};
  if (!(a.hi > a.lo)) {
    const double pad = a.lo == 0.0 ? 1.0 : 0.05 * std::abs(a.lo);
    a.lo -= pad;
    a.hi += pad;
  }
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (double e = std::ceil(a.lo); e <= a.hi; e += 1.0) out.push_back(std::pow(10.0, e));
    if (out.size() < 2) out = {std::pow(10.0, a.lo), std::pow(10.0, a.hi)};
    return out;
  }
  for (int i = 0; i <= 4; ++i) out.push_back(a.lo + (a.hi - a.lo) * i / 4.0);
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& o) {
  const double left = 70.0;
  const double right = 20.0;
  const double top = 36.0;
  const double bottom = 48.0;
  const double pw = o.width - left - right;
  const double ph = o.height - top - bottom;

  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = xlo;
  double yhi = -xlo;
  auto keep = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!o.log_x || x > 0.0) && (!o.log_y || y > 0.0);
  };
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidArgument("plot series " + s.name + " is ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!keep(s.x[i], s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!std::isfinite(xlo)) {
    xlo = ylo = o.log_x ? 1.0 : 0.0;
    xhi = yhi = o.log_x ? 10.0 : 1.0;
  }
  const Axis ax = make_axis(o.log_x, xlo, xhi);
  const Axis ay = make_axis(o.log_y, ylo, yhi);
  auto px = [&](double x) { return left + ax.unit(x) * pw; };
  auto py = [&](double y) { return top + (1.0 - ay.unit(y)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\""
     << o.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << o.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(o.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(ax)) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(t) << "\" y2=\""
       << top + ph + 4 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << fmt(t) << "</text>\n";
  }
  for (double t : ticks(ay)) {
    os << "<line x1=\"" << left - 4 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\""
       << py(t) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << fmt(t)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << o.height - 10
     << "\" text-anchor=\"middle\">" << escape(o.x_label) << (o.log_x ? " (log)" : "")
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << top + ph / 2 << ")\">" << escape(o.y_label) << (o.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % kColors.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (keep(s.x[i], s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << left + 8 << "\" y=\"" << top + 14 + 13 * k << "\" fill=\"" << color
       << "\">" << escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
               const PlotOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << render_svg(series, options);
}

std::vector<std::filesystem::path> write_track_plots(const NormSeries& norms,
                                                     const std::filesystem::path& dir,
                                                     const std::set<std::string>& log_log) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& name : norms.names()) {
    PlotOptions o;
    o.title = name;
    o.y_label = name;
    o.log_x = o.log_y = log_log.count(name) > 0;
    const auto path = dir / (name + ".svg");
    write_svg(path, {{name, norms.times(), norms.column(name)}}, o);
    written.push_back(path);
  }
  return written;
}

}  // namespace mbe
