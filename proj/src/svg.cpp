#include "wwl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wwl/common.hpp"

namespace wwl {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kColors[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8e5aa3",
                         "#c98a00", "#4a4a4a"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label,
                 bool log_x, bool log_y)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      log_x_(log_x),
      log_y_(log_y) {}

void SvgPlot::add_series(const std::string& name,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys, bool line) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("series coordinate length mismatch");
  series_.push_back({name, xs, ys, line});
}

void SvgPlot::write(const std::string& path) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto tx = [this](double v) { return log_x_ ? std::log10(v) : v; };
  auto ty = [this](double v) { return log_y_ ? std::log10(v) : v; };
  for (const auto& s : series_)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (log_x_ && !(s.xs[i] > 0.0)) continue;
      if (log_y_ && !(s.ys[i] > 0.0)) continue;
      xmin = std::min(xmin, tx(s.xs[i]));
      xmax = std::max(xmax, tx(s.xs[i]));
      ymin = std::min(ymin, ty(s.ys[i]));
      ymax = std::max(ymax, ty(s.ys[i]));
    }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymin <= ymax)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto px = [&](double v) {
    return kLeft + (tx(v) - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double v) {
    return kHeight - kBottom -
           (ty(v) - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
  };

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write plot: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title_
      << "</text>\n";

  // Axes frame.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Decade (or linear) ticks.
  auto emit_ticks = [&](bool horizontal) {
    const double lo = horizontal ? xmin : ymin;
    const double hi = horizontal ? xmax : ymax;
    const bool logscale = horizontal ? log_x_ : log_y_;
    std::vector<double> ticks;
    if (logscale) {
      for (int d = static_cast<int>(std::floor(lo));
           d <= static_cast<int>(std::ceil(hi)); ++d)
        if (d >= lo - 1e-9 && d <= hi + 1e-9) ticks.push_back(d);
      if (ticks.size() < 2) ticks = {lo, hi};
    } else {
      for (int k = 0; k <= 5; ++k) ticks.push_back(lo + (hi - lo) * k / 5.0);
    }
    for (double t : ticks) {
      const double label = logscale ? std::pow(10.0, t) : t;
      if (horizontal) {
        const double x =
            kLeft + (t - lo) / (hi - lo) * (kWidth - kLeft - kRight);
        out << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom
            << "\" x2=\"" << x << "\" y2=\"" << kHeight - kBottom + 5
            << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(label) << "</text>\n";
      } else {
        const double y = kHeight - kBottom -
                         (t - lo) / (hi - lo) * (kHeight - kTop - kBottom);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\""
            << kLeft << "\" y2=\"" << y << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(label) << "</text>\n";
      }
    }
  };
  emit_ticks(true);
  emit_ticks(false);

  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << x_label_ << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 16 " << kHeight / 2 << ")\">"
      << y_label_ << "</text>\n";

  for (std::size_t si = 0; si < series_.size(); ++si) {
    const auto& s = series_[si];
    const char* color = kColors[si % 6];
    if (s.line && s.xs.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if ((log_x_ && !(s.xs[i] > 0.0)) || (log_y_ && !(s.ys[i] > 0.0)))
          continue;
        out << fmt(px(s.xs[i])) << "," << fmt(py(s.ys[i])) << " ";
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if ((log_x_ && !(s.xs[i] > 0.0)) || (log_y_ && !(s.ys[i] > 0.0)))
        continue;
      out << "<circle cx=\"" << fmt(px(s.xs[i])) << "\" cy=\""
          << fmt(py(s.ys[i])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    out << "<text x=\"" << kWidth - kRight - 8 << "\" y=\""
        << kTop + 16 + 16 * static_cast<double>(si)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << color << "\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace wwl
