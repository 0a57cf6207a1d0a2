#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace atomiv::cli {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_number(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *x);
  return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("csv row width does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_field(fields[i]);
  }
  text_ += "\r\n";
}

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string fmt(const char* pattern, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, x);
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

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Axis {
  double lo;
  double hi;
  double step;
};

Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::fabs(lo);
    lo -= pad;
    hi += pad;
  }
  const double step = nice_step(hi - lo, 6);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i] || !std::isfinite(*s.y[i])) continue;
      const double e = i < s.err.size() && s.err[i] ? *s.err[i] : 0.0;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, *s.y[i] - e);
      y_hi = std::max(y_hi, *s.y[i] + e);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = x_hi = y_lo = y_hi = 0.0;
  const Axis ax = make_axis(x_lo, x_hi);
  const Axis ay = make_axis(y_lo, y_hi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return kTop + (ay.hi - y) / (ay.hi - ay.lo) * ph; };
  auto pt = [&](double x, double y) { return fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y)); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt("%.0f", kWidth) +
         "\" height=\"" + fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";

  // Axes, grid lines and tick labels.
  svg += "<g stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
  const int nx = static_cast<int>(std::lround((ax.hi - ax.lo) / ax.step));
  const int ny = static_cast<int>(std::lround((ay.hi - ay.lo) / ay.step));
  for (int i = 0; i <= nx; ++i) {
    const double x = px(ax.lo + i * ax.step);
    svg += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", x) +
           "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
  }
  for (int i = 0; i <= ny; ++i) {
    const double y = py(ay.lo + i * ay.step);
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", kLeft + pw) +
           "\" y2=\"" + fmt("%.2f", y) + "\"/>\n";
  }
  svg += "</g>\n";
  svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" + fmt("%.2f", pw) +
         "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= nx; ++i) {
    const double v = ax.lo + i * ax.step;
    svg += "<text x=\"" + fmt("%.2f", px(v)) + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt("%.4g", std::fabs(v) < 1e-12 * ax.step ? 0.0 : v) + "</text>\n";
  }
  for (int i = 0; i <= ny; ++i) {
    const double v = ay.lo + i * ay.step;
    svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", py(v) + 4) + "\" text-anchor=\"end\">" +
           fmt("%.4g", std::fabs(v) < 1e-12 * ay.step ? 0.0 : v) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  svg += "<text transform=\"translate(18," + fmt("%.2f", kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";

  for (const auto& s : series) {
    const std::string color = escape(s.color);
    if (s.markers) {
      svg += "<g fill=\"" + color + "\" stroke=\"" + color + "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!s.y[i] || !std::isfinite(*s.y[i])) continue;
        if (i < s.err.size() && s.err[i]) {
          svg += "<line x1=\"" + fmt("%.2f", px(s.x[i])) + "\" y1=\"" + fmt("%.2f", py(*s.y[i] - *s.err[i])) +
                 "\" x2=\"" + fmt("%.2f", px(s.x[i])) + "\" y2=\"" + fmt("%.2f", py(*s.y[i] + *s.err[i])) + "\"/>\n";
        }
        svg += "<circle cx=\"" + fmt("%.2f", px(s.x[i])) + "\" cy=\"" + fmt("%.2f", py(*s.y[i])) + "\" r=\"3\"/>\n";
      }
      svg += "</g>\n";
      continue;
    }
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      }
      points.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i] || !std::isfinite(*s.y[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += pt(s.x[i], *s.y[i]);
    }
    flush();
  }

  double ly = kTop + 10;
  for (const auto& s : series) {
    const double lx = kLeft + pw + 15;
    const std::string color = escape(s.color);
    if (s.markers) {
      svg += "<circle cx=\"" + fmt("%.2f", lx + 12) + "\" cy=\"" + fmt("%.2f", ly) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    } else {
      svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" + fmt("%.2f", lx + 24) +
             "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    svg += "<text x=\"" + fmt("%.2f", lx + 30) + "\" y=\"" + fmt("%.2f", ly + 4) + "\">" + escape(s.name) +
           "</text>\n";
    ly += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace atomiv::cli
