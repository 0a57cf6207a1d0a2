#pragma once

#include <optional>
#include <string>
#include <vector>

namespace atomiv::cli {

/// RFC 4180 field quoting: only fields with a comma, quote or line break are quoted.
std::string csv_field(const std::string& s);

/// 17 significant digits; empty for an undefined value.
std::string csv_number(std::optional<double> x);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<std::optional<double>> y;
  std::vector<std::optional<double>> err;  // optional symmetric error bars
  bool markers = false;                    // points instead of a polyline
};

/// A single static SVG 1.1 chart: axes with ticks, one polyline or point set
/// per series, and a legend. Gaps in y split the polyline.
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

}  // namespace atomiv::cli
