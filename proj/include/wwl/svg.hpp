#pragma once

#include <string>
#include <vector>

namespace wwl {

/// Minimal self-contained scatter/line plot writer with optional log axes;
/// keeps report plotting independent of external tools.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label,
          bool log_x = true, bool log_y = true);

  void add_series(const std::string& name, const std::vector<double>& xs,
                  const std::vector<double>& ys, bool line = true);

  void write(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
    bool line = true;
  };
  std::string title_, x_label_, y_label_;
  bool log_x_, log_y_;
  std::vector<Series> series_;
};

}  // namespace wwl
