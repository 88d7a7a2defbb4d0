#pragma once

#include "projgeom/common.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace projgeom::output {

/// 17 significant digits with a '.' decimal point (C locale).
std::string number(double v);
std::string vector_text(const Vec& v, char sep = ' ');

/// RFC 4180: CRLF line ends, fields quoted when they contain , " CR or LF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

/// Writes text to path, creating parent directories. Throws ValidationError.
void write_file(const std::string& path, const std::string& content);
std::string join_path(const std::string& dir, const std::string& name);

/// Minimal 2D SVG: scatter layers and polylines in data coordinates.
class SvgPlot {
 public:
  SvgPlot(double xmin, double xmax, double ymin, double ymax, int width = 640, int height = 480);
  void points(const std::vector<Vec>& pts, const std::string& color, double radius = 1.5);
  void polyline(const std::vector<Vec>& pts, const std::string& color, double stroke = 1.5);
  void label(double x, double y, const std::string& text);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  double xmin_, xmax_, ymin_, ymax_;
  int width_, height_;
  std::vector<std::string> body_;
};

}  // namespace projgeom::output
