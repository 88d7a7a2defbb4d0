#include "projgeom/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace projgeom::output {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vector_text(const Vec& v, char sep) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += number(v[i]);
  }
  return s;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      os_ << f;
      continue;
    }
    os_ << '"';
    for (char c : f) {
      if (c == '"') os_ << '"';
      os_ << c;
    }
    os_ << '"';
  }
  os_ << "\r\n";
}

void write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("error writing '" + path + "'");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

SvgPlot::SvgPlot(double xmin, double xmax, double ymin, double ymax, int width, int height)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width), height_(height) {}

double SvgPlot::px(double x) const { return (x - xmin_) / (xmax_ - xmin_) * width_; }
double SvgPlot::py(double y) const { return (1.0 - (y - ymin_) / (ymax_ - ymin_)) * height_; }

namespace {
std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

void SvgPlot::points(const std::vector<Vec>& pts, const std::string& color, double radius) {
  for (const Vec& p : pts) {
    body_.push_back("<circle cx=\"" + fixed(px(p[0])) + "\" cy=\"" + fixed(py(p[1])) + "\" r=\"" +
                    fixed(radius) + "\" fill=\"" + color + "\"/>");
  }
}

void SvgPlot::polyline(const std::vector<Vec>& pts, const std::string& color, double stroke) {
  std::string d;
  for (const Vec& p : pts) {
    if (!d.empty()) d += ' ';
    d += fixed(px(p[0])) + "," + fixed(py(p[1]));
  }
  body_.push_back("<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                  fixed(stroke) + "\" points=\"" + d + "\"/>");
}

void SvgPlot::label(double x, double y, const std::string& text) {
  std::string esc;
  for (char c : text) {
    if (c == '<') esc += "&lt;";
    else if (c == '>') esc += "&gt;";
    else if (c == '&') esc += "&amp;";
    else esc += c;
  }
  body_.push_back("<text x=\"" + fixed(px(x)) + "\" y=\"" + fixed(py(y)) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">" + esc + "</text>");
}

std::string SvgPlot::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
     << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const std::string& s : body_) os << s << '\n';
  os << "</svg>\n";
  return os.str();
}

}  // namespace projgeom::output
