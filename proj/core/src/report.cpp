#include "multiest/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "multiest/errors.hpp"

namespace multiest {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(rec[i]);
    }
    out += "\r\n";
  };
  emit(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw config_error("csv_table: ragged row");
    emit(row);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Extent {
  double lo = 0.0, hi = 1.0;
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

std::string svg_plot(const std::vector<SvgSeries>& series, const std::string& title, int width,
                     int height) {
  const double ml = 56, mr = 16, mt = 32, mb = 40;
  Extent ex, ey;
  bool any = false;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw config_error("svg_plot: series length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        ex.lo = ex.hi = s.x[i];
        ey.lo = ey.hi = s.y[i];
        any = true;
      } else {
        ex.grow(s.x[i]);
        ey.grow(s.y[i]);
      }
    }
  }
  if (ex.hi == ex.lo) ex.hi = ex.lo + 1.0;
  if (ey.hi == ey.lo) ey.hi = ey.lo + 1.0;
  auto px = [&](double x) {
    return ml + (x - ex.lo) / (ex.hi - ex.lo) * (static_cast<double>(width) - ml - mr);
  };
  auto py = [&](double y) {
    return static_cast<double>(height) - mb -
           (y - ey.lo) / (ey.hi - ey.lo) * (static_cast<double>(height) - mt - mb);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
     << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << title << "</text>\n"
     << "<line x1=\"" << px(ex.lo) << "\" y1=\"" << py(ey.lo) << "\" x2=\"" << px(ex.hi)
     << "\" y2=\"" << py(ey.lo) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << px(ex.lo) << "\" y1=\"" << py(ey.lo) << "\" x2=\"" << px(ex.lo)
     << "\" y2=\"" << py(ey.hi) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << px(ex.lo) << "\" y=\"" << height - 12 << "\" font-size=\"11\">"
     << format_double(ex.lo) << "</text>\n"
     << "<text x=\"" << px(ex.hi) << "\" y=\"" << height - 12
     << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ex.hi) << "</text>\n"
     << "<text x=\"4\" y=\"" << py(ey.lo) << "\" font-size=\"11\">" << format_double(ey.lo)
     << "</text>\n"
     << "<text x=\"4\" y=\"" << py(ey.hi) + 10 << "\" font-size=\"11\">" << format_double(ey.hi)
     << "</text>\n";
  int li = 0;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) os << ' ';
      os << format_double(px(s.x[i])) << ',' << format_double(py(s.y[i]));
    }
    os << "\"/>\n";
    if (!s.label.empty()) {
      os << "<text x=\"" << width - static_cast<int>(mr) - 4 << "\" y=\"" << mt + 14 * li
         << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label
         << "</text>\n";
      ++li;
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string config_hash(const nlohmann::json& config) {
  const std::string dump = config.dump();  // nlohmann objects iterate in sorted key order
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

nlohmann::json make_manifest(const nlohmann::json& config, int constants_version,
                             double wall_seconds) {
  return nlohmann::json{{"config_hash", config_hash(config)},
                        {"constants_version", constants_version},
                        {"wall_seconds", wall_seconds}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open output file: " + path);
  os << content;
  if (!os) throw config_error("failed writing output file: " + path);
}

}  // namespace multiest
