#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace multiest {

// RFC-4180: fields containing comma, quote or newline are quoted, embedded
// quotes doubled, records end in CRLF.
std::string csv_escape(const std::string& field);
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);  // shortest round-trip form

struct SvgSeries {
  std::string label;
  std::string color = "#1f6fb2";
  std::vector<double> x, y;
};

// SVG 1.1 polyline plot with axes and per-series labels.
std::string svg_plot(const std::vector<SvgSeries>& series, const std::string& title,
                     int width = 640, int height = 420);

// FNV-1a over the canonical (sorted-key) JSON dump.
std::string config_hash(const nlohmann::json& config);

nlohmann::json make_manifest(const nlohmann::json& config, int constants_version,
                             double wall_seconds);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace multiest
