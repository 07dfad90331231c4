#include "disg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace disg {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DisgError(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

std::string region_header(const SimplexGrid& grid, bool with_label) {
  std::string h = with_label ? "label" : "";
  for (std::size_t i = 0; i < grid.num_states(); ++i) {
    if (!h.empty()) h += ",";
    h += "pi_" + std::to_string(i);
  }
  return h + ",member";
}

std::string region_rows(const Region& region, const std::string& label) {
  const SimplexGrid& grid = *region.grid();
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!label.empty()) {
      out += label;
      out += ',';
    }
    const Belief& p = grid.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) {
      out += fmt(p[c]);
      out += ',';
    }
    out += region.contains_index(i) ? '1' : '0';
    out += '\n';
  }
  return out;
}

Region parse_region_rows(const std::vector<std::vector<std::string>>& rows, GridPtr grid,
                         std::size_t coord_offset) {
  if (rows.size() != grid->size()) {
    throw DisgError(ErrorCode::ConfigError, "region CSV row count does not match the grid");
  }
  Region region(grid);
  for (const auto& fields : rows) {
    if (fields.size() != coord_offset + grid->num_states() + 1) {
      throw DisgError(ErrorCode::ConfigError, "region CSV has a malformed row");
    }
    std::vector<double> coords(grid->num_states());
    for (std::size_t c = 0; c < coords.size(); ++c) {
      coords[c] = std::stod(fields[coord_offset + c]);
    }
    const std::size_t index = grid->nearest_index(Belief(std::move(coords)));
    const std::string& member = fields.back();
    if (member != "0" && member != "1") {
      throw DisgError(ErrorCode::ConfigError, "membership must be 0 or 1");
    }
    if (member == "1") region.set(index, true);
  }
  return region;
}

nlohmann::json region_json(const Region& region) {
  nlohmann::json j;
  j["num_states"] = region.grid()->num_states();
  j["resolution"] = region.grid()->resolution();
  j["size"] = region.count();
  j["member_indices"] = region.member_indices();
  if (region.grid()->num_states() == 2) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& [lo, hi] : contiguous_runs(region)) {
      runs.push_back({lo, hi});
    }
    j["runs"] = runs;
  }
  return j;
}

}  // namespace

std::string region_to_csv(const Region& region) {
  return region_header(*region.grid(), false) + "\n" + region_rows(region, "");
}

void write_region_csv(const std::filesystem::path& path, const Region& region) {
  write_file(path, region_to_csv(region));
}

Region parse_region_csv(const std::string& text, GridPtr grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DisgError(ErrorCode::ConfigError, "empty region CSV");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  return parse_region_rows(rows, std::move(grid), 0);
}

Region read_region_csv(const std::filesystem::path& path, GridPtr grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DisgError(ErrorCode::ConfigError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_region_csv(buffer.str(), std::move(grid));
}

std::string regions_to_stacked_csv(const std::vector<std::pair<std::string, Region>>& regions) {
  if (regions.empty()) throw DisgError(ErrorCode::InvalidArgument, "no regions");
  std::string out = region_header(*regions.front().second.grid(), true) + "\n";
  for (const auto& [label, region] : regions) {
    out += region_rows(region, label);
  }
  return out;
}

std::vector<std::pair<std::string, Region>> parse_stacked_region_csv(const std::string& text,
                                                                     GridPtr grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DisgError(ErrorCode::ConfigError, "empty region CSV");
  std::vector<std::pair<std::string, Region>> out;
  std::vector<std::vector<std::string>> rows;
  std::string current;
  auto flush = [&]() {
    if (rows.empty()) return;
    out.emplace_back(current, parse_region_rows(rows, grid, 1));
    rows.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.empty()) continue;
    if (fields.front() != current && !rows.empty()) flush();
    current = fields.front();
    rows.push_back(std::move(fields));
  }
  flush();
  return out;
}

std::string value_table_to_csv(const ValueTable& table) {
  std::string out = [&] {
    std::string h;
    for (std::size_t i = 0; i < table.grid->num_states(); ++i) {
      if (!h.empty()) h += ",";
      h += "pi_" + std::to_string(i);
    }
    return h + ",value\n";
  }();
  for (std::size_t i = 0; i < table.grid->size(); ++i) {
    const Belief& p = table.grid->point(i);
    for (std::size_t c = 0; c < p.size(); ++c) {
      out += fmt(p[c]);
      out += ',';
    }
    out += fmt(table.values[i]);
    out += '\n';
  }
  return out;
}

void write_value_table_csv(const std::filesystem::path& path, const ValueTable& table) {
  write_file(path, value_table_to_csv(table));
}

std::string trajectory_to_csv(const TrajectoryRecord& record) {
  if (record.steps.empty()) throw DisgError(ErrorCode::InvalidArgument, "empty trajectory");
  const std::size_t d = record.steps.front().beliefs[0].size();
  std::string out = "t,state,obs1,obs2,action1,action2,signal1,signal2,flag";
  for (int n : {1, 2}) {
    for (std::size_t c = 0; c < d; ++c) {
      out += ",belief" + std::to_string(n) + "_" + std::to_string(c);
    }
  }
  out += ",reward1,reward2\n";
  auto signal_code = [](const Signal& z) { return z.is_epsilon() ? -1 : z.obs_index(); };
  for (std::size_t t = 0; t < record.steps.size(); ++t) {
    const TrajectoryStep& s = record.steps[t];
    out += std::to_string(t) + "," + std::to_string(s.state) + "," + std::to_string(s.obs[0]) +
           "," + std::to_string(s.obs[1]) + "," + std::to_string(s.actions[0]) + "," +
           std::to_string(s.actions[1]) + "," + std::to_string(signal_code(s.signals[0])) + "," +
           std::to_string(signal_code(s.signals[1])) + "," + std::to_string(s.flag);
    for (int n : {0, 1}) {
      for (std::size_t c = 0; c < d; ++c) {
        out += ",";
        out += fmt(s.beliefs[static_cast<std::size_t>(n)][c]);
      }
    }
    out += "," + fmt(s.stage_rewards[0]) + "," + fmt(s.stage_rewards[1]) + "\n";
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& record) {
  write_file(path, trajectory_to_csv(record));
}

std::string itra_report_to_json(const ItraReport& report) {
  nlohmann::json j;
  j["halted_fixed_point"] = report.halted_fixed_point;
  j["iterations_used"] = report.iterations_used;
  j["chain"] = report.chain;
  j["tainted"] = report.tainted;
  j["region"] = region_json(report.region);
  return j.dump(2) + "\n";
}

std::string absorbing_report_to_json(const AbsorbingReport& report) {
  nlohmann::json j;
  nlohmann::json box = nlohmann::json::array();
  for (const auto& interval : report.box) box.push_back({interval[0], interval[1]});
  j["box"] = box;
  j["is_absorbing"] = report.is_absorbing;
  j["r_inf"] = report.r_inf;
  j["is_positive"] = report.is_positive;
  if (report.suggested_cost) {
    j["suggested_cost"] = *report.suggested_cost;
  } else {
    j["suggested_cost"] = nullptr;
  }
  j["region"] = region_json(report.region);
  return j.dump(2) + "\n";
}

std::string bruteforce_verdict_to_json(const BruteforceVerdict& verdict) {
  nlohmann::json j;
  j["horizon"] = verdict.horizon;
  j["restriction"] = verdict.restriction;
  j["all_defect_is_nash"] = verdict.all_defect_is_nash;
  j["no_sharing_profile_is_nash"] = verdict.no_sharing_profile_is_nash;
  j["num_profiles"] = verdict.num_profiles;
  j["num_sharing_profiles"] = verdict.num_sharing_profiles;
  j["num_sharing_nash_profiles"] = verdict.num_sharing_nash_profiles;
  return j.dump(2) + "\n";
}

std::string emit_region_plot(const std::vector<std::pair<std::string, Region>>& regions) {
  if (regions.empty()) throw DisgError(ErrorCode::InvalidArgument, "no regions to plot");
  for (const auto& [label, region] : regions) {
    if (region.grid()->num_states() != 2) {
      throw DisgError(ErrorCode::UnsupportedDimension, "band plots need two-state grids");
    }
  }

  constexpr double kLeft = 170.0, kRight = 30.0, kTop = 34.0;
  constexpr double kBandH = 26.0, kGap = 14.0, kAxisH = 46.0;
  constexpr double kPlotW = 640.0;
  const double width = kLeft + kPlotW + kRight;
  const double height = kTop + regions.size() * (kBandH + kGap) + kAxisH;
  auto x_of = [&](double coord) { return kLeft + coord * kPlotW; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt6(width) + "\" height=\"" +
         fmt6(height) + "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg += "<text x=\"" + fmt6(kLeft) + "\" y=\"20\">cooperation regions over pi(X=0)</text>\n";

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& [label, region] = regions[r];
    const double y = kTop + r * (kBandH + kGap);
    svg += "<rect x=\"" + fmt6(x_of(0.0)) + "\" y=\"" + fmt6(y) + "\" width=\"" + fmt6(kPlotW) +
           "\" height=\"" + fmt6(kBandH) + "\" fill=\"#eeeeee\" stroke=\"#666666\"/>\n";
    const double half = 0.5 / region.grid()->resolution();
    for (const auto& [lo, hi] : contiguous_runs(region)) {
      const double a = std::max(0.0, lo - half);
      const double b = std::min(1.0, hi + half);
      svg += "<rect x=\"" + fmt6(x_of(a)) + "\" y=\"" + fmt6(y) + "\" width=\"" +
             fmt6((b - a) * kPlotW) + "\" height=\"" + fmt6(kBandH) + "\" fill=\"#4878a8\"/>\n";
    }
    svg += "<text x=\"8\" y=\"" + fmt6(y + kBandH - 8.0) + "\">" + label + "</text>\n";
  }

  const double axis_y = kTop + regions.size() * (kBandH + kGap) + 8.0;
  svg += "<line x1=\"" + fmt6(x_of(0.0)) + "\" y1=\"" + fmt6(axis_y) + "\" x2=\"" +
         fmt6(x_of(1.0)) + "\" y2=\"" + fmt6(axis_y) + "\" stroke=\"#000000\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double coord = tick / 4.0;
    svg += "<line x1=\"" + fmt6(x_of(coord)) + "\" y1=\"" + fmt6(axis_y) + "\" x2=\"" +
           fmt6(x_of(coord)) + "\" y2=\"" + fmt6(axis_y + 6.0) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt6(x_of(coord) - 10.0) + "\" y=\"" + fmt6(axis_y + 22.0) + "\">" +
           fmt6(coord) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace disg
