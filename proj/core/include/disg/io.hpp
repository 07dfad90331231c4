#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "disg/equilibrium.hpp"
#include "disg/sim.hpp"
#include "disg/solver.hpp"
#include "disg/strategy.hpp"

namespace disg {

// Region CSV: header, then one row per grid point with the point's coordinates
// followed by 0/1 membership. Bit-exact round trip: coordinates print with 17
// significant digits and identical inputs serialize to identical bytes.
std::string region_to_csv(const Region& region);
void write_region_csv(const std::filesystem::path& path, const Region& region);
Region read_region_csv(const std::filesystem::path& path, GridPtr grid);
Region parse_region_csv(const std::string& text, GridPtr grid);

// Stacked form used by the sweep command: a leading label column.
std::string regions_to_stacked_csv(const std::vector<std::pair<std::string, Region>>& regions);
std::vector<std::pair<std::string, Region>> parse_stacked_region_csv(const std::string& text,
                                                                     GridPtr grid);

std::string value_table_to_csv(const ValueTable& table);
void write_value_table_csv(const std::filesystem::path& path, const ValueTable& table);

std::string trajectory_to_csv(const TrajectoryRecord& record);
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& record);

std::string itra_report_to_json(const ItraReport& report);
std::string absorbing_report_to_json(const AbsorbingReport& report);
std::string bruteforce_verdict_to_json(const BruteforceVerdict& verdict);

// Fig. 2 style band chart: one horizontal band per labeled region over the
// pi(X=0) axis, filled where membership holds. Deterministic output. Throws
// UnsupportedDimension for grids with more than two states.
std::string emit_region_plot(const std::vector<std::pair<std::string, Region>>& regions);

}  // namespace disg
