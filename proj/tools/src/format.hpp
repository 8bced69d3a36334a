#ifndef NCRW_TOOLS_FORMAT_HPP
#define NCRW_TOOLS_FORMAT_HPP

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncrw/correlations.hpp"
#include "ncrw/kernels.hpp"

namespace ncrw::cli {

using Json = nlohmann::ordered_json;

/// 17 significant digits, the text used for every real in CSV and JSON.
std::string format_real(double v);

/// Pretty-print JSON with reals rendered by format_real (non-finite as null).
void write_json(std::ostream& os, const Json& value);

/// "finite:0,2", "lattice:3", "stationary:0.5" (or "stationary:1/3").
KernelSpec parse_spec(std::string_view text, Gauge gauge);
Gauge parse_gauge(std::string_view text);
std::string_view gauge_name(Gauge gauge);

std::vector<Site> parse_sites(std::string_view text);
std::vector<double> parse_reals(std::string_view text);
/// "lo:hi", inclusive.
std::pair<Site, Site> parse_window(std::string_view text);
/// "t:x1,x2,...".
TimeGroup parse_time_group(std::string_view text);

/// "t,x" as a space-time point.
SpaceTimePoint parse_space_time_point(std::string_view text);
/// Several --at values forming one multi-time point set; groups are sorted by
/// time and groups at equal time are merged.
MultiTimePointSet parse_point_set(const std::vector<std::string>& at);

Json point_set_json(const MultiTimePointSet& points);

}  // namespace ncrw::cli

#endif  // NCRW_TOOLS_FORMAT_HPP
