#include "format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <system_error>

namespace ncrw::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string_view::npos ? text.npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

void write_value(std::ostream& os, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write_value(os, item, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_value(os, item, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      os << (std::isfinite(d) ? format_real(d) : std::string("null"));
      return;
    }
    default:
      os << v.dump();
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_real: buffer too small");
  return std::string(buf, ptr);
}

void write_json(std::ostream& os, const Json& value) {
  write_value(os, value, 0);
  os << "\n";
}

Gauge parse_gauge(std::string_view text) {
  if (text == "probability") return Gauge::Probability;
  if (text == "paper") return Gauge::Paper;
  throw std::invalid_argument("unknown gauge '" + std::string(text) + "'");
}

std::string_view gauge_name(Gauge gauge) {
  return gauge == Gauge::Paper ? "paper" : "probability";
}

KernelSpec parse_spec(std::string_view text, Gauge gauge) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("spec '" + std::string(text) + "' lacks a ':'");
  }
  const auto kind = text.substr(0, colon);
  const auto arg = text.substr(colon + 1);
  if (kind == "finite") return {Configuration(parse_sites(arg)), gauge};
  if (kind == "lattice") return {LatticeSpec(parse_number<int>(arg, "lattice spacing")), gauge};
  if (kind == "stationary") {
    const auto slash = arg.find('/');
    double rho = 0.0;
    if (slash == std::string_view::npos) {
      rho = parse_number<double>(arg, "density");
    } else {
      rho = parse_number<double>(arg.substr(0, slash), "density") /
            parse_number<double>(arg.substr(slash + 1), "density");
    }
    return {StationarySpec(rho), gauge};
  }
  throw std::invalid_argument("unknown spec kind '" + std::string(kind) +
                              "' (expected finite, lattice or stationary)");
}

std::vector<Site> parse_sites(std::string_view text) {
  std::vector<Site> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<Site>(part, "site"));
  return out;
}

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<double>(part, "number"));
  return out;
}

std::pair<Site, Site> parse_window(std::string_view text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("window '" + std::string(text) + "' must look like lo:hi");
  }
  const Site lo = parse_number<Site>(text.substr(0, colon), "window bound");
  const Site hi = parse_number<Site>(text.substr(colon + 1), "window bound");
  if (hi < lo) throw std::invalid_argument("window '" + std::string(text) + "' is empty");
  return {lo, hi};
}

TimeGroup parse_time_group(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("point group '" + std::string(text) + "' must look like t:x1,x2");
  }
  TimeGroup g;
  g.t = parse_number<double>(text.substr(0, colon), "time");
  g.sites = parse_sites(text.substr(colon + 1));
  std::sort(g.sites.begin(), g.sites.end());
  if (std::adjacent_find(g.sites.begin(), g.sites.end()) != g.sites.end()) {
    throw std::invalid_argument("point group '" + std::string(text) + "' repeats a site");
  }
  return g;
}

SpaceTimePoint parse_space_time_point(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) {
    throw std::invalid_argument("point '" + std::string(text) + "' must look like t,x");
  }
  const double t = parse_number<double>(parts[0], "time");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("point '" + std::string(text) + "' has a negative time");
  }
  return {t, parse_number<Site>(parts[1], "site")};
}

MultiTimePointSet parse_point_set(const std::vector<std::string>& at) {
  if (at.empty()) throw std::invalid_argument("no points given");
  std::map<double, std::vector<Site>> by_time;
  for (const auto& s : at) {
    auto g = parse_time_group(s);
    auto& sites = by_time[g.t];
    sites.insert(sites.end(), g.sites.begin(), g.sites.end());
  }
  std::vector<TimeGroup> groups;
  for (auto& [t, sites] : by_time) {
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
      throw std::invalid_argument("a space-time point is given twice");
    }
    groups.push_back({t, std::move(sites)});
  }
  return MultiTimePointSet(std::move(groups));
}

Json point_set_json(const MultiTimePointSet& points) {
  Json arr = Json::array();
  for (const auto& g : points.groups()) arr.push_back({{"t", g.t}, {"sites", g.sites}});
  return arr;
}

}  // namespace ncrw::cli
