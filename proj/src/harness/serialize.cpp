#include "hk/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace hk {

void to_json(Json& j, const MeanGapReport& r) {
  j = Json{{"n", r.n},
           {"h_w", r.h_w},
           {"m_w", r.m_w},
           {"gap_direct", r.gap_direct},
           {"gap_closed_form", r.gap_closed_form},
           {"min_bound", r.min_bound}};
}

void from_json(const Json& j, MeanGapReport& r) {
  j.at("n").get_to(r.n);
  j.at("h_w").get_to(r.h_w);
  j.at("m_w").get_to(r.m_w);
  j.at("gap_direct").get_to(r.gap_direct);
  j.at("gap_closed_form").get_to(r.gap_closed_form);
  j.at("min_bound").get_to(r.min_bound);
}

void to_json(Json& j, const SurfaceSamples& s) {
  j = Json{{"name", s.name}, {"columns", s.columns}, {"rows", s.rows}};
}

void from_json(const Json& j, SurfaceSamples& s) {
  j.at("name").get_to(s.name);
  j.at("columns").get_to(s.columns);
  j.at("rows").get_to(s.rows);
}

void to_json(Json& j, const FigureData& f) {
  Json points = Json::object();
  for (const auto& [name, p] : f.points) points[name] = p;
  Json scalars = Json::object();
  for (const auto& [name, v] : f.scalars) scalars[name] = v;
  j = Json{{"n", f.n}, {"surfaces", f.surfaces}, {"points", points}, {"scalars", scalars}};
}

void from_json(const Json& j, FigureData& f) {
  j.at("n").get_to(f.n);
  j.at("surfaces").get_to(f.surfaces);
  f.points.clear();
  for (const auto& [name, p] : j.at("points").items()) f.points.emplace_back(name, p.get<std::vector<double>>());
  f.scalars.clear();
  for (const auto& [name, v] : j.at("scalars").items()) f.scalars.emplace_back(name, v.get<double>());
}

void to_json(Json& j, const ConvergenceRow& r) {
  j = Json{{"intervals", r.intervals}, {"h", r.h}, {"error", r.error}};
  j["slope"] = r.slope ? Json(*r.slope) : Json(nullptr);
}

void from_json(const Json& j, ConvergenceRow& r) {
  j.at("intervals").get_to(r.intervals);
  j.at("h").get_to(r.h);
  j.at("error").get_to(r.error);
  const auto& slope = j.at("slope");
  r.slope = slope.is_null() ? std::nullopt : std::optional<double>(slope.get<double>());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string write_csv(const std::vector<std::string>& comments, const std::vector<CsvTable>& tables) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  for (const auto& t : tables) {
    os << "# section: " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace hk
