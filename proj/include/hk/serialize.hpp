#pragma once

#include <string>
#include <vector>

#include "hk/geometry.hpp"
#include "hk/harness.hpp"
#include "hk/means.hpp"
#include "hk/reconstruction.hpp"

namespace hk {

void to_json(Json& j, const MeanGapReport& r);
void from_json(const Json& j, MeanGapReport& r);

void to_json(Json& j, const SurfaceSamples& s);
void from_json(const Json& j, SurfaceSamples& s);

void to_json(Json& j, const FigureData& f);
void from_json(const Json& j, FigureData& f);

void to_json(Json& j, const ConvergenceRow& r);
void from_json(const Json& j, ConvergenceRow& r);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// `#`-prefixed comment header (one line per entry), then one section per
/// table: a `# section: <name>` line, the column header and the rows.
std::string write_csv(const std::vector<std::string>& comments, const std::vector<CsvTable>& tables);

}  // namespace hk
