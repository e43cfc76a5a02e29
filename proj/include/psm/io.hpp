#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "psm/verify.hpp"

namespace psm {

nlohmann::json frame_to_json(const PeriodFrame& frame);
/// Rebuilds and re-validates a frame from its JSON export.
PeriodFrame frame_from_json(const nlohmann::json& j);
PeriodFrame read_frame(const std::string& path);

/// Rectangular grid "re0:re1:nre,im0:im1:nim" in the z-chart; re outer, im inner.
struct Grid {
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;
  int nre = 1, nim = 1;

  std::vector<cplx> points() const;
};

/// "Qgrid[/Pgrid]"; the P grid defaults to the Q grid.
struct GridSpec {
  Grid q, p;
};

GridSpec parse_grid_spec(const std::string& spec);

struct CsvSummary {
  std::size_t rows = 0;
  std::size_t diagonal = 0;  // rows written with nan values
};

/// Writes the kernel over all (Q, P) grid pairs, Q-major. Pairs closer
/// than the diagonal threshold are written with nan values and counted.
CsvSummary write_kernel_csv(std::ostream& os, const GridSpec& grid, Which which, const Polygon& poly);

nlohmann::json report_to_json(const SuiteReport& rep);
nlohmann::json splitting_to_json(const SplittingReport& rep);

}  // namespace psm
