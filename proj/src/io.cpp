#include "psm/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace psm {

namespace {

using nlohmann::json;

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

// complex vector as [Re v_1, ..., Re v_g, Im v_1, ..., Im v_g]
json split_complex(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i).real());
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i).imag());
  return out;
}

Eigen::MatrixXd read_matrix(const json& rows, int r, int c, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != r)
    throw InvalidArgument(std::string("frame JSON: bad shape for ") + what);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c)
      throw InvalidArgument(std::string("frame JSON: bad shape for ") + what);
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

Grid parse_grid(const std::string& s) {
  Grid g;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d,%lf:%lf:%d%c", &g.re0, &g.re1, &g.nre, &g.im0, &g.im1, &g.nim, &tail) != 6)
    throw InvalidArgument("grid spec: expected re0:re1:nre,im0:im1:nim, got '" + s + "'");
  if (g.nre < 1 || g.nim < 1) throw InvalidArgument("grid spec: counts must be >= 1");
  if (g.im0 < 0.0 || g.im1 < 0.0) throw InvalidArgument("grid spec: points must lie in the closed upper half plane");
  return g;
}

double axis(double a, double b, int n, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); }

json form_value(const FormValue& v) {
  if (v.degree == 1) return json::array({v.coeff.real(), v.coeff.imag()});
  return v.scalar;
}

}  // namespace

json frame_to_json(const PeriodFrame& frame) {
  const int g = frame.genus();
  json j;
  j["g"] = g;
  j["branch_points"] = std::vector<double>(frame.branch.x().data(), frame.branch.x().data() + frame.branch.x().size());
  j["I"] = matrix_rows(frame.I);
  j["Omega_im"] = matrix_rows(frame.omega.imag());
  json hp = json::array();
  for (int k = 0; k < frame.half_periods.cols(); ++k) hp.push_back(split_complex(frame.half_periods.col(k)));
  j["half_periods"] = hp;
  j["K"] = split_complex(frame.K);
  j["A_default"] = split_complex(frame.A_default);
  return j;
}

PeriodFrame frame_from_json(const json& j) {
  try {
    const int g = j.at("g").get<int>();
    if (g < 1) throw InvalidArgument("frame JSON: g must be >= 1");
    const BranchData branch(j.at("branch_points").get<std::vector<double>>());
    if (branch.genus() != g) throw InvalidArgument("frame JSON: g does not match the branch points");
    const Eigen::MatrixXd I = read_matrix(j.at("I"), g, g, "I");
    const Eigen::MatrixXd Y = read_matrix(j.at("Omega_im"), g, g, "Omega_im");
    const Eigen::MatrixXd hp = read_matrix(j.at("half_periods"), 2 * g + 2, 2 * g, "half_periods");
    Eigen::MatrixXcd table(g, 2 * g + 2);
    for (int k = 0; k < 2 * g + 2; ++k)
      for (int i = 0; i < g; ++i) table(i, k) = cplx(hp(k, i), hp(k, g + i));
    return assemble_frame(branch, I, Y, table);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("frame JSON: ") + e.what());
  }
}

PeriodFrame read_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open frame file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("frame file " + path + ": " + e.what());
  }
  return frame_from_json(j);
}

std::vector<cplx> Grid::points() const {
  std::vector<cplx> out;
  for (int i = 0; i < nre; ++i)
    for (int k = 0; k < nim; ++k) out.emplace_back(axis(re0, re1, nre, i), axis(im0, im1, nim, k));
  return out;
}

GridSpec parse_grid_spec(const std::string& spec) {
  GridSpec g;
  const auto slash = spec.find('/');
  g.q = parse_grid(spec.substr(0, slash));
  g.p = slash == std::string::npos ? g.q : parse_grid(spec.substr(slash + 1));
  return g;
}

CsvSummary write_kernel_csv(std::ostream& os, const GridSpec& grid, Which which, const Polygon& poly) {
  const std::vector<cplx> qs = grid.q.points(), ps = grid.p.points();
  std::vector<ChartPoint> pc;
  pc.reserve(ps.size());
  for (cplx p : ps) pc.push_back(poly.chart(p));

  CsvSummary s;
  os << "re_zQ,im_zQ,re_zP,im_zP,re_aQ,im_aQ,re_aP,im_aP\n";
  char line[256];
  for (cplx q : qs) {
    const ChartPoint Q = poly.chart(q);
    for (const ChartPoint& P : pc) {
      KernelForm k;
      if (std::abs(P.z - q) < 1e-9) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        k = {cplx(nan, nan), cplx(nan, nan)};
        ++s.diagonal;
      } else {
        try {
          k = kernel(Q, P, which, poly);
        } catch (const Error& e) {
          std::ostringstream msg;
          msg << e.what() << " at zQ=" << q << " zP=" << P.z;
          throw NumericalError(msg.str());
        }
      }
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", q.real(), q.imag(),
                    P.z.real(), P.z.imag(), k.aQ.real(), k.aQ.imag(), k.aP.real(), k.aP.imag());
      os << line;
      ++s.rows;
    }
  }
  return s;
}

json splitting_to_json(const SplittingReport& rep) {
  json j;
  j["suite"] = rep.suite;
  j["n"] = rep.n;
  j["which"] = to_string(rep.which);
  json probes = json::array();
  for (const auto& p : rep.probes) {
    json pj;
    pj["name"] = p.name;
    pj["degree"] = p.degree;
    pj["max_residual"] = p.max_residual;
    json pts = json::array();
    for (const auto& pt : p.points)
      pts.push_back({{"Q", {pt.Q.real(), pt.Q.imag()}},
                     {"lhs", form_value(pt.lhs)},
                     {"rhs", form_value(pt.rhs)},
                     {"residual", pt.residual}});
    pj["points"] = pts;
    probes.push_back(pj);
  }
  j["probes"] = probes;
  j["max_residual"] = rep.max_residual;
  j["quadrature"] = {{"levels", rep.level}, {"excision_radii", rep.excision_radii}};
  return j;
}

json report_to_json(const SuiteReport& rep) {
  json j;
  j["suite"] = rep.suite;
  j["seed"] = rep.seed;
  j["passed"] = rep.passed();
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  j["checks"] = checks;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  if (!rep.splitting.empty()) {
    json s = json::array();
    for (const auto& r : rep.splitting) s.push_back(splitting_to_json(r));
    j["splitting"] = s;
  }
  if (!rep.dims.empty()) {
    json d = json::array();
    for (const auto& x : rep.dims) d.push_back({{"n", x[0]}, {"dims", {x[1], x[2], x[3]}}});
    j["cohomology"] = d;
  }
  return j;
}

}  // namespace psm
