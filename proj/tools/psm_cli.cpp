// Command-line front end: frames, kernel grids and verification suites.
//
// Exit codes: 0 success, 1 property check failed, 2 input error,
// 3 numerical failure, 64 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "psm/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailed = 1;
constexpr int kInputError = 2;
constexpr int kNumericFailure = 3;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 0;
  std::string which = "s1";
  bool which_in_config = false;
  std::string frame;
  std::string grid;
  std::uint64_t seed = 1;
  double tol = 1e-12;
  int level = 2;
  std::string out;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// key=value lines; blank lines and lines starting with # are ignored.
void load_config(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (key == "n") rc.n = std::stoi(val);
      else if (key == "which") {
        rc.which = val;
        rc.which_in_config = true;
      }
      else if (key == "frame") rc.frame = val;
      else if (key == "grid") rc.grid = val;
      else if (key == "seed") rc.seed = std::stoull(val);
      else if (key == "tol") rc.tol = std::stod(val);
      else if (key == "level") rc.level = std::stoi(val);
      else if (key == "out") rc.out = val;
      else throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
}

// The config file sets defaults, so it is read before the flags are parsed.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

// Writes to the --out path, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw psm::InvalidArgument("cannot write " + path);
  out << text;
}

psm::QuadratureConfig quadrature(const RunConfig& rc) {
  psm::QuadratureConfig cfg;
  cfg.target_abs_tol = rc.tol;
  cfg.validate();
  return cfg;
}

int cmd_curve(const std::vector<double>& x, const RunConfig& rc) {
  if (x.size() < 3 || x.size() % 2 == 0) throw UsageError("curve: need an odd number (>= 3) of branch points");
  const psm::PeriodFrame fr = psm::build_frame(psm::BranchData(x), quadrature(rc));
  const psm::FrameChecks c = psm::check_frame(fr);
  std::ostream& log = rc.out.empty() ? std::cerr : std::cout;
  log << "genus " << fr.genus() << "\n"
      << "imag(I)          " << c.imag_I << "\n"
      << "real(Omega)      " << c.real_omega << "\n"
      << "asym(Omega)      " << c.asym_omega << "\n"
      << "Im Omega > 0     " << (c.im_omega_pd ? "yes" : "no") << "\n"
      << "half-period table " << c.half_period_table << "\n"
      << "Riemann constants " << c.riemann_constants << "\n";
  emit(rc.out, psm::frame_to_json(fr).dump(2) + "\n");
  return kOk;
}

psm::Polygon make_polygon(const RunConfig& rc) {
  if (rc.n == 2) return psm::Polygon::two_branes();
  if (rc.n == 3) return psm::Polygon::three_branes();
  if (rc.frame.empty()) throw UsageError("n >= 4 needs --frame");
  auto fr = std::make_shared<const psm::PeriodFrame>(psm::read_frame(rc.frame));
  if (2 * fr->genus() + 2 != rc.n) throw psm::InvalidArgument("frame genus does not match --n");
  return psm::Polygon::hyperelliptic(fr, quadrature(rc));
}

int cmd_kernel(const RunConfig& rc) {
  if (rc.grid.empty()) throw UsageError("kernel: --grid is required");
  const psm::GridSpec grid = psm::parse_grid_spec(rc.grid);
  const psm::Polygon poly = make_polygon(rc);
  std::ostringstream csv;
  psm::CsvSummary s;
  try {
    s = psm::write_kernel_csv(csv, grid, psm::parse_which(rc.which), poly);
  } catch (const psm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  emit(rc.out, csv.str());
  std::cerr << s.rows << " rows, " << s.diagonal << " diagonal pairs written as nan\n";
  return kOk;
}

int cmd_verify(const std::string& suite, const RunConfig& rc, bool which_set) {
  psm::SuiteOptions opt;
  opt.seed = rc.seed;
  opt.n = rc.n;
  if (which_set) opt.which = psm::parse_which(rc.which);
  opt.quadrature = quadrature(rc);
  opt.budget.level = rc.level;
  if (!rc.frame.empty()) opt.frame = std::make_shared<const psm::PeriodFrame>(psm::read_frame(rc.frame));

  std::vector<std::string> names = {suite};
  if (suite == "all") names = psm::suite_names();
  nlohmann::json out = nlohmann::json::array();
  bool ok = true;
  for (const auto& name : names) {
    const auto t0 = std::chrono::steady_clock::now();
    const psm::SuiteReport rep = psm::run_suite(name, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& c : rep.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%s %-48s residual %.3e  tol %.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.residual, c.tolerance);
      std::cerr << name << ": " << line;
    }
    std::cerr << name << ": " << (rep.passed() ? "passed" : "FAILED") << " in " << secs << " s\n";
    ok = ok && rep.passed();
    out.push_back(psm::report_to_json(rep));
  }
  emit(rc.out, (names.size() == 1 ? out[0] : out).dump(2) + "\n");
  return ok ? kOk : kPropertyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"Period frames, kernel grids and verification suites"};
  app.require_subcommand(1);
  // subcommands pass --config through to the top level
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override it");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", rc.tol, "quadrature target tolerance");
    sub->add_option("--out", rc.out, "output path (default stdout)");
  };

  std::vector<double> branch;
  CLI::App* curve = app.add_subcommand("curve", "build a period frame from real branch points");
  curve->add_option("x", branch, "branch points, odd count, strictly increasing")->required();
  add_common(curve);

  CLI::App* kern = app.add_subcommand("kernel", "evaluate a kernel on a grid of point pairs");
  kern->add_option("--n", rc.n, "number of branes");
  kern->add_option("--which", rc.which, "s1, s2, a1 or a2");
  kern->add_option("--frame", rc.frame, "frame JSON for n >= 4");
  kern->add_option("--grid", rc.grid, "re0:re1:nre,im0:im1:nim[/P grid]");
  kern->add_option("--seed", rc.seed, "accepted for uniformity; kernel grids are not random");
  add_common(kern);

  std::string suite;
  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "suite name or 'all'")->required();
  ver->add_option("--n", rc.n, "restrict to one brane count");
  CLI::Option* which_opt = ver->add_option("--which", rc.which, "restrict to s1 or s2");
  ver->add_option("--frame", rc.frame, "frame JSON for n >= 4 suites");
  ver->add_option("--seed", rc.seed, "random seed");
  ver->add_option("--level", rc.level, "quadrature level for the splitting suite");
  add_common(ver);

  try {
    const std::string cfg = find_config(argc, argv);
    if (!cfg.empty()) load_config(cfg, rc);
    app.parse(argc, argv);
    if (curve->parsed()) return cmd_curve(branch, rc);
    if (kern->parsed()) {
      if (rc.n < 2) throw UsageError("kernel: --n must be >= 2");
      return cmd_kernel(rc);
    }
    if (ver->parsed()) {
      const auto& names = psm::suite_names();
      if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw UsageError("unknown suite '" + suite + "'");
      return cmd_verify(suite, rc, which_opt->count() > 0 || rc.which_in_config);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const psm::FrameInvariantViolation& e) {
    std::cerr << "frame invariant violated: " << e.what() << "\n";
    return kInputError;
  } catch (const psm::InvalidArgument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const psm::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kUsage;
}
