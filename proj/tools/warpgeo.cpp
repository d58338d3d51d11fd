// Command-line front end: verify, christoffel, geodesic, report.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"
#include "warpgeo/suite.hpp"

namespace {

using namespace warpgeo;
using ojson = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ManifoldSpecFile resolve_spec(const std::string& arg, const std::string& fixture_dir) {
  if (std::filesystem::exists(arg)) return load_spec(arg);
  const auto& names = fixture_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return load_fixture(arg, fixture_dir);
  throw UsageError("no spec file or bundled fixture named '" + arg + "'");
}

Vec to_vec(const std::vector<double>& v, const ChartedManifold& m, const char* what) {
  if (v.size() != m.dim())
    throw UsageError(std::string(what) + " needs " + std::to_string(m.dim()) + " values for " + m.name());
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects name=value, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !(v >= 0.0)) throw UsageError("bad tolerance value in '" + s + "'");
    out[s.substr(0, eq)] = v;
  }
  return out;
}

ojson read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return ojson::parse(in);
  } catch (const ojson::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of contact and warped product structures"};
  app.require_subcommand(1);
  std::string fixture_dir = WARPGEO_FIXTURE_DIR;
  app.add_option("--fixtures", fixture_dir, "Directory of bundled fixtures");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON run report");
  SuiteOptions so;
  std::vector<std::string> tol_items;
  std::string out_path;
  double alpha = 0.0;
  verify->add_option("--suite", so.suite, "axioms, contactization, warped, geodesic or all")
      ->capture_default_str();
  verify->add_option("--seed", so.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--samples", so.samples, "Sample points per check")->capture_default_str();
  verify->add_option("--tol", tol_items, "Tolerance override name=value (repeatable)");
  verify->add_option("--jobs", so.jobs, "Concurrent checks")->capture_default_str()->check(CLI::PositiveNumber);
  auto* alpha_opt = verify->add_option("--alpha", alpha, "Single contactization alpha");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  // christoffel
  auto* chris = app.add_subcommand("christoffel", "Print the Christoffel symbols at a point");
  std::string chris_spec;
  std::vector<double> point;
  chris->add_option("spec", chris_spec, "Spec file or fixture name")->required();
  chris->add_option("--point", point, "Coordinates of the point")->required()->delimiter(',');

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic with fixed-step RK4");
  std::string geo_spec, csv_path, plot_path;
  std::vector<double> p0, v0;
  double duration = 1.0, step = 1e-3;
  geo->add_option("spec", geo_spec, "Spec file or fixture name")->required();
  geo->add_option("--p0", p0, "Initial point")->required()->delimiter(',');
  geo->add_option("--v0", v0, "Initial velocity")->required()->delimiter(',');
  geo->add_option("--t", duration, "Duration")->capture_default_str();
  geo->add_option("--step", step, "Step size")->capture_default_str();
  geo->add_option("--csv", csv_path, "Write the trajectory as CSV");
  geo->add_option("--plot", plot_path, "Write an SVG of the first two coordinates");

  // report
  auto* rep = app.add_subcommand("report", "Compare two run reports");
  std::vector<std::string> diff;
  rep->add_option("--diff", diff, "Two report files")->required()->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) {
      so.tolerances = parse_tolerances(tol_items);
      so.fixture_dir = fixture_dir;
      if (*alpha_opt) so.alpha = alpha;
      RunReport run;
      try {
        run = run_suite(so);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const std::string text = render(run);
      if (out_path.empty()) std::cout << text;
      else write_text(out_path, text);
      const std::size_t hard = run.hard_failures();
      std::cerr << run.reports.size() << " reports, " << run.errata.size() << " errata entries, "
                << hard << " hard failures\n";
      for (const CheckReport& r : run.reports)
        if (r.hard_failure()) std::cerr << "  FAIL " << r.name << " @ " << r.manifold << "\n";
      return hard == 0 ? kExitPass : kExitFail;
    }

    if (*chris) {
      const ManifoldSpecFile s = resolve_spec(chris_spec, fixture_dir);
      const Vec p = to_vec(point, s.manifold, "--point");
      const Christoffel g = christoffel(s.manifold, p);
      const auto& c = s.manifold.coords();
      ojson j;
      j["manifold"] = s.name;
      j["point"] = point;
      j["symbols"] = ojson::array();
      for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t i = 0; i < c.size(); ++i)
          for (std::size_t jj = i; jj < c.size(); ++jj)
            if (g(k, i, jj) != 0.0)
              j["symbols"].push_back({{"upper", c[k]}, {"lower", {c[i], c[jj]}}, {"value", g(k, i, jj)}});
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }

    if (*geo) {
      const ManifoldSpecFile s = resolve_spec(geo_spec, fixture_dir);
      const GeodesicState s0{to_vec(p0, s.manifold, "--p0"), to_vec(v0, s.manifold, "--v0")};
      if (!(step > 0.0) || !(duration >= 0.0)) throw UsageError("--step must be positive and --t non-negative");
      if (!s.manifold.contains(s0.point)) throw UsageError("--p0 lies outside the chart box");
      const Trajectory t = integrate(s.manifold, s0, duration, step);
      if (!csv_path.empty()) {
        std::ostringstream os;
        write_csv(os, s.manifold, t);
        write_text(csv_path, os.str());
      }
      if (!plot_path.empty()) {
        if (s.manifold.dim() < 2) throw UsageError("--plot needs at least two coordinates");
        std::ostringstream os;
        write_svg(os, s.manifold, t);
        write_text(plot_path, os.str());
      }
      const double s2 = speed_squared(s.manifold, t.states.front());
      double drift = 0.0;
      for (const GeodesicState& st : t.states)
        drift = std::max(drift, std::abs(speed_squared(s.manifold, st) - s2) / (s2 == 0.0 ? 1.0 : s2));
      ojson j;
      j["manifold"] = s.name;
      j["integrator"] = t.integrator;
      j["step"] = t.step;
      j["states"] = t.states.size();
      j["final_time"] = t.times.back();
      j["truncated"] = t.truncated;
      const GeodesicState& last = t.states.back();
      j["final_point"] = std::vector<double>(last.point.data(), last.point.data() + last.point.size());
      j["final_velocity"] =
          std::vector<double>(last.velocity.data(), last.velocity.data() + last.velocity.size());
      j["relative_speed_drift"] = drift;
      j["defect"] = geodesic_defect(s.manifold, t);
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }

    if (*rep) {
      const auto lines = diff_reports(read_json(diff[0]), read_json(diff[1]));
      for (const auto& l : lines) std::cout << l << "\n";
      if (lines.empty()) std::cout << "identical\n";
      return lines.empty() ? kExitPass : kExitFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
