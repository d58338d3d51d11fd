#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpgeo/geodesic.hpp"
#include "warpgeo/spec_file.hpp"

namespace warpgeo {

inline constexpr const char* kToolVersion = "0.1.0";

const std::vector<std::string>& suite_names();  // axioms, contactization, warped, geodesic, all

struct SuiteOptions {
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  // Keyed by check name (without any [..] suffix) or by a tolerance class:
  // "algebraic", "derivative", "integrated".
  std::map<std::string, double> tolerances;
  std::size_t jobs = 1;
  std::optional<double> alpha;  // restricts the contactization sweep to one value
  std::string fixture_dir = WARPGEO_FIXTURE_DIR;
};

struct ErratumEntry {
  std::string id;
  std::string location;
  std::string printed;
  double measured_residual = 0.0;
  std::string resolution;
};

struct RunReport {
  std::string suite;
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::map<std::string, double> tolerances;
  std::vector<CheckReport> reports;  // sorted by (name, manifold)
  std::vector<ErratumEntry> errata;

  std::size_t hard_failures() const;
  const CheckReport* find(const std::string& name, const std::string& manifold = {}) const;
};

// Throws std::invalid_argument for an unknown suite or tolerance name.
RunReport run_suite(const SuiteOptions& o);

nlohmann::ordered_json to_json(const RunReport& r);
// Pretty-printed JSON plus trailing newline; byte-stable for equal inputs.
std::string render(const RunReport& r);

// Human-readable differences between two serialized run reports; empty when
// every report has the same verdict and residuals.
std::vector<std::string> diff_reports(const nlohmann::ordered_json& a,
                                      const nlohmann::ordered_json& b);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull);

// Individual suite pieces, exposed for tests.

// Assembled contactization metric against the block matrix (entrywise) and
// the printed inverse against the printed matrix.
CheckReport check_metric_matrix(const ContactizationSpec& spec, const SampleOptions& o,
                                double tol = 1e-12);

// Ratio of RK4 errors at step h and h/2 against an h/4 reference.
struct ConvergenceResult {
  double error_h = 0.0;
  double error_h2 = 0.0;
  double ratio = 0.0;
};
ConvergenceResult rk4_convergence(const ChartedManifold& m, const GeodesicState& s0,
                                  double duration, double h);

// Relative |g(v,v)(t) − g(v,v)(0)| / g(v,v)(0) over the trajectory.
double speed_drift(const ChartedManifold& m, const Trajectory& t);
// max |η(v(t)) − η(v(0))|
double reeb_drift(const AlmostContactStructure& s, const Trajectory& t);

// Deterministic test velocity of coordinate length 0.25 * min half-width, at the box centre.
GeodesicState default_geodesic_start(const ChartedManifold& m);

}  // namespace warpgeo
