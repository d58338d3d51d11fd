#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "warpgeo/structures.hpp"

namespace warpgeo {

// One-dimensional curve factor used as the contactization fiber. `speed` is
// |β'(t)| as an expression in the curve coordinate; it must be identically 1.
struct CurveSpec {
  std::string coord = "t";
  Interval interval{-1.0, 1.0};
  Expr speed = Expr::constant(1.0);
};

struct ManifoldSpecFile {
  std::string name;
  std::string origin;  // path or "<string>"
  std::string text;    // raw bytes, hashed into run reports
  ChartedManifold manifold;
  std::optional<AlmostContactStructure> contact;
  std::optional<AlmostComplexStructure> complex;
  double alpha = 1.0;
  double a = 1.0;
  Expr warp = Expr::constant(1.0);
  DConvention d_convention = DConvention::half;
  JConvention j_convention = JConvention::unspecified;
  std::set<std::string> expect_fail;
  std::optional<CurveSpec> curve;

  bool expects_failure(const std::string& check) const { return expect_fail.count(check) != 0; }
};

struct LoadOptions {
  bool run_checks = true;  // load-time axiom checks on declared structures
};

// JSON syntax errors and semantic problems throw SpecError naming the file and
// the offending member; malformed expressions throw SyntaxError with the byte
// offset inside the expression string.
ManifoldSpecFile parse_spec(const std::string& text, const std::string& origin = "<string>",
                            const LoadOptions& o = {});
ManifoldSpecFile load_spec(const std::string& path, const LoadOptions& o = {});

// Bundled fixtures live in <dir>/<name>.spec.
std::string fixture_path(const std::string& name, const std::string& dir = WARPGEO_FIXTURE_DIR);
ManifoldSpecFile load_fixture(const std::string& name, const std::string& dir = WARPGEO_FIXTURE_DIR);
const std::vector<std::string>& fixture_names();

// Check names accepted in `expect_fail`.
const std::set<std::string>& known_check_names();

}  // namespace warpgeo
