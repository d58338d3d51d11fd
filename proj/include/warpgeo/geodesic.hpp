#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "warpgeo/product.hpp"

namespace warpgeo {

struct GeodesicState {
  Vec point;
  Vec velocity;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GeodesicState> states;
  double step = 0.0;
  std::string integrator = "rk4";
  bool truncated = false;  // left the chart box before the requested duration
};

// a^k = −Γ^k_ij v^i v^j
Vec geodesic_rhs(const ChartedManifold& m, const GeodesicState& s);

// Classical fixed-step RK4. The final step is shortened if duration is not a
// multiple of step. Stops early, with `truncated` set, once a state leaves the box.
Trajectory integrate(const ChartedManifold& m, const GeodesicState& s0, double duration,
                     double step);

double speed_squared(const ChartedManifold& m, const GeodesicState& s);

// Max over interior states of the mismatch between five-point finite
// differences of the positions and (velocity, geodesic_rhs).
double geodesic_defect(const ChartedManifold& m, const Trajectory& t);

inline constexpr double kGeodesicCertificationTol = 1e-7;

struct GeodesicConditions {
  Vec res_i;   // base vector
  Vec res_ii;  // fiber vector
  double norm_i = 0.0;   // g₁ norm
  double norm_ii = 0.0;  // g₂ norm
};

// Both printed conditions verbatim. X is a base jet, V a fiber vector.
GeodesicConditions printed_geodesic_conditions(const WarpedProduct& w, const VectorJet& x, const Vec& v,
                               const Vec& p);

struct ProductGeodesicReport {
  CheckReport oracle;     // ‖∇_{c'}c'‖ along the product curve
  CheckReport printed;    // max(‖res_i‖, ‖res_ii‖) along the curve
  CheckReport agreement;  // oracle ≈ 0 iff printed ≈ 0
};

// γ0 lives on the base, β0 on the fiber. Both must integrate to certified
// geodesics for the whole duration; otherwise PreconditionError.
ProductGeodesicReport product_geodesic_check(const WarpedProduct& w, const GeodesicState& gamma0,
                                             const GeodesicState& beta0, double duration,
                                             double step, Expectation oracle_expectation,
                                             double tol = kIntegratedTol);

void write_csv(std::ostream& os, const ChartedManifold& m, const Trajectory& t);
// Projection onto two coordinates as a standalone SVG polyline.
void write_svg(std::ostream& os, const ChartedManifold& m, const Trajectory& t, std::size_t ax = 0,
               std::size_t ay = 1);

}  // namespace warpgeo
