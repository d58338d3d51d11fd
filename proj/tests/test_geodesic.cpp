#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "warpgeo/errors.hpp"
#include "warpgeo/suite.hpp"

using namespace warpgeo;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

WarpedProduct warped(double a) {
  WarpedProductSpec s;
  s.base = *load_fixture("paper-example").complex;
  s.fiber = *load_fixture("sasakian-r3").contact;
  s.a = a;
  return build_warped_product(s);
}

}  // namespace

TEST_CASE("geodesic right-hand side") {
  const ChartedManifold e = load_fixture("euclidean-r3").manifold;
  CHECK(geodesic_rhs(e, {vec({0.1, 0.2, 0.3}), vec({1, -1, 2})}).norm() == 0.0);
  const ChartedManifold s = load_fixture("sphere").manifold;
  CHECK(geodesic_rhs(s, {vec({M_PI / 2, 0.0}), vec({0.0, 1.0})}).norm() <= 1e-15);
  const Vec a = geodesic_rhs(s, {vec({M_PI / 4, 0.0}), vec({0.0, 1.0})});
  CHECK(a[0] == doctest::Approx(0.5));
  CHECK(a[1] == doctest::Approx(0.0));
}

TEST_CASE("straight lines and the equator") {
  const ChartedManifold e = load_fixture("euclidean-r3").manifold;
  const Vec v = vec({0.3, -0.5, 0.2});
  const Trajectory t = integrate(e, {Vec::Zero(3), v}, 1.0, 0.01);
  CHECK_FALSE(t.truncated);
  for (std::size_t i = 0; i < t.states.size(); ++i)
    CHECK((t.states[i].point - t.times[i] * v).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(t.times.back() == doctest::Approx(1.0));

  const ChartedManifold s = load_fixture("sphere").manifold;
  const Trajectory eq = integrate(s, {vec({M_PI / 2, 0.0}), vec({0.0, 1.0})}, 1.0, 1e-3);
  for (const GeodesicState& st : eq.states) CHECK(std::abs(st.point[0] - M_PI / 2) <= 1e-8);
  CHECK(geodesic_defect(s, eq) <= kGeodesicCertificationTol);
}

TEST_CASE("final step is shortened and leaving the box truncates") {
  const ChartedManifold e = load_fixture("euclidean-r3").manifold;
  const Trajectory t = integrate(e, {Vec::Zero(3), vec({0.1, 0, 0})}, 0.25, 0.1);
  CHECK(t.times.back() == doctest::Approx(0.25));
  CHECK(t.times.size() == 4);
  const Trajectory out = integrate(e, {Vec::Zero(3), vec({3, 0, 0})}, 1.0, 0.01);
  CHECK(out.truncated);
  CHECK(out.times.back() < 1.0);
  CHECK_THROWS_AS(integrate(e, {Vec::Zero(3), vec({1, 0, 0})}, 1.0, 0.0), PreconditionError);
  CHECK_THROWS_AS(integrate(e, {vec({5, 0, 0}), vec({1, 0, 0})}, 1.0, 0.1), PreconditionError);
}

TEST_CASE("fourth-order convergence on the sphere") {
  const ChartedManifold s = load_fixture("sphere").manifold;
  const ConvergenceResult c = rk4_convergence(s, {vec({1.0, 0.0}), vec({0.3, 0.8})}, 1.0, 0.1);
  CHECK(c.ratio >= 12.0);
  CHECK(c.ratio <= 20.0);
}

TEST_CASE("speed and reeb momentum are conserved") {
  const ManifoldSpecFile f = load_fixture("sasakian-r3");
  const Trajectory t = integrate(f.manifold, {vec({0.1, -0.2, 0.0}), vec({0.3, 0.2, 0.4})}, 1.0, 1e-3);
  CHECK(speed_drift(f.manifold, t) <= 1e-6);
  CHECK(reeb_drift(*f.contact, t) <= 1e-6);
}

TEST_CASE("printed geodesic conditions") {
  const WarpedProduct w = warped(1.0);
  const Vec p = vec({0.2, 0.2, 0.2, 0.2, 0.0, 0.0, 0.1});
  const VectorJet zero = constant_jet(Vec::Zero(4));
  const GeodesicConditions orth = printed_geodesic_conditions(w, zero, vec({0.3, 0.2, 0.0}), p);
  CHECK(orth.norm_i <= 1e-15);
  CHECK(orth.norm_ii <= 1e-15);
  const GeodesicConditions reeb = printed_geodesic_conditions(w, zero, vec({0, 0, 2}), p);
  CHECK(reeb.norm_ii == doctest::Approx(2.0));
  CHECK(reeb.res_ii.isApprox(2.0 * vec({0, 0, 2})));

  const WarpedProduct flat = warped(0.0);
  const GeodesicConditions a0 =
      printed_geodesic_conditions(flat, constant_jet(vec({0.1, 0.2, 0.3, 0.4})), vec({0, 0, 2}), p);
  CHECK(a0.res_i.norm() == 0.0);
}

TEST_CASE("product geodesic along the reeb field") {
  const WarpedProduct w = warped(1.0);
  const ProductGeodesicReport r =
      product_geodesic_check(w, {Vec::Constant(4, 0.2), Vec::Zero(4)},
                             {vec({0, 0, -1}), vec({0, 0, 2})}, 1.0, 1e-3, Expectation::pass);
  CHECK(r.oracle.passed());
  CHECK(r.oracle.max_residual <= 1e-5);
  CHECK(std::abs(r.printed.max_residual - 2.0) <= 2e-3);
  CHECK(r.agreement.verdict == Verdict::erratum_candidate);
}

TEST_CASE("uncertified factor curves are rejected") {
  const WarpedProduct w = warped(1.0);
  // the fiber start velocity leaves the box well before t = 1
  CHECK_THROWS_AS(product_geodesic_check(w, {Vec::Constant(4, 0.2), Vec::Zero(4)},
                                         {vec({0, 0, 1.4}), vec({0, 0, 2})}, 1.0, 1e-3,
                                         Expectation::pass),
                  PreconditionError);
}

TEST_CASE("trajectory output") {
  const ChartedManifold s = load_fixture("sphere").manifold;
  const Trajectory t = integrate(s, {vec({1.0, 0.0}), vec({0.3, 0.8})}, 0.1, 0.05);
  std::ostringstream csv, svg;
  write_csv(csv, s, t);
  const std::string text = csv.str();
  CHECK(text.rfind("t,u,v,v_u,v_v,speed2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  write_svg(svg, s, t);
  CHECK(svg.str().find("<polyline") != std::string::npos);
}
