#include <doctest.h>

#include <cmath>

#include "warpgeo/errors.hpp"
#include "warpgeo/product.hpp"
#include "warpgeo/spec_file.hpp"

using namespace warpgeo;

namespace {

ChartedManifold euclid(std::size_t n, double scale = 1.0) {
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(std::string(1, "xyzw"[i]));
  std::vector<Expr> g(n * n, Expr::constant(0.0));
  for (std::size_t i = 0; i < n; ++i) g[i * n + i] = Expr::constant(scale);
  return ChartedManifold("euclid", coords, std::vector<Interval>(n, {-2.0, 2.0}), g);
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

VectorField field(const ChartedManifold& m, std::vector<const char*> comps) {
  std::vector<Expr> e;
  for (const char* c : comps) e.push_back(parse(c));
  return VectorField(e, m.coords());
}

struct Gamma {
  std::size_t k, i, j;
  double value;
};

// Expects every (k, i<=j) not listed to be zero.
void check_table(const Christoffel& g, const std::vector<Gamma>& nonzero, double tol) {
  const std::size_t n = g.dim();
  std::vector<double> want(n * n * n, 0.0);
  for (const Gamma& e : nonzero) want[(e.k * n + e.i) * n + e.j] = e.value;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        INFO("Gamma^" << k << "_" << i << j);
        CHECK(std::abs(g(k, i, j) - want[(k * n + i) * n + j]) <= tol);
        CHECK(g(k, i, j) == g(k, j, i));
      }
}

}  // namespace

TEST_CASE("metric and inverse on flat charts") {
  const ChartedManifold m = euclid(2);
  CHECK(metric_at(m, vec({0.3, 0.1})).isApprox(Mat::Identity(2, 2)));
  CHECK(metric_inverse_at(m, vec({0.3, 0.1})).isApprox(Mat::Identity(2, 2)));
  const Christoffel g = christoffel(m, vec({0.3, 0.1}));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(g(k, i, j) == 0.0);
}

TEST_CASE("metric inverse agrees with an LU solve") {
  const ManifoldSpecFile ex = load_fixture("paper-example");
  ContactizationSpec spec;
  spec.base = *ex.complex;
  const ChartedManifold m = build_contactization(spec).manifold;
  SampleStream s(7, 0);
  for (int n = 0; n < 20; ++n) {
    const Vec p = sample_point(m.box(), s);
    const Mat g = metric_at(m, p);
    const Mat lu = g.partialPivLu().solve(Mat::Identity(5, 5));
    CHECK((metric_inverse_at(m, p) - lu).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("non positive definite metric is rejected") {
  const std::vector<std::string> c{"x", "y"};
  const ChartedManifold m("bad", c, {{-1, 1}, {-1, 1}},
                          {parse("1"), parse("0"), parse("0"), parse("x")});
  CHECK_THROWS_AS(local_geometry(m, vec({-0.5, 0.0})), NotPositiveDefinite);
}

TEST_CASE("sphere christoffel symbols") {
  const ChartedManifold s = load_fixture("sphere").manifold;
  const Christoffel g = christoffel(s, vec({M_PI / 4, 0.0}));
  check_table(g, {{0, 1, 1, -0.5}, {1, 0, 1, 1.0}}, 1e-12);
}

TEST_CASE("flat kernels") {
  const ChartedManifold m = euclid(2);
  const Vec p = vec({0.4, -0.7});
  CHECK(nabla(m, coordinate_field(m, 0), coordinate_field(m, 1), p).norm() == 0.0);
  CHECK(nabla(m, coordinate_field(m, 0), field(m, {"0", "x"}), p).isApprox(vec({0.0, 1.0})));
  CHECK(lie_bracket(m, coordinate_field(m, 0), coordinate_field(m, 1), p).norm() == 0.0);
  CHECK(lie_bracket(m, field(m, {"0", "x"}), coordinate_field(m, 0), p).isApprox(vec({0.0, -1.0})));
  CHECK(koszul(m, constant_field(m, vec({1, 2})), constant_field(m, vec({3, -1})),
               constant_field(m, vec({0.5, 0.5})), p) == 0.0);
  CHECK(grad(m, ScalarField(parse("x"), m.coords()), p).isApprox(vec({1.0, 0.0})));
  CHECK(grad(euclid(2, 4.0), ScalarField(parse("x"), m.coords()), p).isApprox(vec({0.25, 0.0})));
  const EndoField J({parse("0"), parse("-1"), parse("1"), parse("0")}, 2, m.coords());
  CHECK(nabla_endo(m, J, field(m, {"x", "y^2"}), field(m, {"x*y", "1"}), p).norm() == 0.0);
}

TEST_CASE("koszul on the sphere") {
  const ChartedManifold s = load_fixture("sphere").manifold;
  const Vec p = vec({M_PI / 4, 0.3});
  const VectorField du = coordinate_field(s, 0), dv = coordinate_field(s, 1);
  CHECK(koszul(s, dv, dv, du, p) == doctest::Approx(-1.0).epsilon(1e-12));
  const Vec n = nabla(s, dv, dv, p);
  CHECK(2.0 * metric_at(s, p).row(0).dot(n) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("exterior derivative of the example potential") {
  const ManifoldSpecFile ex = load_fixture("paper-example");
  const ChartedManifold& m = ex.manifold;
  const Vec p = vec({0.2, -0.1, 0.3, 0.4});
  const VectorField dx1 = coordinate_field(m, 0), dy1 = coordinate_field(m, 2);
  CHECK(d_oneform(m, ex.complex->omega, dx1, dy1, p, DConvention::half) == doctest::Approx(-0.25));
  CHECK(d_oneform(m, ex.complex->omega, dx1, dy1, p, DConvention::plain) == doctest::Approx(-0.5));
  CHECK(d_oneform(m, ex.complex->omega, dy1, dx1, p) == doctest::Approx(0.25));
}

TEST_CASE("finite-difference mode agrees with dual numbers") {
  for (const char* name : {"sphere", "sasakian-r3", "paper-example"}) {
    const ChartedManifold m = load_fixture(name).manifold;
    SampleStream s(3, 1);
    for (int n = 0; n < 10; ++n) {
      const Vec p = sample_point(m.box(), s);
      const Christoffel a = christoffel(m, p, DiffMode::dual);
      const Christoffel b = christoffel(m, p, DiffMode::finite_difference);
      for (std::size_t k = 0; k < m.dim(); ++k)
        for (std::size_t i = 0; i < m.dim(); ++i)
          for (std::size_t j = 0; j < m.dim(); ++j) CHECK(std::abs(a(k, i, j) - b(k, i, j)) <= 1e-5);
    }
  }
}

// Values below come from tools/derive_values.py (symbolic, independent of this library).

TEST_CASE("contactization christoffel symbols, alpha=1") {
  ContactizationSpec spec;
  spec.base = *load_fixture("paper-example").complex;
  spec.alpha = 1.0;
  const ChartedManifold m = build_contactization(spec).manifold;
  REQUIRE(m.coords() == std::vector<std::string>{"x1", "x2", "y1", "y2", "t"});
  check_table(christoffel(m, vec({0.3, -0.2, 0.5, 0.1, 0.2})),
              {{0, 2, 2, -0.3},   {0, 2, 3, 0.1},    {0, 2, 4, 0.5},    {1, 2, 3, -0.15},
               {1, 3, 3, 0.2},    {1, 3, 4, 0.5},    {2, 0, 2, 0.15},   {2, 0, 3, -0.1},
               {2, 0, 4, -0.5},   {3, 1, 2, 0.15},   {3, 1, 3, -0.1},   {3, 1, 4, -0.5},
               {4, 0, 2, -0.455}, {4, 0, 3, -0.03},  {4, 0, 4, -0.15},  {4, 1, 2, -0.03},
               {4, 1, 3, -0.48},  {4, 1, 4, 0.1}},
              1e-12);
}

TEST_CASE("contactization christoffel symbols, alpha=2") {
  ContactizationSpec spec;
  spec.base = *load_fixture("paper-example").complex;
  spec.alpha = 2.0;
  const ChartedManifold m = build_contactization(spec).manifold;
  check_table(christoffel(m, vec({0.3, -0.2, 0.5, 0.1, 0.2})),
              {{0, 2, 2, -1.2},  {0, 2, 3, 0.4},   {0, 2, 4, 1.0},   {1, 2, 3, -0.6},
               {1, 3, 3, 0.8},   {1, 3, 4, 1.0},   {2, 0, 2, 0.6},   {2, 0, 3, -0.4},
               {2, 0, 4, -1.0},  {3, 1, 2, 0.6},   {3, 1, 3, -0.4},  {3, 1, 4, -1.0},
               {4, 0, 2, -0.64}, {4, 0, 3, -0.24}, {4, 0, 4, -0.6},  {4, 1, 2, -0.24},
               {4, 1, 3, -0.84}, {4, 1, 4, 0.4}},
              1e-12);
}

TEST_CASE("warped product christoffel symbols") {
  WarpedProductSpec spec;
  spec.base = *load_fixture("paper-example").complex;
  spec.fiber = *load_fixture("sasakian-r3").contact;
  spec.a = 1.0;
  spec.warp = parse("exp(x1/4)");
  const ChartedManifold m = build_warped_product(spec).structure.manifold;
  REQUIRE(m.coords() == std::vector<std::string>{"x1", "x2", "y1", "y2", "x", "y", "z"});
  check_table(christoffel(m, vec({0.3, -0.2, 0.5, 0.1, 0.2, -0.4, 0.3})),
              {{0, 2, 2, -0.3}, {0, 2, 3, 0.1}, {0, 2, 4, 0.2},
               {0, 2, 6, 0.5}, {0, 4, 4, -0.29045856068207077}, {0, 5, 5, -0.29045856068207077},
               {1, 2, 3, -0.15}, {1, 3, 3, 0.2}, {1, 3, 4, 0.2},
               {1, 3, 6, 0.5}, {2, 0, 2, 0.15}, {2, 0, 3, -0.1},
               {2, 0, 4, -0.2}, {2, 0, 6, -0.5}, {3, 1, 2, 0.15},
               {3, 1, 3, -0.1}, {3, 1, 4, -0.2}, {3, 1, 6, -0.5},
               {4, 0, 4, 0.25}, {4, 2, 5, 0.12910619646375868}, {4, 3, 5, -0.08607079764250578},
               {4, 4, 5, -0.17214159528501155}, {4, 5, 6, -0.4303539882125289}, {5, 0, 5, 0.25},
               {5, 2, 4, -0.12910619646375868}, {5, 3, 4, 0.08607079764250578}, {5, 4, 4, 0.3442831905700231},
               {5, 4, 6, 0.4303539882125289}, {6, 0, 2, -0.455}, {6, 0, 3, -0.03},
               {6, 0, 4, -0.16}, {6, 0, 6, -0.15}, {6, 1, 2, -0.03},
               {6, 1, 3, -0.48}, {6, 1, 4, 0.04}, {6, 1, 6, 0.1},
               {6, 2, 5, -0.05164247858550347}, {6, 3, 5, 0.03442831905700231}, {6, 4, 5, -0.4311433618859954},
               {6, 5, 6, 0.17214159528501155}},
              1e-12);
}
