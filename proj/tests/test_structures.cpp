#include <doctest.h>

#include "warpgeo/errors.hpp"
#include "warpgeo/spec_file.hpp"

using namespace warpgeo;

namespace {

SampleOptions opts(std::size_t samples = 25) {
  SampleOptions o;
  o.seed = 11;
  o.samples = samples;
  return o;
}

AlmostContactStructure sasakian() { return *load_fixture("sasakian-r3").contact; }

AlmostComplexStructure example_base() { return *load_fixture("paper-example").complex; }

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("sasakian R3 satisfies every contact axiom") {
  const AlmostContactStructure s = sasakian();
  const SampleOptions o = opts();
  const CheckReport ac = check_almost_contact(s, o);
  CHECK(ac.passed());
  CHECK(ac.max_residual <= 1e-12);
  CHECK(check_metric_compatibility(s, o).max_residual <= 1e-10);
  CHECK(check_contact_metric(s, DConvention::half, o).passed());
  CHECK(check_alpha_sasakian(s, 1.0, o).passed());
  CHECK(check_k_contact(s, o).passed());
  CHECK_THROWS_AS(check_alpha_sasakian(s, 0.0, o), InvalidAlpha);
}

TEST_CASE("mutated sasakian structures fail") {
  const SampleOptions o = opts();
  const AlmostContactStructure base = sasakian();
  const auto& c = base.manifold.coords();

  AlmostContactStructure phi2 = base;
  phi2.phi = scale(base.phi, 2.0, c);
  AlmostContactStructure eta2 = base;
  eta2.eta = scale(base.eta, 2.0, c);
  AlmostContactStructure xi2 = base;
  xi2.xi = scale(base.xi, 2.0, c);

  const CheckReport ac = check_almost_contact(phi2, o);
  CHECK_FALSE(ac.passed());
  CHECK(ac.max_residual >= 1.0);
  CHECK_FALSE(check_almost_contact(eta2, o).passed());
  CHECK_FALSE(check_almost_contact(xi2, o).passed());
  CHECK(check_metric_compatibility(phi2, o).max_residual >= 0.1);
  CHECK(check_contact_metric(eta2, DConvention::half, o).max_residual >= 0.1);
  CHECK(check_alpha_sasakian(phi2, 1.0, o).max_residual >= 0.1);
  CHECK(check_k_contact(xi2, o).max_residual >= 0.1);
  // the plain convention doubles dη, so the unmutated structure fails too
  CHECK(check_contact_metric(base, DConvention::plain, o).max_residual >= 0.1);
}

TEST_CASE("residuals grow with the size of the mutation") {
  const SampleOptions o = opts(10);
  const AlmostContactStructure base = sasakian();
  double last = 0.0;
  for (double f : {1.01, 1.1, 1.5, 2.0}) {
    AlmostContactStructure s = base;
    s.phi = scale(base.phi, f, base.manifold.coords());
    const double r = check_almost_contact(s, o).max_residual;
    CHECK(r > last);
    last = r;
  }
}

TEST_CASE("flat R3 with zero phi is a degenerate K-contact pass") {
  const ManifoldSpecFile e = load_fixture("euclidean-r3");
  AlmostContactStructure s = *e.contact;
  std::vector<Expr> zero(9, Expr::constant(0.0));
  s.phi = EndoField(zero, 3, s.manifold.coords());
  CHECK(check_k_contact(s, opts()).passed());
  // φ² = −I + η⊗ξ does not hold for φ = 0
  CHECK_FALSE(check_almost_contact(s, opts()).passed());
  // an exact η with nonzero Φ is never contact metric
  CHECK_FALSE(check_contact_metric(*e.contact, DConvention::half, opts()).passed());
}

TEST_CASE("fundamental forms") {
  const AlmostContactStructure s = sasakian();
  const Vec p = vec({0.2, -0.3, 0.1});
  CHECK(std::abs(fundamental_form(s, s.xi, coordinate_field(s.manifold, 0), p)) <= 1e-15);
  const AlmostComplexStructure a = example_base();
  CHECK(fundamental_form(a, coordinate_field(a.manifold, 0), coordinate_field(a.manifold, 2),
                         vec({0.1, 0.2, 0.3, 0.4})) == doctest::Approx(-0.25));
}

TEST_CASE("complex structure checks on the example base") {
  const AlmostComplexStructure a = example_base();
  const SampleOptions o = opts();
  const CheckReport h = check_hermitian(a, o);
  CHECK(h.passed());
  CHECK(h.max_residual <= 1e-12);
  CHECK(check_kaehler(a, o).max_residual <= 1e-10);
  const CheckReport ep = check_exact_potential(a, DConvention::half, o);
  CHECK(ep.passed());
  CHECK(ep.max_residual <= 1e-12);

  AlmostComplexStructure j2 = a;
  j2.J = scale(a.J, 2.0, a.manifold.coords());
  CHECK(check_hermitian(j2, o).max_residual >= 0.1);

  AlmostComplexStructure no_potential = a;
  no_potential.omega = OneFormField(std::vector<Expr>(4, Expr::constant(0.0)), a.manifold.coords());
  CHECK_FALSE(check_exact_potential(no_potential, DConvention::half, o).passed());
}

TEST_CASE("curved plane is not kaehler") {
  const AlmostComplexStructure a = *load_fixture("scaled-plane", WARPGEO_FIXTURE_DIR).complex;
  CHECK(check_kaehler(a, opts()).max_residual >= 0.1);
}

TEST_CASE("coefficient PDEs") {
  const AlmostComplexStructure std_base = *load_fixture("standard-example").complex;
  CHECK(check_coefficient_pdes(std_base, opts()).passed());
  AlmostComplexStructure zero = std_base;
  zero.omega = OneFormField(std::vector<Expr>(4, Expr::constant(0.0)), std_base.manifold.coords());
  CHECK(check_coefficient_pdes(zero, opts()).max_residual == doctest::Approx(1.0));
  CHECK_THROWS_AS(check_coefficient_pdes(example_base(), opts()), ConventionMismatch);
}

TEST_CASE("dimension mismatches are rejected") {
  AlmostContactStructure s = sasakian();
  const std::vector<std::string> two{"x", "y"};
  s.xi = VectorField({parse("0"), parse("1")}, two);
  CHECK_THROWS_AS(validate(s), DimensionMismatch);
}

TEST_CASE("samples do not depend on how many are drawn") {
  const ChartedManifold m = sasakian().manifold;
  const SamplePoint a = draw_sample(m, 5, 3);
  const SamplePoint b = draw_sample(m, 5, 3);
  CHECK(a.point == b.point);
  CHECK(draw_sample(m, 5, 4).point != a.point);
  SampleOptions few = opts(3), many = opts(30);
  const AlmostContactStructure s = sasakian();
  CHECK(check_almost_contact(s, few).max_residual <= check_almost_contact(s, many).max_residual);
}
