#include "warpgeo/structures.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"

namespace warpgeo {

const char* to_string(JConvention c) {
  switch (c) {
    case JConvention::unspecified: return "unspecified";
    case JConvention::standard: return "standard";
    case JConvention::swapped: return "swapped";
  }
  return "?";
}

ContactJets contact_jets(const AlmostContactStructure& s, const Vec& p) {
  return {local_geometry(s.manifold, p), jet(s.phi, p), jet(s.xi, p), jet(s.eta, p)};
}

ComplexJets complex_jets(const AlmostComplexStructure& a, const Vec& p) {
  return {local_geometry(a.manifold, p), jet(a.J, p), jet(a.omega, p)};
}

void validate(const AlmostContactStructure& s) {
  const std::size_t n = s.manifold.dim();
  if (s.phi.dim() != n || s.xi.dim() != n || s.eta.dim() != n)
    throw DimensionMismatch(s.manifold.name() + ": structure tensors do not match the chart");
}

void validate(const AlmostComplexStructure& a) {
  const std::size_t n = a.manifold.dim();
  if (a.J.dim() != n || a.omega.dim() != n)
    throw DimensionMismatch(a.manifold.name() + ": structure tensors do not match the chart");
}

double fundamental_form(const AlmostContactStructure& s, const VectorField& x,
                        const VectorField& y, const Vec& p) {
  validate(s);
  const Mat g = metric_at(s.manifold, p);
  return eval(x, p).dot(g * (eval(s.phi, p) * eval(y, p)));
}

double fundamental_form(const AlmostComplexStructure& a, const VectorField& x,
                        const VectorField& y, const Vec& p) {
  validate(a);
  const Mat g = metric_at(a.manifold, p);
  return eval(x, p).dot(g * (eval(a.J, p) * eval(y, p)));
}

SamplePoint draw_sample(const ChartedManifold& m, std::uint64_t seed, std::size_t index) {
  SampleStream s(seed, index);
  SamplePoint sp;
  sp.index = index;
  sp.point = sample_point(m.box(), s);
  for (int k = 0; k < 3; ++k) sp.random.push_back(random_field(m.dim(), s));
  return sp;
}

std::vector<VectorJet> coordinate_jets(std::size_t dim) {
  std::vector<VectorJet> out;
  const auto n = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(constant_jet(Vec::Unit(n, i)));
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

FieldSet field_set(const ChartedManifold& m, const SampleOptions& o, std::size_t index) {
  const SamplePoint sp = draw_sample(m, o.seed, index);
  FieldSet fs;
  fs.point = sp.point;
  if (o.coordinate_fields) fs.coords = coordinate_jets(m.dim());
  for (const PolynomialField& r : sp.random) fs.random.push_back(r.jet(sp.point));
  return fs;
}

namespace {

CheckReport finish(std::string name, const ChartedManifold& m, const ResidualStats& stats,
                   double tol, const SampleOptions& o) {
  return make_report(std::move(name), m.name(), stats, tol, Expectation::pass, o.samples, o.seed);
}

}  // namespace

CheckReport check_almost_contact(const AlmostContactStructure& s, const SampleOptions& o,
                                 double tol) {
  validate(s);
  const ResidualStats stats = sample_residuals(s.manifold, o, [&](const FieldSet& fs) {
    const ContactJets c = contact_jets(s, fs.point);
    const Mat& phi = c.phi.value;
    const Vec& xi = c.xi.value;
    const Vec& eta = c.eta.value;
    const double fixed = std::abs(eta.dot(xi) - 1.0) + c.geo.norm(phi * xi);
    return fs.max_over_singles([&](const VectorJet& x) {
      const Vec& v = x.value;
      return c.geo.norm(phi * (phi * v) + v - eta.dot(v) * xi) + fixed +
             std::abs(eta.dot(phi * v));
    });
  });
  return finish("almost_contact", s.manifold, stats, tol, o);
}

CheckReport check_metric_compatibility(const AlmostContactStructure& s, const SampleOptions& o,
                                       double tol) {
  validate(s);
  const ResidualStats stats = sample_residuals(s.manifold, o, [&](const FieldSet& fs) {
    const ContactJets c = contact_jets(s, fs.point);
    const Mat& phi = c.phi.value;
    const Vec& xi = c.xi.value;
    const Vec& eta = c.eta.value;
    const LocalGeometry& geo = c.geo;
    return fs.max_over_pairs([&](const VectorJet& xj, const VectorJet& yj) {
      const Vec& x = xj.value;
      const Vec& y = yj.value;
      return std::abs(geo.inner(phi * x, phi * y) - geo.inner(x, y) + eta.dot(x) * eta.dot(y)) +
             std::abs(geo.inner(x, xi) - eta.dot(x)) + std::abs(geo.inner(phi * x, xi)) +
             std::abs(geo.inner(phi * x, y) + geo.inner(phi * y, x));
    });
  });
  return finish("metric_compatibility", s.manifold, stats, tol, o);
}

CheckReport check_d_eta_proportional(const AlmostContactStructure& s, double factor,
                                     DConvention conv, const SampleOptions& o, double tol) {
  validate(s);
  const ResidualStats stats = sample_residuals(s.manifold, o, [&](const FieldSet& fs) {
    const ContactJets c = contact_jets(s, fs.point);
    return fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      const double big_phi = c.geo.inner(x.value, c.phi.value * y.value);
      return std::abs(d_oneform(c.eta, x, y, conv) - factor * big_phi);
    });
  });
  CheckReport r = finish("d_eta_proportional", s.manifold, stats, tol, o);
  r.conventions["d"] = to_string(conv);
  r.notes.push_back("factor=" + format_number(factor));
  return r;
}

CheckReport check_contact_metric(const AlmostContactStructure& s, DConvention conv,
                                 const SampleOptions& o, double tol) {
  CheckReport r = check_d_eta_proportional(s, 1.0, conv, o, tol);
  r.name = "contact_metric";
  r.notes.clear();
  return r;
}

CheckReport check_alpha_sasakian(const AlmostContactStructure& s, double alpha,
                                 const SampleOptions& o, double tol) {
  if (alpha == 0.0) throw InvalidAlpha();
  validate(s);
  const ResidualStats stats = sample_residuals(s.manifold, o, [&](const FieldSet& fs) {
    const ContactJets c = contact_jets(s, fs.point);
    return fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      const Vec lhs = nabla_endo(c.geo, c.phi, x.value, y);
      const Vec rhs =
          alpha * (c.geo.inner(x.value, y.value) * c.xi.value - c.eta.value.dot(y.value) * x.value);
      return c.geo.norm(lhs - rhs);
    });
  });
  CheckReport r = finish("alpha_sasakian", s.manifold, stats, tol, o);
  r.notes.push_back("alpha=" + format_number(alpha));
  return r;
}

CheckReport check_k_contact(const AlmostContactStructure& s, const SampleOptions& o, double tol) {
  validate(s);
  const ResidualStats stats = sample_residuals(s.manifold, o, [&](const FieldSet& fs) {
    const ContactJets c = contact_jets(s, fs.point);
    const double killing = fs.max_over_singles([&](const VectorJet& x) {
      return c.geo.norm(nabla(c.geo, x.value, c.xi) + c.phi.value * x.value);
    });
    const double contact = fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      return std::abs(d_oneform(c.eta, x, y, DConvention::half) -
                      c.geo.inner(x.value, c.phi.value * y.value));
    });
    return killing + contact;
  });
  CheckReport r = finish("k_contact", s.manifold, stats, tol, o);
  r.conventions["d"] = "half";
  return r;
}

CheckReport check_hermitian(const AlmostComplexStructure& a, const SampleOptions& o, double tol) {
  validate(a);
  const ResidualStats stats = sample_residuals(a.manifold, o, [&](const FieldSet& fs) {
    const ComplexJets c = complex_jets(a, fs.point);
    const Mat& J = c.J.value;
    return fs.max_over_pairs([&](const VectorJet& xj, const VectorJet& yj) {
      const Vec& x = xj.value;
      const Vec& y = yj.value;
      return c.geo.norm(J * (J * x) + x) +
             std::abs(c.geo.inner(J * x, J * y) - c.geo.inner(x, y));
    });
  });
  return finish("hermitian", a.manifold, stats, tol, o);
}

CheckReport check_kaehler(const AlmostComplexStructure& a, const SampleOptions& o, double tol) {
  validate(a);
  const ResidualStats stats = sample_residuals(a.manifold, o, [&](const FieldSet& fs) {
    const ComplexJets c = complex_jets(a, fs.point);
    return fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      return c.geo.norm(nabla_endo(c.geo, c.J, x.value, y));
    });
  });
  return finish("kaehler", a.manifold, stats, tol, o);
}

CheckReport check_exact_potential(const AlmostComplexStructure& a, DConvention conv,
                                  const SampleOptions& o, double tol) {
  validate(a);
  const ResidualStats stats = sample_residuals(a.manifold, o, [&](const FieldSet& fs) {
    const ComplexJets c = complex_jets(a, fs.point);
    return fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      return std::abs(d_oneform(c.omega, x, y, conv) - c.geo.inner(x.value, c.J.value * y.value));
    });
  });
  CheckReport r = finish("exact_potential", a.manifold, stats, tol, o);
  r.conventions["d"] = to_string(conv);
  return r;
}

CheckReport check_coefficient_pdes(const AlmostComplexStructure& a, const SampleOptions& o,
                                   double tol) {
  validate(a);
  if (a.convention != JConvention::standard)
    throw ConventionMismatch(a.manifold.name() +
                             ": coefficient PDEs are stated for J∂y_i = ∂x_i; structure declares " +
                             to_string(a.convention));
  const std::size_t dim = a.manifold.dim();
  if (dim % 2 != 0) throw DimensionMismatch("coefficient PDEs need an even-dimensional base");
  const std::size_t n = dim / 2;
  SampleOptions single = o;
  single.coordinate_fields = false;
  const ResidualStats stats = sample_residuals(a.manifold, single, [&](const FieldSet& fs) {
    // f_k = ω(2∂_k), so ∂_i f_k = 2 ∂_i ω_k
    const VectorJet w = jet(a.omega, fs.point);
    auto df = [&](std::size_t k, std::size_t i) {
      return 2.0 * w.jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
    };
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          r = worst(r, std::abs(df(n + i, i) - df(i, n + i) - 1.0));
          continue;
        }
        r = worst(r, std::abs(df(j, i) - df(i, j)));
        r = worst(r, std::abs(df(n + i, n + j) - df(n + j, n + i)));
        r = worst(r, std::abs(df(n + j, i) - df(i, n + j)));
      }
    }
    return r;
  });
  CheckReport rep = make_report("coefficient_pdes", a.manifold.name(), stats, tol,
                                Expectation::pass, o.samples, o.seed);
  rep.conventions["J"] = to_string(a.convention);
  return rep;
}

}  // namespace warpgeo
