#include "warpgeo/tensor.hpp"

#include <cmath>

#include "warpgeo/errors.hpp"

namespace warpgeo {

const char* to_string(DConvention c) { return c == DConvention::half ? "half" : "plain"; }

namespace {

std::span<const double> as_span(const Vec& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

// Central difference with one Richardson extrapolation step.
double fd_partial(const Program& f, const Vec& p, std::size_t i) {
  auto central = [&](double h) {
    Vec a = p;
    Vec b = p;
    a[static_cast<Eigen::Index>(i)] += h;
    b[static_cast<Eigen::Index>(i)] -= h;
    return (f.eval(as_span(a)) - f.eval(as_span(b))) / (2.0 * h);
  };
  const double coarse = central(kFiniteDifferenceStep);
  const double fine = central(0.5 * kFiniteDifferenceStep);
  return (4.0 * fine - coarse) / 3.0;
}

void require_inside(const ChartedManifold& m, const Vec& p) {
  if (static_cast<std::size_t>(p.size()) != m.dim())
    throw DimensionMismatch(m.name() + ": point has wrong dimension");
  if (!m.contains(p)) throw PreconditionError(m.name() + ": point lies outside the chart box");
}

}  // namespace

ScalarJet jet(const Program& f, const Vec& p, DiffMode mode) {
  const std::size_t n = static_cast<std::size_t>(p.size());
  ScalarJet out;
  out.grad = Vec::Zero(static_cast<Eigen::Index>(n));
  if (f.is_constant()) {
    out.value = f.eval(as_span(p));
    return out;
  }
  if (mode == DiffMode::dual) {
    for (std::size_t i = 0; i < n; ++i) {
      const Dual d = f.eval_seeded(as_span(p), i);
      out.value = d.value;
      out.grad[static_cast<Eigen::Index>(i)] = d.deriv;
    }
    if (n == 0) out.value = f.eval(as_span(p));
  } else {
    out.value = f.eval(as_span(p));
    for (std::size_t i = 0; i < n; ++i) out.grad[static_cast<Eigen::Index>(i)] = fd_partial(f, p, i);
  }
  return out;
}

ScalarJet jet(const ScalarField& f, const Vec& p, DiffMode mode) { return jet(f.program(), p, mode); }

namespace {

template <class Field>
VectorJet component_jet(const Field& x, const Vec& p, DiffMode mode) {
  const auto n = static_cast<Eigen::Index>(x.dim());
  VectorJet out{Vec::Zero(n), Mat::Zero(n, p.size())};
  for (Eigen::Index k = 0; k < n; ++k) {
    const ScalarJet s = jet(x.program(static_cast<std::size_t>(k)), p, mode);
    out.value[k] = s.value;
    out.jac.row(k) = s.grad.transpose();
  }
  return out;
}

}  // namespace

VectorJet jet(const VectorField& x, const Vec& p, DiffMode mode) { return component_jet(x, p, mode); }
VectorJet jet(const OneFormField& eta, const Vec& p, DiffMode mode) {
  return component_jet(eta, p, mode);
}

EndoJet jet(const EndoField& phi, const Vec& p, DiffMode mode) {
  const auto n = static_cast<Eigen::Index>(phi.dim());
  EndoJet out{Mat::Zero(n, n), std::vector<Mat>(static_cast<std::size_t>(p.size()), Mat::Zero(n, n))};
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const ScalarJet s =
          jet(phi.program(static_cast<std::size_t>(k), static_cast<std::size_t>(j)), p, mode);
      out.value(k, j) = s.value;
      for (std::size_t i = 0; i < out.partial.size(); ++i)
        out.partial[i](k, j) = s.grad[static_cast<Eigen::Index>(i)];
    }
  }
  return out;
}

VectorJet constant_jet(const Vec& v) { return {v, Mat::Zero(v.size(), v.size())}; }

Vec eval(const VectorField& x, const Vec& p) {
  Vec out(static_cast<Eigen::Index>(x.dim()));
  for (std::size_t k = 0; k < x.dim(); ++k)
    out[static_cast<Eigen::Index>(k)] = x.program(k).eval(as_span(p));
  return out;
}

Vec eval(const OneFormField& eta, const Vec& p) {
  Vec out(static_cast<Eigen::Index>(eta.dim()));
  for (std::size_t k = 0; k < eta.dim(); ++k)
    out[static_cast<Eigen::Index>(k)] = eta.program(k).eval(as_span(p));
  return out;
}

Mat eval(const EndoField& phi, const Vec& p) {
  const auto n = static_cast<Eigen::Index>(phi.dim());
  Mat out(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      out(k, j) =
          phi.program(static_cast<std::size_t>(k), static_cast<std::size_t>(j)).eval(as_span(p));
  return out;
}

double eval(const ScalarField& f, const Vec& p) { return f.program().eval(as_span(p)); }

Vec Christoffel::contract(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < dim_; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double xi = x[static_cast<Eigen::Index>(i)];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < dim_; ++j) s += (*this)(k, i, j) * xi * y[static_cast<Eigen::Index>(j)];
    }
    out[static_cast<Eigen::Index>(k)] = s;
  }
  return out;
}

double LocalGeometry::norm(const Vec& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

LocalGeometry local_geometry(const ChartedManifold& m, const Vec& p, DiffMode mode) {
  const std::size_t n = m.dim();
  if (static_cast<std::size_t>(p.size()) != n)
    throw DimensionMismatch(m.name() + ": point has wrong dimension");
  const auto en = static_cast<Eigen::Index>(n);

  LocalGeometry geo;
  geo.point = p;
  geo.g = Mat::Zero(en, en);
  geo.dg.assign(n, Mat::Zero(en, en));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const ScalarJet s = jet(m.metric_program(i, j), p, mode);
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      geo.g(a, b) = geo.g(b, a) = s.value;
      for (std::size_t h = 0; h < n; ++h) geo.dg[h](a, b) = geo.dg[h](b, a) = s.grad[static_cast<Eigen::Index>(h)];
    }
  }

  Eigen::LLT<Mat> llt(geo.g);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(geo.g, Eigen::EigenvaluesOnly);
    throw NotPositiveDefinite(eig.eigenvalues().minCoeff());
  }
  geo.g_inv = llt.solve(Mat::Identity(en, en));

  geo.gamma = Christoffel(n);
  Vec lowered(en);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      for (Eigen::Index h = 0; h < en; ++h)
        lowered[h] = geo.dg[j](a, h) + geo.dg[i](h, b) - geo.dg[static_cast<std::size_t>(h)](a, b);
      const Vec raised = 0.5 * (geo.g_inv * lowered);
      for (std::size_t k = 0; k < n; ++k)
        geo.gamma.at(k, i, j) = geo.gamma.at(k, j, i) = raised[static_cast<Eigen::Index>(k)];
    }
  }
  return geo;
}

Vec nabla(const LocalGeometry& geo, const Vec& x, const VectorJet& y) {
  return y.jac * x + geo.gamma.contract(x, y.value);
}

Vec lie_bracket(const VectorJet& x, const VectorJet& y) {
  return y.jac * x.value - x.jac * y.value;
}

double directional_inner(const LocalGeometry& geo, const Vec& dir, const VectorJet& y,
                         const VectorJet& z) {
  double s = 0.0;
  for (std::size_t i = 0; i < geo.dim(); ++i) {
    const double di = dir[static_cast<Eigen::Index>(i)];
    if (di == 0.0) continue;
    const auto c = static_cast<Eigen::Index>(i);
    const double partial = y.value.dot(geo.dg[i] * z.value) +
                           y.jac.col(c).dot(geo.g * z.value) + y.value.dot(geo.g * z.jac.col(c));
    s += di * partial;
  }
  return s;
}

double koszul(const LocalGeometry& geo, const VectorJet& x, const VectorJet& y,
              const VectorJet& z) {
  const Vec yz = lie_bracket(y, z);
  const Vec zx = lie_bracket(z, x);
  const Vec xy = lie_bracket(x, y);
  return directional_inner(geo, x.value, y, z) + directional_inner(geo, y.value, x, z) -
         directional_inner(geo, z.value, x, y) - geo.inner(x.value, yz) +
         geo.inner(y.value, zx) + geo.inner(z.value, xy);
}

double directional_pairing(const Vec& dir, const VectorJet& eta, const VectorJet& y) {
  // ∂_i(η_a Y^a) = (∂_i η_a) Y^a + η_a ∂_i Y^a
  const Vec partials = eta.jac.transpose() * y.value + y.jac.transpose() * eta.value;
  return dir.dot(partials);
}

double d_oneform(const VectorJet& eta, const VectorJet& x, const VectorJet& y,
                 DConvention convention) {
  const double raw = directional_pairing(x.value, eta, y) - directional_pairing(y.value, eta, x) -
                     eta.value.dot(lie_bracket(x, y));
  return convention == DConvention::half ? 0.5 * raw : raw;
}

Vec grad(const LocalGeometry& geo, const ScalarJet& f) { return geo.g_inv * f.grad; }

VectorJet apply(const EndoJet& phi, const VectorJet& y) {
  VectorJet out{phi.value * y.value, phi.value * y.jac};
  for (std::size_t i = 0; i < phi.partial.size(); ++i)
    out.jac.col(static_cast<Eigen::Index>(i)) += phi.partial[i] * y.value;
  return out;
}

Vec nabla_endo(const LocalGeometry& geo, const EndoJet& phi, const Vec& x, const VectorJet& y) {
  return nabla(geo, x, apply(phi, y)) - phi.value * nabla(geo, x, y);
}

double metric_compatibility_residual(const LocalGeometry& geo, const VectorJet& x,
                                     const VectorJet& y, const VectorJet& z) {
  return directional_inner(geo, x.value, y, z) - geo.inner(nabla(geo, x.value, y), z.value) -
         geo.inner(y.value, nabla(geo, x.value, z));
}

// ---------------------------------------------------------------------------

Mat metric_at(const ChartedManifold& m, const Vec& p) {
  require_inside(m, p);
  return local_geometry(m, p).g;
}

Mat metric_inverse_at(const ChartedManifold& m, const Vec& p) {
  require_inside(m, p);
  return local_geometry(m, p).g_inv;
}

Christoffel christoffel(const ChartedManifold& m, const Vec& p, DiffMode mode) {
  require_inside(m, p);
  return local_geometry(m, p, mode).gamma;
}

Vec nabla(const ChartedManifold& m, const VectorField& x, const VectorField& y, const Vec& p) {
  require_inside(m, p);
  const LocalGeometry geo = local_geometry(m, p);
  return nabla(geo, eval(x, p), jet(y, p));
}

double koszul(const ChartedManifold& m, const VectorField& x, const VectorField& y,
              const VectorField& z, const Vec& p) {
  require_inside(m, p);
  const LocalGeometry geo = local_geometry(m, p);
  return koszul(geo, jet(x, p), jet(y, p), jet(z, p));
}

Vec lie_bracket(const ChartedManifold& m, const VectorField& x, const VectorField& y,
                const Vec& p) {
  require_inside(m, p);
  return lie_bracket(jet(x, p), jet(y, p));
}

double d_oneform(const ChartedManifold& m, const OneFormField& eta, const VectorField& x,
                 const VectorField& y, const Vec& p, DConvention convention) {
  require_inside(m, p);
  return d_oneform(jet(eta, p), jet(x, p), jet(y, p), convention);
}

Vec grad(const ChartedManifold& m, const ScalarField& f, const Vec& p) {
  require_inside(m, p);
  return grad(local_geometry(m, p), jet(f, p));
}

Vec nabla_endo(const ChartedManifold& m, const EndoField& phi, const VectorField& x,
               const VectorField& y, const Vec& p) {
  require_inside(m, p);
  const LocalGeometry geo = local_geometry(m, p);
  return nabla_endo(geo, jet(phi, p), eval(x, p), jet(y, p));
}

}  // namespace warpgeo
