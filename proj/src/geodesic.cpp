#include "warpgeo/geodesic.hpp"

#include <cmath>
#include <ostream>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"

namespace warpgeo {

Vec geodesic_rhs(const ChartedManifold& m, const GeodesicState& s) {
  const LocalGeometry geo = local_geometry(m, s.point);
  return -geo.gamma.contract(s.velocity, s.velocity);
}

Trajectory integrate(const ChartedManifold& m, const GeodesicState& s0, double duration,
                     double step) {
  if (!(step > 0.0)) throw PreconditionError("integration step must be positive");
  if (!(duration >= 0.0)) throw PreconditionError("integration duration must be non-negative");
  if (s0.point.size() != static_cast<Eigen::Index>(m.dim()) || s0.velocity.size() != s0.point.size())
    throw DimensionMismatch("initial state does not match the chart");
  if (!m.contains(s0.point)) throw PreconditionError("initial point lies outside the chart box");

  Trajectory t;
  t.step = step;
  t.times.push_back(0.0);
  t.states.push_back(s0);

  const auto steps = static_cast<std::size_t>(std::ceil(duration / step - 1e-9));
  GeodesicState s = s0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * step;
    const double t1 = std::min(static_cast<double>(k + 1) * step, duration);
    const double h = t1 - t0;
    auto f = [&](const Vec& x, const Vec& v) { return geodesic_rhs(m, {x, v}); };
    const Vec k1x = s.velocity;
    const Vec k1v = f(s.point, s.velocity);
    const Vec k2x = s.velocity + 0.5 * h * k1v;
    const Vec k2v = f(s.point + 0.5 * h * k1x, k2x);
    const Vec k3x = s.velocity + 0.5 * h * k2v;
    const Vec k3v = f(s.point + 0.5 * h * k2x, k3x);
    const Vec k4x = s.velocity + h * k3v;
    const Vec k4v = f(s.point + h * k3x, k4x);
    s.point += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.velocity += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!m.contains(s.point) || !s.velocity.allFinite()) {
      t.truncated = true;
      break;
    }
    t.times.push_back(t1);
    t.states.push_back(s);
  }
  return t;
}

double speed_squared(const ChartedManifold& m, const GeodesicState& s) {
  return local_geometry(m, s.point).inner(s.velocity, s.velocity);
}

double geodesic_defect(const ChartedManifold& m, const Trajectory& t) {
  const std::size_t n = t.states.size();
  double worst_defect = 0.0;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double h = t.times[k + 1] - t.times[k];
    if (std::abs((t.times[k + 2] - t.times[k + 1]) - h) > 1e-12 * h ||
        std::abs((t.times[k] - t.times[k - 1]) - h) > 1e-12 * h ||
        std::abs((t.times[k - 1] - t.times[k - 2]) - h) > 1e-12 * h)
      continue;  // the shortened final step breaks the uniform stencil
    const Vec& xm2 = t.states[k - 2].point;
    const Vec& xm1 = t.states[k - 1].point;
    const Vec& x0 = t.states[k].point;
    const Vec& xp1 = t.states[k + 1].point;
    const Vec& xp2 = t.states[k + 2].point;
    const Vec vel = (xm2 - 8.0 * xm1 + 8.0 * xp1 - xp2) / (12.0 * h);
    const Vec acc = (-xm2 + 16.0 * xm1 - 30.0 * x0 + 16.0 * xp1 - xp2) / (12.0 * h * h);
    const LocalGeometry geo = local_geometry(m, x0);
    const Vec rhs = -geo.gamma.contract(t.states[k].velocity, t.states[k].velocity);
    worst_defect = worst(worst_defect, geo.norm(vel - t.states[k].velocity));
    worst_defect = worst(worst_defect, geo.norm(acc - rhs));
  }
  return worst_defect;
}

GeodesicConditions printed_geodesic_conditions(const WarpedProduct& w, const VectorJet& x, const Vec& v,
                               const Vec& p) {
  const Vec pb = w.base_point(p);
  const Vec pf = w.fiber_point(p);
  const AlmostComplexStructure& base = w.spec.base;
  const AlmostContactStructure& fib = w.spec.fiber;
  const LocalGeometry geo1 = local_geometry(base.manifold, pb);
  const LocalGeometry geo2 = local_geometry(fib.manifold, pf);
  const EndoJet J = jet(base.J, pb);
  const VectorJet omega = jet(base.omega, pb);
  const ScalarJet f = jet(w.warp_base, pb);
  const Vec grad_f = grad(geo1, f);
  const Mat phi = eval(fib.phi, pf);
  const Vec xi = eval(fib.xi, pf);
  const Vec eta = eval(fib.eta, pf);
  const double al = w.spec.a;

  const Vec jx = J.value * x.value;
  const double eta_bar = al * omega.value.dot(x.value) + eta.dot(v);
  const Vec pv = phi * v;
  const double gpp = geo2.inner(pv, pv);
  const double xf = f.grad.dot(x.value);
  // X[ω(JX)] and X[ω(X)] along the jet of X
  const VectorJet jx_jet = apply(J, x);
  const double x_omega_jx = directional_pairing(x.value, omega, jx_jet);
  const double x_omega_x = directional_pairing(x.value, omega, x);

  GeodesicConditions r;
  r.res_i = 2.0 * al * eta_bar * jx + f.value * gpp * grad_f;
  r.res_ii = -(2.0 * xf / f.value) * (phi * pv) +
             2.0 * (-eta_bar / (f.value * f.value) + eta.dot(v)) * pv +
             al * (2.0 * al * eta_bar + x_omega_jx + x_omega_x + f.value * gpp * omega.value.dot(grad_f)) *
                 xi;
  r.norm_i = geo1.norm(r.res_i);
  r.norm_ii = geo2.norm(r.res_ii);
  return r;
}

namespace {

Trajectory certified(const ChartedManifold& m, const GeodesicState& s0, double duration,
                     double step, const char* which) {
  Trajectory t = integrate(m, s0, duration, step);
  if (t.truncated)
    throw PreconditionError(std::string(which) + " curve leaves the chart box of " + m.name());
  const double defect = geodesic_defect(m, t);
  if (!(defect <= kGeodesicCertificationTol))
    throw PreconditionError(std::string(which) + " curve is not a geodesic of " + m.name() +
                            " (defect " + format_number(defect) + ")");
  return t;
}

}  // namespace

ProductGeodesicReport product_geodesic_check(const WarpedProduct& w, const GeodesicState& gamma0,
                                             const GeodesicState& beta0, double duration,
                                             double step, Expectation oracle_expectation,
                                             double tol) {
  const ChartedManifold& base = w.spec.base.manifold;
  const ChartedManifold& fib = w.spec.fiber.manifold;
  const ChartedManifold& prod = w.structure.manifold;
  const Trajectory gt = certified(base, gamma0, duration, step, "base");
  const Trajectory bt = certified(fib, beta0, duration, step, "fiber");

  const auto n = static_cast<Eigen::Index>(prod.dim());
  const std::size_t stride = std::max<std::size_t>(1, gt.states.size() / 100);
  ResidualStats oracle, printed, agreement;
  double worst_i = 0.0;
  double worst_ii = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < gt.states.size(); k += stride, ++count) {
    const GeodesicState& g = gt.states[k];
    const GeodesicState& b = bt.states[k];
    Vec p(n), v(n), acc(n);
    p << g.point, b.point;
    v << g.velocity, b.velocity;
    acc << geodesic_rhs(base, g), geodesic_rhs(fib, b);

    // ∇_{c'}c' = c'' + ∇_V V for the constant extension V of c'(t), the
    // latter read off the Koszul formula against each coordinate field.
    const LocalGeometry geo = local_geometry(prod, p);
    const VectorJet vj = constant_jet(v);
    Vec lowered(n);
    for (Eigen::Index j = 0; j < n; ++j)
      lowered[j] = koszul(geo, vj, vj, constant_jet(Vec::Unit(n, j)));
    const Vec cov = acc + 0.5 * (geo.g_inv * lowered);
    const double ro = geo.norm(cov);
    oracle.add(ro);

    const GeodesicConditions t = printed_geodesic_conditions(w, constant_jet(g.velocity), b.velocity, p);
    const double rp = std::max(t.norm_i, t.norm_ii);
    worst_i = worst(worst_i, t.norm_i);
    worst_ii = worst(worst_ii, t.norm_ii);
    printed.add(rp);
    const bool same = (ro <= tol) == (rp <= tol);
    agreement.add(same ? 0.0 : 1.0);
  }

  ProductGeodesicReport out;
  out.oracle = make_report("product_geodesic.oracle", prod.name(), oracle, tol, oracle_expectation,
                           count, 0);
  out.printed = make_report("product_geodesic.printed", prod.name(), printed, tol,
                            Expectation::probe, count, 0);
  ReportEntry ei{"‖res_i‖ (g₁ norm)", std::nan(""), std::nan(""), worst_i,
                 judge(worst_i, tol, Expectation::probe)};
  ReportEntry eii{"‖res_ii‖ (g₂ norm)", std::nan(""), std::nan(""), worst_ii,
                  judge(worst_ii, tol, Expectation::probe)};
  out.printed.entries = {ei, eii};
  out.agreement = make_report("product_geodesic.agreement", prod.name(), agreement, 0.5,
                              Expectation::probe, count, 0);
  out.agreement.notes.push_back("residual 1 marks a sample time where exactly one of the oracle "
                                "and the printed conditions vanishes");
  for (CheckReport* r : {&out.oracle, &out.printed, &out.agreement}) {
    r->notes.push_back("duration=" + format_number(duration) + " step=" + format_number(step));
  }
  return out;
}

void write_csv(std::ostream& os, const ChartedManifold& m, const Trajectory& t) {
  os << "t";
  for (const auto& c : m.coords()) os << ',' << c;
  for (const auto& c : m.coords()) os << ",v_" << c;
  os << ",speed2\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    os << format_number(t.times[k]);
    for (Eigen::Index i = 0; i < t.states[k].point.size(); ++i)
      os << ',' << format_number(t.states[k].point[i]);
    for (Eigen::Index i = 0; i < t.states[k].velocity.size(); ++i)
      os << ',' << format_number(t.states[k].velocity[i]);
    os << ',' << format_number(speed_squared(m, t.states[k])) << '\n';
  }
}

void write_svg(std::ostream& os, const ChartedManifold& m, const Trajectory& t, std::size_t ax,
               std::size_t ay) {
  if (ax >= m.dim() || ay >= m.dim()) throw DimensionMismatch("plot axis out of range");
  const Interval bx = m.box()[ax];
  const Interval by = m.box()[ay];
  constexpr double size = 480.0;
  constexpr double pad = 20.0;
  auto sx = [&](double v) { return pad + (v - bx.lo) / (bx.hi - bx.lo) * size; };
  auto sy = [&](double v) { return pad + (by.hi - v) / (by.hi - by.lo) * size; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"520\">\n"
     << "<rect x=\"20\" y=\"20\" width=\"480\" height=\"480\" fill=\"none\" stroke=\"#888\"/>\n"
     << "<text x=\"260\" y=\"515\" text-anchor=\"middle\" font-size=\"12\">" << m.coords()[ax]
     << "</text>\n<text x=\"8\" y=\"260\" font-size=\"12\">" << m.coords()[ay] << "</text>\n"
     << "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const Vec& q = t.states[k].point;
    os << (k ? " " : "") << format_number(sx(q[static_cast<Eigen::Index>(ax)])) << ','
       << format_number(sy(q[static_cast<Eigen::Index>(ay)]));
  }
  os << "\"/>\n</svg>\n";
}

}  // namespace warpgeo
