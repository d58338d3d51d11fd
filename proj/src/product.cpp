#include "warpgeo/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"

namespace warpgeo {

namespace {

constexpr SampleOptions kValidation{0x5eed, 8, true};

void require(const CheckReport& r, const std::string& what) {
  if (r.passed()) return;
  throw PreconditionError(what + " fails " + r.name + " (max residual " +
                          format_number(r.max_residual) + ")");
}

Vec head(const Vec& v, std::size_t n) { return v.head(static_cast<Eigen::Index>(n)); }

// Fill the lower triangle with the very same Expr objects as the upper one.
void mirror(std::vector<Expr>& m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m[i * n + j] = m[j * n + i];
}

std::string coord_label(const ChartedManifold& m, std::size_t k) { return m.coords()[k]; }

}  // namespace

// ---------------------------------------------------------------------------

AlmostContactStructure build_contactization(const ContactizationSpec& spec) {
  const AlmostComplexStructure& b = spec.base;
  validate(b);
  if (spec.alpha == 0.0) throw InvalidAlpha();
  if (spec.validate_base) {
    const std::string what = "contactization base " + b.manifold.name();
    require(check_hermitian(b, kValidation), what);
    require(check_kaehler(b, kValidation), what);
    require(check_exact_potential(b, DConvention::half, kValidation), what);
  }

  const std::size_t nb = b.manifold.dim();
  const std::size_t n = nb + 1;
  const double alpha = spec.alpha;

  std::vector<std::string> coords = b.manifold.coords();
  coords.push_back(spec.fiber_coord);
  std::vector<Interval> box = b.manifold.box();
  box.push_back(spec.fiber_box);

  std::vector<Expr> eta(n);
  for (std::size_t c = 0; c < nb; ++c) eta[c] = alpha * b.omega.component(c);
  eta[nb] = Expr::constant(0.5);

  std::vector<Expr> g(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Expr base = (i < nb && j < nb) ? b.manifold.metric_expr(i, j) : Expr::constant(0.0);
      g[i * n + j] = base + eta[i] * eta[j];
    }
  }
  mirror(g, n);

  // φ̄(X₁, hT) = (JX₁, −α ω(JX₁) T) with T = 2∂t
  std::vector<Expr> phi(n * n, Expr::constant(0.0));
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t j = 0; j < nb; ++j) phi[k * n + j] = b.J.entry(k, j);
  for (std::size_t j = 0; j < nb; ++j) {
    Expr s = Expr::constant(0.0);
    for (std::size_t c = 0; c < nb; ++c) s = s + b.omega.component(c) * b.J.entry(c, j);
    phi[nb * n + j] = (-2.0 * alpha) * s;
  }

  std::vector<Expr> xi(n, Expr::constant(0.0));
  xi[nb] = Expr::constant(2.0);

  ChartedManifold m(b.manifold.name() + "/contactization[alpha=" + format_number(alpha) + "]",
                    coords, box, std::move(g));
  AlmostContactStructure s{m, EndoField(std::move(phi), n, m.coords()),
                           VectorField(std::move(xi), m.coords()),
                           OneFormField(std::move(eta), m.coords())};
  return s;
}

namespace {

// f_k = ω(2∂_k) at the base part of p
Vec potential_coefficients(const ContactizationSpec& spec, const Vec& p) {
  const std::size_t nb = spec.base.manifold.dim();
  return 2.0 * eval(spec.base.omega, head(p, nb));
}

}  // namespace

Mat printed_metric_matrix(const ContactizationSpec& spec, const Vec& p) {
  const Vec f = potential_coefficients(spec, p);
  const Eigen::Index nb = f.size();
  const double a = spec.alpha;
  Mat g(nb + 1, nb + 1);
  for (Eigen::Index r = 0; r < nb; ++r) {
    for (Eigen::Index c = 0; c < nb; ++c) g(r, c) = (r == c ? 1.0 : 0.0) + a * a * f[r] * f[c];
    g(r, nb) = g(nb, r) = a * f[r];
  }
  g(nb, nb) = 1.0;
  return 0.25 * g;
}

Mat printed_metric_inverse(const ContactizationSpec& spec, const Vec& p) {
  const Vec f = potential_coefficients(spec, p);
  const Eigen::Index nb = f.size();
  const double a = spec.alpha;
  Mat h = Mat::Identity(nb + 1, nb + 1);
  for (Eigen::Index r = 0; r < nb; ++r) h(r, nb) = h(nb, r) = -a * f[r];
  h(nb, nb) = 1.0 + a * a * f.squaredNorm();
  return 4.0 * h;
}

std::vector<ChristoffelClaim> printed_christoffel_table(const ContactizationSpec& spec, const Vec& p) {
  const std::size_t nb = spec.base.manifold.dim();
  if (nb % 2 != 0) throw DimensionMismatch("contactization base must be even-dimensional");
  const std::size_t n = nb / 2;
  const std::size_t t = nb;
  const double a = spec.alpha;
  const double a2 = a * a;
  const double a3 = a2 * a;

  const VectorJet w = jet(spec.base.omega, head(p, nb));
  auto f = [&](std::size_t k) { return 2.0 * w.value[static_cast<Eigen::Index>(k)]; };
  // ∂f_k / ∂(coordinate c)
  auto df = [&](std::size_t k, std::size_t c) {
    return 2.0 * w.jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c));
  };
  auto X = [](std::size_t i) { return i; };
  auto Y = [n](std::size_t i) { return n + i; };

  std::vector<ChristoffelClaim> out;
  auto claim = [&](const char* fam, std::size_t k, std::size_t i, std::size_t j, double v) {
    out.push_back({fam, k, i, j, v});
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = i == j ? 1.0 : 0.0;
      if (i != j) {
        claim("F1", Y(i), X(i), X(j), 0.5 * a2 * f(j));
        claim("F2", Y(j), X(i), X(j), 0.5 * a2 * f(i));
      } else {
        claim("F3", Y(i), X(i), X(i), a2 * f(i));
      }
      claim("F4", t, X(i), X(j), a * df(j, X(i)) - 0.5 * a3 * (f(i) * f(Y(j)) + f(j) * f(Y(i))));
      claim("F5", X(j), X(i), Y(j), -0.5 * a2 * f(i));
      claim("F6", Y(i), X(i), Y(j), 0.5 * a2 * f(Y(j)));
      claim("F7", t, X(i), Y(j),
            a * df(i, Y(j)) + 0.5 * a * d + 0.5 * a3 * (f(i) * f(j) - f(Y(i)) * f(Y(j))));
      if (i != j) {
        claim("F10", X(i), Y(i), Y(j), -0.5 * a2 * f(Y(j)));
        claim("F11", X(j), Y(i), Y(j), -0.5 * a2 * f(Y(i)));
      } else {
        // both families land on the same symbol when i = j; read as a sum,
        // the way F1 and F2 combine into F3
        claim("F10+F11", X(i), Y(i), Y(i), -a2 * f(Y(i)));
      }
      claim("F12", t, Y(i), Y(j), a * df(Y(j), Y(i)) + 0.5 * a3 * (f(i) * f(Y(j)) + f(j) * f(Y(i))));
    }
    claim("F8", Y(i), X(i), t, 0.5 * a);
    claim("F9", t, X(i), t, -0.5 * a2 * f(Y(i)));
    claim("F13", X(i), Y(i), t, -0.5 * a);
    claim("F14", t, Y(i), t, 0.5 * a2 * f(i));
  }

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> listed;
  for (const auto& c : out) listed.insert({c.k, std::min(c.i, c.j), std::max(c.i, c.j)});
  const std::size_t dim = nb + 1;
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j)
        if (!listed.count({k, i, j})) claim("zero", k, i, j, 0.0);
  return out;
}

CheckReport compare_christoffel_table(const ContactizationSpec& spec,
                                      const AlmostContactStructure& built, const SampleOptions& o,
                                      double tol) {
  const ChartedManifold& m = built.manifold;
  std::vector<ReportEntry> entries;
  ResidualStats stats;
  for (std::size_t s = 0; s < o.samples; ++s) {
    const Vec p = draw_sample(m, o.seed, s).point;
    const auto claims = printed_christoffel_table(spec, p);
    const LocalGeometry geo = local_geometry(m, p);
    if (entries.empty()) {
      for (const auto& c : claims) {
        ReportEntry e;
        e.label = c.family + " Γ^" + coord_label(m, c.k) + "_(" + coord_label(m, c.i) + "," +
                  coord_label(m, c.j) + ")";
        e.residual = -1.0;
        entries.push_back(e);
      }
    }
    double worst_here = 0.0;
    for (std::size_t q = 0; q < claims.size(); ++q) {
      const auto& c = claims[q];
      const double oracle = geo.gamma(c.k, c.i, c.j);
      const double r = std::abs(oracle - c.value);
      worst_here = worst(worst_here, r);
      ReportEntry& e = entries[q];
      if (std::isnan(r) || r > e.residual) {
        e.residual = r;
        e.measured = oracle;
        e.claimed = c.value;
      }
    }
    stats.add(worst_here);
  }
  std::size_t bad = 0;
  for (ReportEntry& e : entries) {
    e.verdict = judge(e.residual, tol, Expectation::probe);
    if (e.verdict != Verdict::pass) ++bad;
  }
  CheckReport r = make_report("christoffel_table", m.name(), stats, tol, Expectation::probe,
                              o.samples, o.seed);
  r.entries = std::move(entries);
  r.notes.push_back(std::to_string(r.entries.size()) + " entries compared, " + std::to_string(bad) +
                    " above tolerance");
  return r;
}

// ---------------------------------------------------------------------------

AdaptedFrame adapted_frame(const ContactizationSpec& spec, const AlmostContactStructure& built) {
  const std::size_t nb = spec.base.manifold.dim();
  const std::size_t n = nb / 2;
  const std::size_t dim = nb + 1;
  const auto& coords = built.manifold.coords();
  AdaptedFrame f;
  for (std::size_t i = 0; i < n; ++i) {
    // e_i = 2∂y_i − α f_{n+i} ξ̄, f_{n+i} = 2ω_{n+i}, ξ̄ = 2∂t
    std::vector<Expr> c(dim, Expr::constant(0.0));
    c[n + i] = Expr::constant(2.0);
    c[nb] = (-4.0 * spec.alpha) * spec.base.omega.component(n + i);
    f.e.emplace_back(c, coords);
    f.phi_e.push_back(apply(built.phi, f.e.back(), coords));
  }
  f.xi = built.xi;
  return f;
}

Mat frame_at(const AdaptedFrame& f, const Vec& p) {
  const std::size_t n = f.e.size();
  Mat out(p.size(), static_cast<Eigen::Index>(2 * n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    out.col(static_cast<Eigen::Index>(i)) = eval(f.e[i], p);
    out.col(static_cast<Eigen::Index>(n + i)) = eval(f.phi_e[i], p);
  }
  out.col(static_cast<Eigen::Index>(2 * n)) = eval(f.xi, p);
  return out;
}

CheckReport check_adapted_frame(const ContactizationSpec& spec, const AlmostContactStructure& built,
                                const SampleOptions& o, double tol) {
  const AdaptedFrame f = adapted_frame(spec, built);
  const std::size_t n = f.e.size();
  ResidualStats stats;
  for (std::size_t s = 0; s < o.samples; ++s) {
    const Vec p = draw_sample(built.manifold, o.seed, s).point;
    const Mat F = frame_at(f, p);
    const Mat g = metric_at(built.manifold, p);
    const Vec eta = eval(built.eta, p);
    const Mat gram = F.transpose() * g * F;
    double r = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < 2 * n; ++i)
      r = worst(r, std::abs(eta.dot(F.col(static_cast<Eigen::Index>(i)))));
    stats.add(r);
  }
  return make_report("adapted_frame", built.manifold.name(), stats, tol, Expectation::pass,
                     o.samples, o.seed);
}

CheckReport probe_printed_phi_e(const ContactizationSpec& spec, const AlmostContactStructure& built,
                                const SampleOptions& o, double tol) {
  const AdaptedFrame f = adapted_frame(spec, built);
  const std::size_t n = f.e.size();
  const std::size_t nb = 2 * n;
  std::vector<ReportEntry> entries(n);
  ResidualStats stats;
  for (std::size_t s = 0; s < o.samples; ++s) {
    const Vec p = draw_sample(built.manifold, o.seed, s).point;
    const LocalGeometry geo = local_geometry(built.manifold, p);
    const Vec w = eval(spec.base.omega, head(p, nb));
    double here = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec printed = Vec::Zero(p.size());
      printed[static_cast<Eigen::Index>(i)] = 2.0;
      printed[static_cast<Eigen::Index>(nb)] = -4.0 * spec.alpha * w[static_cast<Eigen::Index>(i)];
      const Vec applied = eval(f.phi_e[i], p);
      const double r = geo.norm(printed - applied);
      here = worst(here, r);
      if (r > entries[i].residual || std::isnan(r)) entries[i].residual = r;
    }
    stats.add(here);
  }
  for (std::size_t i = 0; i < n; ++i) {
    entries[i].label = "φ̄(e_" + std::to_string(i + 1) + ") = 2∂" + built.manifold.coords()[i] +
                       " − α f ξ̄";
    entries[i].measured = std::numeric_limits<double>::quiet_NaN();
    entries[i].claimed = std::numeric_limits<double>::quiet_NaN();
    entries[i].verdict = judge(entries[i].residual, tol, Expectation::probe);
  }
  CheckReport r = make_report("printed_phi_e", built.manifold.name(), stats, tol,
                              Expectation::probe, o.samples, o.seed);
  r.conventions["J"] = to_string(spec.base.convention);
  r.entries = std::move(entries);
  return r;
}

CheckReport check_frame_connection(const ContactizationSpec& spec, const AlmostContactStructure& built,
                            const SampleOptions& o, double tol) {
  const AdaptedFrame f = adapted_frame(spec, built);
  const std::size_t n = f.e.size();
  const double a = spec.alpha;
  static const char* const labels[] = {
      "∇_{e_i} e_j = 0",
      "∇_{φ̄e_i} φ̄e_j = 0",
      "∇_{ξ̄} ξ̄ = 0",
      "∇_{e_i} φ̄e_j = α δ_ij ξ̄",
      "∇_{φ̄e_i} e_j = −α δ_ij ξ̄",
      "∇_{ξ̄} e_i = −α φ̄e_i",
      "∇_{e_i} ξ̄ = −α φ̄e_i",
      "∇_{ξ̄} φ̄e_i = α e_i",
      "∇_{φ̄e_i} ξ̄ = α e_i",
  };
  constexpr std::size_t kRelations = 9;
  std::vector<double> rel(kRelations, 0.0);
  ResidualStats stats;
  for (std::size_t s = 0; s < o.samples; ++s) {
    const Vec p = draw_sample(built.manifold, o.seed, s).point;
    const LocalGeometry geo = local_geometry(built.manifold, p);
    std::vector<VectorJet> e, pe;
    for (std::size_t i = 0; i < n; ++i) {
      e.push_back(jet(f.e[i], p));
      pe.push_back(jet(f.phi_e[i], p));
    }
    const VectorJet xi = jet(f.xi, p);
    std::vector<double> here(kRelations, 0.0);
    auto note = [&](std::size_t r, const Vec& v) { here[r] = worst(here[r], geo.norm(v)); };
    note(2, nabla(geo, xi.value, xi));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = i == j ? 1.0 : 0.0;
        note(0, nabla(geo, e[i].value, e[j]));
        note(1, nabla(geo, pe[i].value, pe[j]));
        note(3, nabla(geo, e[i].value, pe[j]) - a * d * xi.value);
        note(4, nabla(geo, pe[i].value, e[j]) + a * d * xi.value);
      }
      note(5, nabla(geo, xi.value, e[i]) + a * pe[i].value);
      note(6, nabla(geo, e[i].value, xi) + a * pe[i].value);
      note(7, nabla(geo, xi.value, pe[i]) - a * e[i].value);
      note(8, nabla(geo, pe[i].value, xi) - a * e[i].value);
    }
    double w = 0.0;
    for (std::size_t r = 0; r < kRelations; ++r) {
      rel[r] = worst(rel[r], here[r]);
      w = worst(w, here[r]);
    }
    stats.add(w);
  }
  CheckReport r = make_report("frame_connection", built.manifold.name(), stats, tol, Expectation::probe,
                              o.samples, o.seed);
  r.conventions["J"] = to_string(spec.base.convention);
  for (std::size_t k = 0; k < kRelations; ++k) {
    ReportEntry e;
    e.label = labels[k];
    e.measured = std::numeric_limits<double>::quiet_NaN();
    e.claimed = std::numeric_limits<double>::quiet_NaN();
    e.residual = rel[k];
    e.verdict = judge(rel[k], tol, Expectation::probe);
    r.entries.push_back(e);
  }
  return r;
}

double sasakian_remainder(double alpha, double omega_y1, double h1, double h2) {
  const double eta_bar_y = alpha * omega_y1 + h2;
  return -alpha * alpha * alpha * omega_y1 * h1 + eta_bar_y * h1 - alpha * h1 * h2;
}

CheckReport probe_sasakian_remainder(const ContactizationSpec& spec, const SampleOptions& o, double tol) {
  ContactizationSpec quiet = spec;
  quiet.validate_base = false;
  const AlmostContactStructure built = build_contactization(quiet);
  const std::size_t nb = spec.base.manifold.dim();
  const ResidualStats stats = sample_residuals(built.manifold, o, [&](const FieldSet& fs) {
    const Vec w = eval(spec.base.omega, head(fs.point, nb));
    return fs.max_over_pairs([&](const VectorJet& x, const VectorJet& y) {
      // X = (X₁, h₁T) with T = 2∂t
      const double h1 = 0.5 * x.value[static_cast<Eigen::Index>(nb)];
      const double h2 = 0.5 * y.value[static_cast<Eigen::Index>(nb)];
      return sasakian_remainder(spec.alpha, w.dot(head(y.value, nb)), h1, h2);
    });
  });
  CheckReport r = make_report("sasakian_remainder[alpha=" + format_number(spec.alpha) + "]", built.manifold.name(),
                              stats, tol, Expectation::probe, o.samples, o.seed);
  return r;
}

std::vector<CheckReport> alpha_sasakian_probe(const ContactizationSpec& spec,
                                              const std::vector<double>& alphas,
                                              const SampleOptions& o) {
  std::vector<CheckReport> out;
  for (double a : alphas) {
    ContactizationSpec s = spec;
    s.alpha = a;
    const AlmostContactStructure built = build_contactization(s);
    CheckReport r = check_alpha_sasakian(built, a, o);
    r.name = "alpha_sasakian[alpha=" + format_number(a) + "]";
    r.expectation = a == 1.0 ? Expectation::pass : Expectation::probe;
    r.verdict = judge(r.max_residual, r.tolerance, r.expectation);
    r.conventions["d"] = "half";
    out.push_back(std::move(r));
    out.push_back(probe_sasakian_remainder(s, o));
  }
  return out;
}

// ---------------------------------------------------------------------------

WarpedProduct build_warped_product(const WarpedProductSpec& spec) {
  const AlmostComplexStructure& b = spec.base;
  const AlmostContactStructure& fib = spec.fiber;
  validate(b);
  validate(fib);
  const std::size_t n1 = b.manifold.dim();
  const std::size_t n2 = fib.manifold.dim();
  const std::size_t n = n1 + n2;

  WarpedProduct w;
  w.spec = spec;
  w.base_dim = n1;
  w.fiber_dim = n2;
  for (const std::string& v : spec.warp.variables())
    if (std::find(b.manifold.coords().begin(), b.manifold.coords().end(), v) ==
        b.manifold.coords().end())
      throw PreconditionError("warp depends on '" + v + "', which is not a base coordinate");
  w.warp_base = ScalarField(spec.warp, b.manifold.coords());

  if (spec.validate) {
    for (std::size_t i = 0; i < 32; ++i) {
      const Vec p = draw_sample(b.manifold, kValidation.seed, i).point;
      const double f = eval(w.warp_base, p);
      if (!(f > 0.0)) throw NonPositiveWarp("warp " + to_string(spec.warp) + " is " +
                                            format_number(f) + " on the base box");
    }
    require(check_metric_compatibility(fib, kValidation), "warped fiber " + fib.manifold.name());
  }

  std::vector<std::string> coords = b.manifold.coords();
  coords.insert(coords.end(), fib.manifold.coords().begin(), fib.manifold.coords().end());
  std::vector<Interval> box = b.manifold.box();
  box.insert(box.end(), fib.manifold.box().begin(), fib.manifold.box().end());

  const double a = spec.a;
  std::vector<Expr> eta(n);
  for (std::size_t c = 0; c < n1; ++c) eta[c] = a * b.omega.component(c);
  for (std::size_t c = 0; c < n2; ++c) eta[n1 + c] = fib.eta.component(c);

  const Expr f2 = pow(spec.warp, 2.0);
  const Expr one_minus_f2 = 1.0 - f2;
  std::vector<Expr> g(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Expr e;
      if (j < n1) {
        e = b.manifold.metric_expr(i, j) + eta[i] * eta[j];
      } else if (i < n1) {
        e = eta[i] * eta[j];
      } else {
        // f²g₂ − f²ηη + ηη, written so that f ≡ 1 folds back to g₂
        e = f2 * fib.manifold.metric_expr(i - n1, j - n1) + one_minus_f2 * (eta[i] * eta[j]);
      }
      g[i * n + j] = e;
    }
  }
  mirror(g, n);

  // φ̄(X₁, X₂) = (JX₁, φX₂ − a ω(JX₁) ξ)
  std::vector<Expr> phi(n * n, Expr::constant(0.0));
  for (std::size_t k = 0; k < n1; ++k)
    for (std::size_t j = 0; j < n1; ++j) phi[k * n + j] = b.J.entry(k, j);
  for (std::size_t k = 0; k < n2; ++k)
    for (std::size_t j = 0; j < n2; ++j) phi[(n1 + k) * n + n1 + j] = fib.phi.entry(k, j);
  for (std::size_t j = 0; j < n1; ++j) {
    Expr s = Expr::constant(0.0);
    for (std::size_t c = 0; c < n1; ++c) s = s + b.omega.component(c) * b.J.entry(c, j);
    for (std::size_t k = 0; k < n2; ++k) phi[(n1 + k) * n + j] = (-a) * (s * fib.xi.component(k));
  }

  std::vector<Expr> xi(n, Expr::constant(0.0));
  for (std::size_t k = 0; k < n2; ++k) xi[n1 + k] = fib.xi.component(k);

  ChartedManifold m(spec.name, coords, box, std::move(g));
  w.structure = AlmostContactStructure{m, EndoField(std::move(phi), n, m.coords()),
                                       VectorField(std::move(xi), m.coords()),
                                       OneFormField(std::move(eta), m.coords())};
  return w;
}

Mat printed_warped_metric(const WarpedProduct& w, const Vec& p) {
  const auto n1 = static_cast<Eigen::Index>(w.base_dim);
  const auto n2 = static_cast<Eigen::Index>(w.fiber_dim);
  const Vec pb = w.base_point(p);
  const Vec pf = w.fiber_point(p);
  const double f = eval(w.warp_base, pb);
  const Mat g1 = local_geometry(w.spec.base.manifold, pb).g;
  const Mat g2 = local_geometry(w.spec.fiber.manifold, pf).g;
  const Vec eta = eval(w.spec.fiber.eta, pf);
  const Vec eta_bar = eval(w.structure.eta, p);
  Mat g = Mat::Zero(n1 + n2, n1 + n2);
  g.topLeftCorner(n1, n1) = g1;
  g.bottomRightCorner(n2, n2) = f * f * (g2 - eta * eta.transpose());
  g -= f * f * (eta_bar * eta_bar.transpose());
  return g;
}

VectorJet lift_base(const WarpedProduct& w, const VectorJet& x) {
  const auto n = static_cast<Eigen::Index>(w.base_dim + w.fiber_dim);
  const auto n1 = static_cast<Eigen::Index>(w.base_dim);
  VectorJet out{Vec::Zero(n), Mat::Zero(n, n)};
  out.value.head(n1) = x.value;
  out.jac.topLeftCorner(n1, n1) = x.jac;
  return out;
}

VectorJet lift_fiber(const WarpedProduct& w, const VectorJet& u) {
  const auto n = static_cast<Eigen::Index>(w.base_dim + w.fiber_dim);
  const auto n2 = static_cast<Eigen::Index>(w.fiber_dim);
  VectorJet out{Vec::Zero(n), Mat::Zero(n, n)};
  out.value.tail(n2) = u.value;
  out.jac.bottomRightCorner(n2, n2) = u.jac;
  return out;
}

namespace {

// Everything the closed forms need at one product point.
struct WarpContext {
  LocalGeometry geo;   // product
  LocalGeometry geo1;  // base
  LocalGeometry geo2;  // fiber
  Mat J;
  VectorJet omega;
  Mat phi;
  Vec xi;
  VectorJet eta;
  double f = 1.0;
  Vec df;      // base gradient components ∂_i f
  Vec grad_f;  // g₁^{-1} df
  double alpha = 1.0;
};

WarpContext context(const WarpedProduct& w, const Vec& p) {
  const Vec pb = w.base_point(p);
  const Vec pf = w.fiber_point(p);
  WarpContext c;
  c.geo = local_geometry(w.structure.manifold, p);
  c.geo1 = local_geometry(w.spec.base.manifold, pb);
  c.geo2 = local_geometry(w.spec.fiber.manifold, pf);
  c.J = eval(w.spec.base.J, pb);
  c.omega = jet(w.spec.base.omega, pb);
  c.phi = eval(w.spec.fiber.phi, pf);
  c.xi = eval(w.spec.fiber.xi, pf);
  c.eta = jet(w.spec.fiber.eta, pf);
  const ScalarJet f = jet(w.warp_base, pb);
  c.f = f.value;
  c.df = f.grad;
  c.grad_f = grad(c.geo1, f);
  c.alpha = w.spec.a;
  return c;
}

Vec join(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

ConnectionComparison base_at(const WarpedProduct& w, const WarpContext& c, const VectorJet& x,
                             const VectorJet& y) {
  const double al = c.alpha;
  const Vec nb = nabla(c.geo1, x.value, y);
  const Vec& om = c.omega.value;
  const double wx = om.dot(x.value);
  const double wy = om.dot(y.value);
  const Vec jx = c.J * x.value;
  const Vec jy = c.J * y.value;
  const double lambda = directional_pairing(x.value, c.omega, y) +
                        directional_pairing(y.value, c.omega, x) + om.dot(lie_bracket(x, y));
  const Vec base = nb - al * al * wx * jy - al * al * wy * jx;
  const Vec fiber =
      al * (-om.dot(nb) + al * al * wx * om.dot(jy) + al * al * wy * om.dot(jx) + 0.5 * lambda) *
      c.xi;
  ConnectionComparison out;
  out.closed = join(base, fiber);
  out.oracle = nabla(c.geo, lift_base(w, x).value, lift_base(w, y));
  out.residual = c.geo.norm(out.closed - out.oracle);
  return out;
}

MixedComparison mixed_at(const WarpedProduct& w, const WarpContext& c, const VectorJet& x,
                         const VectorJet& u) {
  const double al = c.alpha;
  const double eu = c.eta.value.dot(u.value);
  const Vec jx = c.J * x.value;
  const double xf = c.df.dot(x.value);
  const Vec pu = c.phi * u.value;
  const Vec base = -al * eu * jx;
  const Vec fiber = (xf / c.f) * (c.phi * pu) - (al / (c.f * c.f)) * c.omega.value.dot(x.value) * pu +
                    al * al * eu * c.omega.value.dot(jx) * c.xi;
  const VectorJet X = lift_base(w, x);
  const VectorJet U = lift_fiber(w, u);
  MixedComparison out;
  out.closed = join(base, fiber);
  out.oracle = nabla(c.geo, X.value, U);
  out.oracle_swapped = nabla(c.geo, U.value, X);
  out.residual = c.geo.norm(out.closed - out.oracle);
  out.symmetry_residual = c.geo.norm(out.oracle - out.oracle_swapped);
  return out;
}

FiberComparison fiber_at(const WarpedProduct& w, const WarpContext& c, const VectorJet& u,
                         const VectorJet& v) {
  const double al = c.alpha;
  const double f = c.f;
  const Vec nt = nabla(c.geo2, u.value, v);
  const Vec pu = c.phi * u.value;
  const Vec pv = c.phi * v.value;
  const double gpp = c.geo2.inner(pu, pv);
  const double eu = c.eta.value.dot(u.value);
  const double ev = c.eta.value.dot(v.value);
  const double k = (f * f - 1.0) / (f * f);
  const Vec xi_term = al * f * gpp * c.omega.value.dot(c.grad_f) * c.xi;
  const Vec base = -f * gpp * c.grad_f;
  FiberComparison out;
  out.parse_a = join(base, nt + k * (ev * pu + eu * pv) + xi_term);
  out.parse_b = join(base, nt + k * (ev * pu + eu * pv + xi_term));
  out.oracle = nabla(c.geo, lift_fiber(w, u).value, lift_fiber(w, v));
  out.residual_a = c.geo.norm(out.parse_a - out.oracle);
  out.residual_b = c.geo.norm(out.parse_b - out.oracle);
  return out;
}

KoszulIdentity koszul_at(const WarpedProduct& w, const WarpContext& c, KoszulCase which,
                         const VectorJet& first, const VectorJet& second, const VectorJet& y,
                         const VectorJet& wf) {
  const double al = c.alpha;
  const double f = c.f;
  const Vec target = lift_base(w, y).value + lift_fiber(w, wf).value;
  KoszulIdentity out;
  if (which == KoszulCase::mixed) {
    const VectorJet& x = first;
    const VectorJet& u = second;
    out.lhs = c.geo.inner(nabla(c.geo, lift_base(w, x).value, lift_fiber(w, u)), target);
    const double xf = c.df.dot(x.value);
    const double gpp = c.geo2.inner(c.phi * u.value, c.phi * wf.value);
    const double eu = c.eta.value.dot(u.value);
    const double wx = c.omega.value.dot(x.value);
    const double d_omega = d_oneform(c.omega, x, y, DConvention::half);
    const double d_eta = d_oneform(c.eta, u, wf, DConvention::half);
    out.rhs = f * xf * gpp + al * eu * d_omega + al * wx * d_eta;
    out.rhs_statement = f * xf * gpp + 2.0 * al * eu * d_omega + 2.0 * al * wx * d_eta;
  } else {
    const VectorJet& u = first;
    const VectorJet& v = second;
    out.lhs = c.geo.inner(nabla(c.geo, lift_fiber(w, u).value, lift_fiber(w, v)), target);
    const double theta = directional_pairing(u.value, c.eta, v) +
                         directional_pairing(v.value, c.eta, u) +
                         c.eta.value.dot(lie_bracket(u, v));
    const double eu = c.eta.value.dot(u.value);
    const double ev = c.eta.value.dot(v.value);
    const double ew = c.eta.value.dot(wf.value);
    const double yf = c.df.dot(y.value);
    const double gpp = c.geo2.inner(c.phi * u.value, c.phi * v.value);
    const double eta_bar_yw = al * c.omega.value.dot(y.value) + ew;
    out.rhs = f * f * c.geo2.inner(nabla(c.geo2, u.value, v), wf.value) +
              (1.0 - f * f) * ev * d_oneform(c.eta, u, wf, DConvention::half) +
              (1.0 - f * f) * eu * d_oneform(c.eta, v, wf, DConvention::half) +
              0.5 * theta * eta_bar_yw - 0.5 * theta * f * f * ew - f * yf * gpp;
    out.rhs_statement = out.rhs;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace

ConnectionComparison connection_base(const WarpedProduct& w, const VectorJet& x,
                                     const VectorJet& y, const Vec& p) {
  return base_at(w, context(w, p), x, y);
}

MixedComparison connection_mixed(const WarpedProduct& w, const VectorJet& x, const VectorJet& u,
                                 const Vec& p) {
  return mixed_at(w, context(w, p), x, u);
}

FiberComparison connection_fiber(const WarpedProduct& w, const VectorJet& u, const VectorJet& v,
                                 const Vec& p) {
  return fiber_at(w, context(w, p), u, v);
}

std::string fiber_parse_winner(const FiberComparison& c, double tol) {
  const bool a = c.residual_a <= tol;
  const bool b = c.residual_b <= tol;
  if (a && b) return "both";
  if (a) return "A";
  if (b) return "B";
  return "neither";
}

KoszulIdentity koszul_identity(const WarpedProduct& w, KoszulCase which, const VectorJet& first,
                                  const VectorJet& second, const VectorJet& y, const VectorJet& wf,
                                  const Vec& p) {
  return koszul_at(w, context(w, p), which, first, second, y, wf);
}

ProductSample product_sample(const WarpedProduct& w, const SampleOptions& o, std::size_t index) {
  SampleStream s(o.seed, index);
  ProductSample out;
  out.point = sample_point(w.structure.manifold.box(), s);
  const Vec pb = w.base_point(out.point);
  const Vec pf = w.fiber_point(out.point);
  if (o.coordinate_fields) {
    out.base = coordinate_jets(w.base_dim);
    out.fiber = coordinate_jets(w.fiber_dim);
  }
  for (int k = 0; k < 2; ++k) out.base.push_back(random_field(w.base_dim, s).jet(pb));
  for (int k = 0; k < 2; ++k) out.fiber.push_back(random_field(w.fiber_dim, s).jet(pf));
  return out;
}

CheckReport check_connection_base(const WarpedProduct& w, const SampleOptions& o, double tol) {
  ResidualStats stats;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const ProductSample s = product_sample(w, o, i);
    const WarpContext c = context(w, s.point);
    double r = 0.0;
    for (const auto& x : s.base)
      for (const auto& y : s.base) r = worst(r, base_at(w, c, x, y).residual);
    stats.add(r);
  }
  return make_report("connection_base", w.structure.manifold.name(), stats, tol,
                     Expectation::probe, o.samples, o.seed);
}

CheckReport check_connection_mixed(const WarpedProduct& w, const SampleOptions& o, Expectation e,
                                   double tol) {
  ResidualStats stats;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const ProductSample s = product_sample(w, o, i);
    const WarpContext c = context(w, s.point);
    double r = 0.0;
    for (const auto& x : s.base)
      for (const auto& u : s.fiber) r = worst(r, mixed_at(w, c, x, u).residual);
    stats.add(r);
  }
  return make_report("connection_mixed", w.structure.manifold.name(), stats, tol, e, o.samples,
                     o.seed);
}

CheckReport check_mixed_symmetry(const WarpedProduct& w, const SampleOptions& o, double tol) {
  ResidualStats stats;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const ProductSample s = product_sample(w, o, i);
    const WarpContext c = context(w, s.point);
    double r = 0.0;
    for (const auto& x : s.base)
      for (const auto& u : s.fiber) r = worst(r, mixed_at(w, c, x, u).symmetry_residual);
    stats.add(r);
  }
  return make_report("mixed_symmetry", w.structure.manifold.name(), stats, tol, Expectation::pass,
                     o.samples, o.seed);
}

CheckReport check_connection_fiber(const WarpedProduct& w, const SampleOptions& o, double tol) {
  ResidualStats stats;
  std::vector<ReportEntry> entries;
  std::map<std::string, std::size_t> wins;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const ProductSample s = product_sample(w, o, i);
    const WarpContext c = context(w, s.point);
    double ra = 0.0;
    double rb = 0.0;
    for (const auto& u : s.fiber) {
      for (const auto& v : s.fiber) {
        const FiberComparison fc = fiber_at(w, c, u, v);
        ra = worst(ra, fc.residual_a);
        rb = worst(rb, fc.residual_b);
      }
    }
    FiberComparison agg;
    agg.residual_a = ra;
    agg.residual_b = rb;
    const std::string winner = fiber_parse_winner(agg, tol);
    ++wins[winner];
    const double best = std::isnan(ra) || std::isnan(rb) ? std::numeric_limits<double>::quiet_NaN()
                                                         : std::min(ra, rb);
    stats.add(best);
    ReportEntry e;
    e.label = "sample " + std::to_string(i) + ": " + winner;
    e.measured = ra;
    e.claimed = rb;
    e.residual = best;
    e.verdict = judge(best, tol, Expectation::probe);
    entries.push_back(e);
  }
  CheckReport r = make_report("connection_fiber", w.structure.manifold.name(), stats, tol,
                              Expectation::probe, o.samples, o.seed);
  r.notes.push_back("entry measured = parse A residual, claimed = parse B residual");
  for (const char* k : {"A", "B", "both", "neither"})
    r.notes.push_back(std::string("winner ") + k + ": " + std::to_string(wins[k]));
  r.entries = std::move(entries);
  return r;
}

CheckReport check_koszul_identity(const WarpedProduct& w, KoszulCase which, const SampleOptions& o,
                            double tol) {
  ResidualStats stats;
  double statement = 0.0;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const ProductSample s = product_sample(w, o, i);
    const WarpContext c = context(w, s.point);
    const auto& firsts = which == KoszulCase::mixed ? s.base : s.fiber;
    double r = 0.0;
    for (const auto& a : firsts)
      for (const auto& b : s.fiber)
        for (const auto& y : s.base)
          for (const auto& wf : s.fiber) {
            const KoszulIdentity k = koszul_at(w, c, which, a, b, y, wf);
            r = worst(r, k.residual);
            statement = worst(statement, std::abs(k.lhs - k.rhs_statement));
          }
    stats.add(r);
  }
  const std::string tag = which == KoszulCase::mixed ? "mixed" : "fiber";
  CheckReport r = make_report("koszul_identity." + tag, w.structure.manifold.name(), stats, tol,
                              Expectation::probe, o.samples, o.seed);
  r.conventions["d"] = "half";
  ReportEntry proof;
  proof.label = "right side with coefficient a";
  proof.measured = proof.claimed = std::numeric_limits<double>::quiet_NaN();
  proof.residual = r.max_residual;
  proof.verdict = r.verdict;
  r.entries.push_back(proof);
  if (which == KoszulCase::mixed) {
    ReportEntry st;
    st.label = "right side with coefficient 2a";
    st.measured = st.claimed = std::numeric_limits<double>::quiet_NaN();
    st.residual = statement;
    st.verdict = judge(statement, tol, Expectation::probe);
    r.entries.push_back(st);
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> check_oracle_soundness(const ChartedManifold& m, const SampleOptions& o,
                                                double compat_tol, double koszul_tol) {
  ResidualStats torsion, compat, kos;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < o.samples; ++i) {
    const FieldSet fs = field_set(m, o, i);
    const LocalGeometry geo = local_geometry(m, fs.point);
    double t = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          t = worst(t, std::abs(geo.gamma(k, a, b) - geo.gamma(k, b, a)));
    torsion.add(t);
    compat.add(fs.max_over_triples([&](const VectorJet& x, const VectorJet& y, const VectorJet& z) {
      return metric_compatibility_residual(geo, x, y, z);
    }));
    kos.add(fs.max_over_triples([&](const VectorJet& x, const VectorJet& y, const VectorJet& z) {
      return 2.0 * geo.inner(nabla(geo, x.value, y), z.value) - koszul(geo, x, y, z);
    }));
  }
  std::vector<CheckReport> out;
  out.push_back(make_report("levi_civita.torsion", m.name(), torsion, 0.0, Expectation::pass,
                            o.samples, o.seed));
  out.push_back(make_report("levi_civita.metric_compatibility", m.name(), compat, compat_tol,
                            Expectation::pass, o.samples, o.seed));
  out.push_back(make_report("levi_civita.koszul", m.name(), kos, koszul_tol, Expectation::pass,
                            o.samples, o.seed));
  return out;
}

}  // namespace warpgeo
