#include "warpgeo/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"

namespace warpgeo {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms", "contactization", "warped", "geodesic",
                                                 "all"};
  return names;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::size_t RunReport::hard_failures() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const CheckReport& r) { return r.hard_failure(); }));
}

const CheckReport* RunReport::find(const std::string& name, const std::string& manifold) const {
  for (const CheckReport& r : reports)
    if (r.name == name && (manifold.empty() || r.manifold == manifold)) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------

CheckReport check_metric_matrix(const ContactizationSpec& spec, const SampleOptions& o,
                                double tol) {
  ContactizationSpec quiet = spec;
  quiet.validate_base = false;
  const AlmostContactStructure built = build_contactization(quiet);
  const auto n = static_cast<Eigen::Index>(built.manifold.dim());
  ResidualStats entries, inverse;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const SamplePoint sp = draw_sample(built.manifold, o.seed, i);
    const Mat assembled = local_geometry(built.manifold, sp.point).g;
    const Mat printed = printed_metric_matrix(spec, sp.point);
    const Mat printed_inv = printed_metric_inverse(spec, sp.point);
    entries.add((assembled - printed).cwiseAbs().maxCoeff());
    inverse.add((printed * printed_inv - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  ResidualStats both = entries;
  both.merge(inverse);
  CheckReport r = make_report("metric_matrix", built.manifold.name(), both, tol, Expectation::pass,
                              o.samples, o.seed);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.entries.push_back({"assembled − block matrix (entrywise)", nan, nan, entries.max(),
                       judge(entries, tol, Expectation::pass)});
  r.entries.push_back({"block inverse · block matrix − I", nan, nan, inverse.max(),
                       judge(inverse, tol, Expectation::pass)});
  r.notes.push_back("alpha=" + format_number(spec.alpha));
  return r;
}

ConvergenceResult rk4_convergence(const ChartedManifold& m, const GeodesicState& s0,
                                  double duration, double h) {
  auto end = [&](double step) {
    const Trajectory t = integrate(m, s0, duration, step);
    if (t.truncated) throw PreconditionError("convergence trajectory leaves the chart box");
    return t.states.back().point;
  };
  const Vec a = end(h);
  const Vec b = end(h / 2.0);
  const Vec ref = end(h / 4.0);
  ConvergenceResult c;
  c.error_h = (a - ref).cwiseAbs().maxCoeff();
  c.error_h2 = (b - ref).cwiseAbs().maxCoeff();
  c.ratio = c.error_h / c.error_h2;
  return c;
}

double speed_drift(const ChartedManifold& m, const Trajectory& t) {
  const double s0 = speed_squared(m, t.states.front());
  double drift = 0.0;
  for (const GeodesicState& s : t.states)
    drift = worst(drift, std::abs(speed_squared(m, s) - s0) / s0);
  return drift;
}

double reeb_drift(const AlmostContactStructure& s, const Trajectory& t) {
  auto momentum = [&](const GeodesicState& st) { return eval(s.eta, st.point).dot(st.velocity); };
  const double e0 = momentum(t.states.front());
  double drift = 0.0;
  for (const GeodesicState& st : t.states) drift = worst(drift, std::abs(momentum(st) - e0));
  return drift;
}

GeodesicState default_geodesic_start(const ChartedManifold& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Vec p(n), v(n);
  double half = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Interval iv = m.box()[static_cast<std::size_t>(i)];
    p[i] = 0.5 * (iv.lo + iv.hi);
    half = std::min(half, 0.5 * (iv.hi - iv.lo));
    v[i] = 1.0 - 0.3 * static_cast<double>(i % 4);  // 1, .7, .4, .1, 1, ...
  }
  v *= 0.25 * half / v.cwiseAbs().maxCoeff();
  return {p, v};
}

// ---------------------------------------------------------------------------

namespace {

using Reports = std::vector<CheckReport>;

struct Task {
  std::string label;
  std::function<Reports()> run;
};

std::string base_name(const std::string& name) { return name.substr(0, name.find('[')); }

CheckReport with_expectation(CheckReport r, Expectation e) {
  r.expectation = e;
  r.verdict = judge(r.max_residual, r.tolerance, e);
  return r;
}

CheckReport renamed(CheckReport r, std::string name) {
  r.name = std::move(name);
  return r;
}

struct Fixtures {
  std::map<std::string, ManifoldSpecFile> by_name;
  const ManifoldSpecFile& operator[](const std::string& n) const { return by_name.at(n); }
};

ContactizationSpec contactization_of(const ManifoldSpecFile& f, double alpha) {
  ContactizationSpec s;
  s.base = *f.complex;
  s.alpha = alpha;
  if (f.curve) {
    s.fiber_coord = f.curve->coord;
    s.fiber_box = f.curve->interval;
  }
  return s;
}

WarpedProductSpec warped_spec(const Fixtures& fx, const std::string& name, double a,
                              const std::string& warp) {
  WarpedProductSpec s;
  s.name = name;
  s.base = *fx["paper-example"].complex;
  s.fiber = *fx["sasakian-r3"].contact;
  s.a = a;
  s.warp = parse(warp);
  return s;
}

void add_structure_checks(std::vector<Task>& tasks, const ManifoldSpecFile& f, const SampleOptions& o) {
  auto expect = [fails = f.expect_fail](const std::string& check) {
    return fails.count(check) ? Expectation::fail : Expectation::pass;
  };
  if (f.contact) {
    const AlmostContactStructure s = *f.contact;
    tasks.push_back({f.name + ".contact", [s, o, expect, f]() {
                       Reports out;
                       out.push_back(with_expectation(check_almost_contact(s, o), expect("almost_contact")));
                       out.push_back(with_expectation(check_metric_compatibility(s, o),
                                                      expect("metric_compatibility")));
                       out.push_back(with_expectation(check_contact_metric(s, f.d_convention, o),
                                                      expect("contact_metric")));
                       out.push_back(with_expectation(check_alpha_sasakian(s, f.alpha, o),
                                                      expect("alpha_sasakian")));
                       out.push_back(with_expectation(check_k_contact(s, o), expect("k_contact")));
                       return out;
                     }});
  }
  if (f.complex) {
    const AlmostComplexStructure a = *f.complex;
    tasks.push_back({f.name + ".complex", [a, o, expect, f]() {
                       Reports out;
                       out.push_back(with_expectation(check_hermitian(a, o), expect("hermitian")));
                       out.push_back(with_expectation(check_kaehler(a, o), expect("kaehler")));
                       out.push_back(with_expectation(check_exact_potential(a, f.d_convention, o),
                                                      expect("exact_potential")));
                       if (a.convention == JConvention::standard)
                         out.push_back(with_expectation(check_coefficient_pdes(a, o),
                                                        expect("coefficient_pdes")));
                       return out;
                     }});
  }
}

void axioms_tasks(std::vector<Task>& tasks, const Fixtures& fx, const SampleOptions& o) {
  for (const auto& [name, f] : fx.by_name) {
    const ChartedManifold m = f.manifold;
    tasks.push_back({name + ".oracle", [m, o]() { return check_oracle_soundness(m, o); }});
    add_structure_checks(tasks, f, o);
  }
  // Base metric with the printed factor ½ in place of ¼.
  const ManifoldSpecFile& ex = fx["paper-example"];
  tasks.push_back({"printed_normalization", [ex, o]() {
                     const std::size_t n = ex.manifold.dim();
                     std::vector<Expr> g(n * n, Expr::constant(0.0));
                     for (std::size_t i = 0; i < n; ++i) g[i * n + i] = Expr::constant(0.5);
                     AlmostComplexStructure a = *ex.complex;
                     a.manifold = ChartedManifold(ex.name + "/half-metric", ex.manifold.coords(),
                                                  ex.manifold.box(), std::move(g));
                     CheckReport r = check_exact_potential(a, DConvention::half, o);
                     r.name = "printed_normalization.exact_potential";
                     return Reports{with_expectation(std::move(r), Expectation::probe)};
                   }});
}

void contactization_tasks(std::vector<Task>& tasks, const Fixtures& fx, const SampleOptions& o,
                          const std::vector<double>& alphas) {
  const ManifoldSpecFile& ex = fx["paper-example"];
  for (double alpha : alphas) {
    const ContactizationSpec spec = contactization_of(ex, alpha);
    const std::string tag = "[alpha=" + format_number(alpha) + "]";
    tasks.push_back({"contactization.metric" + tag, [spec, o]() {
                       return Reports{check_metric_matrix(spec, o)};
                     }});
    tasks.push_back({"contactization.structure" + tag, [spec, o, alpha]() {
                       const AlmostContactStructure built = build_contactization(spec);
                       Reports out;
                       out.push_back(check_almost_contact(built, o));
                       out.push_back(check_metric_compatibility(built, o));
                       out.push_back(with_expectation(check_contact_metric(built, DConvention::half, o),
                                                      alpha == 1.0 ? Expectation::pass : Expectation::fail));
                       out.push_back(check_d_eta_proportional(built, alpha, DConvention::half, o, 1e-8));
                       out.push_back(check_adapted_frame(spec, built, o));
                       out.push_back(probe_printed_phi_e(spec, built, o));
                       return out;
                     }});
    tasks.push_back({"contactization.christoffel" + tag, [spec, o]() {
                       const AlmostContactStructure built = build_contactization(spec);
                       return Reports{compare_christoffel_table(spec, built, o),
                                      check_frame_connection(spec, built, o)};
                     }});
    tasks.push_back({"contactization.sasakian" + tag, [spec, o, alpha]() {
                       return alpha_sasakian_probe(spec, {alpha}, o);
                     }});
    tasks.push_back({"contactization.oracle" + tag, [spec, o]() {
                       return check_oracle_soundness(build_contactization(spec).manifold, o);
                     }});
  }
}

void warped_tasks(std::vector<Task>& tasks, const Fixtures& fx, const SampleOptions& o) {
  for (const std::string warp : {"1", "exp(x1/4)"}) {
    const WarpedProductSpec spec = warped_spec(fx, "warped[f=" + warp + "]", 1.0, warp);
    const bool unit = warp == "1";
    tasks.push_back({spec.name + ".structure", [spec, o]() {
                       const WarpedProduct w = build_warped_product(spec);
                       Reports out;
                       out.push_back(check_almost_contact(w.structure, o));
                       out.push_back(check_metric_compatibility(w.structure, o));
                       // g(ξ̄, ξ̄) under the metric as printed
                       ResidualStats sign;
                       for (std::size_t i = 0; i < o.samples; ++i) {
                         const Vec p = draw_sample(w.structure.manifold, o.seed, i).point;
                         const Vec xi = eval(w.structure.xi, p);
                         sign.add(xi.dot(printed_warped_metric(w, p) * xi) - 1.0);
                       }
                       CheckReport r = make_report("printed_metric_sign", w.structure.manifold.name(), sign,
                                                   kAlgebraicTol, Expectation::probe, o.samples, o.seed);
                       r.notes.push_back("residual is |g(xi, xi) - 1| under the printed sign");
                       out.push_back(std::move(r));
                       return out;
                     }});
    tasks.push_back({spec.name + ".connection", [spec, o, unit]() {
                       const WarpedProduct w = build_warped_product(spec);
                       return Reports{check_connection_base(w, o),
                                      check_connection_mixed(w, o, unit ? Expectation::pass : Expectation::probe),
                                      check_mixed_symmetry(w, o), check_connection_fiber(w, o)};
                     }});
    tasks.push_back({spec.name + ".koszul.mixed", [spec, o]() {
                       return Reports{check_koszul_identity(build_warped_product(spec), KoszulCase::mixed, o)};
                     }});
    tasks.push_back({spec.name + ".koszul.fiber", [spec, o]() {
                       return Reports{check_koszul_identity(build_warped_product(spec), KoszulCase::fiber, o)};
                     }});
    tasks.push_back({spec.name + ".oracle", [spec, o]() {
                       return check_oracle_soundness(build_warped_product(spec).structure.manifold, o);
                     }});
  }
}

CheckReport geodesic_report(std::string name, const std::string& manifold, double residual,
                            double tol, const std::string& note) {
  ResidualStats s;
  s.add(residual);
  CheckReport r = make_report(std::move(name), manifold, s, tol, Expectation::pass, 1, 0);
  if (!note.empty()) r.notes.push_back(note);
  return r;
}

Reports product_geodesic(const std::string& tag, const WarpedProduct& w, const GeodesicState& g0,
                         const GeodesicState& b0, double tol) {
  const ProductGeodesicReport p =
      product_geodesic_check(w, g0, b0, 1.0, 1e-3, Expectation::pass, tol);
  const std::string pre = "product_geodesic[" + tag + "]";
  return {renamed(p.oracle, pre + ".oracle"), renamed(p.printed, pre + ".printed"),
          renamed(p.agreement, pre + ".agreement")};
}

void geodesic_tasks(std::vector<Task>& tasks, const Fixtures& fx) {
  const ChartedManifold sphere = fx["sphere"].manifold;
  tasks.push_back({"geodesic.convergence", [sphere]() {
                     Vec p(2), v(2);
                     p << 1.0, 0.0;
                     v << 0.3, 0.8;
                     const ConvergenceResult c = rk4_convergence(sphere, {p, v}, 1.0, 0.1);
                     const double outside = std::max({0.0, 12.0 - c.ratio, c.ratio - 20.0});
                     CheckReport r = geodesic_report(
                         "geodesic.convergence", sphere.name(), std::isnan(c.ratio) ? c.ratio : outside,
                         0.0, "error ratio under step halving must lie in [12, 20]");
                     const double nan = std::numeric_limits<double>::quiet_NaN();
                     r.entries.push_back({"error ratio e(h)/e(h/2), h=0.1", c.ratio, 16.0, outside, r.verdict});
                     r.entries.push_back({"max error at h", c.error_h, nan, nan, Verdict::pass});
                     r.entries.push_back({"max error at h/2", c.error_h2, nan, nan, Verdict::pass});
                     return Reports{r};
                   }});
  for (const auto& [name, f] : fx.by_name) {
    const ChartedManifold m = f.manifold;
    tasks.push_back({name + ".speed", [m]() {
                       const Trajectory t = integrate(m, default_geodesic_start(m), 1.0, 1e-3);
                       return Reports{geodesic_report("geodesic.speed_drift", m.name(), speed_drift(m, t),
                                                      kDerivativeTol, t.truncated ? "truncated at the box" : "")};
                     }});
  }
  const AlmostContactStructure sas = *fx["sasakian-r3"].contact;
  tasks.push_back({"sasakian.reeb", [sas]() {
                     Vec p(3), v(3);
                     p << 0.1, -0.2, 0.0;
                     v << 0.3, 0.2, 0.4;
                     const Trajectory t = integrate(sas.manifold, {p, v}, 1.0, 1e-3);
                     return Reports{geodesic_report("geodesic.reeb_conservation", sas.manifold.name(),
                                                    reeb_drift(sas, t), kDerivativeTol,
                                                    t.truncated ? "truncated at the box" : "")};
                   }});

  const WarpedProductSpec unit = warped_spec(fx, "warped[f=1]", 1.0, "1");
  const WarpedProductSpec warm = warped_spec(fx, "warped[f=exp(x1/4)]", 1.0, "exp(x1/4)");
  tasks.push_back({"warped.speed", [warm]() {
                     const WarpedProduct w = build_warped_product(warm);
                     const ChartedManifold& m = w.structure.manifold;
                     const Trajectory t = integrate(m, default_geodesic_start(m), 1.0, 1e-3);
                     return Reports{geodesic_report("geodesic.speed_drift", m.name(), speed_drift(m, t),
                                                    kDerivativeTol, t.truncated ? "truncated at the box" : "")};
                   }});
  tasks.push_back({"product_geodesic.reeb_orthogonal", [unit]() {
                     const WarpedProduct w = build_warped_product(unit);
                     const Vec p1 = Vec::Constant(4, 0.2);
                     Vec p2(3), v2(3);
                     p2 << 0.0, 0.0, 0.0;
                     v2 << 0.3, 0.2, 0.0;  // η(V) = 0 at y = 0
                     return product_geodesic("reeb_orthogonal", w, {p1, Vec::Zero(4)}, {p2, v2},
                                             kIntegratedTol);
                   }});
  tasks.push_back({"product_geodesic.reeb_curve", [unit]() {
                     const WarpedProduct w = build_warped_product(unit);
                     const Vec p1 = Vec::Constant(4, 0.2);
                     Vec p2(3), v2(3);
                     p2 << 0.0, 0.0, -1.0;
                     v2 << 0.0, 0.0, 2.0;  // ξ
                     return product_geodesic("reeb_curve", w, {p1, Vec::Zero(4)}, {p2, v2},
                                             kIntegratedTol);
                   }});
  WarpedProductSpec flat;
  flat.name = "flat-product";
  flat.base = *fx["euclidean-r2"].complex;
  flat.fiber = *fx["euclidean-r3"].contact;
  flat.a = 0.0;
  tasks.push_back({"product_geodesic.flat", [flat]() {
                     const WarpedProduct w = build_warped_product(flat);
                     Vec p1(2), v1(2), p2(3), v2(3);
                     p1 << 0.1, -0.2;
                     v1 << 0.3, 0.4;
                     p2 << 0.2, 0.1, -0.3;
                     v2 << -0.2, 0.5, 0.1;
                     return product_geodesic("flat", w, {p1, v1}, {p2, v2}, 1e-10);
                   }});
}

Reports run_tasks(const std::vector<Task>& tasks, std::size_t jobs) {
  std::vector<Reports> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        CheckReport r;
        r.name = "error:" + tasks[i].label;
        r.max_residual = r.mean_residual = std::numeric_limits<double>::quiet_NaN();
        r.verdict = Verdict::fail;
        r.notes.push_back(e.what());
        results[i] = {r};
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  Reports out;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  return out;
}

void apply_tolerances(Reports& reports, const std::map<std::string, double>& overrides) {
  const std::map<std::string, double> classes = {
      {"algebraic", kAlgebraicTol}, {"derivative", kDerivativeTol}, {"integrated", kIntegratedTol}};
  std::set<std::string> known;
  for (const auto& [k, _] : classes) known.insert(k);
  for (const CheckReport& r : reports) known.insert(base_name(r.name));
  for (const auto& [k, _] : overrides)
    if (known.count(k) == 0) throw std::invalid_argument("unknown tolerance name '" + k + "'");

  for (CheckReport& r : reports) {
    std::optional<double> tol;
    if (auto it = overrides.find(base_name(r.name)); it != overrides.end()) tol = it->second;
    for (const auto& [k, v] : classes)
      if (!tol && r.tolerance == v && overrides.count(k)) tol = overrides.at(k);
    if (!tol) continue;
    r.tolerance = *tol;
    r.verdict = judge(r.max_residual, *tol, r.expectation);
    const Expectation entry_e = r.expectation == Expectation::probe ? Expectation::probe : Expectation::pass;
    for (ReportEntry& e : r.entries)
      if (!std::isnan(e.residual)) e.verdict = judge(e.residual, *tol, entry_e);
  }
}

double entry_residual(const CheckReport* r, const std::string& label) {
  if (!r) return std::numeric_limits<double>::quiet_NaN();
  for (const ReportEntry& e : r->entries)
    if (e.label == label) return e.residual;
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<ErratumEntry> collect_errata(const RunReport& run) {
  std::vector<ErratumEntry> out;
  if (const CheckReport* r = run.find("printed_metric_sign", "warped[f=1]"))
    out.push_back({"E1", "warped product metric",
                   "g = g1 + f^2 (g2 - eta (x) eta - etabar (x) etabar), giving g(xi, xi) = -f^2",
                   r->max_residual,
                   "g = g1 + f^2 (g2 - eta (x) eta) + etabar (x) etabar, the form under which the "
                   "compatibility identity g(phi X, phi Y) = g(X, Y) - etabar(X) etabar(Y) holds"});
  if (const CheckReport* r = run.find("connection_mixed", "warped[f=exp(x1/4)]"))
    out.push_back({"E2", "domain of the warp function",
                   "f is a positive function on the fiber M2, yet X[f] and grad f are taken along base fields",
                   r->max_residual,
                   "f is a positive function on the base M1; the measured value is the mixed-connection "
                   "residual with a non-constant base warp"});
  if (const CheckReport* r = run.find("printed_normalization.exact_potential"))
    out.push_back({"E3", "worked example, base metric", "g1 = 1/2 sum(dx_i^2 + dy_i^2)",
                   r->max_residual,
                   "g1 = 1/4 sum(dx_i^2 + dy_i^2), which reproduces the printed block matrix and makes "
                   "d omega = Phi1 exact under the half convention"});
  if (const CheckReport* r = run.find("koszul_identity.mixed", "warped[f=exp(x1/4)]"))
    out.push_back({"E4", "mixed Koszul identity for the base-fiber connection",
                   "2a d omega and 2a d eta coefficients in the stated identity",
                   entry_residual(r, "right side with coefficient 2a"),
                   "coefficient a, obtained by halving the doubled Koszul identity; the adopted form's "
                   "residual is " + format_number(entry_residual(r, "right side with coefficient a"))});
  if (const CheckReport* r = run.find("product_geodesic[reeb_curve].printed"))
    out.push_back({"E5", "product geodesic criterion, fiber condition",
                   "-2X[f]/f phi^2 V + 2(-etabar/f^2 + eta(V)) phi V + a(2a etabar + X omega(JX) + "
                   "X omega(X) + f g2(phi V, phi V) omega(grad f)) xi = 0",
                   entry_residual(r, "‖res_ii‖ (g₂ norm)"),
                   "archived; along the Reeb curve with constant base point the oracle geodesic residual "
                   "vanishes while the printed condition equals 2a^2"});
  for (const CheckReport& r : run.reports)
    if (r.verdict == Verdict::erratum_candidate)
      out.push_back({"C:" + r.name + "@" + r.manifold, r.name, "", r.max_residual,
                     "archived; the connection oracle is taken as ground truth"});
  return out;
}

}  // namespace

RunReport run_suite(const SuiteOptions& o) {
  if (std::find(suite_names().begin(), suite_names().end(), o.suite) == suite_names().end())
    throw std::invalid_argument("unknown suite '" + o.suite + "'");
  if (o.alpha && *o.alpha == 0.0) throw std::invalid_argument("alpha must be non-zero");
  if (o.samples == 0) throw std::invalid_argument("samples must be positive");

  Fixtures fx;
  std::uint64_t h = fnv1a("");
  for (const std::string& name : fixture_names()) {
    ManifoldSpecFile f = load_fixture(name, o.fixture_dir);
    h = fnv1a(f.text, fnv1a(name + '\0', h));
    fx.by_name.emplace(name, std::move(f));
  }

  const SampleOptions so{o.seed, o.samples, true};
  const bool all = o.suite == "all";
  std::vector<Task> tasks;
  if (all || o.suite == "axioms") axioms_tasks(tasks, fx, so);
  if (all || o.suite == "contactization")
    contactization_tasks(tasks, fx, so, o.alpha ? std::vector<double>{*o.alpha}
                                                : std::vector<double>{0.5, 1.0, 2.0});
  if (all || o.suite == "warped") warped_tasks(tasks, fx, so);
  if (all || o.suite == "geodesic") geodesic_tasks(tasks, fx);

  RunReport run;
  run.suite = o.suite;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  run.spec_hash = hex;
  run.seed = o.seed;
  run.samples = o.samples;
  run.tolerances = o.tolerances;
  run.reports = run_tasks(tasks, o.jobs);
  apply_tolerances(run.reports, o.tolerances);
  std::stable_sort(run.reports.begin(), run.reports.end(), [](const CheckReport& a, const CheckReport& b) {
    return std::tie(a.name, a.manifold) < std::tie(b.name, b.manifold);
  });
  run.errata = collect_errata(run);
  return run;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  auto number = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  j["tool"] = "warpgeo";
  j["version"] = kToolVersion;
  j["suite"] = r.suite;
  j["spec_hash"] = r.spec_hash;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["tolerance_overrides"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.tolerances) j["tolerance_overrides"][k] = v;
  std::map<std::string, std::size_t> counts;
  for (const CheckReport& c : r.reports) {
    if (c.hard_failure()) ++counts["hard_failures"];
    if (c.expectation == Expectation::fail && !c.passed()) ++counts["expected_failures"];
    ++counts[to_string(c.verdict)];
  }
  j["summary"] = {{"reports", r.reports.size()},
                  {"pass", counts["pass"]},
                  {"fail", counts["fail"]},
                  {"erratum_candidate", counts[to_string(Verdict::erratum_candidate)]},
                  {"expected_failures", counts["expected_failures"]},
                  {"hard_failures", counts["hard_failures"]}};
  j["reports"] = nlohmann::ordered_json::array();
  for (const CheckReport& c : r.reports) j["reports"].push_back(to_json(c));
  j["errata"] = nlohmann::ordered_json::array();
  for (const ErratumEntry& e : r.errata)
    j["errata"].push_back({{"id", e.id},
                           {"location", e.location},
                           {"printed", e.printed},
                           {"measured_residual", number(e.measured_residual)},
                           {"resolution", e.resolution}});
  return j;
}

std::string render(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

std::vector<std::string> diff_reports(const nlohmann::ordered_json& a,
                                      const nlohmann::ordered_json& b) {
  std::vector<std::string> out;
  using J = nlohmann::ordered_json;
  auto index = [](const J& run) {
    std::map<std::string, J> m;
    if (run.contains("reports"))
      for (const J& r : run["reports"])
        m[r.value("name", "") + " @ " + r.value("manifold", "")] = r;
    return m;
  };
  for (const char* key : {"version", "suite", "spec_hash", "seed", "samples"})
    if (a.value(key, J()) != b.value(key, J()))
      out.push_back(std::string(key) + ": " + a.value(key, J()).dump() + " -> " + b.value(key, J()).dump());
  const auto ia = index(a);
  const auto ib = index(b);
  for (const auto& [k, ra] : ia) {
    const auto it = ib.find(k);
    if (it == ib.end()) {
      out.push_back("- " + k);
      continue;
    }
    const J& rb = it->second;
    for (const char* field : {"verdict", "expectation", "max_residual", "mean_residual", "tolerance"})
      if (ra.value(field, J()) != rb.value(field, J()))
        out.push_back(k + ": " + field + " " + ra.value(field, J()).dump() + " -> " +
                      rb.value(field, J()).dump());
    if (ra.value("entries", J()) != rb.value("entries", J())) out.push_back(k + ": entries differ");
  }
  for (const auto& [k, _] : ib)
    if (ia.count(k) == 0) out.push_back("+ " + k);
  return out;
}

}  // namespace warpgeo
