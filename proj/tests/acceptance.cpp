// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 9).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "warpgeo/harness.hpp"
#include "warpgeo/suite.hpp"

using namespace warpgeo;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SampleOptions hundred() {
  SampleOptions o;
  o.seed = 42;
  o.samples = 100;
  return o;
}

ContactizationSpec contactization(double alpha) {
  ContactizationSpec s;
  s.base = *load_fixture("paper-example").complex;
  s.alpha = alpha;
  const ManifoldSpecFile f = load_fixture("paper-example");
  if (f.curve) {
    s.fiber_coord = f.curve->coord;
    s.fiber_box = f.curve->interval;
  }
  return s;
}

WarpedProduct warped(const std::string& warp) {
  WarpedProductSpec s;
  s.name = "warped[f=" + warp + "]";
  s.base = *load_fixture("paper-example").complex;
  s.fiber = *load_fixture("sasakian-r3").contact;
  s.a = 1.0;
  s.warp = parse(warp);
  return build_warped_product(s);
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// 1. assembled metric equals the block matrix; block inverse is an inverse
void metric_matrix(Outcome& out) {
  const auto t0 = Clock::now();
  double worst_r = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const CheckReport r = check_metric_matrix(contactization(alpha), hundred(), 1e-12);
    worst_r = std::max(worst_r, r.max_residual);
    out.require(r.passed() && r.samples == 100, "alpha=" + format_number(alpha));
  }
  const double dt = seconds_since(t0);
  out.require(dt < 1.0, "runtime");
  out.detail << "max residual " << worst_r << ", " << dt << " s";
}

// 2. Levi-Civita oracle soundness on every chart
void oracle_soundness(Outcome& out) {
  const auto t0 = Clock::now();
  std::vector<ChartedManifold> charts;
  for (const std::string& n : fixture_names()) charts.push_back(load_fixture(n).manifold);
  for (double alpha : {0.5, 1.0, 2.0}) charts.push_back(build_contactization(contactization(alpha)).manifold);
  charts.push_back(warped("1").structure.manifold);
  charts.push_back(warped("exp(x1/4)").structure.manifold);
  double torsion = 0.0, compat = 0.0, kos = 0.0;
  for (const ChartedManifold& m : charts) {
    for (const CheckReport& r : check_oracle_soundness(m, hundred(), 1e-7, 1e-8)) {
      out.require(r.passed(), r.name + "@" + r.manifold);
      if (r.name == "levi_civita.torsion") torsion = std::max(torsion, r.max_residual);
      if (r.name == "levi_civita.metric_compatibility") compat = std::max(compat, r.max_residual);
      if (r.name == "levi_civita.koszul") kos = std::max(kos, r.max_residual);
    }
  }
  out.require(torsion == 0.0, "torsion exact");
  const double dt = seconds_since(t0);
  out.require(dt < 30.0, "runtime");
  out.detail << charts.size() << " charts, torsion " << torsion << ", compatibility " << compat
             << ", koszul " << kos << ", " << dt << " s";
}

// 3. sasakian R3 axioms and their mutated negatives
void axioms(Outcome& out) {
  const SampleOptions o = hundred();
  const AlmostContactStructure s = *load_fixture("sasakian-r3").contact;
  const auto& c = s.manifold.coords();
  AlmostContactStructure phi2 = s, eta2 = s, xi2 = s;
  phi2.phi = scale(s.phi, 2.0, c);
  eta2.eta = scale(s.eta, 2.0, c);
  xi2.xi = scale(s.xi, 2.0, c);

  struct Case {
    std::string name;
    std::function<CheckReport(const AlmostContactStructure&)> run;
    const AlmostContactStructure* mutant;
  };
  const std::vector<Case> cases = {
      {"almost_contact", [&](const auto& x) { return check_almost_contact(x, o); }, &phi2},
      {"metric_compatibility", [&](const auto& x) { return check_metric_compatibility(x, o); }, &phi2},
      {"contact_metric", [&](const auto& x) { return check_contact_metric(x, DConvention::half, o); }, &eta2},
      {"alpha_sasakian", [&](const auto& x) { return check_alpha_sasakian(x, 1.0, o); }, &phi2},
      {"k_contact", [&](const auto& x) { return check_k_contact(x, o); }, &xi2},
  };
  double least_negative = INFINITY;
  for (const Case& k : cases) {
    const CheckReport pos = k.run(s);
    const CheckReport neg = k.run(*k.mutant);
    out.require(pos.passed(), k.name);
    out.require(!neg.passed() && neg.max_residual >= 0.1, k.name + " negative");
    least_negative = std::min(least_negative, neg.max_residual);
  }
  out.detail << cases.size() << " checks pass, smallest negative residual " << least_negative;
}

// 4. contact metric iff alpha = 1; dη = αΦ for every alpha
void contact_dichotomy(Outcome& out) {
  const SampleOptions o = hundred();
  for (double alpha : {0.5, 1.0, 2.0}) {
    const AlmostContactStructure b = build_contactization(contactization(alpha));
    const CheckReport cm = check_contact_metric(b, DConvention::half, o, 1e-9);
    const CheckReport prop = check_d_eta_proportional(b, alpha, DConvention::half, o, 1e-8);
    if (alpha == 1.0) out.require(cm.passed(), "contact metric at alpha=1");
    else out.require(cm.max_residual >= 0.1, "contact metric fails at alpha=" + format_number(alpha));
    out.require(prop.passed(), "proportionality at alpha=" + format_number(alpha));
    out.detail << "alpha=" << alpha << ": contact " << cm.max_residual << ", proportional "
               << prop.max_residual << "; ";
  }
}

// 5. α-Sasakian condition on the contactization
void alpha_sasakian(Outcome& out) {
  const SampleOptions o = hundred();
  for (double alpha : {1.0, 0.5, 2.0}) {
    const AlmostContactStructure b = build_contactization(contactization(alpha));
    const CheckReport r = check_alpha_sasakian(b, 1.0, o, 1e-6);
    if (alpha == 1.0) out.require(r.passed(), "alpha=1");
    out.detail << "alpha=" << alpha << " residual " << r.max_residual << "; ";
  }
}

// 6. complete christoffel table and frame connection relations
void christoffel_table(Outcome& out) {
  const SampleOptions o = hundred();
  std::size_t entries = 0, errata = 0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const ContactizationSpec spec = contactization(alpha);
    const AlmostContactStructure b = build_contactization(spec);
    const auto claims = printed_christoffel_table(spec, Vec::Zero(5));
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> covered;
    for (const ChristoffelClaim& c : claims) covered.insert({c.k, std::min(c.i, c.j), std::max(c.i, c.j)});
    out.require(covered.size() == 5 * 15, "every symbol claimed");
    for (const CheckReport& r : {compare_christoffel_table(spec, b, o, 1e-6), check_frame_connection(spec, b, o, 1e-6)}) {
      if (r.name == "christoffel_table") out.require(r.entries.size() == claims.size(), "one entry per claim");
      for (const ReportEntry& e : r.entries) {
        ++entries;
        const bool pass = e.verdict == Verdict::pass && e.residual <= 1e-6;
        const bool erratum = e.verdict == Verdict::erratum_candidate && std::isfinite(e.residual);
        out.require(pass || erratum, r.name + ": " + e.label);
        errata += erratum;
      }
    }
  }
  out.detail << entries << " entries, " << errata << " erratum candidates";
}

// 7. warped product structure, mixed connection at f = 1, fiber parse report
void warped_product(Outcome& out) {
  const SampleOptions o = hundred();
  const WarpedProduct unit = warped("1");
  const WarpedProduct warm = warped("exp(x1/4)");
  for (const WarpedProduct* w : {&unit, &warm}) {
    const CheckReport mc = check_metric_compatibility(w->structure, o, 1e-9);
    out.require(mc.passed(), "metric compatibility " + mc.manifold);
    out.detail << mc.manifold << " compat " << mc.max_residual << "; ";
  }
  const CheckReport mixed = check_connection_mixed(unit, o, Expectation::pass, 1e-6);
  out.require(mixed.passed(), "mixed connection at f=1");
  out.detail << "mixed " << mixed.max_residual << "; ";
  const CheckReport fiber = check_connection_fiber(warm, o);
  out.require(fiber.entries.size() == o.samples, "one parse verdict per sample");
  std::map<std::string, int> wins;
  for (const ReportEntry& e : fiber.entries) {
    const std::string winner = e.label.substr(e.label.find(": ") + 2);
    out.require(winner == "A" || winner == "B" || winner == "both" ||
                    (winner == "neither" && e.verdict == Verdict::erratum_candidate),
                e.label);
    ++wins[winner];
  }
  out.detail << "parse winners:";
  for (const auto& [k, v] : wins) out.detail << " " << k << "=" << v;
}

// 8. geodesic integration and the product criterion
void geodesics(Outcome& out) {
  const ChartedManifold sphere = load_fixture("sphere").manifold;
  const ConvergenceResult c = rk4_convergence(sphere, {vec({1.0, 0.0}), vec({0.3, 0.8})}, 1.0, 0.1);
  out.require(c.ratio >= 12.0 && c.ratio <= 20.0, "convergence ratio");
  out.detail << "ratio " << c.ratio;

  double drift = 0.0;
  std::vector<ChartedManifold> charts;
  for (const std::string& n : fixture_names()) charts.push_back(load_fixture(n).manifold);
  charts.push_back(warped("exp(x1/4)").structure.manifold);
  for (const ChartedManifold& m : charts)
    drift = std::max(drift, speed_drift(m, integrate(m, default_geodesic_start(m), 1.0, 1e-3)));
  out.require(drift <= 1e-6, "speed drift");
  out.detail << ", speed drift " << drift;

  const WarpedProduct w = warped("1");
  const GeodesicState rest{Vec::Constant(4, 0.2), Vec::Zero(4)};
  const ProductGeodesicReport orth =
      product_geodesic_check(w, rest, {vec({0, 0, 0}), vec({0.3, 0.2, 0.0})}, 1.0, 1e-3, Expectation::pass);
  out.require(orth.oracle.passed() && orth.oracle.max_residual <= 1e-5, "eta(V)=0 instance");
  const ProductGeodesicReport reeb =
      product_geodesic_check(w, rest, {vec({0, 0, -1}), vec({0, 0, 2})}, 1.0, 1e-3, Expectation::pass);
  out.require(reeb.oracle.max_residual <= 1e-5, "reeb oracle");
  const double alpha = w.spec.a;
  double res_ii = 0.0;
  for (const ReportEntry& e : reeb.printed.entries)
    if (e.label.find("res_ii") != std::string::npos) res_ii = e.residual;
  const double rel = std::abs(res_ii - 2.0 * alpha * alpha) / (2.0 * alpha * alpha);
  out.require(rel <= 1e-3, "printed res_ii = 2 alpha^2");
  out.require(reeb.agreement.verdict == Verdict::erratum_candidate, "reeb instance archived as erratum");
  out.detail << ", orthogonal oracle " << orth.oracle.max_residual << ", reeb oracle "
             << reeb.oracle.max_residual << ", printed res_ii " << res_ii;
}

// 9. byte-identical reports from two CLI runs
std::string run_capture(const std::string& cmd, int& status) {
  std::string text;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return text;
  }
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) text.append(buf, n);
  status = pclose(p);
  return text;
}

void determinism(Outcome& out, const std::string& cli) {
  if (cli.empty()) {
    out.require(false, "no CLI path given");
    return;
  }
  const std::string cmd = cli + " verify --suite all --seed 42 2>/dev/null";
  double slowest = 0.0;
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const auto t0 = Clock::now();
    int status = 0;
    const std::string text = run_capture(cmd, status);
    slowest = std::max(slowest, seconds_since(t0));
    out.require(status == 0, "exit status of run " + std::to_string(run + 1));
    out.require(!text.empty(), "non-empty report");
    if (run == 0) first = text;
    else out.require(text == first, "byte-identical");
  }
  out.require(slowest < 120.0, "wall clock");
  out.detail << first.size() << " bytes, slowest run " << slowest << " s";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"metric matrix reproduction", metric_matrix},
      {"connection oracle soundness", oracle_soundness},
      {"axiom suites with mutated negatives", axioms},
      {"contact metric iff alpha = 1", contact_dichotomy},
      {"alpha-Sasakian condition", alpha_sasakian},
      {"christoffel table and frame connection", christoffel_table},
      {"warped product", warped_product},
      {"geodesics", geodesics},
      {"determinism", [&](Outcome& o) { determinism(o, cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::cout << "criterion " << (i + 1) << " " << (o.ok ? "PASS" : "FAIL") << " " << criteria[i].first
              << ": " << o.detail.str() << std::endl;
  }
  return failed;
}
