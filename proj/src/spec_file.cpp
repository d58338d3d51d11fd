#include "warpgeo/spec_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "warpgeo/errors.hpp"
#include "warpgeo/harness.hpp"

namespace warpgeo {

namespace {

using json = nlohmann::json;

constexpr SampleOptions kLoadChecks{0x5eed, 8, true};

struct Ctx {
  std::string origin;
  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw SpecError(origin + ": " + where + ": " + what);
  }
};

std::string strip_offset(const std::string& what) {
  const auto at = what.rfind(" at offset ");
  return at == std::string::npos ? what : what.substr(0, at);
}

Expr expression(const Ctx& c, const json& v, const std::string& where,
                const std::vector<std::string>& coords) {
  Expr e;
  if (v.is_number()) {
    e = Expr::constant(v.get<double>());
  } else if (v.is_string()) {
    try {
      e = parse(v.get<std::string>());
    } catch (const SyntaxError& err) {
      throw SyntaxError(c.origin + ": " + where + ": " + strip_offset(err.what()), err.offset());
    }
  } else {
    c.fail(where, "expected an expression string or a number");
  }
  for (const std::string& name : e.variables())
    if (std::find(coords.begin(), coords.end(), name) == coords.end())
      c.fail(where, "unknown coordinate '" + name + "'");
  return e;
}

std::vector<Expr> vector_of(const Ctx& c, const json& v, const std::string& where,
                            const std::vector<std::string>& coords) {
  if (!v.is_array() || v.size() != coords.size())
    c.fail(where, "expected an array of " + std::to_string(coords.size()) + " expressions");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(expression(c, v[i], where + "[" + std::to_string(i) + "]", coords));
  return out;
}

// Row-major dim x dim.
std::vector<Expr> matrix_of(const Ctx& c, const json& v, const std::string& where,
                            const std::vector<std::string>& coords) {
  const std::size_t n = coords.size();
  if (!v.is_array() || v.size() != n)
    c.fail(where, "expected " + std::to_string(n) + " rows");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = where + "[" + std::to_string(i) + "]";
    auto r = vector_of(c, v[i], row, coords);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

double number_of(const Ctx& c, const json& v, const std::string& where) {
  if (!v.is_number()) c.fail(where, "expected a number");
  return v.get<double>();
}

Interval interval_of(const Ctx& c, const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    c.fail(where, "expected [lo, hi]");
  const Interval iv{v[0].get<double>(), v[1].get<double>()};
  if (!(iv.lo < iv.hi)) c.fail(where, "empty interval");
  return iv;
}

const std::set<std::string> kTopLevel = {"name", "dim", "coords", "box", "metric", "contact",
                                         "complex", "alpha", "a", "warp", "d_convention",
                                         "J_convention", "expect_fail", "curve"};

void check_keys(const Ctx& c, const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (allowed.count(key) == 0) c.fail(where, "unknown member '" + key + "'");
}

void load_time_check(const Ctx& c, const ManifoldSpecFile& s, const CheckReport& r) {
  const bool expected_fail = s.expects_failure(r.name);
  if (!expected_fail && !r.passed())
    c.fail(r.name, "load-time check failed (max residual " + format_number(r.max_residual) +
                       ", tolerance " + format_number(r.tolerance) + ")");
  if (expected_fail && r.passed())
    c.fail(r.name, "declared in expect_fail but the load-time check passes");
}

}  // namespace

const std::set<std::string>& known_check_names() {
  static const std::set<std::string> names = {
      "almost_contact", "metric_compatibility", "contact_metric", "alpha_sasakian", "k_contact",
      "hermitian",      "kaehler",              "exact_potential", "coefficient_pdes"};
  return names;
}

ManifoldSpecFile parse_spec(const std::string& text, const std::string& origin,
                            const LoadOptions& o) {
  const Ctx c{origin};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(origin + ": JSON syntax error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
  if (!doc.is_object()) c.fail("document", "expected a JSON object");
  check_keys(c, doc, kTopLevel, "document");

  ManifoldSpecFile s;
  s.origin = origin;
  s.text = text;
  if (!doc.contains("name") || !doc["name"].is_string()) c.fail("name", "missing or not a string");
  s.name = doc["name"].get<std::string>();

  if (!doc.contains("coords") || !doc["coords"].is_array() || doc["coords"].empty())
    c.fail("coords", "expected a non-empty array of names");
  std::vector<std::string> coords;
  for (const auto& v : doc["coords"]) {
    if (!v.is_string()) c.fail("coords", "coordinate names must be strings");
    coords.push_back(v.get<std::string>());
  }
  const std::size_t n = coords.size();
  if (doc.contains("dim") && (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() != n))
    c.fail("dim", "does not match the number of coordinates");

  if (!doc.contains("box") || !doc["box"].is_array() || doc["box"].size() != n)
    c.fail("box", "expected one [lo, hi] interval per coordinate");
  std::vector<Interval> box;
  for (std::size_t i = 0; i < n; ++i)
    box.push_back(interval_of(c, doc["box"][i], "box[" + std::to_string(i) + "]"));

  if (!doc.contains("metric")) c.fail("metric", "missing");
  std::vector<Expr> metric = matrix_of(c, doc["metric"], "metric", coords);
  try {
    s.manifold = ChartedManifold(s.name, coords, box, std::move(metric));
  } catch (const SpecError& e) {
    throw SpecError(origin + ": " + e.what());
  }

  if (doc.contains("alpha")) s.alpha = number_of(c, doc["alpha"], "alpha");
  if (doc.contains("a")) s.a = number_of(c, doc["a"], "a");
  if (doc.contains("warp")) s.warp = expression(c, doc["warp"], "warp", coords);
  if (doc.contains("d_convention")) {
    const json& v = doc["d_convention"];
    if (v == "half") s.d_convention = DConvention::half;
    else if (v == "plain") s.d_convention = DConvention::plain;
    else c.fail("d_convention", "expected \"half\" or \"plain\"");
  }
  if (doc.contains("J_convention")) {
    const json& v = doc["J_convention"];
    if (v == "standard") s.j_convention = JConvention::standard;
    else if (v == "swapped") s.j_convention = JConvention::swapped;
    else if (v == "unspecified") s.j_convention = JConvention::unspecified;
    else c.fail("J_convention", "expected \"standard\", \"swapped\" or \"unspecified\"");
  }
  if (doc.contains("expect_fail")) {
    const json& v = doc["expect_fail"];
    if (!v.is_array()) c.fail("expect_fail", "expected an array of check names");
    for (const auto& e : v) {
      if (!e.is_string() || known_check_names().count(e.get<std::string>()) == 0)
        c.fail("expect_fail", "unknown check name " + e.dump());
      s.expect_fail.insert(e.get<std::string>());
    }
  }

  if (doc.contains("contact")) {
    const json& b = doc["contact"];
    if (!b.is_object()) c.fail("contact", "expected an object");
    check_keys(c, b, {"phi", "xi", "eta"}, "contact");
    for (const char* k : {"phi", "xi", "eta"})
      if (!b.contains(k)) c.fail("contact", std::string("missing '") + k + "'");
    AlmostContactStructure st;
    st.manifold = s.manifold;
    st.phi = EndoField(matrix_of(c, b["phi"], "contact.phi", coords), n, coords);
    st.xi = VectorField(vector_of(c, b["xi"], "contact.xi", coords), coords);
    st.eta = OneFormField(vector_of(c, b["eta"], "contact.eta", coords), coords);
    s.contact = std::move(st);
  }
  if (doc.contains("complex")) {
    const json& b = doc["complex"];
    if (!b.is_object()) c.fail("complex", "expected an object");
    check_keys(c, b, {"J", "omega"}, "complex");
    for (const char* k : {"J", "omega"})
      if (!b.contains(k)) c.fail("complex", std::string("missing '") + k + "'");
    AlmostComplexStructure st;
    st.manifold = s.manifold;
    st.J = EndoField(matrix_of(c, b["J"], "complex.J", coords), n, coords);
    st.omega = OneFormField(vector_of(c, b["omega"], "complex.omega", coords), coords);
    st.convention = s.j_convention;
    s.complex = std::move(st);
  }

  if (doc.contains("curve")) {
    const json& b = doc["curve"];
    if (!b.is_object()) c.fail("curve", "expected an object");
    check_keys(c, b, {"coord", "interval", "speed"}, "curve");
    CurveSpec cs;
    if (b.contains("coord")) {
      if (!b["coord"].is_string()) c.fail("curve.coord", "expected a name");
      cs.coord = b["coord"].get<std::string>();
    }
    if (b.contains("interval")) cs.interval = interval_of(c, b["interval"], "curve.interval");
    if (b.contains("speed")) cs.speed = expression(c, b["speed"], "curve.speed", {cs.coord});
    // T must be the unit tangent of β
    for (int k = 0; k <= 16; ++k) {
      const double t = cs.interval.lo + (cs.interval.hi - cs.interval.lo) * k / 16.0;
      const double v = eval(cs.speed, Bindings{{cs.coord, t}});
      if (!(std::abs(v - 1.0) <= kAlgebraicTol))
        c.fail("curve.speed", "curve is not unit speed (|β'| = " + format_number(v) + " at " +
                                  cs.coord + " = " + format_number(t) + ")");
    }
    s.curve = cs;
  }

  // Every component must evaluate to finite values and the metric must be
  // positive definite on the box.
  try {
    for (std::size_t i = 0; i < 16; ++i) {
      SampleStream rng(kLoadChecks.seed, i);
      const Vec p = sample_point(s.manifold.box(), rng);
      local_geometry(s.manifold, p);
      if (s.contact) {
        const ContactJets j = contact_jets(*s.contact, p);
        if (!j.phi.value.allFinite() || !j.xi.value.allFinite() || !j.eta.value.allFinite())
          throw DomainError("contact structure is not finite at a box point");
      }
      if (s.complex) {
        const ComplexJets j = complex_jets(*s.complex, p);
        if (!j.J.value.allFinite() || !j.omega.value.allFinite())
          throw DomainError("complex structure is not finite at a box point");
      }
      if (!std::isfinite(eval(ScalarField(s.warp, s.manifold.coords()), p)))
        throw DomainError("warp is not finite at a box point");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    c.fail("box", e.what());
  }

  if (o.run_checks) {
    if (s.contact) {
      load_time_check(c, s, check_almost_contact(*s.contact, kLoadChecks));
      load_time_check(c, s, check_metric_compatibility(*s.contact, kLoadChecks));
    }
    if (s.complex) {
      load_time_check(c, s, check_hermitian(*s.complex, kLoadChecks));
      load_time_check(c, s, check_kaehler(*s.complex, kLoadChecks));
      load_time_check(c, s, check_exact_potential(*s.complex, s.d_convention, kLoadChecks));
    }
  }
  return s;
}

ManifoldSpecFile load_spec(const std::string& path, const LoadOptions& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path, o);
}

std::string fixture_path(const std::string& name, const std::string& dir) {
  return dir + "/" + name + ".spec";
}

ManifoldSpecFile load_fixture(const std::string& name, const std::string& dir) {
  return load_spec(fixture_path(name, dir));
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "euclidean-r2", "euclidean-r3",     "paper-example", "sasakian-r3",
      "scaled-plane", "sphere",        "standard-example"};
  return names;
}

}  // namespace warpgeo
