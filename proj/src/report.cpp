#include "warpgeo/report.hpp"

#include <cmath>
#include <limits>

namespace warpgeo {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::erratum_candidate: return "erratum-candidate";
  }
  return "?";
}

const char* to_string(Expectation e) {
  switch (e) {
    case Expectation::pass: return "pass";
    case Expectation::fail: return "expected-fail";
    case Expectation::probe: return "probe";
  }
  return "?";
}

bool CheckReport::hard_failure() const {
  if (expectation == Expectation::pass) return verdict != Verdict::pass;
  if (expectation == Expectation::fail) return verdict == Verdict::pass;
  return false;
}

void ResidualStats::add(double r) {
  ++count_;
  if (std::isnan(r)) {
    nan_ = true;
    return;
  }
  r = std::abs(r);
  max_ = std::max(max_, r);
  sum_ += r;
}

void ResidualStats::merge(const ResidualStats& o) {
  count_ += o.count_;
  max_ = std::max(max_, o.max_);
  sum_ += o.sum_;
  nan_ = nan_ || o.nan_;
}

Verdict judge(double max_residual, double tol, Expectation e) {
  if (max_residual <= tol) return Verdict::pass;
  return e == Expectation::probe ? Verdict::erratum_candidate : Verdict::fail;
}

Verdict judge(const ResidualStats& s, double tol, Expectation e) {
  if (s.nan_) return e == Expectation::probe ? Verdict::erratum_candidate : Verdict::fail;
  return judge(s.max(), tol, e);
}

CheckReport make_report(std::string name, std::string manifold, const ResidualStats& stats,
                        double tol, Expectation e, std::size_t samples, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.manifold = std::move(manifold);
  r.samples = samples;
  r.seed = seed;
  r.max_residual = stats.max();
  r.mean_residual = stats.mean();
  r.tolerance = tol;
  r.expectation = e;
  r.verdict = judge(stats, tol, e);
  return r;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["manifold"] = r.manifold;
  j["conventions"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.conventions) j["conventions"][k] = v;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_residual"] = number(r.max_residual);
  j["mean_residual"] = number(r.mean_residual);
  j["tolerance"] = r.tolerance;
  j["expectation"] = to_string(r.expectation);
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  if (!r.entries.empty()) {
    auto& arr = j["entries"] = nlohmann::ordered_json::array();
    for (const ReportEntry& e : r.entries) {
      arr.push_back({{"label", e.label},
                     {"measured", number(e.measured)},
                     {"claimed", number(e.claimed)},
                     {"residual", number(e.residual)},
                     {"verdict", to_string(e.verdict)}});
    }
  }
  return j;
}

}  // namespace warpgeo
