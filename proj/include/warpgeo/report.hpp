#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace warpgeo {

enum class Verdict { pass, fail, erratum_candidate };

// What the caller expects of a check. A `probe` measures a printed formula:
// exceeding the tolerance makes it an erratum candidate rather than a failure.
enum class Expectation { pass, fail, probe };

const char* to_string(Verdict v);
const char* to_string(Expectation e);

inline constexpr double kAlgebraicTol = 1e-9;
inline constexpr double kDerivativeTol = 1e-6;
inline constexpr double kIntegratedTol = 1e-5;

struct ReportEntry {
  std::string label;
  double measured = 0.0;  // oracle value, or NaN when not applicable
  double claimed = 0.0;   // printed / closed-form value, or NaN
  double residual = 0.0;
  Verdict verdict = Verdict::pass;
};

struct CheckReport {
  std::string name;
  std::string manifold;
  std::map<std::string, std::string> conventions;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
  Expectation expectation = Expectation::pass;
  std::vector<std::string> notes;
  std::vector<ReportEntry> entries;

  bool passed() const { return verdict == Verdict::pass; }
  // Expected to pass and did not, or expected to fail and passed.
  bool hard_failure() const;
};

class ResidualStats {
 public:
  void add(double r);
  void merge(const ResidualStats& o);
  std::size_t count() const { return count_; }
  double max() const { return max_; }
  double mean() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }

 private:
  std::size_t count_ = 0;
  double max_ = 0.0;
  double sum_ = 0.0;
  bool nan_ = false;

  friend Verdict judge(const ResidualStats&, double, Expectation);
};

// verdict is pass iff max <= tol (a NaN residual never passes)
Verdict judge(double max_residual, double tol, Expectation e);
Verdict judge(const ResidualStats& s, double tol, Expectation e);

CheckReport make_report(std::string name, std::string manifold, const ResidualStats& stats,
                        double tol, Expectation e, std::size_t samples, std::uint64_t seed);

nlohmann::ordered_json to_json(const CheckReport& r);

}  // namespace warpgeo
