#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "warpgeo/structures.hpp"

namespace warpgeo {

// max that lets NaN through, so a broken evaluation can never look like a pass
inline double worst(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::max(a, b);
}

// Shortest round-trip decimal form.
std::string format_number(double v);

/// Test fields at one sample point: every coordinate field (optional) plus
/// three random polynomial fields, all as jets.
struct FieldSet {
  Vec point;
  std::vector<VectorJet> coords;
  std::vector<VectorJet> random;

  template <class F>
  double max_over_singles(F&& f) const {
    double r = 0.0;
    for (const VectorJet& x : coords) r = worst(r, std::abs(f(x)));
    return worst(r, std::abs(f(random[0])));
  }

  template <class F>
  double max_over_pairs(F&& f) const {
    double r = 0.0;
    for (const VectorJet& x : coords)
      for (const VectorJet& y : coords) r = worst(r, std::abs(f(x, y)));
    return worst(r, std::abs(f(random[0], random[1])));
  }

  template <class F>
  double max_over_triples(F&& f) const {
    double r = 0.0;
    for (const VectorJet& x : coords)
      for (const VectorJet& y : coords)
        for (const VectorJet& z : coords) r = worst(r, std::abs(f(x, y, z)));
    return worst(r, std::abs(f(random[0], random[1], random[2])));
  }
};

FieldSet field_set(const ChartedManifold& m, const SampleOptions& o, std::size_t index);

// Per-point residual = f(FieldSet); statistics over o.samples points.
template <class F>
ResidualStats sample_residuals(const ChartedManifold& m, const SampleOptions& o, F&& f) {
  ResidualStats stats;
  for (std::size_t i = 0; i < o.samples; ++i) stats.add(f(field_set(m, o, i)));
  return stats;
}

}  // namespace warpgeo
