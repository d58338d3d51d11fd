#pragma once

#include <cstdint>
#include <random>

#include "warpgeo/tensor.hpp"

namespace warpgeo {

std::uint64_t splitmix64(std::uint64_t x);

/// Random stream for one sample index. Streams for different indices are
/// independent of each other, so sample i sees the same draws no matter how
/// many samples are requested or in which order they are evaluated.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 rng_;
};

Vec sample_point(const std::vector<Interval>& box, SampleStream& s);

/// Vector field with polynomial components of degree <= 2.
///
/// Only components [component_offset, component_offset + components) are
/// nonzero and they depend only on coordinates
/// [variable_offset, variable_offset + variables). This lets a field live on
/// one factor of a product chart.
class PolynomialField {
 public:
  PolynomialField() = default;
  PolynomialField(std::size_t dim, std::size_t component_offset, std::size_t components,
                  std::size_t variable_offset, std::size_t variables, SampleStream& s);

  std::size_t dim() const { return dim_; }
  VectorJet jet(const Vec& p) const;
  VectorField to_field(std::span<const std::string> coords) const;

 private:
  struct Component {
    double c0 = 0.0;
    std::vector<double> linear;     // per variable
    std::vector<double> quadratic;  // upper triangle, row-major
  };
  std::size_t dim_ = 0;
  std::size_t component_offset_ = 0;
  std::size_t variable_offset_ = 0;
  std::size_t variables_ = 0;
  std::vector<Component> comps_;
};

PolynomialField random_field(std::size_t dim, SampleStream& s);

}  // namespace warpgeo
