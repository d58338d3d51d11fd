#include "warpgeo/sampling.hpp"

namespace warpgeo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index)
    : rng_(splitmix64(splitmix64(seed) ^ index)) {}

// The standard distributions are implementation-defined, so the mapping to
// [0,1) is spelled out to keep reports identical across standard libraries.
double SampleStream::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

Vec sample_point(const std::vector<Interval>& box, SampleStream& s) {
  Vec p(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i)
    p[static_cast<Eigen::Index>(i)] = s.uniform(box[i].lo, box[i].hi);
  return p;
}

PolynomialField::PolynomialField(std::size_t dim, std::size_t component_offset,
                                 std::size_t components, std::size_t variable_offset,
                                 std::size_t variables, SampleStream& s)
    : dim_(dim),
      component_offset_(component_offset),
      variable_offset_(variable_offset),
      variables_(variables) {
  comps_.resize(components);
  for (Component& c : comps_) {
    c.c0 = s.uniform(-1.0, 1.0);
    c.linear.resize(variables);
    for (double& v : c.linear) v = s.uniform(-1.0, 1.0);
    c.quadratic.resize(variables * (variables + 1) / 2);
    for (double& v : c.quadratic) v = s.uniform(-1.0, 1.0);
  }
}

VectorJet PolynomialField::jet(const Vec& p) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  VectorJet out{Vec::Zero(n), Mat::Zero(n, p.size())};
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    const Component& c = comps_[k];
    const auto row = static_cast<Eigen::Index>(component_offset_ + k);
    double v = c.c0;
    std::size_t q = 0;
    for (std::size_t a = 0; a < variables_; ++a) {
      const auto ia = static_cast<Eigen::Index>(variable_offset_ + a);
      v += c.linear[a] * p[ia];
      out.jac(row, ia) += c.linear[a];
      for (std::size_t b = a; b < variables_; ++b, ++q) {
        const auto ib = static_cast<Eigen::Index>(variable_offset_ + b);
        v += c.quadratic[q] * p[ia] * p[ib];
        out.jac(row, ia) += c.quadratic[q] * p[ib];
        out.jac(row, ib) += c.quadratic[q] * p[ia];
      }
    }
    out.value[row] = v;
  }
  return out;
}

VectorField PolynomialField::to_field(std::span<const std::string> coords) const {
  std::vector<Expr> out(dim_, Expr::constant(0.0));
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    const Component& c = comps_[k];
    Expr e = Expr::constant(c.c0);
    std::size_t q = 0;
    for (std::size_t a = 0; a < variables_; ++a) {
      const Expr va = Expr::variable(coords[variable_offset_ + a]);
      e = e + c.linear[a] * va;
      for (std::size_t b = a; b < variables_; ++b, ++q)
        e = e + c.quadratic[q] * (va * Expr::variable(coords[variable_offset_ + b]));
    }
    out[component_offset_ + k] = e;
  }
  return VectorField(std::move(out), coords);
}

PolynomialField random_field(std::size_t dim, SampleStream& s) {
  return PolynomialField(dim, 0, dim, 0, dim, s);
}

}  // namespace warpgeo
