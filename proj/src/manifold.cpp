#include "warpgeo/manifold.hpp"

#include <algorithm>
#include <set>

#include "warpgeo/errors.hpp"

namespace warpgeo {

ComponentArray::ComponentArray(std::vector<Expr> exprs, std::span<const std::string> coords)
    : exprs_(std::move(exprs)) {
  programs_.reserve(exprs_.size());
  for (const Expr& e : exprs_) {
    try {
      programs_.emplace_back(e, coords);
    } catch (const UnboundVariable& u) {
      throw SpecError("expression '" + to_string(e) + "' uses undeclared coordinate '" +
                      u.name() + "'");
    }
  }
}

ChartedManifold::ChartedManifold(std::string name, std::vector<std::string> coords,
                                 std::vector<Interval> box, std::vector<Expr> metric)
    : name_(std::move(name)), coords_(std::move(coords)), box_(std::move(box)) {
  const std::size_t n = coords_.size();
  if (n == 0) throw SpecError(name_ + ": a chart needs at least one coordinate");
  if (std::set<std::string>(coords_.begin(), coords_.end()).size() != n)
    throw SpecError(name_ + ": duplicate coordinate names");
  for (const auto& c : coords_)
    if (c == "pi") throw SpecError(name_ + ": 'pi' is reserved and cannot name a coordinate");
  if (box_.size() != n) throw SpecError(name_ + ": box must give one interval per coordinate");
  for (const auto& iv : box_)
    if (!(iv.lo < iv.hi)) throw SpecError(name_ + ": empty sampling interval");
  if (metric.size() != n * n) throw SpecError(name_ + ": metric must have dim*dim entries");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (metric[i * n + j] != metric[j * n + i])
        throw SpecError(name_ + ": asymmetric metric at (" + coords_[i] + ", " + coords_[j] + ")");
  metric_ = ComponentArray(std::move(metric), coords_);
}

std::size_t ChartedManifold::index_of(std::string_view coord) const {
  const auto it = std::find(coords_.begin(), coords_.end(), coord);
  if (it == coords_.end()) throw SpecError(name_ + ": unknown coordinate '" + std::string(coord) + "'");
  return static_cast<std::size_t>(it - coords_.begin());
}

bool ChartedManifold::contains(const Vec& p) const {
  if (static_cast<std::size_t>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(p[i] >= box_[i].lo && p[i] <= box_[i].hi)) return false;
  return true;
}

ScalarField::ScalarField(Expr e, std::span<const std::string> coords)
    : data_(std::vector<Expr>{std::move(e)}, coords) {}

VectorField::VectorField(std::vector<Expr> components, std::span<const std::string> coords)
    : data_(std::move(components), coords) {
  if (data_.size() != coords.size()) throw DimensionMismatch("vector field component count");
}

OneFormField::OneFormField(std::vector<Expr> components, std::span<const std::string> coords)
    : data_(std::move(components), coords) {
  if (data_.size() != coords.size()) throw DimensionMismatch("one-form component count");
}

EndoField::EndoField(std::vector<Expr> row_major, std::size_t dim,
                     std::span<const std::string> coords)
    : dim_(dim), data_(std::move(row_major), coords) {
  if (dim_ != coords.size() || data_.size() != dim_ * dim_)
    throw DimensionMismatch("endomorphism field must be dim x dim");
}

VectorField coordinate_field(const ChartedManifold& m, std::size_t k, double scale) {
  std::vector<Expr> c(m.dim(), Expr::constant(0.0));
  c.at(k) = Expr::constant(scale);
  return VectorField(std::move(c), m.coords());
}

VectorField constant_field(const ChartedManifold& m, const Vec& components) {
  if (static_cast<std::size_t>(components.size()) != m.dim())
    throw DimensionMismatch("constant field component count");
  std::vector<Expr> c;
  for (Eigen::Index i = 0; i < components.size(); ++i) c.push_back(Expr::constant(components[i]));
  return VectorField(std::move(c), m.coords());
}

VectorField scale(const VectorField& x, const Expr& factor, std::span<const std::string> coords) {
  std::vector<Expr> c;
  for (const Expr& e : x.components()) c.push_back(factor * e);
  return VectorField(std::move(c), coords);
}

VectorField scale(const VectorField& x, double factor, std::span<const std::string> coords) {
  return scale(x, Expr::constant(factor), coords);
}

VectorField apply(const EndoField& phi, const VectorField& x, std::span<const std::string> coords) {
  if (phi.dim() != x.dim()) throw DimensionMismatch("endomorphism applied to wrong-size field");
  std::vector<Expr> c;
  for (std::size_t k = 0; k < phi.dim(); ++k) {
    Expr sum = Expr::constant(0.0);
    for (std::size_t j = 0; j < phi.dim(); ++j) sum = sum + phi.entry(k, j) * x.component(j);
    c.push_back(sum);
  }
  return VectorField(std::move(c), coords);
}

EndoField scale(const EndoField& phi, double factor, std::span<const std::string> coords) {
  std::vector<Expr> c;
  for (const Expr& e : phi.entries()) c.push_back(Expr::constant(factor) * e);
  return EndoField(std::move(c), phi.dim(), coords);
}

OneFormField scale(const OneFormField& eta, double factor, std::span<const std::string> coords) {
  std::vector<Expr> c;
  for (const Expr& e : eta.components()) c.push_back(Expr::constant(factor) * e);
  return OneFormField(std::move(c), coords);
}

VectorField lift(const VectorField& x, std::size_t offset, std::size_t total_dim,
                 std::span<const std::string> coords) {
  if (offset + x.dim() > total_dim) throw DimensionMismatch("lift exceeds target dimension");
  std::vector<Expr> c(total_dim, Expr::constant(0.0));
  for (std::size_t k = 0; k < x.dim(); ++k) c[offset + k] = x.component(k);
  return VectorField(std::move(c), coords);
}

}  // namespace warpgeo
