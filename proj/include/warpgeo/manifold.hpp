#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "warpgeo/expr.hpp"

namespace warpgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Expressions plus their compiled programs, all against one coordinate list.
class ComponentArray {
 public:
  ComponentArray() = default;
  ComponentArray(std::vector<Expr> exprs, std::span<const std::string> coords);

  std::size_t size() const { return exprs_.size(); }
  const Expr& expr(std::size_t i) const { return exprs_[i]; }
  const std::vector<Expr>& exprs() const { return exprs_; }
  const Program& program(std::size_t i) const { return programs_[i]; }

 private:
  std::vector<Expr> exprs_;
  std::vector<Program> programs_;
};

/// Single coordinate patch with a Riemannian metric written as expressions.
class ChartedManifold {
 public:
  ChartedManifold() = default;
  // metric is row-major, dim*dim entries; entry (i,j) and (j,i) must be the
  // same expression tree.
  ChartedManifold(std::string name, std::vector<std::string> coords, std::vector<Interval> box,
                  std::vector<Expr> metric);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<Interval>& box() const { return box_; }
  const Expr& metric_expr(std::size_t i, std::size_t j) const { return metric_.expr(i * dim() + j); }
  const Program& metric_program(std::size_t i, std::size_t j) const {
    return metric_.program(i * dim() + j);
  }
  std::size_t index_of(std::string_view coord) const;  // throws SpecError
  bool contains(const Vec& p) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<Interval> box_;
  ComponentArray metric_;
};

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Expr e, std::span<const std::string> coords);
  const Expr& expr() const { return data_.expr(0); }
  const Program& program() const { return data_.program(0); }

 private:
  ComponentArray data_;
};

/// Contravariant components X^k.
class VectorField {
 public:
  VectorField() = default;
  VectorField(std::vector<Expr> components, std::span<const std::string> coords);
  std::size_t dim() const { return data_.size(); }
  const Expr& component(std::size_t k) const { return data_.expr(k); }
  const std::vector<Expr>& components() const { return data_.exprs(); }
  const Program& program(std::size_t k) const { return data_.program(k); }

 private:
  ComponentArray data_;
};

/// Covariant components eta_k.
class OneFormField {
 public:
  OneFormField() = default;
  OneFormField(std::vector<Expr> components, std::span<const std::string> coords);
  std::size_t dim() const { return data_.size(); }
  const Expr& component(std::size_t k) const { return data_.expr(k); }
  const std::vector<Expr>& components() const { return data_.exprs(); }
  const Program& program(std::size_t k) const { return data_.program(k); }

 private:
  ComponentArray data_;
};

/// (1,1) tensor; entry (k, j) is phi^k_j, so (phi X)^k = phi^k_j X^j.
class EndoField {
 public:
  EndoField() = default;
  EndoField(std::vector<Expr> row_major, std::size_t dim, std::span<const std::string> coords);
  std::size_t dim() const { return dim_; }
  const Expr& entry(std::size_t k, std::size_t j) const { return data_.expr(k * dim_ + j); }
  const std::vector<Expr>& entries() const { return data_.exprs(); }
  const Program& program(std::size_t k, std::size_t j) const { return data_.program(k * dim_ + j); }

 private:
  std::size_t dim_ = 0;
  ComponentArray data_;
};

// Field helpers. Coordinate fields and forms are constant expressions.
VectorField coordinate_field(const ChartedManifold& m, std::size_t k, double scale = 1.0);
VectorField constant_field(const ChartedManifold& m, const Vec& components);
VectorField scale(const VectorField& x, const Expr& factor, std::span<const std::string> coords);
// Symbolic application (phi X)^k = phi^k_j X^j.
VectorField apply(const EndoField& phi, const VectorField& x, std::span<const std::string> coords);
EndoField scale(const EndoField& phi, double factor, std::span<const std::string> coords);
OneFormField scale(const OneFormField& eta, double factor, std::span<const std::string> coords);
VectorField scale(const VectorField& x, double factor, std::span<const std::string> coords);
// Re-express a field against another coordinate list (extra components are 0).
VectorField lift(const VectorField& x, std::size_t offset, std::size_t total_dim,
                 std::span<const std::string> coords);

}  // namespace warpgeo
