#pragma once

#include <vector>

#include "warpgeo/manifold.hpp"

namespace warpgeo {

// How partial derivatives of component expressions are obtained. Dual numbers
// are exact; the finite-difference mode exists to cross-check them.
enum class DiffMode { dual, finite_difference };

// dη(X,Y) = ½(Xη(Y) − Yη(X) − η[X,Y]) under `half`, without the ½ under `plain`.
enum class DConvention { half, plain };

const char* to_string(DConvention c);

inline constexpr double kFiniteDifferenceStep = 1e-5;

struct ScalarJet {
  double value = 0.0;
  Vec grad;  // grad[i] = ∂_i f
};

// Value and Jacobian of a vector (or covector) field: jac(k, i) = ∂_i X^k.
struct VectorJet {
  Vec value;
  Mat jac;
};

struct EndoJet {
  Mat value;
  std::vector<Mat> partial;  // partial[i] = ∂_i φ
};

ScalarJet jet(const Program& f, const Vec& p, DiffMode mode = DiffMode::dual);
ScalarJet jet(const ScalarField& f, const Vec& p, DiffMode mode = DiffMode::dual);
VectorJet jet(const VectorField& x, const Vec& p, DiffMode mode = DiffMode::dual);
VectorJet jet(const OneFormField& eta, const Vec& p, DiffMode mode = DiffMode::dual);
EndoJet jet(const EndoField& phi, const Vec& p, DiffMode mode = DiffMode::dual);
VectorJet constant_jet(const Vec& v);

Vec eval(const VectorField& x, const Vec& p);
Vec eval(const OneFormField& eta, const Vec& p);
Mat eval(const EndoField& phi, const Vec& p);
double eval(const ScalarField& f, const Vec& p);

/// Christoffel symbols of the second kind, Γ^k_{ij}, stored densely.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * dim_ + i) * dim_ + j];
  }
  double& at(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * dim_ + i) * dim_ + j]; }
  // (Γ(x, y))^k = Γ^k_{ij} x^i y^j
  Vec contract(const Vec& x, const Vec& y) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Everything metric-derived at one point: g, g^{-1}, ∂g, Γ.
struct LocalGeometry {
  Vec point;
  Mat g;
  Mat g_inv;
  std::vector<Mat> dg;  // dg[h](i, j) = ∂_h g_ij
  Christoffel gamma;

  std::size_t dim() const { return static_cast<std::size_t>(point.size()); }
  double inner(const Vec& a, const Vec& b) const { return a.dot(g * b); }
  double norm(const Vec& a) const;
};

// Throws NotPositiveDefinite if Cholesky fails at p. Does not police the box.
LocalGeometry local_geometry(const ChartedManifold& m, const Vec& p,
                             DiffMode mode = DiffMode::dual);

// --- pointwise kernels ------------------------------------------------------

// (∇_X Y)^k = X^i ∂_i Y^k + Γ^k_ij X^i Y^j
Vec nabla(const LocalGeometry& geo, const Vec& x, const VectorJet& y);
// [X,Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k
Vec lie_bracket(const VectorJet& x, const VectorJet& y);
// dir[g(Y, Z)], by the product rule through g, Y and Z.
double directional_inner(const LocalGeometry& geo, const Vec& dir, const VectorJet& y,
                         const VectorJet& z);
// Right-hand side of 2g(∇_X Y, Z) built from metric values, metric
// derivatives and brackets only; it never touches the Christoffel table.
double koszul(const LocalGeometry& geo, const VectorJet& x, const VectorJet& y,
              const VectorJet& z);
double d_oneform(const VectorJet& eta, const VectorJet& x, const VectorJet& y,
                 DConvention convention = DConvention::half);
// dir[η(Y)]
double directional_pairing(const Vec& dir, const VectorJet& eta, const VectorJet& y);
Vec grad(const LocalGeometry& geo, const ScalarJet& f);
// Jet of the field φY.
VectorJet apply(const EndoJet& phi, const VectorJet& y);
// (∇_X φ)Y = ∇_X(φY) − φ(∇_X Y)
Vec nabla_endo(const LocalGeometry& geo, const EndoJet& phi, const Vec& x, const VectorJet& y);
// X[g(Y,Z)] − g(∇_X Y, Z) − g(Y, ∇_X Z)
double metric_compatibility_residual(const LocalGeometry& geo, const VectorJet& x,
                                     const VectorJet& y, const VectorJet& z);

// --- field-level API ---------------------------------------------------------
// These evaluate at a single point p, which must lie inside the chart box.

Mat metric_at(const ChartedManifold& m, const Vec& p);
Mat metric_inverse_at(const ChartedManifold& m, const Vec& p);
Christoffel christoffel(const ChartedManifold& m, const Vec& p, DiffMode mode = DiffMode::dual);
Vec nabla(const ChartedManifold& m, const VectorField& x, const VectorField& y, const Vec& p);
double koszul(const ChartedManifold& m, const VectorField& x, const VectorField& y,
              const VectorField& z, const Vec& p);
Vec lie_bracket(const ChartedManifold& m, const VectorField& x, const VectorField& y,
                const Vec& p);
double d_oneform(const ChartedManifold& m, const OneFormField& eta, const VectorField& x,
                 const VectorField& y, const Vec& p, DConvention convention = DConvention::half);
Vec grad(const ChartedManifold& m, const ScalarField& f, const Vec& p);
Vec nabla_endo(const ChartedManifold& m, const EndoField& phi, const VectorField& x,
               const VectorField& y, const Vec& p);

}  // namespace warpgeo
