#pragma once

#include "warpgeo/report.hpp"
#include "warpgeo/sampling.hpp"
#include "warpgeo/tensor.hpp"

namespace warpgeo {

// Orientation of J on the (x_i, y_i) coordinate pairs. `standard` is
// J∂y_i = ∂x_i (the frame in which the coefficient PDEs are written),
// `swapped` is J∂x_i = ∂y_i.
enum class JConvention { unspecified, standard, swapped };

const char* to_string(JConvention c);

struct AlmostContactStructure {
  ChartedManifold manifold;
  EndoField phi;
  VectorField xi;
  OneFormField eta;
};

/// Almost complex structure with an exact potential ω. Coordinates are
/// expected in the order (x_1..x_n, y_1..y_n) when the PDE check is used.
struct AlmostComplexStructure {
  ChartedManifold manifold;
  EndoField J;
  OneFormField omega;
  JConvention convention = JConvention::unspecified;
};

struct SampleOptions {
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  bool coordinate_fields = true;  // test every coordinate field / pair too
};

// Pointwise values and jets of a structure.
struct ContactJets {
  LocalGeometry geo;
  EndoJet phi;
  VectorJet xi;
  VectorJet eta;
};
struct ComplexJets {
  LocalGeometry geo;
  EndoJet J;
  VectorJet omega;
};
ContactJets contact_jets(const AlmostContactStructure& s, const Vec& p);
ComplexJets complex_jets(const AlmostComplexStructure& a, const Vec& p);

void validate(const AlmostContactStructure& s);  // throws DimensionMismatch
void validate(const AlmostComplexStructure& a);

// g(X, φY) and g(X, JY)
double fundamental_form(const AlmostContactStructure& s, const VectorField& x,
                        const VectorField& y, const Vec& p);
double fundamental_form(const AlmostComplexStructure& a, const VectorField& x,
                        const VectorField& y, const Vec& p);

CheckReport check_almost_contact(const AlmostContactStructure& s, const SampleOptions& o,
                                 double tol = kAlgebraicTol);
CheckReport check_metric_compatibility(const AlmostContactStructure& s, const SampleOptions& o,
                                       double tol = kAlgebraicTol);
CheckReport check_contact_metric(const AlmostContactStructure& s, DConvention c,
                                 const SampleOptions& o, double tol = kAlgebraicTol);
// |dη(X,Y) − factor·Φ(X,Y)|; factor 1 is the contact-metric condition.
CheckReport check_d_eta_proportional(const AlmostContactStructure& s, double factor,
                                     DConvention c, const SampleOptions& o,
                                     double tol = kAlgebraicTol);
CheckReport check_alpha_sasakian(const AlmostContactStructure& s, double alpha,
                                 const SampleOptions& o, double tol = kDerivativeTol);
CheckReport check_k_contact(const AlmostContactStructure& s, const SampleOptions& o,
                            double tol = kDerivativeTol);

CheckReport check_hermitian(const AlmostComplexStructure& a, const SampleOptions& o,
                            double tol = kAlgebraicTol);
CheckReport check_kaehler(const AlmostComplexStructure& a, const SampleOptions& o,
                          double tol = kDerivativeTol);
CheckReport check_exact_potential(const AlmostComplexStructure& a, DConvention c,
                                  const SampleOptions& o, double tol = kAlgebraicTol);
// Throws ConventionMismatch unless a.convention is `standard`.
CheckReport check_coefficient_pdes(const AlmostComplexStructure& a, const SampleOptions& o,
                                   double tol = kAlgebraicTol);

// --- sampling harness shared with the product module -------------------------

struct SamplePoint {
  std::size_t index = 0;
  Vec point;
  std::vector<PolynomialField> random;  // three independent random fields
};

// Draws point i and its random fields; identical for every check.
SamplePoint draw_sample(const ChartedManifold& m, std::uint64_t seed, std::size_t index);

std::vector<VectorJet> coordinate_jets(std::size_t dim);

}  // namespace warpgeo
