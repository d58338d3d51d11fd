#pragma once

#include <string>
#include <vector>

#include "warpgeo/structures.hpp"

namespace warpgeo {

// ---------------------------------------------------------------------------
// Contactization: base × curve, coordinates (base..., t), ξ̄ = 2∂t.

struct ContactizationSpec {
  AlmostComplexStructure base;
  double alpha = 1.0;
  std::string fiber_coord = "t";
  Interval fiber_box{-1.0, 1.0};
  bool validate_base = true;  // hermitian, kaehler, exact potential on a few points
};

AlmostContactStructure build_contactization(const ContactizationSpec& spec);

// The closed-form block matrices, with f_k = ω(2∂_k). They presuppose a base
// metric of ¼δ in the (x, y) coordinates.
Mat printed_metric_matrix(const ContactizationSpec& spec, const Vec& p);
Mat printed_metric_inverse(const ContactizationSpec& spec, const Vec& p);

struct ChristoffelClaim {
  std::string family;  // "F1".."F14", "F10+F11", or "zero" for unlisted entries
  std::size_t k = 0, i = 0, j = 0;
  double value = 0.0;
};

// Every printed symbol at p, followed by an explicit zero claim for each
// entry (k, i<=j) that the list does not mention.
std::vector<ChristoffelClaim> printed_christoffel_table(const ContactizationSpec& spec, const Vec& p);

// One report entry per claim; residual is the max over samples of
// |claim − oracle|. Entries above tol are erratum candidates.
CheckReport compare_christoffel_table(const ContactizationSpec& spec,
                                      const AlmostContactStructure& built,
                                      const SampleOptions& o, double tol = kDerivativeTol);

struct AdaptedFrame {
  std::vector<VectorField> e;      // e_i = 2∂y_i − α f_{n+i} ξ̄
  std::vector<VectorField> phi_e;  // φ̄(e_i), computed by applying φ̄
  VectorField xi;
};

AdaptedFrame adapted_frame(const ContactizationSpec& spec, const AlmostContactStructure& built);
// Columns e_1..e_n, φ̄e_1..φ̄e_n, ξ̄ evaluated at p.
Mat frame_at(const AdaptedFrame& f, const Vec& p);

// Gram matrix − I, η̄(e_i), η̄(φ̄e_i).
CheckReport check_adapted_frame(const ContactizationSpec& spec, const AlmostContactStructure& built,
                                const SampleOptions& o, double tol = kAlgebraicTol);
// The printed φ̄(e_i) = 2∂x_i − α f_i ξ̄ against the applied φ̄.
CheckReport probe_printed_phi_e(const ContactizationSpec& spec, const AlmostContactStructure& built,
                                const SampleOptions& o, double tol = kAlgebraicTol);

// Nine frame relations, one report entry each.
CheckReport check_frame_connection(const ContactizationSpec& spec, const AlmostContactStructure& built,
                            const SampleOptions& o, double tol = kDerivativeTol);

// h₁[(a − a³)ω(Y₁) + (1 − a)h₂] in its printed form, at random arguments.
double sasakian_remainder(double alpha, double omega_y1, double h1, double h2);
CheckReport probe_sasakian_remainder(const ContactizationSpec& spec, const SampleOptions& o,
                       double tol = kAlgebraicTol);

// α-Sasakian check for each α (α = 1 expected to pass, others are probes),
// each followed by the printed-identity probe.
std::vector<CheckReport> alpha_sasakian_probe(const ContactizationSpec& spec,
                                              const std::vector<double>& alphas,
                                              const SampleOptions& o);

// ---------------------------------------------------------------------------
// Warped product: coordinates (base..., fiber...), g = g₁ + f²(g₂ − η⊗η) + η̄⊗η̄
// with the warp f a function on the base.

struct WarpedProductSpec {
  std::string name = "warped";
  AlmostComplexStructure base;
  AlmostContactStructure fiber;
  double a = 1.0;
  Expr warp = Expr::constant(1.0);  // over base coordinates
  bool validate = true;
};

struct WarpedProduct {
  WarpedProductSpec spec;
  AlmostContactStructure structure;
  std::size_t base_dim = 0;
  std::size_t fiber_dim = 0;
  ScalarField warp_base;  // f on the base chart

  Vec base_point(const Vec& p) const { return p.head(static_cast<Eigen::Index>(base_dim)); }
  Vec fiber_point(const Vec& p) const { return p.tail(static_cast<Eigen::Index>(fiber_dim)); }
};

WarpedProduct build_warped_product(const WarpedProductSpec& spec);

// The metric exactly as printed, with −η̄⊗η̄ inside the warped bracket.
Mat printed_warped_metric(const WarpedProduct& w, const Vec& p);

// Base fields are jets over base coordinates, fiber fields over fiber ones.
VectorJet lift_base(const WarpedProduct& w, const VectorJet& x);
VectorJet lift_fiber(const WarpedProduct& w, const VectorJet& u);

struct ConnectionComparison {
  Vec closed;
  Vec oracle;
  double residual = 0.0;  // product-metric norm of closed − oracle
};

ConnectionComparison connection_base(const WarpedProduct& w, const VectorJet& x,
                                     const VectorJet& y, const Vec& p);

struct MixedComparison {
  Vec closed;
  Vec oracle;          // ∇_(X,0)(0,U)
  Vec oracle_swapped;  // ∇_(0,U)(X,0)
  double residual = 0.0;
  double symmetry_residual = 0.0;
};

MixedComparison connection_mixed(const WarpedProduct& w, const VectorJet& x, const VectorJet& u,
                                 const Vec& p);

struct FiberComparison {
  Vec parse_a;  // (f²−1)/f² on the φ terms only
  Vec parse_b;  // (f²−1)/f² on the whole bracket
  Vec oracle;
  double residual_a = 0.0;
  double residual_b = 0.0;
};

FiberComparison connection_fiber(const WarpedProduct& w, const VectorJet& u, const VectorJet& v,
                                 const Vec& p);
// "A", "B", "both" or "neither"
std::string fiber_parse_winner(const FiberComparison& c, double tol);

enum class KoszulCase { mixed, fiber };

struct KoszulIdentity {
  double lhs = 0.0;
  double rhs = 0.0;            // coefficient a (adopted)
  double rhs_statement = 0.0;  // coefficient 2a (differs only for mixed)
  double residual = 0.0;
};

// mixed: (first, second) = (X, U); fiber: (first, second) = (U, V). Y is a base
// field and W a fiber field in both cases.
KoszulIdentity koszul_identity(const WarpedProduct& w, KoszulCase which, const VectorJet& first,
                                  const VectorJet& second, const VectorJet& y, const VectorJet& wf,
                                  const Vec& p);

// Sampled reports over coordinate and random factor fields.
CheckReport check_connection_base(const WarpedProduct& w, const SampleOptions& o,
                                  double tol = kDerivativeTol);
CheckReport check_connection_mixed(const WarpedProduct& w, const SampleOptions& o,
                                   Expectation e, double tol = kDerivativeTol);
CheckReport check_mixed_symmetry(const WarpedProduct& w, const SampleOptions& o,
                                 double tol = 1e-8);
CheckReport check_connection_fiber(const WarpedProduct& w, const SampleOptions& o,
                                   double tol = kDerivativeTol);
CheckReport check_koszul_identity(const WarpedProduct& w, KoszulCase which, const SampleOptions& o,
                            double tol = kDerivativeTol);

// Factor-sampled point and fields, shared by the reports above.
struct ProductSample {
  Vec point;
  std::vector<VectorJet> base;   // coordinate fields then random fields
  std::vector<VectorJet> fiber;
};
ProductSample product_sample(const WarpedProduct& w, const SampleOptions& o, std::size_t index);

// ---------------------------------------------------------------------------
// Levi-Civita oracle soundness on any chart: torsion symmetry (exact), metric
// compatibility, and nabla against the Koszul formula.

std::vector<CheckReport> check_oracle_soundness(const ChartedManifold& m, const SampleOptions& o,
                                                double compat_tol = 1e-7, double koszul_tol = 1e-8);

}  // namespace warpgeo
