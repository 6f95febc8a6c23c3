#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "afcm/feature_space.hpp"
#include "afcm/lstsq.hpp"

namespace afcm {

using ScalarField = std::function<double(const Vec2&)>;

/// General second-order linear operator for one solution component:
///   axx d2/dx2 + axy d2/dxdy + ayy d2/dy2 + bx d/dx + by d/dy + c0 * id.
/// Empty coefficients are identically zero; axy multiplies the mixed partial
/// once. The boundary operator is restricted to the Dirichlet trace.
struct Operator2D {
  ScalarField axx, axy, ayy, bx, by, c0;
};

struct ProblemDefinition {
  std::vector<Operator2D> op;                          // one per component
  std::function<double(const Vec2&, int)> source;      // f(x, component)
  std::function<double(const Vec2&, int)> dirichlet;   // g(x, component)
  std::function<bool(const Vec2&)> dirichlet_mask;     // where on the boundary g applies; empty = everywhere
  std::function<double(const Vec2&, int)> initial;     // optional h, used by time-dependent drivers
  int d_phi = 1;
};

struct BasisEval {
  double value = 0;
  Vec2 grad{0, 0};
  Mat2 hess = Mat2::Zero();
};

/// Value, gradient and Hessian of one feature at a global point. The local
/// transform contributes a factor gamma * a_i / radius_i per differentiation
/// axis.
BasisEval basis_derivatives(const FeatureFunction& f, const Subdomain& sub, const Vec2& x);

double apply_operator(const Operator2D& op, const BasisEval& basis, const Vec2& x);

enum class RowTag : std::uint8_t { kPde, kBoundary, kContinuityValue, kContinuityGradient };

struct LinearSystem {
  MatrixXd A;
  VectorXd rhs;
  std::vector<RowTag> tags;
  std::vector<long> sub_col_offset;  // feature-block start per subdomain
  long total_features = 0;
  int d_phi = 1;
  long dropped_rows = 0;  // rows with a zero rescaling denominator

  long rows() const { return A.rows(); }
  long cols() const { return A.cols(); }
  long col_of(int sub, long j, int comp) const {
    return static_cast<long>(comp) * total_features + sub_col_offset[static_cast<size_t>(sub)] + j;
  }
};

/// c / max|entries|; 0 flags a degenerate row.
double rescale_factor(const VectorXd& entries, double c);

/// Least-squares system for the current features and collocation points:
///  - every interior and domain-boundary point contributes a PDE row,
///  - masked domain-boundary points additionally contribute a Dirichlet row,
///  - every interface point contributes a value-jump row and one row per
///    gradient component, tying the two adjacent subdomains together.
/// Each row is rescaled so its largest basis entry has magnitude c; rows with
/// a zero denominator are dropped and counted.
LinearSystem assemble_system(const ProblemDefinition& problem, const Partition& partition,
                             const FeatureSet& features, const CollocationSet& colloc,
                             double c = 1.0);

struct SolveConfig {
  double rescale_c = 1.0;
  double rank_tol = 1e-10;
};

LstsqResult solve_lstsq(const LinearSystem& system, double rank_tol);

struct PointEval {
  VectorXd value;           // per component
  std::vector<Vec2> grad;   // per component (empty unless requested)
  std::vector<Mat2> hess;   // per component (empty unless requested)
};

/// A solved random-feature field: partition + features + coefficients.
/// Immutable and cheap to copy around.
class Solution {
 public:
  Solution(Partition partition, FeatureSet features, VectorXd coeffs,
           PouKind pou = PouKind::kIndicator);

  double value(const Vec2& x, int comp = 0) const;
  Vec2 gradient(const Vec2& x, int comp = 0) const;

  /// Euclidean norm of the gradient (Frobenius over components when d_phi > 1).
  double gradient_norm(const Vec2& x) const;

  PointEval evaluate(const Vec2& x, bool with_derivatives) const;

  const Partition& partition() const { return partition_; }
  const FeatureSet& features() const { return features_; }
  const VectorXd& coeffs() const { return coeffs_; }
  PouKind pou() const { return pou_; }
  int d_phi() const { return d_phi_; }
  long total_features() const { return total_features_; }
  double coeff(int sub, long j, int comp) const {
    return coeffs_[static_cast<long>(comp) * total_features_ +
                   sub_offset_[static_cast<size_t>(sub)] + j];
  }

 private:
  Partition partition_;
  FeatureSet features_;
  VectorXd coeffs_;
  PouKind pou_;
  int d_phi_;
  long total_features_;
  std::vector<long> sub_offset_;
};

}  // namespace afcm
