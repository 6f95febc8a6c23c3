#pragma once

#include <random>
#include <vector>

#include "afcm/geometry.hpp"

namespace afcm {

/// One random feature: sigma(gamma * (normal . x_local + offset)). The zero
/// set of the pre-activation is the feature's partition hyperplane; its
/// placement controls where the feature varies fastest.
struct FeatureFunction {
  Vec2 normal;       // unit vector in local coordinates
  double offset = 0;  // hyperplane is normal . x + offset = 0
  double gamma = 1;   // pre-activation steepness along the normal, > 0
  int subdomain = 0;
  Vec2 anchor{0, 0};  // global point the hyperplane passes through
};

enum class ActivationKind { kTanhCubed };

/// tanh^3 and its first two derivatives (order 0, 1, 2).
double activation(double z, int order);

struct FeatureSet {
  std::vector<std::vector<FeatureFunction>> per_subdomain;
  ActivationKind activation = ActivationKind::kTanhCubed;

  long total() const;
};

/// Normalizes the direction and anchors the hyperplane foot point.
FeatureFunction make_feature(const Subdomain& sub, int sub_index, const Vec2& direction,
                             double offset);

/// Uniformly distributed hyperplanes: direction from a standard Gaussian
/// normalized to unit length, offset uniform on [0,1]. Gamma is left at 1
/// until calibration.
std::vector<FeatureFunction> init_uniform_features(const Subdomain& sub, int sub_index, int count,
                                                   std::mt19937_64& gen);

/// |normal . x_local + offset|
double hyperplane_distance(const FeatureFunction& f, const Vec2& x_local);

/// Fraction of features whose hyperplane passes within tau of the point.
double hyperplane_density(const std::vector<FeatureFunction>& features, const Vec2& x_local,
                          double tau);

struct GrfConfig {
  double correlation_length = 0.5;  // eta
  int realizations = 10;            // L
  double jitter = 1e-10;            // initial diagonal regularization
};

/// Squared-exponential covariance exp(-|x-x'|^2 / (2 eta^2)), unit variance,
/// jitter added on the diagonal.
MatrixXd grf_covariance(const std::vector<Vec2>& points, const GrfConfig& cfg);

/// One zero-mean unit-variance Gaussian field realization sampled jointly at
/// the given points. Cholesky jitter escalates tenfold up to 1e-6 before
/// giving up.
VectorXd simulate_grf(const std::vector<Vec2>& points, const GrfConfig& cfg,
                      std::mt19937_64& gen);

struct CalibrationResult {
  double gamma = 0;
  std::vector<double> mean_loss;  // mean fitting loss per grid candidate
};

/// Grid search for the shared shape parameter: for each candidate gamma the
/// features (with their existing hyperplanes) are least-squares fitted to L
/// field realizations on a subsample of the collocation points, and the
/// candidate with the smallest mean loss wins. Operates in the subdomain's
/// local frame, so equal-size subdomains calibrate identically up to RNG.
CalibrationResult calibrate_gamma(const Subdomain& sub,
                                  const std::vector<FeatureFunction>& features,
                                  const std::vector<Vec2>& colloc_global, const GrfConfig& cfg,
                                  const std::vector<double>& gamma_grid, std::mt19937_64& gen);

/// 0.2, 0.4, ..., 8.0
std::vector<double> default_gamma_grid();

}  // namespace afcm
