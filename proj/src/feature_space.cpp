#include "afcm/feature_space.hpp"

#include <cmath>
#include <stdexcept>

#include "afcm/lstsq.hpp"
#include "afcm/rng.hpp"

namespace afcm {

double activation(double z, int order) {
  const double t = std::tanh(z);
  const double s2 = 1.0 - t * t;  // sech^2
  switch (order) {
    case 0:
      return t * t * t;
    case 1:
      return 3.0 * t * t * s2;
    case 2:
      return 6.0 * t * s2 * (1.0 - 2.0 * t * t);
    default:
      throw std::invalid_argument("activation: order must be 0, 1 or 2");
  }
}

long FeatureSet::total() const {
  long n = 0;
  for (const auto& v : per_subdomain) n += static_cast<long>(v.size());
  return n;
}

FeatureFunction make_feature(const Subdomain& sub, int sub_index, const Vec2& direction,
                             double offset) {
  const double norm = direction.norm();
  if (!(norm > 0)) {
    throw std::invalid_argument("make_feature: zero direction");
  }
  FeatureFunction f;
  f.normal = direction / norm;
  f.offset = offset;
  f.gamma = 1.0;
  f.subdomain = sub_index;
  // Foot of the hyperplane: the point on it closest to the local origin.
  f.anchor = to_global(sub, -offset * f.normal);
  return f;
}

std::vector<FeatureFunction> init_uniform_features(const Subdomain& sub, int sub_index, int count,
                                                   std::mt19937_64& gen) {
  if (count < 1) {
    throw std::invalid_argument("init_uniform_features: count must be at least 1");
  }
  std::vector<FeatureFunction> out;
  out.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    Vec2 dir;
    do {
      dir = Vec2(standard_normal(gen), standard_normal(gen));
    } while (!(dir.norm() > 0));
    out.push_back(make_feature(sub, sub_index, dir, uniform01(gen)));
  }
  return out;
}

double hyperplane_distance(const FeatureFunction& f, const Vec2& x_local) {
  return std::abs(f.normal.dot(x_local) + f.offset);
}

double hyperplane_density(const std::vector<FeatureFunction>& features, const Vec2& x_local,
                          double tau) {
  if (features.empty()) {
    throw std::invalid_argument("hyperplane_density: empty feature list");
  }
  long hits = 0;
  for (const auto& f : features) {
    if (hyperplane_distance(f, x_local) < tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(features.size());
}

MatrixXd grf_covariance(const std::vector<Vec2>& points, const GrfConfig& cfg) {
  const long n = static_cast<long>(points.size());
  const double inv = 1.0 / (2.0 * cfg.correlation_length * cfg.correlation_length);
  MatrixXd k(n, n);
  for (long i = 0; i < n; ++i) {
    k(i, i) = 1.0 + cfg.jitter;
    for (long j = i + 1; j < n; ++j) {
      const double v = std::exp(-(points[static_cast<size_t>(i)] - points[static_cast<size_t>(j)])
                                     .squaredNorm() *
                                inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

namespace {

/// Lower Cholesky factor of the covariance, escalating jitter on failure.
MatrixXd grf_factor(const std::vector<Vec2>& points, const GrfConfig& cfg) {
  GrfConfig c = cfg;
  while (true) {
    Eigen::LLT<MatrixXd> llt(grf_covariance(points, c));
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
    if (c.jitter >= 1e-6) {
      throw std::runtime_error("simulate_grf: covariance factorization failed at jitter 1e-6");
    }
    c.jitter = c.jitter > 0 ? c.jitter * 10.0 : 1e-10;
  }
}

VectorXd draw_field(const MatrixXd& chol, std::mt19937_64& gen) {
  VectorXd z(chol.rows());
  for (long i = 0; i < z.size(); ++i) z[i] = standard_normal(gen);
  return chol * z;
}

/// Evenly spread subsample of at most `cap` points (always keeps endpoints).
std::vector<Vec2> subsample(const std::vector<Vec2>& pts, size_t cap) {
  if (pts.size() <= cap) return pts;
  std::vector<Vec2> out;
  out.reserve(cap);
  for (size_t k = 0; k < cap; ++k) {
    const size_t i = k * (pts.size() - 1) / (cap - 1);
    out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

VectorXd simulate_grf(const std::vector<Vec2>& points, const GrfConfig& cfg,
                      std::mt19937_64& gen) {
  if (points.empty()) {
    throw std::invalid_argument("simulate_grf: no points");
  }
  return draw_field(grf_factor(points, cfg), gen);
}

CalibrationResult calibrate_gamma(const Subdomain& sub,
                                  const std::vector<FeatureFunction>& features,
                                  const std::vector<Vec2>& colloc_global, const GrfConfig& cfg,
                                  const std::vector<double>& gamma_grid, std::mt19937_64& gen) {
  if (gamma_grid.empty()) {
    throw std::invalid_argument("calibrate_gamma: empty gamma grid");
  }
  if (features.empty() || colloc_global.empty()) {
    throw std::invalid_argument("calibrate_gamma: features and collocation must be nonempty");
  }

  // Fit in the local frame on a capped subsample; the fields and the fit use
  // the same grid.
  const std::vector<Vec2> pts_global = subsample(colloc_global, 900);
  std::vector<Vec2> pts(pts_global.size());
  for (size_t i = 0; i < pts_global.size(); ++i) pts[i] = to_local(sub, pts_global[i]);

  const long p = static_cast<long>(pts.size());
  const long jn = static_cast<long>(features.size());
  const MatrixXd chol = grf_factor(pts, cfg);
  MatrixXd fields(p, cfg.realizations);
  for (int l = 0; l < cfg.realizations; ++l) {
    fields.col(l) = draw_field(chol, gen);
  }

  CalibrationResult out;
  out.mean_loss.resize(gamma_grid.size());
  MatrixXd phi(p, jn);
  for (size_t gi = 0; gi < gamma_grid.size(); ++gi) {
    const double gamma = gamma_grid[gi];
    for (long j = 0; j < jn; ++j) {
      const FeatureFunction& f = features[static_cast<size_t>(j)];
      for (long q = 0; q < p; ++q) {
        phi(q, j) = activation(gamma * (f.normal.dot(pts[static_cast<size_t>(q)]) + f.offset), 0);
      }
    }
    const MatrixXd u = lstsq_min_norm_multi(phi, fields, 1e-10);
    const MatrixXd resid = phi * u - fields;
    out.mean_loss[gi] = resid.colwise().squaredNorm().mean();
  }

  size_t best = 0;
  for (size_t gi = 1; gi < gamma_grid.size(); ++gi) {
    if (out.mean_loss[gi] < out.mean_loss[best]) best = gi;
  }
  out.gamma = gamma_grid[best];
  return out;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 40; ++i) g.push_back(0.2 * i);
  return g;
}

}  // namespace afcm
