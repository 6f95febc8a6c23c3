#include "afcm/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afcm {

BasisEval basis_derivatives(const FeatureFunction& f, const Subdomain& sub, const Vec2& x) {
  const Vec2 xl = to_local(sub, x);
  const double z = f.gamma * (f.normal.dot(xl) + f.offset);
  const double t = std::tanh(z);
  const double s2 = 1.0 - t * t;
  const double v = t * t * t;
  const double d1 = 3.0 * t * t * s2;
  const double d2 = 6.0 * t * s2 * (1.0 - 2.0 * t * t);

  BasisEval out;
  out.value = v;
  const double gx = f.gamma * f.normal[0] / sub.radius[0];
  const double gy = f.gamma * f.normal[1] / sub.radius[1];
  out.grad = Vec2(d1 * gx, d1 * gy);
  out.hess(0, 0) = d2 * gx * gx;
  out.hess(0, 1) = d2 * gx * gy;
  out.hess(1, 0) = out.hess(0, 1);
  out.hess(1, 1) = d2 * gy * gy;
  return out;
}

double apply_operator(const Operator2D& op, const BasisEval& b, const Vec2& x) {
  double r = 0;
  if (op.axx) r += op.axx(x) * b.hess(0, 0);
  if (op.axy) r += op.axy(x) * b.hess(0, 1);
  if (op.ayy) r += op.ayy(x) * b.hess(1, 1);
  if (op.bx) r += op.bx(x) * b.grad[0];
  if (op.by) r += op.by(x) * b.grad[1];
  if (op.c0) r += op.c0(x) * b.value;
  return r;
}

double rescale_factor(const VectorXd& entries, double c) {
  if (!(c > 0)) {
    throw std::invalid_argument("rescale_factor: c must be positive");
  }
  const double m = entries.cwiseAbs().maxCoeff();
  return m > 0 ? c / m : 0.0;
}

namespace {

struct RowBuffer {
  MatrixXd a;
  VectorXd rhs;
  std::vector<RowTag> tags;
  long used = 0;
  long dropped = 0;

  RowBuffer(long max_rows, long cols) : a(MatrixXd::Zero(max_rows, cols)), rhs(max_rows) {
    tags.reserve(static_cast<size_t>(max_rows));
  }

  /// Rescales and appends one row; degenerate rows are dropped and counted.
  /// `cols` maps entry slots to matrix columns.
  void push(const VectorXd& entries, const std::vector<long>& cols, double rhs_value, double c,
            RowTag tag) {
    const double lambda = rescale_factor(entries, c);
    if (lambda == 0.0) {
      ++dropped;
      return;
    }
    for (size_t k = 0; k < cols.size(); ++k) {
      a(used, cols[k]) = lambda * entries[static_cast<long>(k)];
    }
    rhs[used] = lambda * rhs_value;
    tags.push_back(tag);
    ++used;
  }
};

}  // namespace

LinearSystem assemble_system(const ProblemDefinition& problem, const Partition& partition,
                             const FeatureSet& features, const CollocationSet& colloc, double c) {
  const int mp = partition.size();
  const int d_phi = problem.d_phi;
  if (d_phi < 1 || static_cast<int>(problem.op.size()) != d_phi) {
    throw std::invalid_argument("assemble_system: operator count must match d_phi");
  }
  if (static_cast<int>(features.per_subdomain.size()) != mp) {
    throw std::invalid_argument("assemble_system: feature set does not match the partition");
  }

  LinearSystem sys;
  sys.d_phi = d_phi;
  sys.sub_col_offset.resize(static_cast<size_t>(mp));
  long offset = 0;
  for (int n = 0; n < mp; ++n) {
    if (features.per_subdomain[static_cast<size_t>(n)].empty()) {
      throw std::invalid_argument("assemble_system: subdomain " + std::to_string(n) +
                                  " has no features");
    }
    if (colloc.interior[static_cast<size_t>(n)].empty() &&
        colloc.boundary[static_cast<size_t>(n)].empty()) {
      throw std::invalid_argument("assemble_system: subdomain " + std::to_string(n) +
                                  " has no collocation points");
    }
    sys.sub_col_offset[static_cast<size_t>(n)] = offset;
    offset += static_cast<long>(features.per_subdomain[static_cast<size_t>(n)].size());
  }
  sys.total_features = offset;
  const long cols = offset * d_phi;

  long max_rows = 0;
  for (int n = 0; n < mp; ++n) {
    max_rows += static_cast<long>(colloc.interior[static_cast<size_t>(n)].size() +
                                  2 * colloc.boundary[static_cast<size_t>(n)].size());
  }
  max_rows += static_cast<long>(colloc.interfaces.size()) * 3;
  max_rows *= d_phi;

  RowBuffer rows(max_rows, cols);
  std::vector<long> col_ids;
  VectorXd entries;

  // PDE rows at interior and domain-boundary points.
  for (int comp = 0; comp < d_phi; ++comp) {
    const Operator2D& op = problem.op[static_cast<size_t>(comp)];
    for (int n = 0; n < mp; ++n) {
      const auto& feats = features.per_subdomain[static_cast<size_t>(n)];
      const Subdomain& sub = partition.sub(n);
      const long jn = static_cast<long>(feats.size());
      col_ids.resize(static_cast<size_t>(jn));
      for (long j = 0; j < jn; ++j) col_ids[static_cast<size_t>(j)] = sys.col_of(n, j, comp);
      entries.resize(jn);

      auto emit_pde = [&](const Vec2& x) {
        for (long j = 0; j < jn; ++j) {
          entries[j] = apply_operator(op, basis_derivatives(feats[static_cast<size_t>(j)], sub, x), x);
        }
        rows.push(entries, col_ids, problem.source(x, comp), c, RowTag::kPde);
      };
      for (const Vec2& x : colloc.interior[static_cast<size_t>(n)]) emit_pde(x);
      for (const Vec2& x : colloc.boundary[static_cast<size_t>(n)]) emit_pde(x);
    }
  }

  // Dirichlet rows on the domain boundary.
  for (int comp = 0; comp < d_phi; ++comp) {
    for (int n = 0; n < mp; ++n) {
      const auto& feats = features.per_subdomain[static_cast<size_t>(n)];
      const Subdomain& sub = partition.sub(n);
      const long jn = static_cast<long>(feats.size());
      col_ids.resize(static_cast<size_t>(jn));
      for (long j = 0; j < jn; ++j) col_ids[static_cast<size_t>(j)] = sys.col_of(n, j, comp);
      entries.resize(jn);
      for (const Vec2& x : colloc.boundary[static_cast<size_t>(n)]) {
        if (problem.dirichlet_mask && !problem.dirichlet_mask(x)) continue;
        for (long j = 0; j < jn; ++j) {
          entries[j] = basis_derivatives(feats[static_cast<size_t>(j)], sub, x).value;
        }
        rows.push(entries, col_ids, problem.dirichlet(x, comp), c, RowTag::kBoundary);
      }
    }
  }

  // C1 continuity across interfaces: value jump and both gradient components.
  for (const InterfacePoint& ip : colloc.interfaces) {
    const auto& fa = features.per_subdomain[static_cast<size_t>(ip.sub_a)];
    const auto& fb = features.per_subdomain[static_cast<size_t>(ip.sub_b)];
    const Subdomain& sa = partition.sub(ip.sub_a);
    const Subdomain& sb = partition.sub(ip.sub_b);
    const long ja = static_cast<long>(fa.size());
    const long jb = static_cast<long>(fb.size());
    std::vector<BasisEval> ea(static_cast<size_t>(ja)), eb(static_cast<size_t>(jb));
    for (long j = 0; j < ja; ++j) ea[static_cast<size_t>(j)] = basis_derivatives(fa[static_cast<size_t>(j)], sa, ip.x);
    for (long j = 0; j < jb; ++j) eb[static_cast<size_t>(j)] = basis_derivatives(fb[static_cast<size_t>(j)], sb, ip.x);

    for (int comp = 0; comp < d_phi; ++comp) {
      col_ids.resize(static_cast<size_t>(ja + jb));
      for (long j = 0; j < ja; ++j) col_ids[static_cast<size_t>(j)] = sys.col_of(ip.sub_a, j, comp);
      for (long j = 0; j < jb; ++j) col_ids[static_cast<size_t>(ja + j)] = sys.col_of(ip.sub_b, j, comp);
      entries.resize(ja + jb);

      for (long j = 0; j < ja; ++j) entries[j] = ea[static_cast<size_t>(j)].value;
      for (long j = 0; j < jb; ++j) entries[ja + j] = -eb[static_cast<size_t>(j)].value;
      rows.push(entries, col_ids, 0.0, c, RowTag::kContinuityValue);

      for (int axis = 0; axis < 2; ++axis) {
        for (long j = 0; j < ja; ++j) entries[j] = ea[static_cast<size_t>(j)].grad[axis];
        for (long j = 0; j < jb; ++j) entries[ja + j] = -eb[static_cast<size_t>(j)].grad[axis];
        rows.push(entries, col_ids, 0.0, c, RowTag::kContinuityGradient);
      }
    }
  }

  if (rows.used < cols) {
    throw std::invalid_argument("assemble_system: underdetermined system (" +
                                std::to_string(rows.used) + " rows for " + std::to_string(cols) +
                                " columns); increase collocation density or reduce features");
  }

  sys.A = rows.a.topRows(rows.used);
  sys.rhs = rows.rhs.head(rows.used);
  sys.tags = std::move(rows.tags);
  sys.dropped_rows = rows.dropped;
  return sys;
}

LstsqResult solve_lstsq(const LinearSystem& system, double rank_tol) {
  return lstsq_min_norm(system.A, system.rhs, rank_tol);
}

Solution::Solution(Partition partition, FeatureSet features, VectorXd coeffs, PouKind pou)
    : partition_(std::move(partition)),
      features_(std::move(features)),
      coeffs_(std::move(coeffs)),
      pou_(pou) {
  sub_offset_.resize(features_.per_subdomain.size());
  long offset = 0;
  for (size_t n = 0; n < features_.per_subdomain.size(); ++n) {
    sub_offset_[n] = offset;
    offset += static_cast<long>(features_.per_subdomain[n].size());
  }
  total_features_ = offset;
  if (total_features_ == 0 || coeffs_.size() % total_features_ != 0) {
    throw std::invalid_argument("Solution: coefficient count must be d_phi * total features");
  }
  d_phi_ = static_cast<int>(coeffs_.size() / total_features_);
}

namespace {

struct PouEval {
  double value = 1;
  Vec2 grad{0, 0};
  Mat2 hess = Mat2::Zero();
};

PouEval smooth_pou(const Subdomain& sub, const Vec2& xl) {
  const Pou1d px = pou_weight_1d_derivs(PouKind::kSmooth, xl[0]);
  const Pou1d py = pou_weight_1d_derivs(PouKind::kSmooth, xl[1]);
  const double rx = sub.radius[0], ry = sub.radius[1];
  PouEval out;
  out.value = px.value * py.value;
  out.grad = Vec2(px.d1 / rx * py.value, px.value * py.d1 / ry);
  out.hess(0, 0) = px.d2 / (rx * rx) * py.value;
  out.hess(1, 1) = px.value * py.d2 / (ry * ry);
  out.hess(0, 1) = px.d1 * py.d1 / (rx * ry);
  out.hess(1, 0) = out.hess(0, 1);
  return out;
}

}  // namespace

PointEval Solution::evaluate(const Vec2& x, bool with_derivatives) const {
  PointEval out;
  out.value = VectorXd::Zero(d_phi_);
  if (with_derivatives) {
    out.grad.assign(static_cast<size_t>(d_phi_), Vec2::Zero());
    out.hess.assign(static_cast<size_t>(d_phi_), Mat2::Zero());
  }

  auto accumulate = [&](int n, const PouEval& psi) {
    const Subdomain& sub = partition_.sub(n);
    const auto& feats = features_.per_subdomain[static_cast<size_t>(n)];
    const Vec2 xl = to_local(sub, x);
    for (int comp = 0; comp < d_phi_; ++comp) {
      double v = 0;
      Vec2 g = Vec2::Zero();
      Mat2 h = Mat2::Zero();
      for (size_t j = 0; j < feats.size(); ++j) {
        const double u = coeff(n, static_cast<long>(j), comp);
        if (with_derivatives) {
          const BasisEval b = basis_derivatives(feats[j], sub, x);
          v += u * b.value;
          g += u * b.grad;
          h += u * b.hess;
        } else {
          const FeatureFunction& f = feats[j];
          v += u * activation(f.gamma * (f.normal.dot(xl) + f.offset), 0);
        }
      }
      out.value[comp] += psi.value * v;
      if (with_derivatives) {
        // Product rule with the PoU weight; for the indicator weight the
        // psi-derivative terms vanish in subdomain interiors.
        out.grad[static_cast<size_t>(comp)] += psi.value * g + v * psi.grad;
        out.hess[static_cast<size_t>(comp)] += psi.value * h + psi.grad * g.transpose() +
                                               g * psi.grad.transpose() + v * psi.hess;
      }
    }
  };

  if (pou_ == PouKind::kIndicator) {
    accumulate(partition_.locate(x), PouEval{});
  } else {
    for (int n = 0; n < partition_.size(); ++n) {
      const Vec2 xl = to_local(partition_.sub(n), x);
      if (std::abs(xl[0]) >= 1.25 || std::abs(xl[1]) >= 1.25) continue;
      accumulate(n, smooth_pou(partition_.sub(n), xl));
    }
  }
  return out;
}

double Solution::value(const Vec2& x, int comp) const {
  if (pou_ == PouKind::kIndicator) {
    const int n = partition_.locate(x);
    const Subdomain& sub = partition_.sub(n);
    const Vec2 xl = to_local(sub, x);
    const auto& feats = features_.per_subdomain[static_cast<size_t>(n)];
    double v = 0;
    for (size_t j = 0; j < feats.size(); ++j) {
      const FeatureFunction& f = feats[j];
      v += coeff(n, static_cast<long>(j), comp) *
           activation(f.gamma * (f.normal.dot(xl) + f.offset), 0);
    }
    return v;
  }
  return evaluate(x, false).value[comp];
}

Vec2 Solution::gradient(const Vec2& x, int comp) const {
  if (pou_ == PouKind::kIndicator) {
    const int n = partition_.locate(x);
    const Subdomain& sub = partition_.sub(n);
    const auto& feats = features_.per_subdomain[static_cast<size_t>(n)];
    Vec2 g = Vec2::Zero();
    for (size_t j = 0; j < feats.size(); ++j) {
      g += coeff(n, static_cast<long>(j), comp) * basis_derivatives(feats[j], sub, x).grad;
    }
    return g;
  }
  return evaluate(x, true).grad[static_cast<size_t>(comp)];
}

double Solution::gradient_norm(const Vec2& x) const {
  if (d_phi_ == 1) {
    return gradient(x, 0).norm();
  }
  const PointEval e = evaluate(x, true);
  double s = 0;
  for (const Vec2& g : e.grad) s += g.squaredNorm();
  return std::sqrt(s);
}

}  // namespace afcm
