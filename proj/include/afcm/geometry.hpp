#pragma once

#include <vector>

#include "afcm/types.hpp"

namespace afcm {

/// Axis-aligned rectangular domain. The second axis doubles as time for
/// space-time problems.
struct Domain {
  Vec2 lo;
  Vec2 hi;

  Domain(const Vec2& lower, const Vec2& upper);

  double width(int axis) const { return hi[axis] - lo[axis]; }
  bool contains(const Vec2& x) const {
    return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1];
  }
};

struct Subdomain {
  Vec2 center;
  Vec2 radius;  // per-axis half-width, > 0
  int ix = 0;
  int iy = 0;
};

/// Maps the subdomain onto [-1,1]^2: (x - center) / radius componentwise.
inline Vec2 to_local(const Subdomain& sub, const Vec2& x) {
  return (x - sub.center).cwiseQuotient(sub.radius);
}

inline Vec2 to_global(const Subdomain& sub, const Vec2& x_local) {
  return sub.center + x_local.cwiseProduct(sub.radius);
}

/// Uniform decomposition of a rectangle into nx-by-ny equal subdomains,
/// stored row-major (index = iy*nx + ix). Cell edges are computed once and
/// shared, so neighboring subdomains agree bit-for-bit on their interface
/// coordinate.
class Partition {
 public:
  static Partition uniform(const Domain& domain, int nx, int ny);

  const Domain& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int size() const { return static_cast<int>(subs_.size()); }
  const Subdomain& sub(int n) const { return subs_[static_cast<size_t>(n)]; }
  const std::vector<Subdomain>& subdomains() const { return subs_; }
  int index_of(int ix, int iy) const { return iy * nx_ + ix; }

  double x_edge(int i) const { return x_edges_[static_cast<size_t>(i)]; }
  double y_edge(int j) const { return y_edges_[static_cast<size_t>(j)]; }

  /// Owning subdomain of a point. Points exactly on an internal face belong
  /// to the lower-index neighbor; points outside are clamped.
  int locate(const Vec2& x) const;

 private:
  Partition(Domain domain) : domain_(domain) {}

  Domain domain_;
  int nx_ = 0, ny_ = 0;
  std::vector<Subdomain> subs_;
  std::vector<double> x_edges_, y_edges_;
};

enum class PouKind { kIndicator, kSmooth };

/// Per-axis partition-of-unity weight in local coordinates.
/// Indicator: 1 on [-1,1]. Smooth: sine blend across |x| in [3/4, 5/4].
double pou_weight_1d(PouKind kind, double x_local);

/// Product over axes.
double pou_weight(PouKind kind, const Vec2& x_local);

struct Pou1d {
  double value = 0, d1 = 0, d2 = 0;  // derivatives w.r.t. the local coordinate
};
Pou1d pou_weight_1d_derivs(PouKind kind, double x_local);

/// A collocation point shared by two subdomains across one of their faces.
/// axis is the face normal (0 = vertical face, 1 = horizontal face).
struct InterfacePoint {
  Vec2 x;
  int sub_a = -1;
  int sub_b = -1;
  int axis = 0;
};

struct CollocationSet {
  std::vector<std::vector<Vec2>> interior;  // per subdomain
  std::vector<std::vector<Vec2>> boundary;  // per subdomain, points on the domain boundary
  std::vector<InterfacePoint> interfaces;   // one entry per face point per adjacent pair

  long total_interior() const;
  long total_boundary() const;
};

/// Tensor grid of qx-by-qy points per subdomain including the subdomain
/// frame. Frame points on the domain boundary are tagged boundary (that role
/// wins where a face meets the boundary); frame points on shared faces are
/// recorded once per face as interface points. points_per_interface_edge = 0
/// matches the grid density (qy points on vertical faces, qx on horizontal).
CollocationSet sample_collocation(const Partition& partition, int qx, int qy,
                                  int points_per_interface_edge = 0);

}  // namespace afcm
