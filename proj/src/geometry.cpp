#include "afcm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace afcm {

Domain::Domain(const Vec2& lower, const Vec2& upper) : lo(lower), hi(upper) {
  if (!(lo[0] < hi[0]) || !(lo[1] < hi[1])) {
    throw std::invalid_argument("Domain: lower corner must be strictly below upper corner");
  }
}

namespace {

std::vector<double> uniform_edges(double lo, double hi, int n) {
  std::vector<double> edges(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    if (i == 0) {
      edges[static_cast<size_t>(i)] = lo;
    } else if (i == n) {
      edges[static_cast<size_t>(i)] = hi;
    } else {
      edges[static_cast<size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / n);
    }
  }
  return edges;
}

int locate_1d(const std::vector<double>& edges, double x) {
  const int cells = static_cast<int>(edges.size()) - 1;
  // Lower-index tie-break: a point equal to an internal edge belongs to the
  // cell on its low side.
  int i = 0;
  while (i + 1 < cells && x > edges[static_cast<size_t>(i) + 1]) ++i;
  return i;
}

/// Evenly spaced points on [lo, hi] with exact endpoints.
double lerp_grid(double lo, double hi, int k, int count) {
  if (k == 0) return lo;
  if (k == count - 1) return hi;
  return lo + (hi - lo) * (static_cast<double>(k) / (count - 1));
}

}  // namespace

Partition Partition::uniform(const Domain& domain, int nx, int ny) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("Partition: subdomain counts must be at least 1");
  }
  Partition p(domain);
  p.nx_ = nx;
  p.ny_ = ny;
  p.x_edges_ = uniform_edges(domain.lo[0], domain.hi[0], nx);
  p.y_edges_ = uniform_edges(domain.lo[1], domain.hi[1], ny);
  p.subs_.reserve(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double x0 = p.x_edges_[static_cast<size_t>(ix)];
      const double x1 = p.x_edges_[static_cast<size_t>(ix) + 1];
      const double y0 = p.y_edges_[static_cast<size_t>(iy)];
      const double y1 = p.y_edges_[static_cast<size_t>(iy) + 1];
      Subdomain s;
      s.center = Vec2(0.5 * (x0 + x1), 0.5 * (y0 + y1));
      s.radius = Vec2(0.5 * (x1 - x0), 0.5 * (y1 - y0));
      s.ix = ix;
      s.iy = iy;
      p.subs_.push_back(s);
    }
  }
  return p;
}

int Partition::locate(const Vec2& x) const {
  const int ix = locate_1d(x_edges_, x[0]);
  const int iy = locate_1d(y_edges_, x[1]);
  return index_of(ix, iy);
}

double pou_weight_1d(PouKind kind, double x) {
  if (kind == PouKind::kIndicator) {
    return (x >= -1.0 && x <= 1.0) ? 1.0 : 0.0;
  }
  const double ax = std::abs(x);
  if (ax <= 0.75) return 1.0;
  if (ax >= 1.25) return 0.0;
  // Sine blend: (1 + sin(2*pi*x))/2 on [-5/4,-3/4], (1 - sin(2*pi*x))/2 on [3/4,5/4].
  const double s = std::sin(2.0 * std::numbers::pi * x);
  return x < 0.0 ? 0.5 * (1.0 + s) : 0.5 * (1.0 - s);
}

double pou_weight(PouKind kind, const Vec2& x_local) {
  return pou_weight_1d(kind, x_local[0]) * pou_weight_1d(kind, x_local[1]);
}

Pou1d pou_weight_1d_derivs(PouKind kind, double x) {
  Pou1d out;
  if (kind == PouKind::kIndicator) {
    out.value = pou_weight_1d(kind, x);
    return out;
  }
  const double ax = std::abs(x);
  if (ax <= 0.75) {
    out.value = 1.0;
    return out;
  }
  if (ax >= 1.25) return out;
  const double w = 2.0 * std::numbers::pi;
  const double s = std::sin(w * x);
  const double c = std::cos(w * x);
  const double sign = x < 0.0 ? 1.0 : -1.0;
  out.value = 0.5 * (1.0 + sign * s);
  out.d1 = 0.5 * sign * w * c;
  out.d2 = -0.5 * sign * w * w * s;
  return out;
}

long CollocationSet::total_interior() const {
  long n = 0;
  for (const auto& v : interior) n += static_cast<long>(v.size());
  return n;
}

long CollocationSet::total_boundary() const {
  long n = 0;
  for (const auto& v : boundary) n += static_cast<long>(v.size());
  return n;
}

CollocationSet sample_collocation(const Partition& partition, int qx, int qy,
                                  int points_per_interface_edge) {
  if (qx < 2 || qy < 2) {
    throw std::invalid_argument("sample_collocation: need at least 2 points per axis");
  }
  const int nx = partition.nx();
  const int ny = partition.ny();
  CollocationSet out;
  out.interior.resize(static_cast<size_t>(partition.size()));
  out.boundary.resize(static_cast<size_t>(partition.size()));

  for (int n = 0; n < partition.size(); ++n) {
    const Subdomain& s = partition.sub(n);
    const double x0 = s.center[0] - s.radius[0];
    const double x1 = s.center[0] + s.radius[0];
    const double y0 = s.center[1] - s.radius[1];
    const double y1 = s.center[1] + s.radius[1];
    for (int ky = 0; ky < qy; ++ky) {
      for (int kx = 0; kx < qx; ++kx) {
        const Vec2 p(lerp_grid(x0, x1, kx, qx), lerp_grid(y0, y1, ky, qy));
        const bool on_frame = kx == 0 || kx == qx - 1 || ky == 0 || ky == qy - 1;
        if (!on_frame) {
          out.interior[static_cast<size_t>(n)].push_back(p);
          continue;
        }
        const bool on_domain_boundary = (s.ix == 0 && kx == 0) || (s.ix == nx - 1 && kx == qx - 1) ||
                                        (s.iy == 0 && ky == 0) || (s.iy == ny - 1 && ky == qy - 1);
        if (on_domain_boundary) {
          out.boundary[static_cast<size_t>(n)].push_back(p);
        }
        // Frame points on shared faces are emitted once per face, below.
      }
    }
  }

  // Vertical faces between horizontally adjacent subdomains (normal axis 0).
  const int nv = points_per_interface_edge > 0 ? points_per_interface_edge : qy;
  const int nh = points_per_interface_edge > 0 ? points_per_interface_edge : qx;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const double xf = partition.x_edge(ix + 1);
      const double y0 = partition.y_edge(iy);
      const double y1 = partition.y_edge(iy + 1);
      for (int k = 0; k < nv; ++k) {
        const Vec2 p(xf, lerp_grid(y0, y1, k, nv));
        const bool on_domain_boundary = (iy == 0 && k == 0) || (iy == ny - 1 && k == nv - 1);
        if (on_domain_boundary) continue;  // boundary role wins
        out.interfaces.push_back(
            {p, partition.index_of(ix, iy), partition.index_of(ix + 1, iy), 0});
      }
    }
  }
  // Horizontal faces between vertically adjacent subdomains (normal axis 1).
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double yf = partition.y_edge(iy + 1);
      const double x0 = partition.x_edge(ix);
      const double x1 = partition.x_edge(ix + 1);
      for (int k = 0; k < nh; ++k) {
        const Vec2 p(lerp_grid(x0, x1, k, nh), yf);
        const bool on_domain_boundary = (ix == 0 && k == 0) || (ix == nx - 1 && k == nh - 1);
        if (on_domain_boundary) continue;
        out.interfaces.push_back(
            {p, partition.index_of(ix, iy), partition.index_of(ix, iy + 1), 1});
      }
    }
  }
  return out;
}

}  // namespace afcm
