#include "afcm/problems.hpp"

#include <cmath>

namespace afcm {

namespace {

/// Gaussian peak exp(-a * |x - p|^2) and its negative Laplacian source.
StationaryExperiment make_poisson_peaks(const std::vector<Vec2>& peaks, double a) {
  auto exact = [peaks, a](const Vec2& x) {
    double v = 0;
    for (const Vec2& p : peaks) v += std::exp(-a * (x - p).squaredNorm());
    return v;
  };
  auto source = [peaks, a](const Vec2& x, int) {
    // -lap of each peak: (4a - 4a^2 r^2) * exp(-a r^2)
    double v = 0;
    for (const Vec2& p : peaks) {
      const double r2 = (x - p).squaredNorm();
      v += (4.0 * a - 4.0 * a * a * r2) * std::exp(-a * r2);
    }
    return v;
  };

  StationaryExperiment e;
  Operator2D op;
  op.axx = [](const Vec2&) { return -1.0; };
  op.ayy = [](const Vec2&) { return -1.0; };
  e.problem.op = {op};
  e.problem.d_phi = 1;
  e.problem.source = source;
  e.problem.dirichlet = [exact](const Vec2& x, int) { return exact(x); };
  e.exact = exact;
  return e;
}

/// Ridge exp(-a u^2) with u = x - y/20; lap = (401/400) (4 a^2 u^2 - 2a) exp(-a u^2).
StationaryExperiment make_poisson_line(double a) {
  auto exact = [a](const Vec2& x) {
    const double u = x[0] - x[1] / 20.0;
    return std::exp(-a * u * u);
  };
  auto source = [a](const Vec2& x, int) {
    const double u = x[0] - x[1] / 20.0;
    return -(401.0 / 400.0) * (4.0 * a * a * u * u - 2.0 * a) * std::exp(-a * u * u);
  };

  StationaryExperiment e;
  Operator2D op;
  op.axx = [](const Vec2&) { return -1.0; };
  op.ayy = [](const Vec2&) { return -1.0; };
  e.problem.op = {op};
  e.problem.d_phi = 1;
  e.problem.source = source;
  e.problem.dirichlet = [exact](const Vec2& x, int) { return exact(x); };
  e.exact = exact;
  return e;
}

/// Viscous Burgers traveling front on the space-time square, time on axis 1.
/// phi = 1 / (1 + exp((x - t)/(2 eps))); f reduces to phi (1 - phi) / (4 eps).
PicardExperiment make_burgers(double eps) {
  auto exact = [eps](const Vec2& xt) {
    return 1.0 / (1.0 + std::exp((xt[0] - xt[1]) / (2.0 * eps)));
  };

  PicardExperiment e;
  Operator2D op;
  op.axx = [eps](const Vec2&) { return -eps; };  // -eps phi_xx
  op.by = [](const Vec2&) { return 1.0; };       // phi_t
  e.base.op = {op};
  e.base.d_phi = 1;
  e.base.source = [exact, eps](const Vec2& xt, int) {
    const double p = exact(xt);
    return p * (1.0 - p) / (4.0 * eps);
  };
  e.base.dirichlet = [exact](const Vec2& xt, int) { return exact(xt); };
  // Dirichlet data on the side edges and the initial line, but not on the
  // final-time edge.
  e.base.dirichlet_mask = [](const Vec2& xt) {
    return xt[0] <= 0.0 || xt[0] >= 1.0 || xt[1] <= 0.0;
  };
  e.base.initial = [exact](const Vec2& xt, int) { return exact(Vec2(xt[0], 0.0)); };
  e.advection = [](const Solution* prev, const Vec2& xt) {
    return prev ? prev->value(xt) : 0.0;
  };
  e.exact = exact;
  return e;
}

/// Traveling peak exp(-a(|x - v t|^2)) with drift v = (1/10, 1/10).
HeatExperiment make_heat_peak(double alpha) {
  const double a = 1000.0;
  const double v = 0.1;
  auto exact = [a, v](const Vec2& x, double t) {
    const Vec2 c(v * t, v * t);
    return std::exp(-a * (x - c).squaredNorm());
  };
  auto lap = [a, v](const Vec2& x, double t) {
    const Vec2 c(v * t, v * t);
    const double r2 = (x - c).squaredNorm();
    return (4.0 * a * a * r2 - 4.0 * a) * std::exp(-a * r2);
  };
  auto dt = [a, v](const Vec2& x, double t) {
    const Vec2 c(v * t, v * t);
    const double r2 = (x - c).squaredNorm();
    return 2.0 * a * v * ((x[0] - c[0]) + (x[1] - c[1])) * std::exp(-a * r2);
  };

  HeatExperiment e;
  e.heat.source = [dt, lap, alpha](const Vec2& x, double t) { return dt(x, t) - alpha * lap(x, t); };
  e.heat.dirichlet = [exact](const Vec2& x, double t) { return exact(x, t); };
  e.heat.initial = [exact](const Vec2& x) { return exact(x, 0.0); };
  e.heat.initial_laplacian = [lap](const Vec2& x) { return lap(x, 0.0); };
  e.exact = exact;
  return e;
}

std::vector<RegisteredProblem> build_registry() {
  std::vector<RegisteredProblem> reg;

  {
    RegisteredProblem p;
    p.name = "poisson_one_peak";
    p.description = "Poisson on (-1,1)^2, sharp Gaussian peak at the origin";
    p.kind = RegisteredProblem::Kind::kStationary;
    p.default_monitor_samples = 1260000;
    p.make_stationary = [] { return make_poisson_peaks({Vec2(0, 0)}, 1000.0); };
    reg.push_back(p);
  }
  {
    RegisteredProblem p;
    p.name = "poisson_two_peaks";
    p.description = "Poisson on (-1,1)^2, Gaussian peaks at (0, +-2/3)";
    p.kind = RegisteredProblem::Kind::kStationary;
    p.default_monitor_samples = 1260000;
    p.make_stationary = [] {
      return make_poisson_peaks({Vec2(0, 2.0 / 3.0), Vec2(0, -2.0 / 3.0)}, 1000.0);
    };
    reg.push_back(p);
  }
  {
    RegisteredProblem p;
    p.name = "poisson_line";
    p.description = "Poisson on (-1,1)^2, near-singular ridge along x = y/20";
    p.kind = RegisteredProblem::Kind::kStationary;
    p.default_monitor_samples = 180000;
    p.make_stationary = [] { return make_poisson_line(1000.0); };
    reg.push_back(p);
  }
  {
    RegisteredProblem p;
    p.name = "poisson_line_sharp";
    p.description = "Poisson on (-1,1)^2, sharper ridge along x = y/20, 9x1 subdomains";
    p.kind = RegisteredProblem::Kind::kStationary;
    p.default_nx = 9;
    p.default_ny = 1;
    p.default_monitor_samples = 180000;
    p.make_stationary = [] { return make_poisson_line(7000.0); };
    reg.push_back(p);
  }
  {
    RegisteredProblem p;
    p.name = "burgers";
    p.description = "Viscous Burgers front (eps = 0.006) on the space-time square, Picard-linearized";
    p.kind = RegisteredProblem::Kind::kPicard;
    p.domain_lo = Vec2(0, 0);
    p.domain_hi = Vec2(1, 1);
    p.default_monitor_samples = 90000;
    p.make_picard = [] { return make_burgers(0.006); };
    reg.push_back(p);
  }
  {
    RegisteredProblem p;
    p.name = "heat_peak";
    p.description = "Heat equation on (-1,1)^2, traveling Gaussian peak, Crank-Nicolson march";
    p.kind = RegisteredProblem::Kind::kTimeMarch;
    p.default_monitor_samples = 1260000;
    p.make_heat = [](double alpha) { return make_heat_peak(alpha); };
    reg.push_back(p);
  }
  return reg;
}

}  // namespace

const std::vector<RegisteredProblem>& problem_registry() {
  static const std::vector<RegisteredProblem> reg = build_registry();
  return reg;
}

const RegisteredProblem* find_problem(const std::string& name) {
  for (const auto& p : problem_registry()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace afcm
