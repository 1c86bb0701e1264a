#include "samkit/sam_fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace samkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConditionLimit = 1e12;
constexpr int kMaxRefineIterations = 200;

struct Basis {
  double b1;
  double b2;
};

Basis lateral_basis(double t, double d) {
  if (t <= d) {
    const double s = std::sin(kPi * t / (2.0 * d));
    return Basis{s / kPi, t - (2.0 * d / kPi) * s};
  }
  return Basis{1.0 / kPi, t - 2.0 * d / kPi};
}

struct BestD {
  double d = 0.0;
  double sse = std::numeric_limits<double>::infinity();

  // Strict improvement only, so earlier (smaller) d wins ties.
  void offer(double cand_d, double cand_sse) {
    if (cand_sse < sse) {
      d = cand_d;
      sse = cand_sse;
    }
  }
};

double fit_dvx(const Trajectory& traj, double vx0, double d) {
  long double stb = 0.0L;
  long double sbb = 0.0L;
  for (const auto& s : traj.samples) {
    const long double b = s.t / d;
    stb += b * (s.vx - vx0);
    sbb += b * b;
  }
  if (sbb == 0.0L) {
    return 0.0;
  }
  return static_cast<double>(stb / sbb);
}

double longitudinal_position_sse(const Trajectory& traj, double vx0, double dvx, double d) {
  long double sse = 0.0L;
  for (const auto& s : traj.samples) {
    const long double model = vx0 * s.t + dvx * s.t * s.t / (2.0 * d);
    const long double r = s.x - model;
    sse += r * r;
  }
  return static_cast<double>(sse);
}

FitResult finish_fit(const Trajectory& traj, double vx0, double d, bool converged) {
  const LateralFit lat = fit_lateral_given_d(traj, d);
  // The fit grid may touch the duration floor exactly; SamParams wants a
  // strictly larger value.
  double d_out = d;
  if (d_out <= kMinManeuverDuration) {
    d_out = std::nextafter(kMinManeuverDuration, std::numeric_limits<double>::infinity());
  }
  const double dvx = fit_dvx(traj, vx0, d_out);
  FitResult result;
  result.params = SamParams::make(lat.w, d_out, lat.v0, dvx, vx0);
  result.lateral_sse = lat.sse;
  result.longitudinal_sse = longitudinal_position_sse(traj, vx0, dvx, d_out);
  result.n_points = static_cast<int>(traj.samples.size());
  result.converged = converged;
  return result;
}

}  // namespace

void FitConfig::validate() const {
  if (!(d_min > 0.0) || !(d_min <= d_max)) {
    throw std::invalid_argument("FitConfig requires 0 < d_min <= d_max");
  }
  if (!(d_tolerance > 0.0)) {
    throw std::invalid_argument("FitConfig requires d_tolerance > 0");
  }
  if (grid_steps < 1) {
    throw std::invalid_argument("FitConfig requires grid_steps >= 1");
  }
}

LateralFit fit_lateral_given_d(const Trajectory& traj, double d) {
  if (traj.samples.size() < 4) {
    throw std::invalid_argument("fit_lateral_given_d requires at least 4 samples");
  }
  if (!(d > 0.0)) {
    throw std::invalid_argument("fit_lateral_given_d requires d > 0");
  }

  long double s11 = 0.0L, s12 = 0.0L, s22 = 0.0L, r1 = 0.0L, r2 = 0.0L;
  for (const auto& s : traj.samples) {
    const Basis b = lateral_basis(s.t, d);
    s11 += static_cast<long double>(b.b1) * b.b1;
    s12 += static_cast<long double>(b.b1) * b.b2;
    s22 += static_cast<long double>(b.b2) * b.b2;
    r1 += static_cast<long double>(b.b1) * s.y;
    r2 += static_cast<long double>(b.b2) * s.y;
  }

  // Singular values of the design matrix from the 2x2 normal matrix spectrum.
  const long double trace = s11 + s22;
  const long double gap = std::sqrt((s11 - s22) * (s11 - s22) + 4.0L * s12 * s12);
  const long double lam_max = 0.5L * (trace + gap);
  const long double lam_min = 0.5L * (trace - gap);
  if (!(lam_min > 0.0L) || std::sqrt(lam_max / lam_min) > kConditionLimit) {
    throw RankDeficient("lateral design matrix is rank deficient for d = " + std::to_string(d));
  }

  const long double det = s11 * s22 - s12 * s12;
  const long double w = (r1 * s22 - r2 * s12) / det;
  const long double v0 = (r2 * s11 - r1 * s12) / det;

  long double sse = 0.0L;
  for (const auto& s : traj.samples) {
    const Basis b = lateral_basis(s.t, d);
    const long double r = s.y - w * b.b1 - v0 * b.b2;
    sse += r * r;
  }

  return LateralFit{static_cast<double>(w), static_cast<double>(v0),
                    static_cast<double>(sse)};
}

FitResult fit_sam(const Trajectory& traj, double vx0, const FitConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(vx0)) {
    throw std::invalid_argument("fit_sam requires finite vx0");
  }
  if (traj.duration() < 1.0) {
    throw std::invalid_argument("fit_sam requires a trajectory spanning at least 1 s");
  }

  auto sse_at = [&](double d) { return fit_lateral_given_d(traj, d).sse; };

  BestD best;
  const int nodes = std::max(cfg.grid_steps, 1);
  std::vector<double> grid(nodes);
  for (int i = 0; i < nodes; ++i) {
    grid[i] = nodes == 1 ? cfg.d_min
                         : cfg.d_min + (cfg.d_max - cfg.d_min) * i / (nodes - 1);
  }
  int best_idx = 0;
  for (int i = 0; i < nodes; ++i) {
    const double sse = sse_at(grid[i]);
    if (sse < best.sse) {
      best_idx = i;
    }
    best.offer(grid[i], sse);
  }

  double lo = grid[std::max(best_idx - 1, 0)];
  double hi = grid[std::min(best_idx + 1, nodes - 1)];
  bool converged = true;

  if (hi - lo > cfg.d_tolerance) {
    // Golden-section on [lo, hi].
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = sse_at(x1);
    double f2 = sse_at(x2);
    best.offer(x1, f1);
    best.offer(x2, f2);
    int iter = 0;
    while (hi - lo > cfg.d_tolerance) {
      if (++iter > kMaxRefineIterations) {
        converged = false;
        break;
      }
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = sse_at(x1);
        best.offer(x1, f1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = sse_at(x2);
        best.offer(x2, f2);
      }
    }

    // One parabolic polish through (lo, best, hi) sharpens the minimum well
    // below the bracket width when the objective is locally quadratic.
    const double xm = best.d;
    if (xm > lo && xm < hi) {
      const double fl = sse_at(lo);
      const double fm = best.sse;
      const double fh = sse_at(hi);
      const double num = (xm - lo) * (xm - lo) * (fm - fh) - (xm - hi) * (xm - hi) * (fm - fl);
      const double den = (xm - lo) * (fm - fh) - (xm - hi) * (fm - fl);
      if (den != 0.0) {
        const double cand = xm - 0.5 * num / den;
        if (std::isfinite(cand) && cand > lo && cand < hi) {
          best.offer(cand, sse_at(cand));
        }
      }
    }
  }

  return finish_fit(traj, vx0, best.d, converged);
}

FitResult fit_oracle(const Trajectory& traj, double vx0, const FitConfig& cfg) {
  cfg.validate();
  if (traj.duration() < 1.0) {
    throw std::invalid_argument("fit_oracle requires a trajectory spanning at least 1 s");
  }
  BestD best;
  const auto nodes = static_cast<long long>(std::floor((cfg.d_max - cfg.d_min) / cfg.d_tolerance + 1e-9));
  for (long long i = 0; i <= nodes; ++i) {
    const double d = std::min(cfg.d_min + static_cast<double>(i) * cfg.d_tolerance, cfg.d_max);
    best.offer(d, fit_lateral_given_d(traj, d).sse);
  }
  return finish_fit(traj, vx0, best.d, true);
}

}  // namespace samkit
