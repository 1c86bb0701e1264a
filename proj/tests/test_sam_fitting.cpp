#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "samkit/sam_fitting.hpp"
#include "samkit/sam_kinematics.hpp"
#include "test_util.hpp"

using namespace samkit;
using testutil::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory zero_trajectory(double span, double dt, double vx) {
  std::vector<KinematicState> samples;
  const auto n = static_cast<std::size_t>(std::llround(span / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    samples.push_back(KinematicState{t, vx * t, 0.0, vx, 0.0, 0.0});
  }
  return Trajectory::make(std::move(samples), dt);
}

Trajectory noisy_lateral(const SamParams& p, double span, double dt, Rng& rng, double sigma) {
  Trajectory traj = sample_trajectory(p, span, dt);
  for (auto& s : traj.samples) {
    s.y += rng.normal(0.0, sigma);
  }
  return traj;
}

}  // namespace

TEST_CASE("fit_lateral_given_d recovers exact parameters at the true duration") {
  const SamParams truth = SamParams::make(3.8, 4.0, 0.3, 0.0, 30.0);
  const Trajectory traj = sample_trajectory(truth, 4.0, 0.04);
  const LateralFit fit = fit_lateral_given_d(traj, 4.0);
  CHECK(std::abs(fit.w - 3.8) <= 1e-9);
  CHECK(std::abs(fit.v0 - 0.3) <= 1e-9);
  CHECK(fit.sse <= 1e-16);
}

TEST_CASE("fit_lateral_given_d: zero trajectory gives zero parameters") {
  const LateralFit fit = fit_lateral_given_d(zero_trajectory(4.0, 0.04, 30.0), 4.0);
  CHECK(fit.w == 0.0);
  CHECK(fit.v0 == 0.0);
  CHECK(fit.sse == 0.0);
}

TEST_CASE("fit_lateral_given_d: wrong duration costs more") {
  const SamParams truth = SamParams::make(3.8, 4.0, 0.3, 0.0, 30.0);
  const Trajectory traj = sample_trajectory(truth, 4.0, 0.04);
  const double sse_true = fit_lateral_given_d(traj, 4.0).sse;
  const double sse_wrong = fit_lateral_given_d(traj, 2.0).sse;
  CHECK(sse_wrong > sse_true);
  CHECK(sse_wrong > 1e-6);
}

TEST_CASE("fit_lateral_given_d: residuals are orthogonal to the basis columns") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const SamParams truth = SamParams::make(rng.sign() * rng.uniform(2.0, 5.0),
                                            rng.uniform(2.0, 6.0), rng.uniform(-1.0, 1.0),
                                            0.0, 30.0);
    Trajectory traj = noisy_lateral(truth, 4.0, 0.04, rng, 0.05);
    const double d = rng.uniform(1.0, 8.0);
    const LateralFit fit = fit_lateral_given_d(traj, d);

    // Recompute the basis exactly as the fit defines it.
    long double dot1 = 0.0L, dot2 = 0.0L, norm1 = 0.0L, norm2 = 0.0L, norm_y = 0.0L;
    for (const auto& s : traj.samples) {
      const double s_val = std::sin(kPi * std::min(s.t, d) / (2.0 * d));
      const double b1 = s.t <= d ? s_val / kPi : 1.0 / kPi;
      const double b2 = s.t <= d ? s.t - (2.0 * d / kPi) * s_val : s.t - 2.0 * d / kPi;
      const double r = s.y - fit.w * b1 - fit.v0 * b2;
      dot1 += static_cast<long double>(b1) * r;
      dot2 += static_cast<long double>(b2) * r;
      norm1 += static_cast<long double>(b1) * b1;
      norm2 += static_cast<long double>(b2) * b2;
      norm_y += static_cast<long double>(s.y) * s.y;
    }
    const double scale1 = std::sqrt(static_cast<double>(norm1 * norm_y));
    const double scale2 = std::sqrt(static_cast<double>(norm2 * norm_y));
    CHECK(std::abs(static_cast<double>(dot1)) <= 1e-9 * std::max(1.0, scale1));
    CHECK(std::abs(static_cast<double>(dot2)) <= 1e-9 * std::max(1.0, scale2));
  }
}

TEST_CASE("fit_lateral_given_d flags degenerate sampling") {
  std::vector<KinematicState> squeezed;
  for (int i = 0; i < 6; ++i) {
    squeezed.push_back(KinematicState{i * 1e-10, 0.0, 0.0, 0.0, 0.0, 0.0});
  }
  const Trajectory traj = Trajectory::make(std::move(squeezed), 1e-10);
  CHECK_THROWS_AS(fit_lateral_given_d(traj, 4.0), RankDeficient);

  const Trajectory ok = zero_trajectory(4.0, 1.0, 30.0);
  std::vector<KinematicState> three(ok.samples.begin(), ok.samples.begin() + 3);
  CHECK_THROWS_AS(fit_lateral_given_d(Trajectory::make(three, 1.0), 4.0),
                  std::invalid_argument);
}

TEST_CASE("fit_sam round-trips noiseless synthetic parameters") {
  const SamParams truth = SamParams::make(3.75, 4.2, 0.4, 1.5, 30.0);
  const Trajectory traj = sample_trajectory(truth, 4.2, 0.04);
  const FitResult fit = fit_sam(traj, 30.0, FitConfig{});
  CHECK(fit.converged);
  CHECK(rel_err(fit.params.w, truth.w) <= 1e-6);
  CHECK(rel_err(fit.params.v0, truth.v0) <= 1e-6);
  CHECK(rel_err(fit.params.dvx, truth.dvx) <= 1e-6);
  CHECK(std::abs(fit.params.d - truth.d) <= 1e-4);
  CHECK(fit.n_points == static_cast<int>(traj.samples.size()));
}

TEST_CASE("fit_sam round-trip property across random parameters") {
  Rng rng(22);
  for (int i = 0; i < 60; ++i) {
    const SamParams truth = SamParams::make(
        rng.sign() * rng.uniform(2.0, 5.0), rng.uniform(1.0, 8.0), rng.sign() * rng.uniform(0.0, 1.0),
        rng.sign() * rng.uniform(0.0, 5.0), rng.uniform(20.0, 40.0));
    const double span = std::max(truth.d, 4.0);
    const Trajectory traj = sample_trajectory(truth, span, 0.04);
    const FitResult fit = fit_sam(traj, truth.vx0, FitConfig{});
    CHECK(rel_err(fit.params.w, truth.w) <= 1e-4);
    CHECK(rel_err(fit.params.v0, truth.v0) <= 1e-4);
    CHECK(rel_err(fit.params.dvx, truth.dvx) <= 1e-4);
    CHECK(std::abs(fit.params.d - truth.d) <= 1e-4);
  }
}

TEST_CASE("fit_sam: zero lateral motion and constant speed give zero parameters") {
  const FitResult fit = fit_sam(zero_trajectory(4.0, 0.04, 30.0), 30.0, FitConfig{});
  CHECK(std::abs(fit.params.w) <= 1e-12);
  CHECK(std::abs(fit.params.v0) <= 1e-12);
  CHECK(std::abs(fit.params.dvx) <= 1e-12);
  CHECK(fit.lateral_sse <= 1e-18);
  CHECK(fit.longitudinal_sse <= 1e-12);
}

TEST_CASE("fit_sam never loses to the dense-grid oracle") {
  Rng rng(33);
  FitConfig cfg;
  cfg.d_tolerance = 1e-3;  // keeps the oracle affordable here
  for (int i = 0; i < 20; ++i) {
    const SamParams truth = SamParams::make(rng.sign() * rng.uniform(3.5, 4.0),
                                            rng.uniform(3.0, 6.0), rng.sign() * rng.uniform(0.1, 0.35),
                                            rng.sign() * rng.uniform(0.5, 2.0), rng.uniform(25.0, 35.0));
    const Trajectory traj = noisy_lateral(truth, 4.0, 0.04, rng, 0.05);
    const FitResult fast = fit_sam(traj, truth.vx0, cfg);
    const FitResult oracle = fit_oracle(traj, truth.vx0, cfg);
    CHECK(fast.lateral_sse <= oracle.lateral_sse + 1e-9);
  }
}

TEST_CASE("fit_oracle degenerate single-candidate grid equals the linear sub-fit") {
  const SamParams truth = SamParams::make(3.75, 4.0, 0.3, 1.0, 30.0);
  const Trajectory traj = sample_trajectory(truth, 4.0, 0.04);
  FitConfig cfg;
  cfg.d_min = 4.0;
  cfg.d_max = 4.0;
  const FitResult fit = fit_oracle(traj, 30.0, cfg);
  const LateralFit lateral = fit_lateral_given_d(traj, 4.0);
  CHECK(fit.params.d == 4.0);
  CHECK(fit.params.w == lateral.w);
  CHECK(fit.params.v0 == lateral.v0);
  CHECK(fit.lateral_sse == lateral.sse);

  const FitResult zero = fit_oracle(zero_trajectory(4.0, 0.04, 30.0), 30.0, FitConfig{});
  CHECK(zero.lateral_sse == 0.0);
}

TEST_CASE("refining d_tolerance never worsens the lateral objective") {
  Rng rng(44);
  for (int i = 0; i < 10; ++i) {
    const SamParams truth = SamParams::make(rng.sign() * rng.uniform(3.5, 4.0),
                                            rng.uniform(3.0, 6.0), rng.uniform(-0.3, 0.3),
                                            rng.uniform(-2.0, 2.0), 30.0);
    const Trajectory traj = noisy_lateral(truth, 4.0, 0.04, rng, 0.05);
    FitConfig coarse;
    coarse.d_tolerance = 1e-2;
    FitConfig fine = coarse;
    fine.d_tolerance = 5e-3;
    CHECK(fit_sam(traj, 30.0, fine).lateral_sse <=
          fit_sam(traj, 30.0, coarse).lateral_sse + 1e-15);
  }
}

TEST_CASE("fit_sam is bit-deterministic") {
  Rng rng(55);
  const SamParams truth = SamParams::make(-3.7, 4.4, -0.2, 0.8, 28.0);
  const Trajectory traj = noisy_lateral(truth, 4.0, 0.04, rng, 0.05);
  const FitResult a = fit_sam(traj, 28.0, FitConfig{});
  const FitResult b = fit_sam(traj, 28.0, FitConfig{});
  CHECK(std::memcmp(&a.params, &b.params, sizeof(SamParams)) == 0);
  CHECK(a.lateral_sse == b.lateral_sse);
  CHECK(a.longitudinal_sse == b.longitudinal_sse);
}

TEST_CASE("fit configuration validation") {
  FitConfig bad;
  bad.d_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = FitConfig{};
  bad.d_tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = FitConfig{};
  bad.d_min = 5.0;
  bad.d_max = 4.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const Trajectory short_traj = zero_trajectory(0.5, 0.04, 30.0);
  CHECK_THROWS_AS(fit_sam(short_traj, 30.0, FitConfig{}), std::invalid_argument);
}
