// Copyright 2026 The locnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locnav/amcl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <tuple>

#include "locnav/error.hpp"

namespace locnav {

double Belief::weight_sum() const {
  double s = 0.0;
  for (const auto& p : particles) s += p.weight;
  return s;
}

void AmclConfig::validate() const {
  if (min_particles <= 0 || min_particles > max_particles) {
    throw ConfigError("need 0 < min_particles <= max_particles");
  }
  if (!(kld_err > 0.0)) throw ConfigError("kld_err must be > 0");
  if (bin_sizes[0] <= 0 || bin_sizes[1] <= 0 || bin_sizes[2] <= 0) throw ConfigError("bin sizes must be > 0");
  if (resample_interval < 1) throw ConfigError("resample_interval must be >= 1");
  if (!(transform_tolerance >= 0.0)) throw ConfigError("transform_tolerance must be >= 0");
  if (!motion_noise.valid()) throw ConfigError("odom_alpha* must be >= 0");
  for (double c : initial_cov) {
    if (c < 0.0) throw ConfigError("initial covariance must be >= 0");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (recovery.lost_patience < 1 || recovery.search_patience < 1 || recovery.search_timeout < 1 ||
      recovery.accept_patience < 1) {
    throw ConfigError("recovery patience values must be >= 1");
  }
  if (!(recovery.keep_fraction >= 0.0 && recovery.keep_fraction < 1.0)) {
    throw ConfigError("keep_fraction must be in [0, 1)");
  }
  if (!(recovery.inlier_distance > 0.0)) throw ConfigError("inlier_distance must be > 0");
  if (!(recovery.lost_inliers >= 0.0 && recovery.lost_inliers <= recovery.accept_inliers &&
        recovery.accept_inliers <= 1.0)) {
    throw ConfigError("need 0 <= lost_inliers <= accept_inliers <= 1");
  }
  if (recovery.candidates_per_particle < 1) throw ConfigError("candidates_per_particle must be >= 1");
  sensor.validate();
}

double PoseEstimate::position_spread() const {
  const double a = covariance(0, 0);
  const double b = covariance(0, 1);
  const double d = covariance(1, 1);
  const double mid = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return std::sqrt(std::max(0.0, mid + rad));
}

Belief init_from_pose(const AmclConfig& cfg, const Pose2D& pose, const std::array<double, 3>& covariance,
                      StreamRng& rng) {
  const std::size_t m = static_cast<std::size_t>(cfg.max_particles);
  const double sx = std::sqrt(std::max(0.0, covariance[0]));
  const double sy = std::sqrt(std::max(0.0, covariance[1]));
  const double sa = std::sqrt(std::max(0.0, covariance[2]));
  Belief b;
  b.particles.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double nx = rng.gaussian();
    const double ny = rng.gaussian();
    const double na = rng.gaussian();
    b.particles.push_back({Pose2D(pose.x() + sx * nx, pose.y() + sy * ny, pose.theta() + sa * na), 1.0 / m});
  }
  b.normalized = true;
  return b;
}

Belief init_global(const AmclConfig& cfg, const OccupancyGrid& grid, StreamRng& rng) {
  const std::vector<CellIndex> free = grid.free_cells();
  if (free.empty()) throw MapError("map has no free cell for global initialization");
  const std::size_t m = static_cast<std::size_t>(cfg.max_particles);
  const double res = grid.resolution();
  Belief b;
  b.particles.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto pick = std::min(free.size() - 1, static_cast<std::size_t>(rng.uniform() * free.size()));
    const CellIndex c = free[pick];
    const double mx = (c.col + rng.uniform()) * res;
    const double my = (c.row + rng.uniform()) * res;
    double wx = 0.0;
    double wy = 0.0;
    grid.geometry().map_to_world(mx, my, wx, wy);
    const double heading = std::numbers::pi - 2.0 * std::numbers::pi * rng.uniform();  // (-pi, pi]
    b.particles.push_back({Pose2D(wx, wy, heading), 1.0 / m});
  }
  b.normalized = true;
  return b;
}

Belief init_global_from_scan(const AmclConfig& cfg, const OccupancyGrid& grid, const DistanceField& field,
                             const LaserScan& z, StreamRng& rng) {
  AmclConfig wide = cfg;
  const int factor = std::max(1, cfg.recovery.candidates_per_particle);
  wide.max_particles = cfg.max_particles * factor;
  Belief candidates = init_global(wide, grid, rng);
  if (factor == 1) return candidates;

  auto scan_score = [&](const Pose2D& pose) {
    const Pose2D sensor = pose.compose(cfg.laser_offset);
    return cfg.sensor.model_type == LaserModelType::kLikelihoodField
               ? likelihood_field_log_weight(z, sensor, field, cfg.sensor).log_weight
               : beam_model_log_weight(z, sensor, grid, cfg.sensor).log_weight;
  };
  std::vector<double> score(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) score[i] = scan_score(candidates.particles[i].pose);
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto keep = static_cast<std::size_t>(cfg.max_particles);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] > score[b] || (score[a] == score[b] && a < b); });
  // Local refinement of the survivors: a few rounds of shrinking random
  // perturbations, each kept only if it scores better.
  constexpr double kStepXy[] = {0.4, 0.2, 0.1, 0.05};
  constexpr double kStepTheta[] = {0.2, 0.1, 0.05, 0.025};
  Belief b;
  b.particles.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    Pose2D best = candidates.particles[order[k]].pose;
    double best_score = score[order[k]];
    for (std::size_t round = 0; round < std::size(kStepXy); ++round) {
      for (int trial = 0; trial < 2; ++trial) {
        const double dx = kStepXy[round] * rng.gaussian();
        const double dy = kStepXy[round] * rng.gaussian();
        const double da = kStepTheta[round] * rng.gaussian();
        const Pose2D cand(best.x() + dx, best.y() + dy, best.theta() + da);
        const double s = scan_score(cand);
        if (s > best_score) {
          best = cand;
          best_score = s;
        }
      }
    }
    b.particles.push_back({best, 1.0 / static_cast<double>(keep)});
  }
  b.normalized = true;
  return b;
}

std::size_t kld_sample_size(std::size_t k, const AmclConfig& cfg) {
  const auto lo = static_cast<std::size_t>(cfg.min_particles);
  const auto hi = static_cast<std::size_t>(cfg.max_particles);
  if (k <= 1) return lo;
  const double km1 = static_cast<double>(k - 1);
  const double a = 2.0 / (9.0 * km1);
  const double b = 1.0 - a + std::sqrt(a) * cfg.kld_z;
  const double n = std::ceil(km1 / (2.0 * cfg.kld_err) * b * b * b);
  if (!(n < static_cast<double>(hi))) return hi;
  return std::clamp(static_cast<std::size_t>(n), lo, hi);
}

std::size_t count_occupied_bins(std::span<const Particle> particles, const std::array<double, 3>& bin_sizes) {
  std::vector<std::tuple<long, long, long>> keys;
  keys.reserve(particles.size());
  for (const auto& p : particles) {
    keys.emplace_back(static_cast<long>(std::floor(p.pose.x() / bin_sizes[0])),
                      static_cast<long>(std::floor(p.pose.y() / bin_sizes[1])),
                      static_cast<long>(std::floor(p.pose.theta() / bin_sizes[2])));
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::vector<std::size_t> systematic_select(std::span<const double> weights, std::size_t n, double u0) {
  std::vector<std::size_t> out;
  if (weights.empty() || n == 0) return out;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  out.reserve(n);
  // Rounding in the running sum must never land a pick on a trailing zero weight.
  std::size_t last = weights.size() - 1;
  while (last > 0 && !(weights[last] > 0.0)) --last;
  // Work in units of n so that equal weights map to integer boundaries.
  const double scale = static_cast<double>(n) / total;
  std::size_t i = 0;
  double c = weights[0] * scale;
  for (std::size_t m = 0; m < n; ++m) {
    const double u = u0 + static_cast<double>(m);
    while (u >= c && i < last) {
      ++i;
      c += weights[i] * scale;
    }
    out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> multinomial_select(std::span<const double> weights, std::size_t n, StreamRng& rng) {
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  std::vector<std::size_t> out;
  if (cdf.empty() || n == 0) return out;
  out.reserve(n);
  const double total = cdf.back();
  for (std::size_t m = 0; m < n; ++m) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), weights.size() - 1));
  }
  return out;
}

Belief resample(const Belief& belief, const AmclConfig& cfg, const StepContext& ctx, std::size_t* occupied_bins) {
  std::vector<double> w(belief.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = belief.particles[i].weight;
  StreamRng rng(ctx.seed, StreamDomain::kResample, 0, ctx.step_index);
  const double u0 = rng.uniform();

  // Size the output from the spread of a full-size draw.
  const auto probe = systematic_select(w, static_cast<std::size_t>(cfg.max_particles), u0);
  std::vector<Particle> drawn;
  drawn.reserve(probe.size());
  for (std::size_t i : probe) drawn.push_back(belief.particles[i]);
  const std::size_t k = count_occupied_bins(drawn, cfg.bin_sizes);
  if (occupied_bins) *occupied_bins = k;
  const std::size_t n = kld_sample_size(k, cfg);

  const auto picks =
      cfg.resampler == ResamplerType::kSystematic ? systematic_select(w, n, u0) : multinomial_select(w, n, rng);
  Belief out;
  out.particles.reserve(n);
  for (std::size_t i : picks) out.particles.push_back({belief.particles[i].pose, 1.0 / static_cast<double>(n)});
  out.normalized = true;
  return out;
}

namespace {

struct ParticleUpdate {
  Pose2D pose;
  double log_weight = 0.0;
  double fit = 0.0;
  std::size_t beams = 0;
};

template <class Fn>
void parallel_ranges(std::size_t count, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(workers), 1, std::max<std::size_t>(count, 1));
  if (w == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(w - 1);
  const std::size_t chunk = (count + w - 1) / w;
  for (std::size_t t = 1; t < w; ++t) {
    const std::size_t lo = std::min(count, t * chunk);
    const std::size_t hi = std::min(count, lo + chunk);
    threads.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  fn(std::size_t{0}, std::min(count, chunk));
}

}  // namespace

StepResult step(const Belief& belief, const OdometryReading& u, const LaserScan& z, const DistanceField& field,
                const OccupancyGrid& grid, const AmclConfig& cfg, const StepContext& ctx) {
  if (ctx.clock - z.stamp > cfg.transform_tolerance) {
    throw StaleScanError("scan stamped " + std::to_string(z.stamp) + " is older than transform_tolerance at t=" +
                         std::to_string(ctx.clock));
  }
  const std::size_t m = belief.size();
  const double prior_total = belief.normalized ? 1.0 : belief.weight_sum();
  std::vector<ParticleUpdate> upd(m);

  parallel_ranges(m, cfg.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      StreamRng rng(ctx.seed, StreamDomain::kMotion, i, ctx.step_index);
      const Pose2D moved = sample_motion(u, cfg.motion_noise, belief.particles[i].pose, rng);
      const Pose2D sensor = moved.compose(cfg.laser_offset);
      const ScanLikelihood ll = cfg.sensor.model_type == LaserModelType::kLikelihoodField
                                    ? likelihood_field_log_weight(z, sensor, field, cfg.sensor)
                                    : beam_model_log_weight(z, sensor, grid, cfg.sensor);
      const double prior = belief.particles[i].weight / prior_total;
      upd[i].pose = moved;
      upd[i].log_weight = (prior > 0.0 ? std::log(prior) : -std::numeric_limits<double>::infinity()) + ll.log_weight;
      upd[i].fit = ll.beams_used > 0 ? ll.log_weight / static_cast<double>(ll.beams_used) : 0.0;
      upd[i].beams = ll.beams_used;
    }
  });

  StepResult result;
  auto& diag = result.diagnostics;
  double max_log = -std::numeric_limits<double>::infinity();
  diag.best_fit = -std::numeric_limits<double>::infinity();
  for (const auto& p : upd) {
    if (p.log_weight > max_log) max_log = p.log_weight;
    if (p.fit > diag.best_fit) diag.best_fit = p.fit;
    diag.beams_used = std::max(diag.beams_used, p.beams);
  }
  if (m == 0) diag.best_fit = 0.0;

  Belief weighted;
  weighted.particles.resize(m);
  if (!std::isfinite(max_log)) {
    diag.all_weights_zero = m > 0;
    for (std::size_t i = 0; i < m; ++i) weighted.particles[i] = {upd[i].pose, 1.0 / static_cast<double>(m)};
  } else {
    // Recentering on the max keeps exp() in range however many beams multiply.
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double w = std::exp(upd[i].log_weight - max_log);
      weighted.particles[i] = {upd[i].pose, w};
      total += w;
    }
    for (auto& p : weighted.particles) p.weight /= total;
  }
  weighted.normalized = true;

  if (m > 0 && (ctx.step_index + 1) % static_cast<std::uint64_t>(cfg.resample_interval) == 0) {
    result.belief = resample(weighted, cfg, ctx, &diag.occupied_bins);
    diag.resampled = true;
  } else {
    diag.occupied_bins = count_occupied_bins(weighted.particles, cfg.bin_sizes);
    result.belief = std::move(weighted);
  }
  return result;
}

PoseEstimate estimate(const Belief& belief, double convergence_threshold) {
  if (belief.empty()) throw Error("cannot estimate from an empty belief");
  double total = belief.weight_sum();
  const bool uniform = !(total > 0.0);
  const double n = static_cast<double>(belief.size());
  auto weight = [&](const Particle& p) { return uniform ? 1.0 / n : p.weight / total; };

  double mx = 0.0;
  double my = 0.0;
  double s = 0.0;
  double c = 0.0;
  for (const auto& p : belief.particles) {
    const double w = weight(p);
    mx += w * p.pose.x();
    my += w * p.pose.y();
    s += w * std::sin(p.pose.theta());
    c += w * std::cos(p.pose.theta());
  }
  PoseEstimate est;
  est.mean = Pose2D(mx, my, std::atan2(s, c));
  for (const auto& p : belief.particles) {
    const double w = weight(p);
    const Eigen::Vector3d d(p.pose.x() - mx, p.pose.y() - my, angle_diff(p.pose.theta(), est.mean.theta()));
    est.covariance += w * d * d.transpose();
  }
  est.converged = est.position_spread() < convergence_threshold;
  return est;
}

}  // namespace locnav
