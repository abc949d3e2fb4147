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

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "locnav/ekf.hpp"
#include "locnav/motion_model.hpp"
#include "locnav/nav.hpp"
#include "locnav/sim.hpp"

namespace locnav::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

OccupancyGrid grid_with(int w, int h, double res, Pose2D origin, const std::vector<CellIndex>& cells,
                        Cell kind = Cell::kOccupied) {
  std::vector<Cell> c(static_cast<std::size_t>(w) * h, Cell::kFree);
  for (const CellIndex& i : cells) c[static_cast<std::size_t>(i.row) * w + i.col] = kind;
  return OccupancyGrid(w, h, res, origin, std::move(c));
}

std::vector<CellIndex> column(int col, int h) {
  std::vector<CellIndex> out;
  for (int r = 0; r < h; ++r) out.push_back({col, r});
  return out;
}

double sample_variance(const std::vector<double>& v, double& mean) {
  double s = 0.0;
  for (double x : v) s += x;
  mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<double> brute_force_distance(const OccupancyGrid& grid, double max_dist) {
  std::vector<CellIndex> occ;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (grid.at(c, r) == Cell::kOccupied) occ.push_back({c, r});
    }
  }
  std::vector<double> out(grid.geometry().size(), max_dist);
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      double best = max_dist;
      for (const CellIndex& o : occ) {
        best = std::min(best, grid.resolution() * std::hypot(double(c - o.col), double(r - o.row)));
      }
      out[grid.geometry().index(c, r)] = best;
    }
  }
  return out;
}

OccupancyGrid random_grid(int width, int height, double resolution, double occupied_fraction, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution occ(occupied_fraction);
  std::vector<Cell> cells(static_cast<std::size_t>(width) * height);
  for (Cell& c : cells) c = occ(gen) ? Cell::kOccupied : Cell::kFree;
  return OccupancyGrid(width, height, resolution, Pose2D{}, std::move(cells));
}

std::optional<double> dijkstra_cost(const Costmap& cm, CellIndex start, CellIndex goal) {
  const int w = cm.width();
  const int h = cm.height();
  const double res = cm.resolution();
  auto open = [&](int c, int r) { return c >= 0 && r >= 0 && c < w && r < h && cm.at(c, r) < cost::kInscribed; };
  if (!open(start.col, start.row) || !open(goal.col, goal.row)) return std::nullopt;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<bool> done(n, false);
  dist[static_cast<std::size_t>(start.row) * w + start.col] = 0.0;
  for (;;) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && std::isfinite(dist[i]) && (u == n || dist[i] < dist[u])) u = i;
    }
    if (u == n) return std::nullopt;
    const int uc = static_cast<int>(u % w);
    const int ur = static_cast<int>(u / w);
    if (uc == goal.col && ur == goal.row) return dist[u];
    done[u] = true;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dc == 0 && dr == 0) continue;
        const int vc = uc + dc;
        const int vr = ur + dr;
        if (!open(vc, vr)) continue;
        const bool diag = dc != 0 && dr != 0;
        if (diag && (!open(uc + dc, ur) || !open(uc, ur + dr))) continue;
        const double len = diag ? res * std::sqrt(2.0) : res;
        const double step = len * (1.0 + cm.at(vc, vr) / 256.0);
        const std::size_t v = static_cast<std::size_t>(vr) * w + vc;
        dist[v] = std::min(dist[v], dist[u] + step);
      }
    }
  }
}

Costmap random_costmap(int width, int height, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> graded(1, 252);
  std::uniform_int_distribution<int> wall(253, 255);
  Costmap cm(GridGeometry(width, height, 0.05, Pose2D{}), cost::kFree);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = u(gen);
      if (x < 0.2) {
        cm.set(c, r, static_cast<std::uint8_t>(wall(gen)));
      } else if (x < 0.45) {
        cm.set(c, r, static_cast<std::uint8_t>(graded(gen)));
      }
    }
  }
  return cm;
}

std::size_t kld_reference(std::size_t k, const AmclConfig& cfg) {
  using D = boost::multiprecision::cpp_dec_float_50;
  const auto lo = static_cast<std::size_t>(cfg.min_particles);
  const auto hi = static_cast<std::size_t>(cfg.max_particles);
  if (k <= 1) return lo;
  const D km1 = D(static_cast<unsigned long long>(k - 1));
  const D a = D(2) / (D(9) * km1);
  const D b = D(1) - a + boost::multiprecision::sqrt(a) * D(cfg.kld_z);
  const D n = boost::multiprecision::ceil(km1 / (D(2) * D(cfg.kld_err)) * b * b * b);
  if (n >= D(static_cast<unsigned long long>(hi))) return hi;
  const auto v = n.convert_to<unsigned long long>();
  return std::max<std::size_t>(lo, static_cast<std::size_t>(v));
}

std::vector<RayCase> crafted_rays() {
  std::vector<RayCase> rays;
  // Wall grid: 40x40 cells of 0.1 m, column 20 occupied, so the wall's near
  // face is the plane x = 2.0 and the map ends at x = y = 4.0.
  const OccupancyGrid wall = grid_with(40, 40, 0.1, {}, column(20, 40));
  const Pose2D a{0.55, 2.05, 0.0};
  rays.push_back({"wall ahead", wall, a, 0.0, 10.0, {}, 2.0 - 0.55});
  rays.push_back({"wall behind, leaves map", wall, a, kPi, 10.0, {}, 10.0});
  // At 60 degrees the ray would meet x = 2.0 at y = 2.05 + 1.45 tan 60 > 4.
  rays.push_back({"steep ray exits the top", wall, a, kPi / 3.0, 10.0, {}, 10.0});
  // At 45 degrees the wall is met exactly at the cell corner (2.0, 3.5).
  rays.push_back({"45 degrees through a corner", wall, a, kPi / 4.0, 10.0, {}, 1.45 * std::sqrt(2.0)});
  rays.push_back({"-30 degrees", wall, a, -kPi / 6.0, 10.0, {}, 1.45 / std::cos(kPi / 6.0)});
  rays.push_back({"max range short of the wall", wall, a, 0.0, 1.0, {}, 1.0});
  rays.push_back({"max range equals the hit", wall, a, 0.0, 1.45, {}, 1.45});
  rays.push_back({"heading plus bearing", wall, {0.55, 2.05, kPi / 2.0}, -kPi / 2.0, 10.0, {}, 1.45});
  rays.push_back({"translated origin", grid_with(40, 40, 0.1, {1.0, 2.0, 0.0}, column(20, 40)),
                  {1.55, 4.05, 0.0}, 0.0, 10.0, {}, 1.45});
  // Rotating the map a quarter turn maps map (x, y) to world (-y, x).
  rays.push_back({"rotated origin", grid_with(40, 40, 0.1, {0.0, 0.0, kPi / 2.0}, column(20, 40)),
                  {-2.05, 0.55, kPi / 2.0}, 0.0, 10.0, {}, 1.45});

  // Block grid: 40x40 cells of 0.1 m, one occupied cell covering
  // [1.0, 1.1] x [1.0, 1.1].
  const OccupancyGrid block = grid_with(40, 40, 0.1, {}, {{10, 10}});
  rays.push_back({"block east", block, {0.05, 1.05, 0.0}, 0.0, 10.0, {}, 0.95});
  rays.push_back({"block north", block, {1.05, 0.05, 0.0}, kPi / 2.0, 10.0, {}, 0.95});
  rays.push_back({"block west", block, {1.55, 1.05, 0.0}, kPi, 10.0, {}, 1.55 - 1.1});
  rays.push_back({"block south", block, {1.05, 1.55, 0.0}, -kPi / 2.0, 10.0, {}, 1.55 - 1.1});
  // The diagonal enters the block through its corner (1.0, 1.0).
  rays.push_back({"diagonal into the corner", block, {0.5, 0.5, 0.0}, kPi / 4.0, 10.0, {}, 0.5 * std::sqrt(2.0)});
  // y = x - 0.1 runs below the block and touches its corner (1.1, 1.0);
  // touching a corner counts as entering both cells that share it.
  rays.push_back({"diagonal grazing a corner", block, {0.5, 0.4, 0.0}, kPi / 4.0, 10.0, {}, 0.6 * std::sqrt(2.0)});
  rays.push_back({"row below the block", block, {0.05, 0.95, 0.0}, 0.0, 10.0, {}, 10.0});
  rays.push_back({"start inside", block, {1.05, 1.05, 0.0}, 0.3, 10.0, {}, 0.0});

  const OccupancyGrid unknown = grid_with(40, 40, 0.1, {}, {{10, 10}}, Cell::kUnknown);
  rays.push_back({"unknown passes", unknown, {0.05, 1.05, 0.0}, 0.0, 10.0, {false}, 10.0});
  rays.push_back({"unknown blocks", unknown, {0.05, 1.05, 0.0}, 0.0, 10.0, {true}, 0.95});

  // Fine grid: 0.05 m cells, column 5 occupied, start at the center of
  // cell (0, 3): the near face is 4.5 cells away.
  rays.push_back({"five cells ahead", grid_with(20, 20, 0.05, {}, column(5, 20)), {0.025, 0.175, 0.0}, 0.0, 30.0,
                  {}, 4.5 * 0.05});
  return rays;
}

SuiteResult motion_moments(std::size_t samples) {
  SuiteResult out;
  const MotionNoise noise{0.005, 0.005, 0.010, 0.005};
  struct Case {
    const char* name;
    Pose2D prev;
    Pose2D curr;
    double r1, t, r2;
  };
  const Case cases[] = {
      {"forward", {0, 0, 0}, {1, 0, 0}, 0.0, 1.0, 0.0},
      {"turn and drive", {0, 0, 0}, {1, 1, kPi / 2.0}, kPi / 4.0, std::sqrt(2.0), kPi / 4.0},
  };
  std::ostringstream detail;
  for (const Case& c : cases) {
    const double var[3] = {noise.alpha1 * c.r1 * c.r1 + noise.alpha2 * c.t * c.t,
                           noise.alpha3 * c.t * c.t + noise.alpha4 * (c.r1 * c.r1 + c.r2 * c.r2),
                           noise.alpha1 * c.r2 * c.r2 + noise.alpha2 * c.t * c.t};
    const double nominal[3] = {c.r1, c.t, c.r2};
    std::vector<double> comp[3];
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < samples; ++i) {
      StreamRng rng(42, StreamDomain::kTest, i, 0);
      const Pose2D p = sample_motion({c.prev, c.curr}, noise, c.prev, rng);
      // Recover the drawn rot1/trans/rot2 from the sampled pose.
      const double dx = p.x() - c.prev.x();
      const double dy = p.y() - c.prev.y();
      const double r1 = angle_diff(std::atan2(dy, dx), c.prev.theta());
      comp[0].push_back(r1);
      comp[1].push_back(std::hypot(dx, dy));
      comp[2].push_back(angle_diff(p.theta(), c.prev.theta() + r1));
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    for (int k = 0; k < 3; ++k) {
      double mean = 0.0;
      const double v = sample_variance(comp[k], mean);
      const double se_var = var[k] * std::sqrt(2.0 / static_cast<double>(samples - 1));
      const double se_mean = std::sqrt(var[k] / static_cast<double>(samples));
      const bool ok = std::abs(v - var[k]) <= 3.0 * se_var && std::abs(mean - nominal[k]) <= 4.0 * se_mean;
      out.pass = out.pass && ok;
      detail << c.name << "[" << k << "] var " << fmt(v) << " vs " << fmt(var[k]) << (ok ? "" : " FAIL") << "; ";
    }
    // Pose means. With independent gaussian components the heading noise
    // shrinks the mean displacement by exp(-var/2).
    double mx = 0.0, my = 0.0;
    const double vx = sample_variance(xs, mx);
    const double vy = sample_variance(ys, my);
    const double shrink = c.t * std::exp(-0.5 * var[0]);
    const double ex = c.prev.x() + shrink * std::cos(c.prev.theta() + c.r1);
    const double ey = c.prev.y() + shrink * std::sin(c.prev.theta() + c.r1);
    const bool ok = std::abs(mx - ex) <= 4.0 * std::sqrt(vx / samples) &&
                    std::abs(my - ey) <= 4.0 * std::sqrt(vy / samples);
    out.pass = out.pass && ok;
    if (!ok) detail << c.name << " pose mean FAIL; ";
  }
  out.detail = detail.str();
  return out;
}

SuiteResult global_init_uniformity() {
  // 12x12 room with a one-cell border and a few interior obstacles.
  std::vector<CellIndex> occ;
  for (int i = 0; i < 12; ++i) {
    occ.push_back({i, 0});
    occ.push_back({i, 11});
    occ.push_back({0, i});
    occ.push_back({11, i});
  }
  for (CellIndex c : {CellIndex{4, 4}, CellIndex{4, 5}, CellIndex{7, 8}, CellIndex{8, 3}}) occ.push_back(c);
  const OccupancyGrid grid = grid_with(12, 12, 0.5, {}, occ);
  AmclConfig cfg;
  cfg.min_particles = 1;
  cfg.max_particles = 10000;
  StreamRng rng(7, StreamDomain::kTest, 0, 0);
  const Belief b = init_global(cfg, grid, rng);

  const auto free = grid.free_cells();
  std::vector<double> counts(grid.geometry().size(), 0.0);
  std::vector<double> heading(12, 0.0);
  for (const Particle& p : b.particles) {
    const auto c = grid.world_to_grid(p.pose.x(), p.pose.y());
    if (!c || grid.at(*c) != Cell::kFree) return {false, "particle off the free space"};
    counts[grid.geometry().index(*c)] += 1.0;
    const int bin = std::min(11, static_cast<int>((p.pose.theta() + kPi) / (2.0 * kPi) * 12.0));
    heading[bin] += 1.0;
  }
  auto p_value = [](const std::vector<double>& obs, double expected) {
    double stat = 0.0;
    for (double o : obs) stat += (o - expected) * (o - expected) / expected;
    boost::math::chi_squared dist(static_cast<double>(obs.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
  };
  std::vector<double> free_counts;
  for (const CellIndex& c : free) free_counts.push_back(counts[grid.geometry().index(c)]);
  const double n = static_cast<double>(b.size());
  const double p_cells = p_value(free_counts, n / static_cast<double>(free.size()));
  const double p_heading = p_value(heading, n / 12.0);
  return {p_cells > 0.01 && p_heading > 0.01, "cells p=" + fmt(p_cells) + " headings p=" + fmt(p_heading)};
}

SuiteResult scan_noise_std() {
  // 10 m square of free space inside a one-cell wall.
  std::vector<CellIndex> occ;
  const int n = 202;
  for (int i = 0; i < n; ++i) {
    occ.push_back({i, 0});
    occ.push_back({i, n - 1});
    occ.push_back({0, i});
    occ.push_back({n - 1, i});
  }
  const OccupancyGrid world = grid_with(n, n, 0.05, {-5.05, -5.05, 0.0}, occ);
  const RobotConfig robot = RobotConfig::udacity_bot();
  const double sigma = 0.01;
  SimState st = make_sim_state({0.0, 0.0, 0.3}, 1, {});
  StreamRng quiet(1, StreamDomain::kTest, 0, 0);
  const LaserScan truth = simulate_scan(st, world, robot, 0.0, quiet);
  std::vector<double> dev;
  for (std::uint64_t k = 0; dev.size() < 10000; ++k) {
    StreamRng rng(1, StreamDomain::kSimLaser, 0, k);
    const LaserScan z = simulate_scan(st, world, robot, sigma, rng);
    for (std::size_t i = 0; i < z.ranges.size(); ++i) dev.push_back(z.ranges[i] - truth.ranges[i]);
  }
  double mean = 0.0;
  const double sd = std::sqrt(sample_variance(dev, mean));
  const double se = sigma / std::sqrt(2.0 * static_cast<double>(dev.size() - 1));
  return {std::abs(sd - sigma) <= 3.0 * se, "std " + fmt(sd) + " over " + std::to_string(dev.size()) + " beams"};
}

namespace {

// Reference motion composition and observation function, written out here
// rather than taken from the library.
Eigen::Vector3d compose_ref(const Eigen::Vector3d& x, const Eigen::Vector3d& u) {
  return {x(0) + u(1) * std::cos(x(2) + u(0)), x(1) + u(1) * std::sin(x(2) + u(0)), x(2) + u(0) + u(2)};
}

Eigen::Vector2d observe_ref(const Eigen::Vector3d& x, const Eigen::Vector2d& lm) {
  return {std::hypot(lm(0) - x(0), lm(1) - x(1)), std::atan2(lm(1) - x(1), lm(0) - x(0)) - x(2)};
}

template <int Rows, class F>
Eigen::Matrix<double, Rows, 3> central_diff(F f, const Eigen::Vector3d& at, bool wrap_last) {
  constexpr double h = 1e-6;
  Eigen::Matrix<double, Rows, 3> J;
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d p = at, m = at;
    p(j) += h;
    m(j) -= h;
    Eigen::Matrix<double, Rows, 1> d = f(p) - f(m);
    if (wrap_last) d(Rows - 1) = normalize_angle(d(Rows - 1));
    J.col(j) = d / (2.0 * h);
  }
  return J;
}

}  // namespace

SuiteResult ekf_jacobians(int trials) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> step(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Eigen::Vector3d x(pos(gen), pos(gen), ang(gen));
    const Eigen::Vector3d u(ang(gen) / 3.0, step(gen), ang(gen) / 3.0);
    const MotionJacobians mj = motion_jacobians(x, OdometryDelta{u(0), u(1), u(2)});
    const auto G = central_diff<3>([&](const Eigen::Vector3d& s) { return compose_ref(s, u); }, x, false);
    const auto V = central_diff<3>([&](const Eigen::Vector3d& c) { return compose_ref(x, c); }, u, false);
    worst = std::max({worst, (mj.state - G).cwiseAbs().maxCoeff(), (mj.control - V).cwiseAbs().maxCoeff()});
    Eigen::Vector2d lm(pos(gen), pos(gen));
    if ((lm - x.head<2>()).norm() < 0.5) lm(0) += 2.0;
    const auto H = central_diff<2>([&](const Eigen::Vector3d& s) { return observe_ref(s, lm); }, x, true);
    worst = std::max(worst, (observation_jacobian(x, lm) - H).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6, "max abs deviation " + fmt(worst)};
}

SuiteResult ekf_scalar_equivalence(int trials) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double x0 = -2.0 + 4.0 * u(gen);
    const double L = 5.0 + 5.0 * u(gen);
    const double P = 0.01 + u(gen);
    const double R = 0.001 + 0.5 * u(gen);
    const double z = (L - x0) + (u(gen) - 0.5);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    cov(0, 0) = P;
    const GaussianBelief b = GaussianBelief::from_pose({x0, 0.0, 0.0}, cov);
    const GaussianBelief post = ekf_update_range(b, z, R, Eigen::Vector2d(L, 0.0));
    // The range measures L - x directly: a scalar filter on m = L - z.
    const double m = L - z;
    const double k = P / (P + R);
    const double mean = x0 + k * (m - x0);
    const double var = (1.0 - k) * P;
    worst = std::max({worst, std::abs(post.mean(0) - mean), std::abs(post.covariance(0, 0) - var)});
  }
  return {worst <= 1e-9, "max abs deviation " + fmt(worst)};
}

SuiteResult ekf_psd_cycles(int cycles) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GaussianBelief b = GaussianBelief::from_pose({0.0, 0.0, 0.0}, Eigen::Vector3d(0.1, 0.1, 0.05).asDiagonal());
  const MotionNoise noise{0.005, 0.005, 0.010, 0.005};
  double worst_asym = 0.0;
  double worst_eig = 0.0;
  for (int i = 0; i < cycles; ++i) {
    const Pose2D prev = b.pose();
    const Pose2D curr = prev.compose({0.3 * u(gen), 0.1 * (u(gen) - 0.5), 0.6 * (u(gen) - 0.5)});
    b = ekf_predict(b, {prev, curr}, noise);
    const int updates = static_cast<int>(3.0 * u(gen));
    for (int k = 0; k < updates; ++k) {
      const double a = 2.0 * std::numbers::pi * u(gen);
      const double r = 1.0 + 5.0 * u(gen);
      const Eigen::Vector2d lm(b.mean(0) + r * std::cos(a), b.mean(1) + r * std::sin(a));
      LandmarkObservation obs;
      obs.range = r + 0.05 * (u(gen) - 0.5);
      obs.bearing = normalize_angle(a - b.mean(2) + 0.02 * (u(gen) - 0.5));
      b = ekf_update(b, obs, lm);
    }
    const Eigen::Matrix3d& P = b.covariance;
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    worst_asym = std::max(worst_asym, (P - P.transpose()).cwiseAbs().maxCoeff() / scale);
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(P).eigenvalues().minCoeff();
    worst_eig = std::min(worst_eig, min_eig / scale);
  }
  return {worst_asym <= 1e-12 && worst_eig >= -1e-12,
          "max asymmetry " + fmt(worst_asym) + ", min eigenvalue " + fmt(worst_eig)};
}

SuiteResult distance_field_equivalence(int maps, int size) {
  double worst = 0.0;
  for (int i = 0; i < maps; ++i) {
    const double frac = i == 0 ? 0.0 : 0.002 + 0.3 * (i % 7) / 7.0;
    const OccupancyGrid g = random_grid(size, size, 0.05 * (1 + i % 3), frac, 1000 + i);
    for (double max_dist : {2.0, 1e6}) {
      const DistanceField f = build_distance_field(g, max_dist);
      const auto ref = brute_force_distance(g, max_dist);
      for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(f.values()[k] - ref[k]));
    }
  }
  return {worst <= 1e-9, std::to_string(maps) + " maps, max abs deviation " + fmt(worst)};
}

SuiteResult planner_equivalence(int maps) {
  double worst = 0.0;
  int solved = 0;
  int mismatched_status = 0;
  std::mt19937_64 gen(21);
  for (int i = 0; i < maps; ++i) {
    const Costmap cm = random_costmap(20, 20, 2000 + i);
    std::vector<CellIndex> open;
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        if (cm.at(c, r) < cost::kInscribed) open.push_back({c, r});
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const CellIndex s = open[pick(gen)];
    const CellIndex t = open[pick(gen)];
    const PlanResult r = plan_cells(cm, s, t);
    const auto ref = dijkstra_cost(cm, s, t);
    if (r.ok() != ref.has_value()) {
      ++mismatched_status;
      continue;
    }
    if (!ref) continue;
    ++solved;
    worst = std::max(worst, std::abs(r.path.cost - *ref));
  }
  return {worst <= 1e-9 && mismatched_status == 0,
          std::to_string(maps) + " maps, " + std::to_string(solved) + " solvable, max abs deviation " + fmt(worst) +
              (mismatched_status ? ", status mismatches " + std::to_string(mismatched_status) : "")};
}

SuiteResult kld_equivalence(std::size_t k_max) {
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  AmclConfig table;
  AmclConfig wide;
  wide.min_particles = 1;
  wide.max_particles = 100000000;
  AmclConfig loose = wide;
  loose.kld_err = 0.2;
  loose.kld_z = 1.645;
  for (const AmclConfig* cfg : {&table, &wide, &loose}) {
    for (std::size_t k = 0; k <= k_max; ++k) {
      ++checked;
      if (kld_sample_size(k, *cfg) != kld_reference(k, *cfg)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " evaluations, " + std::to_string(mismatches) + " mismatches"};
}

SuiteResult raycast_equivalence() {
  SuiteResult out;
  int n = 0;
  for (const RayCase& c : crafted_rays()) {
    ++n;
    const double got = raycast(c.grid, c.from, c.bearing, c.max_range, c.options);
    if (std::abs(got - c.expected) > 1e-9) {
      out.pass = false;
      out.detail += c.name + ": got " + fmt(got) + " expected " + fmt(c.expected) + "; ";
    }
  }
  if (out.pass) out.detail = std::to_string(n) + " rays";
  return out;
}

}  // namespace locnav::oracle
