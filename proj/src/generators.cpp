#include "fedgame/generators.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fedgame {

namespace {

int exact_sqrt(int b) {
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(b))));
  return s * s == b ? s : -1;
}

// Uniform on [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

int flower_group(int b, int agent) {
  const int s = exact_sqrt(b);
  if (s < 0 || agent < 1 || agent > b) throw ValidationError("flower_group: bad arguments");
  return (agent - 1) / s;
}

Instance gen_flower(int b, FlowerVariant variant) {
  const int s = exact_sqrt(b);
  if (s < 0) throw ValidationError("gen_flower: b = " + std::to_string(b) + " is not a perfect square");
  if (b < 4) throw ValidationError("gen_flower: b must be at least 4");
  if (b > 256) throw ValidationError("gen_flower: b is capped at 256");
  const int k = b + 1;
  const double inv_s = 1.0 / s;

  if (variant == FlowerVariant::kLinear) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(k, k);
    for (int i = 1; i <= b; ++i) {
      W(0, i) = W(i, 0) = inv_s;
      for (int l = 1; l <= b; ++l) {
        if (l != i && flower_group(b, l) == flower_group(b, i)) W(i, l) = inv_s;
      }
    }
    return make_instance(make_linear_model(std::move(W)), Eigen::VectorXd::Ones(k), {},
                         "flower-linear-b" + std::to_string(b));
  }

  const int privates = b - s;
  const Eigen::Index n = b + static_cast<Eigen::Index>(b) * privates;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(k, n);
  const double mass = 1.0 / b;
  Q.row(0).head(b).setConstant(mass);
  for (int i = 1; i <= b; ++i) {
    const int group = flower_group(b, i);
    Q.row(i).segment(group * s, s).setConstant(mass);
    Q.row(i).segment(b + static_cast<Eigen::Index>(i - 1) * privates, privates).setConstant(mass);
  }
  const double mu = 0.5 + 0.5 / b;
  return make_instance(make_coverage_model(std::move(Q)), Eigen::VectorXd::Constant(k, mu), {},
                       "flower-coverage-b" + std::to_string(b));
}

int pac_cycle_threshold(int d, double mu) {
  if (d < 2) throw ValidationError("pac_cycle_threshold: d must be at least 2");
  return static_cast<int>(std::ceil(std::log(2.0 * (1.0 - mu)) / std::log(1.0 - 1.0 / d)));
}

Instance gen_pac_cycle(int d, double mu) {
  if (d < 1) throw ValidationError("gen_pac_cycle: d must be positive");
  if (d == 1) {
    Eigen::VectorXi upper = Eigen::VectorXi::Ones(3);
    Eigen::MatrixXd table(3, 8);
    for (std::size_t n = 0; n < 8; ++n) {
      const GridPoint p = grid_point(upper, n);
      for (int i = 0; i < 3; ++i) {
        const int prev = (i + 2) % 3;
        table(i, static_cast<Eigen::Index>(n)) = (p(i) == 1 || p(prev) == 1) ? 1.0 : 0.5;
      }
    }
    StrategySpace space{SpaceKind::kInteger, upper.cast<double>()};
    return make_instance(make_tabular_model(upper, std::move(table)), Eigen::VectorXd::Ones(3),
                         space, "pac-cycle-d1");
  }
  if (!(mu > 0.5 && mu < 1.0)) throw ValidationError("gen_pac_cycle: mu must lie in (1/2, 1)");
  if (pac_cycle_threshold(d, mu) % 2 == 0) mu = (1.0 - 1.0 / d) * mu + 1.0 / d;
  const int m = pac_cycle_threshold(d, mu);
  if (m % 2 == 0) throw ValidationError("gen_pac_cycle: parity adjustment failed");

  Eigen::VectorXi upper = Eigen::VectorXi::Constant(3, m + 1);
  const std::size_t points = grid_size(upper);
  Eigen::MatrixXd table(3, static_cast<Eigen::Index>(points));
  for (std::size_t n = 0; n < points; ++n) {
    table.col(static_cast<Eigen::Index>(n)) = pac_cycle_utilities(d, grid_point(upper, n));
  }
  StrategySpace space{SpaceKind::kInteger, upper.cast<double>()};
  return make_instance(make_tabular_model(upper, std::move(table), PacCycleFamily{d}),
                       Eigen::VectorXd::Constant(3, mu), space,
                       "pac-cycle-d" + std::to_string(d));
}

std::array<std::pair<int, int>, 3> k4_perfect_matchings() { return {{{0, 2}, {1, 3}, {4, 5}}}; }

Instance gen_matching_k4() {
  // Vertices a, b, c, d = 0..3; edge e's midpoint is point 4 + e.
  constexpr std::array<std::pair<int, int>, 6> kEdges{{{0, 1}, {0, 2}, {2, 3}, {1, 3}, {0, 3}, {1, 2}}};
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(6, 10);
  for (int e = 0; e < 6; ++e) {
    Q(e, kEdges[e].first) = 1.0 / 3.0;
    Q(e, kEdges[e].second) = 1.0 / 3.0;
    Q(e, 4 + e) = 1.0 / 3.0;
  }
  return make_instance(make_coverage_model(std::move(Q)), Eigen::VectorXd::Constant(6, 0.6), {},
                       "matching-k4");
}

Instance gen_random_psd(int k, std::uint64_t seed, Dominance dominance) {
  if (k < 1) throw ValidationError("gen_random_psd: k must be positive");
  std::mt19937_64 rng(seed);
  const int lo = std::max(2, k - 1);
  const int n = lo + static_cast<int>(unit_uniform(rng) * (k + 4 - lo));
  Eigen::MatrixXd Q(k, n);
  for (int i = 0; i < k; ++i) {
    for (int x = 0; x < n; ++x) Q(i, x) = unit_uniform(rng) < 0.3 ? 0.0 : unit_uniform(rng);
    if (Q.row(i).sum() <= 0.0) Q(i, static_cast<int>(unit_uniform(rng) * n)) = 1.0;
    Q.row(i) /= Q.row(i).sum();
  }
  Eigen::MatrixXd W = Q * Q.transpose();
  const Eigen::VectorXd scale = W.diagonal().cwiseSqrt().cwiseInverse();
  W = scale.asDiagonal() * W * scale.asDiagonal();
  W = (0.5 * (W + W.transpose())).cwiseMin(1.0).eval();
  W.diagonal().setOnes();
  if (dominance == Dominance::kDiagonal) {
    const double gamma = 0.5 + 0.4 * unit_uniform(rng);
    const double max_off = (W.rowwise().sum().array() - 1.0).maxCoeff();
    if (max_off >= gamma) {
      const double shrink = gamma / max_off;
      W = ((1.0 - shrink) * Eigen::MatrixXd::Identity(k, k) + shrink * W).eval();
      W.diagonal().setOnes();
    }
  }
  const std::string tag = dominance == Dominance::kDiagonal ? "-dd" : "";
  return make_instance(make_linear_model(std::move(W)), Eigen::VectorXd::Ones(k), {},
                       "random-psd-k" + std::to_string(k) + "-s" + std::to_string(seed) + tag);
}

Instance gen_heterogeneous(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto jitter = [&](double base) { return base * (0.95 + 0.1 * unit_uniform(rng)); };
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(4, 4);
  W(0, 1) = W(1, 0) = jitter(0.8);
  W(2, 3) = W(3, 2) = jitter(0.2);
  for (int e = 0; e < 2; ++e) {
    for (int h = 2; h < 4; ++h) W(e, h) = W(h, e) = jitter(0.1);
  }
  return make_instance(make_linear_model(std::move(W)), Eigen::VectorXd::Ones(4), {},
                       "heterogeneous-s" + std::to_string(seed));
}

}  // namespace fedgame
