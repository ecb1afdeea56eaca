#ifndef FEDGAME_SIM_HPP
#define FEDGAME_SIM_HPP

#include "fedgame/model.hpp"

#include <cstdint>
#include <vector>

namespace fedgame {

enum class SimAlgorithm { kFedAvg, kMwFed };

const char* to_string(SimAlgorithm alg);

// Accuracy surrogate: agent i's accuracy after cumulative contributions θ is
// u_i(θ) from the instance. Contributions are continuous unless
// floor_batches is set, in which case each share is floored to a multiple
// of `batch`.
struct SimConfig {
  Instance instance;
  int rounds = 10;
  double budget = 1.0;  // total contribution per round
  double factor = 2.0;  // MW-FED multiplier, > 1
  std::uint64_t seed = 0;
  bool floor_batches = false;
  double batch = 1.0;
};

struct SimTrace {
  Eigen::MatrixXd contributions;  // k x T, per-round share
  Eigen::MatrixXd cumulative;     // k x T
  Eigen::MatrixXd weights;        // k x T, weights used in round t
  Eigen::MatrixXi satisfied;      // k x T, after round t
  std::vector<Eigen::Index> final_satisfied;
};

void validate(const SimConfig& config);

SimTrace run_fedavg(const SimConfig& config);

/// Weights start at 1/k; after each round every unsatisfied agent's weight
/// is multiplied by `factor`. Satisfied agents keep their weight.
SimTrace run_mwfed(const SimConfig& config);

SimTrace run_schedule(const SimConfig& config, SimAlgorithm alg);

struct DefectionPoint {
  double level = 0.0;
  double fraction = 0.0;  // mean satisfaction of the defector
};

/// One defector per trial, drawn uniformly from `seed`; the same draws are
/// reused for every level. The defector contributes level x its prescribed
/// share while the schedule itself is left untouched.
std::vector<DefectionPoint> defection_curve(const SimConfig& config, SimAlgorithm alg,
                                            const std::vector<double>& levels, int trials);

}  // namespace fedgame

#endif  // FEDGAME_SIM_HPP
