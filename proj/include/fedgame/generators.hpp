#ifndef FEDGAME_GENERATORS_HPP
#define FEDGAME_GENERATORS_HPP

#include "fedgame/model.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace fedgame {

enum class FlowerVariant { kCoverage, kLinear };
enum class Dominance { kNone, kDiagonal };

/// Core agent 0 overlapping b petal agents split into sqrt(b) groups.
///
/// Linear: u_0 = θ_0 + sum_i θ_i / sqrt(b) and, for petal i in group I_j,
/// u_i = θ_i + (θ_0 + sum_{l in I_j, l != i} θ_l) / sqrt(b); μ = 1.
/// Coverage: core uniform over b central points; each petal uniform over its
/// group's sqrt(b) central points plus b - sqrt(b) private ones;
/// μ = 1/2 + 1/(2b). Requires b a perfect square with 4 <= b <= 256.
Instance gen_flower(int b, FlowerVariant variant);

/// Group index (0-based) of petal agent `agent` (1..b) in a flower of size b.
int flower_group(int b, int agent);

/// m(μ) = ceil(log(2(1 - μ)) / log(1 - 1/d)): samples a pair needs.
int pac_cycle_threshold(int d, double mu);

/// Three-agent cyclic PAC game. d = 1 gives the {0,1}^3 table with μ = 1;
/// d >= 2 uses u_i = 1 - 1/2 (1 - 1/d)^{θ_i + θ_{i-1}}, adjusts μ so that
/// m(μ) is odd, and bounds each agent at m(μ) + 1.
Instance gen_pac_cycle(int d, double mu);

/// Complete graph on 4 vertices, one agent per edge, one point per vertex
/// and per edge midpoint; μ = 0.6. Agents are the edges
/// ab, ac, cd, bd, ad, bc, so {0,2}, {1,3}, {4,5} are the perfect matchings.
Instance gen_matching_k4();
std::array<std::pair<int, int>, 3> k4_perfect_matchings();

/// W from random discovery distributions, rescaled to a unit diagonal;
/// kDiagonal shrinks the off-diagonal part toward I until rows are strictly
/// dominant. μ = 1. Deterministic in (k, seed).
Instance gen_random_psd(int k, std::uint64_t seed, Dominance dominance);

/// Four agents for the defection experiment: agents 0 and 1 are strongly
/// coupled ("easy"), agents 2 and 3 weakly coupled ("hard"). Couplings get a
/// small seeded jitter. μ = 1.
Instance gen_heterogeneous(std::uint64_t seed);

}  // namespace fedgame

#endif  // FEDGAME_GENERATORS_HPP
