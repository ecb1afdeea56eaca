#ifndef FEDGAME_IO_HPP
#define FEDGAME_IO_HPP

#include "fedgame/model.hpp"
#include "fedgame/sim.hpp"
#include "fedgame/solvers.hpp"
#include "fedgame/verification.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace fedgame {

using Json = nlohmann::ordered_json;

/// Parses Instance JSON. Syntax errors report "line L, column C"; schema
/// errors name the offending JSON path (e.g. /model/W/2/1). Both throw
/// ValidationError, as does any model-level check in make_instance().
Instance parse_instance(const std::string& text);
Instance read_instance(std::istream& in);
Instance load_instance(const std::string& path);  // "-" reads stdin

Json instance_to_json(const Instance& instance);
std::string dump_json(const Json& j);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Certificate& certificate);
Json to_json(const SolveReport& report, const Instance& instance);
Json to_json(const Verdict& verdict);
Json to_json(const PriceReport& report);
Json to_json(const EquilibriumSearchResult& result);

/// Comma-separated reals, e.g. "0.5,1,2".
std::vector<double> parse_real_list(const std::string& text);

/// round, agent, contribution, cumulative, weight, satisfied
void write_trace_csv(std::ostream& out, const SimTrace& trace);
/// level, fraction
void write_curve_csv(std::ostream& out, const std::vector<DefectionPoint>& curve);

}  // namespace fedgame

#endif  // FEDGAME_IO_HPP
