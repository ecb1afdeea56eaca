// fedgame: command-line front end over Instance JSON.
#include "fedgame/generators.hpp"
#include "fedgame/io.hpp"
#include "fedgame/parallel.hpp"
#include "fedgame/sim.hpp"
#include "fedgame/solvers.hpp"
#include "fedgame/verification.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace fedgame;

namespace {

struct Output {
  std::string path;

  void write(const std::string& payload) const {
    if (path.empty() || path == "-") {
      std::cout << payload;
      std::cout.flush();
      return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << payload;
  }
};

void report_warnings(const Instance& instance) {
  for (const auto& w : instance.warnings) std::cerr << "warning: " << w << '\n';
}

Instance load(const std::string& path) {
  Instance instance = load_instance(path);
  report_warnings(instance);
  return instance;
}

Allocation parse_theta(const std::string& text, const Instance& instance) {
  const std::vector<double> v = parse_real_list(text);
  if (static_cast<Eigen::Index>(v.size()) != instance.agents()) {
    throw ValidationError("--theta has " + std::to_string(v.size()) + " entries, instance has " +
                          std::to_string(instance.agents()) + " agents");
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SimAlgorithm parse_alg(const std::string& name) {
  return name == "fedavg" ? SimAlgorithm::kFedAvg : SimAlgorithm::kMwFed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative federated-learning games: equilibria, prices, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fedgame 0.1.0");

  Output out;
  int threads = 0;
  app.add_option("--out,-o", out.path, "Write output here instead of stdout");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->envname("FEDGAME_THREADS")
      ->check(CLI::NonNegativeNumber);

  std::function<void()> action;
  // global options are accepted after the subcommand too
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "Emit a canonical or random instance as JSON");
  gen->require_subcommand(1);
  gen->fallthrough();
  int flower_b = 4;
  std::string flower_variant = "coverage";
  auto* gflower = gen->add_subcommand("flower", "Core agent plus b petals in sqrt(b) groups");
  gflower->add_option("--b", flower_b, "Number of petals (perfect square, 4..256)")->capture_default_str();
  gflower->add_option("--variant", flower_variant)
      ->check(CLI::IsMember({"linear", "coverage"}))
      ->capture_default_str();
  gflower->fallthrough();
  gflower->callback([&] {
    action = [&] {
      const auto v = flower_variant == "linear" ? FlowerVariant::kLinear : FlowerVariant::kCoverage;
      out.write(dump_json(instance_to_json(gen_flower(flower_b, v))));
    };
  });

  int pac_d = 1;
  double pac_mu = 0.8;
  auto* gpac = gen->add_subcommand("pac-cycle", "Three-agent cyclic PAC game on an integer grid");
  gpac->add_option("--d", pac_d, "Domain size (1 gives the 0/1 table)")->capture_default_str();
  gpac->add_option("--mu", pac_mu, "Accuracy requirement in (1/2, 1); ignored for d = 1")
      ->capture_default_str();
  gpac->fallthrough();
  gpac->callback([&] {
    action = [&] { out.write(dump_json(instance_to_json(gen_pac_cycle(pac_d, pac_mu)))); };
  });

  auto* gmatch = gen->add_subcommand("matching", "Edge agents on the complete graph K4");
  gmatch->fallthrough();
  gmatch->callback([&] {
    action = [&] { out.write(dump_json(instance_to_json(gen_matching_k4()))); };
  });

  int psd_k = 6;
  std::uint64_t gen_seed = 0;
  bool diag = false;
  auto* gpsd = gen->add_subcommand("random-psd", "Random linear game W = QQ^T");
  gpsd->add_option("--k", psd_k, "Agents")->capture_default_str();
  gpsd->add_option("--seed", gen_seed)->capture_default_str();
  gpsd->add_flag("--diag-dominant", diag, "Shrink toward I until strictly diagonally dominant");
  gpsd->fallthrough();
  gpsd->callback([&] {
    action = [&] {
      const auto dom = diag ? Dominance::kDiagonal : Dominance::kNone;
      out.write(dump_json(instance_to_json(gen_random_psd(psd_k, gen_seed, dom))));
    };
  });

  auto* ghet = gen->add_subcommand("hetero", "Four agents: two easy, two hard");
  ghet->add_option("--seed", gen_seed)->capture_default_str();
  ghet->fallthrough();
  ghet->callback([&] {
    action = [&] { out.write(dump_json(instance_to_json(gen_heterogeneous(gen_seed)))); };
  });

  // commands reading an instance
  std::string instance_path = "-";
  std::string theta_text;
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance,-i", instance_path, "Instance JSON file ('-' for stdin)")
        ->capture_default_str();
  };

  auto* eval = app.add_subcommand("eval", "Utilities of an allocation");
  add_instance(eval);
  eval->add_option("--theta", theta_text, "Comma-separated contributions")->required();
  eval->callback([&] {
    action = [&] {
      const Instance instance = load(instance_path);
      const Allocation theta = parse_theta(theta_text, instance);
      Json j;
      j["theta"] = to_json(theta);
      j["utilities"] = to_json(evaluate(instance, theta));
      j["feasible"] = is_feasible(instance, theta);
      out.write(dump_json(j));
    };
  });

  std::string objective = "social";
  int enum_cap = StableEqOptions{}.enumeration_cap;
  auto* solve = app.add_subcommand("solve", "Social optimum or optimal equilibrium");
  add_instance(solve);
  solve->add_option("--objective", objective)
      ->check(CLI::IsMember({"social", "stable-eq", "envy-free"}))
      ->capture_default_str();
  solve->add_option("--enum-cap", enum_cap, "Largest k solved by support enumeration")
      ->capture_default_str();
  solve->callback([&] {
    action = [&] {
      const Instance instance = load(instance_path);
      SolveReport r;
      if (objective == "social") {
        r = social_opt(instance);
      } else if (objective == "stable-eq") {
        r = optimal_stable_eq(instance, StableEqOptions{enum_cap});
      } else {
        r = optimal_envy_free(instance);
      }
      out.write(dump_json(to_json(r, instance)));
    };
  });

  bool want_stable = false;
  bool want_ef = false;
  bool search = false;
  double tol = kVerdictTol;
  auto* verify_cmd = app.add_subcommand("verify", "Certify stability / envy-freeness");
  add_instance(verify_cmd);
  verify_cmd->add_option("--theta", theta_text, "Comma-separated contributions");
  verify_cmd->add_flag("--stable", want_stable);
  verify_cmd->add_flag("--envy-free", want_ef);
  verify_cmd->add_flag("--search-equilibria", search, "Enumerate the integer grid for stable points");
  verify_cmd->add_option("--tol", tol)->capture_default_str();
  verify_cmd->callback([&] {
    action = [&] {
      const Instance instance = load(instance_path);
      if (search) {
        out.write(dump_json(to_json(exhaustive_equilibrium_search(instance))));
        return;
      }
      if (theta_text.empty()) throw ValidationError("verify needs --theta or --search-equilibria");
      const Allocation theta = parse_theta(theta_text, instance);
      Verdict v;
      if (want_stable && !want_ef) {
        v = is_stable_equilibrium(instance, theta, tol);
      } else if (want_ef && !want_stable) {
        v = is_envy_free(instance, theta, tol);
      } else {
        v = verify(instance, theta, tol);
      }
      out.write(dump_json(to_json(v)));
    };
  });

  std::string which = "pos";
  auto* price = app.add_subcommand("price", "Price of stability or fairness");
  add_instance(price);
  price->add_option("--which", which)->check(CLI::IsMember({"pos", "pof"}))->capture_default_str();
  price->callback([&] {
    action = [&] {
      const Instance instance = load(instance_path);
      const PriceReport r = which == "pos" ? price_of_stability(instance) : price_of_fairness(instance);
      out.write(dump_json(to_json(r)));
    };
  });

  // simulation
  SimConfig sim;
  std::string alg = "mwfed";
  std::string format = "csv";
  auto add_sim = [&](CLI::App* cmd) {
    add_instance(cmd);
    cmd->add_option("--alg", alg)->check(CLI::IsMember({"fedavg", "mwfed"}))->capture_default_str();
    cmd->add_option("--rounds", sim.rounds)->capture_default_str();
    cmd->add_option("--budget", sim.budget, "Total contribution per round")->capture_default_str();
    cmd->add_option("--factor", sim.factor, "MW-FED weight multiplier")->capture_default_str();
    cmd->add_option("--seed", sim.seed)->capture_default_str();
    cmd->add_option("--batch", sim.batch, "Batch size; setting it floors shares to whole batches")
        ->each([&](const std::string&) { sim.floor_batches = true; });
    cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Run a FedAvg or MW-FED schedule");
  add_sim(simulate);
  simulate->callback([&] {
    action = [&] {
      sim.instance = load(instance_path);
      const SimTrace trace = run_schedule(sim, parse_alg(alg));
      std::ostringstream os;
      if (format == "csv") {
        write_trace_csv(os, trace);
      } else {
        Json j;
        j["alg"] = alg;
        Json rounds = Json::array();
        for (Eigen::Index t = 0; t < trace.cumulative.cols(); ++t) {
          Json sat = Json::array();
          for (Eigen::Index i = 0; i < trace.satisfied.rows(); ++i) sat.push_back(trace.satisfied(i, t) != 0);
          rounds.push_back({{"round", t + 1},
                            {"contributions", to_json(trace.contributions.col(t))},
                            {"cumulative", to_json(trace.cumulative.col(t))},
                            {"weights", to_json(trace.weights.col(t))},
                            {"satisfied", sat}});
        }
        j["rounds"] = rounds;
        Json fin = Json::array();
        for (auto i : trace.final_satisfied) fin.push_back(i);
        j["final_satisfied"] = fin;
        os << dump_json(j);
      }
      out.write(os.str());
    };
  });

  std::string levels_text = "0.01,0.25,0.5,1.0";
  int trials = 100;
  auto* defect = app.add_subcommand("defect", "Defection curve: satisfaction vs contribution level");
  add_sim(defect);
  defect->add_option("--levels", levels_text)->capture_default_str();
  defect->add_option("--trials", trials)->capture_default_str();
  defect->callback([&] {
    action = [&] {
      sim.instance = load(instance_path);
      const auto curve = defection_curve(sim, parse_alg(alg), parse_real_list(levels_text), trials);
      std::ostringstream os;
      if (format == "csv") {
        write_curve_csv(os, curve);
      } else {
        Json j;
        j["alg"] = alg;
        Json pts = Json::array();
        for (const auto& p : curve) pts.push_back({{"level", p.level}, {"fraction", p.fraction}});
        j["curve"] = pts;
        os << dump_json(j);
      }
      out.write(os.str());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(threads);
    if (action) action();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
