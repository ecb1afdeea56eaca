#include "fedgame/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fedgame {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError("schema error at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& member(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing \"") + key + "\"");
  return *it;
}

double real_at(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "number is not finite");
  return v;
}

int int_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

Eigen::VectorXd vector_at(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = real_at(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

Eigen::MatrixXd matrix_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const Eigen::VectorXd row = vector_at(j[r], rp);
    if (static_cast<std::size_t>(row.size()) != cols) {
      schema_error(rp, "row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(cols));
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

GridPoint parse_key(const std::string& key, const std::string& path, Eigen::Index k) {
  std::vector<int> parts;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      schema_error(path, "key \"" + key + "\" is not a comma-joined integer tuple");
    }
    if (used != tok.size()) schema_error(path, "key \"" + key + "\" is not a comma-joined integer tuple");
    parts.push_back(v);
  }
  if (static_cast<Eigen::Index>(parts.size()) != k) {
    schema_error(path, "key \"" + key + "\" has " + std::to_string(parts.size()) +
                           " entries, expected " + std::to_string(k));
  }
  return Eigen::Map<GridPoint>(parts.data(), k);
}

std::string key_of(const GridPoint& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p(i));
  }
  return s;
}

TabularModel tabular_at(const Json& model) {
  const Eigen::VectorXd upper_real = vector_at(member(model, "/model", "upper"), "/model/upper");
  Eigen::VectorXi upper(upper_real.size());
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    upper(i) = int_at(model["upper"][static_cast<std::size_t>(i)], "/model/upper/" + std::to_string(i));
  }
  std::optional<PacCycleFamily> family;
  if (auto it = model.find("family"); it != model.end()) {
    const Json& f = *it;
    const Json& name = member(f, "/model/family", "name");
    if (!name.is_string() || name.get<std::string>() != "pac-cycle") {
      schema_error("/model/family/name", "unknown family");
    }
    family = PacCycleFamily{int_at(member(f, "/model/family", "d"), "/model/family/d")};
  }
  const Json& table = member(model, "/model", "table");
  if (!table.is_object()) schema_error("/model/table", "expected an object keyed by grid points");
  const Eigen::Index k = upper.size();
  const std::size_t points = grid_size(upper, kDefaultGridCap);
  Eigen::MatrixXd dense;
  if (!(family && table.empty())) {
    if (table.size() != points) {
      schema_error("/model/table", "has " + std::to_string(table.size()) + " entries, grid has " +
                                       std::to_string(points));
    }
    dense.resize(k, static_cast<Eigen::Index>(points));
    std::vector<bool> seen(points, false);
    for (const auto& [key, value] : table.items()) {
      const std::string path = "/model/table/" + key;
      const GridPoint p = parse_key(key, path, k);
      if ((p.array() < 0).any() || (p.array() > upper.array()).any()) {
        schema_error(path, "grid point outside 0..upper");
      }
      const std::size_t idx = grid_index(upper, p);
      if (seen[idx]) schema_error(path, "duplicate grid point");
      seen[idx] = true;
      const Eigen::VectorXd u = vector_at(value, path);
      if (u.size() != k) schema_error(path, "expected " + std::to_string(k) + " utilities");
      dense.col(static_cast<Eigen::Index>(idx)) = u;
    }
  }
  return make_tabular_model(std::move(upper), std::move(dense), family);
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ValidationError("JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + what);
  }
  if (!j.is_object()) schema_error("", "expected an object");

  std::string label;
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) schema_error("/label", "expected a string");
    label = it->get<std::string>();
  }
  const Eigen::VectorXd mu = vector_at(member(j, "", "mu"), "/mu");

  StrategySpace space;
  if (auto it = j.find("space"); it != j.end()) {
    const Json& kind = member(*it, "/space", "kind");
    if (!kind.is_string()) schema_error("/space/kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "continuous") {
      space.kind = SpaceKind::kContinuous;
    } else if (k == "integer") {
      space.kind = SpaceKind::kInteger;
    } else {
      schema_error("/space/kind", "expected \"continuous\" or \"integer\", got \"" + k + "\"");
    }
    if (auto up = it->find("upper"); up != it->end()) space.upper = vector_at(*up, "/space/upper");
  }

  const Json& model = member(j, "", "model");
  const Json& type = member(model, "/model", "type");
  if (!type.is_string()) schema_error("/model/type", "expected a string");
  const std::string t = type.get<std::string>();
  UtilityModel m;
  if (t == "linear") {
    m = make_linear_model(matrix_at(member(model, "/model", "W"), "/model/W"));
  } else if (t == "coverage") {
    m = make_coverage_model(matrix_at(member(model, "/model", "Q"), "/model/Q"));
  } else if (t == "tabular") {
    m = tabular_at(model);
    if (!j.contains("space")) space.kind = SpaceKind::kInteger;
  } else {
    schema_error("/model/type", "unknown model type \"" + t + "\"");
  }
  return make_instance(std::move(m), mu, space, label);
}

Instance read_instance(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Instance load_instance(const std::string& path) {
  if (path == "-") return read_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_instance(in);
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return rows;
}

Json index_list(const std::vector<Eigen::Index>& v) {
  Json a = Json::array();
  for (auto i : v) a.push_back(i);
  return a;
}

}  // namespace

Json instance_to_json(const Instance& instance) {
  Json j;
  j["label"] = instance.label;
  j["mu"] = to_json(instance.mu);
  Json space;
  space["kind"] = instance.space.is_integer() ? "integer" : "continuous";
  if (instance.space.upper) space["upper"] = to_json(*instance.space.upper);
  j["space"] = space;
  Json model;
  model["type"] = model_type_name(instance.model);
  if (const auto* lin = instance.linear()) {
    model["W"] = matrix_json(lin->W);
  } else if (const auto* cov = instance.coverage()) {
    model["Q"] = matrix_json(cov->Q);
  } else if (const auto* tab = instance.tabular()) {
    Json upper = Json::array();
    for (Eigen::Index i = 0; i < tab->upper.size(); ++i) upper.push_back(tab->upper(i));
    model["upper"] = upper;
    if (tab->family) model["family"] = {{"name", "pac-cycle"}, {"d", tab->family->d}};
    Json table = Json::object();
    const std::size_t points = grid_size(tab->upper);
    for (std::size_t n = 0; n < points; ++n) {
      const GridPoint p = grid_point(tab->upper, n);
      table[key_of(p)] = to_json(eval_tabular(*tab, p));
    }
    model["table"] = table;
  }
  j["model"] = model;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Certificate& certificate) {
  Json j = Json::object();
  if (certificate.dual) j["dual"] = to_json(*certificate.dual);
  if (certificate.zero_set) j["zero_set"] = index_list(*certificate.zero_set);
  if (!certificate.tight.empty()) j["tight"] = index_list(certificate.tight);
  if (!certificate.residuals.empty()) {
    j["final_residual"] = certificate.residuals.back();
    j["residual_count"] = certificate.residuals.size();
  }
  return j;
}

Json to_json(const SolveReport& report, const Instance& instance) {
  Json j;
  j["label"] = instance.label;
  j["method"] = to_string(report.method);
  j["status"] = to_string(report.status);
  j["heuristic"] = report.heuristic;
  j["cost"] = report.cost;
  j["theta"] = to_json(report.theta);
  j["utilities"] = to_json(evaluate(instance, report.theta));
  j["verified_stable"] = report.verified_stable;
  j["verified_envy_free"] = report.verified_envy_free;
  j["iterations"] = report.iterations;
  j["certificate"] = to_json(report.certificate);
  return j;
}

Json to_json(const Verdict& verdict) {
  Json j;
  j["feasible"] = verdict.feasible;
  if (verdict.stable) j["stable"] = *verdict.stable;
  if (verdict.envy_free) j["envy_free"] = *verdict.envy_free;
  Json vs = Json::array();
  for (const auto& v : verdict.violations) {
    Json e;
    e["agent"] = v.agent;
    e["kind"] = to_string(v.kind);
    e["magnitude"] = v.magnitude;
    if (v.other >= 0) e["other"] = v.other;
    if (v.witness.size() > 0) e["witness"] = to_json(v.witness);
    vs.push_back(e);
  }
  j["violations"] = vs;
  return j;
}

Json to_json(const PriceReport& report) {
  Json j;
  j["which"] = report.which;
  j["ratio"] = report.ratio;
  j["opt_cost"] = report.opt_cost;
  j["eq_cost"] = report.eq_cost;
  j["opt_method"] = to_string(report.opt_method);
  j["eq_method"] = to_string(report.eq_method);
  j["opt_exact"] = report.opt_exact;
  j["eq_exact"] = report.eq_exact;
  j["lower_bound_only"] = report.lower_bound_only;
  j["opt_theta"] = to_json(report.opt_theta);
  j["eq_theta"] = to_json(report.eq_theta);
  return j;
}

Json to_json(const EquilibriumSearchResult& result) {
  Json j;
  j["grid_points"] = result.grid_points;
  j["feasible_count"] = result.feasible_count;
  Json stable = Json::array();
  for (const auto& p : result.stable) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
    stable.push_back(a);
  }
  j["stable"] = stable;
  j["summary"] = result.stable.empty()
                     ? "no stable equilibrium; " + std::to_string(result.feasible_count) + " feasible points"
                     : std::to_string(result.stable.size()) + " stable equilibria; " +
                           std::to_string(result.feasible_count) + " feasible points";
  return j;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ValidationError("not a number: \"" + tok + "\"");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) throw ValidationError("not a number: \"" + tok + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << std::setprecision(17);
  out << "round,agent,contribution,cumulative,weight,satisfied\n";
  for (Eigen::Index t = 0; t < trace.cumulative.cols(); ++t) {
    for (Eigen::Index i = 0; i < trace.cumulative.rows(); ++i) {
      out << t + 1 << ',' << i << ',' << trace.contributions(i, t) << ',' << trace.cumulative(i, t)
          << ',' << trace.weights(i, t) << ',' << trace.satisfied(i, t) << '\n';
    }
  }
}

void write_curve_csv(std::ostream& out, const std::vector<DefectionPoint>& curve) {
  out << std::setprecision(17);
  out << "level,fraction\n";
  for (const auto& p : curve) out << p.level << ',' << p.fraction << '\n';
}

}  // namespace fedgame
