#include "hypmet/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "hypmet/complex.hpp"
#include "hypmet/errors.hpp"
#include "hypmet/metrics.hpp"
#include "hypmet/solver.hpp"
#include "hypmet/triangulation_io.hpp"
#include "json.hpp"

namespace hypmet {

namespace {

using nlohmann::json;

struct Task {
  std::string command;
  std::string triangulation;
  std::string flavor = "ideal";
  std::string cone_angles, curvature, lengths;
  double tol = 1e-9;
  int max_iter = 5000;
  int starts = 10;
  std::uint64_t seed = 0;
  std::string output;
  bool timings = false;
};

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd parse_vector(const std::string& text, const char* flag, int expected) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    throw InputError(std::string(flag) + " is not a JSON array");
  }
  if (!doc.is_array()) throw InputError(std::string(flag) + " must be a JSON array");
  if (static_cast<int>(doc.size()) != expected)
    throw InputError(std::string(flag) + " must have one entry per edge class (" + std::to_string(expected) + ")");
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) {
    if (!doc[i].is_number()) throw InputError(std::string(flag) + " entries must be numbers");
    v[i] = doc[i].get<double>();
  }
  if (!v.allFinite()) throw InputError(std::string(flag) + " entries must be finite");
  return v;
}

json angles_json(const Complex& c, const AngleAssignment& a) {
  json tets = json::array();
  const int per = a.flavor == Flavor::Ideal ? 3 : 6;
  for (int t = 0; t < c.num_tets; ++t) tets.push_back(vec(a.values.segment(per * t, per)));
  return tets;
}

json solve_json(const Complex& c, const Eigen::VectorXd& k, const SolveResult& r) {
  return {{"lengths", vec(r.lengths)},
          {"angles", angles_json(c, r.angles)},
          {"achieved_cone_angles", vec(r.achieved)},
          {"residual", (r.achieved - k).cwiseAbs().maxCoeff()},
          {"volume", r.volume},
          {"covolume", r.covolume},
          {"W", r.W},
          {"iterations", r.iterations},
          {"gradient_norm", r.grad_norm},
          {"feasibility_slack", r.feasibility_slack}};
}

Eigen::VectorXd target_of(const Task& task, const Complex& c) {
  const bool has_k = !task.cone_angles.empty(), has_K = !task.curvature.empty();
  if (has_k == has_K) throw InputError("exactly one of --cone-angles and --curvature is required");
  if (has_k) return parse_vector(task.cone_angles, "--cone-angles", c.num_edges);
  return cone_angles_from_curvature(c, parse_vector(task.curvature, "--curvature", c.num_edges));
}

json execute(const Task& task, json& input) {
  if (task.triangulation.empty()) throw InputError("--triangulation is required");
  const Complex c = build_complex(read_triangulation(task.triangulation));
  const Flavor flavor = parse_flavor(task.flavor);
  if (task.command == "validate") return describe_complex(c);

  input["flavor"] = to_string(flavor);
  if (task.command == "angles" || task.command == "volume") {
    if (task.lengths.empty()) throw InputError("--lengths is required for '" + task.command + "'");
    const Eigen::VectorXd l = parse_vector(task.lengths, "--lengths", c.num_edges);
    input["lengths"] = vec(l);
    const AngleAssignment a = angles_of_metric(c, l, flavor);
    if (task.command == "angles") {
      const Eigen::VectorXd k = cone_angles(c, a);
      return {{"angles", angles_json(c, a)}, {"cone_angles", vec(k)}, {"curvature", vec(curvature(c, k))}};
    }
    return {{"volume", volume(c, a)}, {"covolume", cov_complex(c, l, flavor).value}};
  }

  const Eigen::VectorXd k = target_of(task, c);
  input["cone_angles"] = vec(k);
  SolveOptions opts;
  opts.tol = task.tol;
  opts.max_iter = task.max_iter;
  input["tol"] = task.tol;
  input["max_iter"] = task.max_iter;

  if (task.command == "solve") return solve_json(c, k, solve_metric(c, k, flavor, opts));
  if (task.command == "max-angles") {
    const auto m = max_volume_angles(c, k, flavor, opts);
    return {{"angles", angles_json(c, m.angles)}, {"volume", m.volume}};
  }
  if (task.command == "classify") {
    const auto r = solve_metric(c, k, flavor, opts);
    json verdicts = json::array();
    for (const auto& v : classify_maximizer(c, r))
      verdicts.push_back({{"verdict", to_string(v.kind)}, {"residual", v.residual}, {"flat_index", v.flat_index}});
    json out = solve_json(c, k, r);
    out["tetrahedra"] = verdicts;
    return out;
  }
  // rigidity
  input["starts"] = task.starts;
  input["seed"] = task.seed;
  const auto rep = rigidity_check(c, k, flavor, task.starts, task.seed, opts);
  json lengths = json::array();
  for (const auto& run : rep.runs) lengths.push_back(vec(run.lengths));
  return {{"agree", rep.agree},
          {"starts", rep.starts},
          {"tolerance", rep.tolerance},
          {"max_angle_deviation", rep.max_angle_deviation},
          {"max_length_deviation", rep.max_length_deviation},
          {"lengths", lengths}};
}

json error_object(const char* kind, const std::string& message, int code) {
  return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Task task;
  CLI::App app{"Hyperbolic polyhedral metrics with prescribed cone angles"};
  app.add_option("command", task.command, "validate | angles | volume | solve | max-angles | classify | rigidity")
      ->required()
      ->check(CLI::IsMember({"validate", "angles", "volume", "solve", "max-angles", "classify", "rigidity"}));
  app.add_option("--triangulation", task.triangulation, "Triangulation JSON file");
  app.add_option("--flavor", task.flavor, "ideal or hyper")->check(CLI::IsMember({"ideal", "hyper"}));
  app.add_option("--cone-angles", task.cone_angles, "Target cone angles, JSON array (radians)");
  app.add_option("--curvature", task.curvature, "Target curvature, JSON array (radians)");
  app.add_option("--lengths", task.lengths, "Edge lengths, JSON array");
  app.add_option("--tol", task.tol, "Stopping tolerance on the cone angle residual");
  app.add_option("--max-iter", task.max_iter, "Iteration limit");
  app.add_option("--starts", task.starts, "Random starts for rigidity");
  app.add_option("--seed", task.seed, "Seed for random starts");
  app.add_option("--output", task.output, "Write the report to this file instead of standard output");
  app.add_flag("--timings", task.timings, "Include wall-clock timings in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    out << error_object("usage", e.what(), 1).dump(2) << '\n';
    return 1;
  }

  json report;
  json input = {{"command", task.command}, {"triangulation", task.triangulation}};
  const auto start = std::chrono::steady_clock::now();
  try {
    report["result"] = execute(task, input);
  } catch (const SolveError& e) {
    const int code = e.kind() == SolveFailure::NotPositiveFeasible ? 2 : (e.kind() == SolveFailure::NotClosed ? 1 : 3);
    out << error_object(to_string(e.kind()), e.what(), code).dump(2) << '\n';
    return code;
  } catch (const InputError& e) {
    out << error_object("InputError", e.what(), 1).dump(2) << '\n';
    return 1;
  } catch (const DomainError& e) {
    out << error_object("DomainError", e.what(), 1).dump(2) << '\n';
    return 1;
  } catch (const UnsupportedEvaluation& e) {
    out << error_object("UnsupportedEvaluation", e.what(), 3).dump(2) << '\n';
    return 3;
  } catch (const std::exception& e) {
    out << error_object("NumericalError", e.what(), 3).dump(2) << '\n';
    return 3;
  }
  report["command"] = task.command;
  report["input"] = input;
  if (task.timings)
    report["timings"] = {
        {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};

  const std::string text = report.dump(2) + "\n";
  if (task.output.empty()) {
    out << text;
  } else {
    std::ofstream file(task.output);
    if (!file) {
      out << error_object("InputError", "cannot write '" + task.output + "'", 1).dump(2) << '\n';
      return 1;
    }
    file << text;
  }
  (void)err;
  return 0;
}

}  // namespace hypmet
