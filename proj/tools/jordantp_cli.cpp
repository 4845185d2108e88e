// jordantp: command-line front end.
//
//   jordantp verify MODEL [--suite S] [--seed N] [--trials N] [--tol K=V]... [--out PATH] [--format json|csv]
//   jordantp spectral MODEL ELEMENT.json
//   jordantp geom VERTICES.csv [--tol K=V]... [--samples N] [--seed N]
//   jordantp tpmatrix MODEL (ATOMS.json | --random K) [--seed N]
//   jordantp cone GENERATORS.csv [--seed N] [--trials N]
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage or input error.

#include "jordantp/convexgeom.hpp"
#include "jordantp/io.hpp"
#include "jordantp/model.hpp"
#include "jordantp/selfdual.hpp"
#include "jordantp/suites.hpp"
#include "jordantp/transition.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace jordantp;
using io::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

Tolerance parse_tolerances(const std::vector<std::string>& overrides) {
  Tolerance tol;
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw io::ParseError("--tol expects KEY=VALUE, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw io::ParseError("--tol value for " + key + " is not a number");
    }
    if (key == "eig_cluster") tol.eig_cluster = value;
    else if (key == "cone_slack") tol.cone_slack = value;
    else if (key == "check_tol") tol.check_tol = value;
    else throw io::ParseError("unknown tolerance key '" + key + "' (eig_cluster, cone_slack, check_tol)");
  }
  tol.validate();
  return tol;
}

/// --seed if given, else JORDAN_TP_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("JORDAN_TP_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw io::ParseError("JORDAN_TP_SEED is not an unsigned integer");
  }
  return 0;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw io::ParseError("cannot write " + out_path);
  f << text;
}

int cmd_verify(const std::string& spec, const std::string& suite, const std::optional<std::uint64_t>& seed_flag, int trials,
               const std::vector<std::string>& tol_kv, const std::string& out, const std::string& format) {
  const Tolerance tol = parse_tolerances(tol_kv);
  const Model model = Model::parse(spec);
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw io::ParseError("unknown suite '" + suite + "'");
  }
  const auto report = run_suite(model, suite, resolve_seed(seed_flag), trials, tol);
  emit(format == "csv" ? io::report_csv(report) : io::to_json(report).dump(2) + "\n", out);
  return report.all_passed() ? kPass : kFail;
}

int cmd_spectral(const std::string& spec, const std::string& file) {
  const Model model = Model::parse(spec);
  json j;
  try {
    j = json::parse(io::read_file(file));
  } catch (const json::parse_error& e) {
    throw io::ParseError(std::string("malformed JSON: ") + e.what());
  }
  const Element a = io::element_from_json(model, j);
  const auto sf = spectral_decompose(model, a);
  json out = io::to_json(sf);
  out["model"] = io::to_json(model.descriptor());
  out["reconstruction_residual"] = order_norm(model, a - sf.reconstruct(a.size()));
  std::cout << out.dump(2) << "\n";
  return kPass;
}

int cmd_geom(const std::string& file, const std::vector<std::string>& tol_kv, int samples, const std::optional<std::uint64_t>& seed) {
  const Tolerance tol = parse_tolerances(tol_kv);
  const auto poly = io::polytope_from_csv(io::read_file(file));
  const auto reports = check_star_star(poly, tol, samples, resolve_seed(seed));
  json arr = json::array();
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(io::to_json(r));
    ok = ok && r.passes;
  }
  std::cout << arr.dump(2) << "\n";
  return ok ? kPass : kFail;
}

int cmd_tpmatrix(const std::string& spec, const std::string& file, int random_k, const std::optional<std::uint64_t>& seed) {
  const Model model = Model::parse(spec);
  std::vector<Element> atoms;
  if (!file.empty()) {
    json j;
    try {
      j = json::parse(io::read_file(file));
    } catch (const json::parse_error& e) {
      throw io::ParseError(std::string("malformed JSON: ") + e.what());
    }
    atoms = io::atoms_from_json(model, j);
  } else {
    if (random_k < 1) throw io::ParseError("give an atoms file or --random K with K >= 1");
    const auto s = resolve_seed(seed);
    for (int k = 0; k < random_k; ++k) {
      Rng rng = trial_rng(s, stream_id("tpmatrix.random"), static_cast<std::uint64_t>(k));
      atoms.push_back(random_atom(model, rng));
    }
  }
  std::cout << tp_matrix(model, atoms).to_csv();
  return kPass;
}

int cmd_cone(const std::string& file, const std::optional<std::uint64_t>& seed_flag, int trials) {
  const SelfDualCone cone(GeneratorCone::from_rows(io::parse_csv_rows(io::read_file(file))));
  const auto seed = resolve_seed(seed_flag);
  VerificationReport r;
  r.suite = "cone";
  r.seed = seed;
  r.trials = trials;
  r.model.kind = BackendKind::classical;  // placeholder echo; generator cones have no backend
  r.model.ambient_dim = cone.ambient_dim();
  r.model.n = static_cast<int>(cone.ambient_dim());
  r.model.info_capacity = 1;
  detail::append(r.checks, verify_cone_self_duality(cone, seed, trials));
  detail::append(r.checks, verify_moreau(cone, seed, trials));
  detail::append(r.checks, verify_tp_property(cone, seed, trials));
  detail::append(r.checks, verify_star3(cone, seed, trials));
  std::stable_sort(r.checks.begin(), r.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  json out = io::to_json(r);
  out.erase("model");
  out["generators"] = cone.generator_cone()->generators().cols();
  out["extreme_atoms"] = cone.generator_cone()->atoms().size();
  std::cout << out.dump(2) << "\n";
  return r.all_passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order unit spaces with transition probability: spectra, lattices, self-dual cones, polytope geometry"};
  app.require_subcommand(1);

  std::string spec, file, suite = "all", out, format = "json";
  std::optional<std::uint64_t> seed;
  int trials = 500, samples = 64, random_k = 0;
  std::vector<std::string> tol_kv;

  auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
  verify->add_option("model", spec, "kind:n[:p]")->required();
  verify->add_option("--suite", suite, "axioms|spectral|logic|tp|selfdual|all")->capture_default_str();
  verify->add_option("--seed", seed, "seed (default: $JORDAN_TP_SEED, else 0)");
  verify->add_option("--trials", trials, "samples per check")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol_kv, "KEY=VALUE (eig_cluster, cone_slack, check_tol)");
  verify->add_option("--out", out, "write the report here instead of stdout");
  verify->add_option("--format", format, "json|csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));

  auto* spectral = app.add_subcommand("spectral", "spectral decomposition of an element given as a JSON array");
  spectral->add_option("model", spec, "kind:n[:p]")->required();
  spectral->add_option("element", file, "JSON file")->required();

  auto* geom = app.add_subcommand("geom", "test property (**) on a polytope given by vertex rows");
  geom->add_option("vertices", file, "CSV file, one vertex per row")->required();
  geom->add_option("--tol", tol_kv, "KEY=VALUE");
  geom->add_option("--samples", samples, "random convex combinations per extreme point")->capture_default_str();
  geom->add_option("--seed", seed, "seed for the random combinations");

  auto* tpm = app.add_subcommand("tpmatrix", "transition-probability matrix as CSV");
  tpm->add_option("model", spec, "kind:n[:p]")->required();
  tpm->add_option("atoms", file, "JSON file of atoms");
  tpm->add_option("--random", random_k, "use K random atoms instead of a file");
  tpm->add_option("--seed", seed, "seed for --random");

  auto* cone = app.add_subcommand("cone", "self-dual cone checks for a cone given by generator rows");
  cone->add_option("generators", file, "CSV file, one generator per row")->required();
  cone->add_option("--seed", seed, "seed");
  cone->add_option("--trials", trials, "samples per check")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(spec, suite, seed, trials, tol_kv, out, format);
    if (*spectral) return cmd_spectral(spec, file);
    if (*geom) return cmd_geom(file, tol_kv, samples, seed);
    if (*tpm) return cmd_tpmatrix(spec, file, random_k, seed);
    if (*cone) return cmd_cone(file, seed, trials);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
