// ecmlab: partition functions of edge-colouring models, step-graphon
// densities, cut seminorms, greedy regularity decompositions and orbit
// distances, over JSON files.
//
// Exit codes: 0 ok, 2 parse error, 3 budget exceeded, 4 precondition
// violation, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ecm/config.hpp"
#include "ecm/dictionary.hpp"
#include "ecm/errors.hpp"
#include "ecm/experiment.hpp"
#include "ecm/graphon.hpp"
#include "ecm/io.hpp"
#include "ecm/kernels.hpp"
#include "ecm/orbit.hpp"
#include "ecm/regularity.hpp"
#include "ecm/vertex_model.hpp"

using nlohmann::json;

namespace {

struct Common {
  std::optional<std::string> config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::optional<std::string> out;
  double tol = ecm::Tolerances::defaults().abs_eq;
  bool tol_set = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config file; explicit flags win");
  cmd->add_option("--seed", c.seed, "random seed recorded in the output")
      ->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_option("--out", c.out, "output file path");
  cmd->add_option("--tol", c.tol, "tolerance for the report's pass/fail checks")
      ->each([&c](const std::string&) { c.tol_set = true; });
  cmd->add_flag("-v,--verbose", c.verbose, "extra detail in the output");
}

// config file fallback: fill any option the command line left untouched
json load_config(const Common& c) {
  if (!c.config.has_value()) return json::object();
  const json j = ecm::io::load_json_file(*c.config);
  if (!j.is_object())
    throw ecm::parse_error(*c.config + ": config must be a JSON object");
  return j;
}

template <typename T>
void fallback(const json& cfg, const char* key, std::optional<T>& slot) {
  if (!slot.has_value() && cfg.contains(key)) slot = cfg.at(key).get<T>();
}

void fallback_seed(const json& cfg, Common& c) {
  if (!c.seed_set && cfg.contains("seed"))
    c.seed = cfg.at("seed").get<std::uint64_t>();
}

void fallback_tol(const json& cfg, Common& c) {
  if (!c.tol_set && cfg.contains("tol")) c.tol = cfg.at("tol").get<double>();
}

json tolerances_json(const Common& c) {
  const auto& t = ecm::Tolerances::defaults();
  json j;
  j["abs_eq"] = t.abs_eq;
  j["rel_engine"] = t.rel_engine;
  j["stop_slack"] = t.stop_slack;
  j["ball"] = t.ball;
  j["orthogonality"] = t.orthogonality;
  j["measure_sum"] = t.measure_sum;
  j["eigen_offdiag"] = t.eigen_offdiag;
  j["als"] = t.als;
  j["budget_values"] = t.budget_values;
  j["budget_enum"] = t.budget_enum;
  j["report_tol"] = c.tol;  // the knob --tol turns
  return j;
}

void emit(const Common& c, json out) {
  out["seed"] = c.seed;
  out["tolerances"] = tolerances_json(c);
  std::cout << out.dump(2) << '\n';
}

std::vector<int> mask_to_blocks(std::uint32_t mask, int q) {
  std::vector<int> out;
  for (int i = 0; i < q; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

// ---- subcommand bodies -------------------------------------------------

int run_decompose(Common& c, std::optional<std::string> tensor_path,
                  std::optional<std::string> dict_path, std::optional<int> k) {
  const json cfg = load_config(c);
  fallback(cfg, "tensor", tensor_path);
  fallback(cfg, "dict", dict_path);
  fallback(cfg, "k", k);
  fallback_seed(cfg, c);
  fallback_tol(cfg, c);
  if (!tensor_path || !dict_path || !k)
    throw ecm::precondition_error("decompose needs --tensor, --dict and --k");

  const ecm::Tensor a = ecm::io::load_tensor(*tensor_path);
  const ecm::Dictionary dict = ecm::io::load_dictionary(*dict_path);
  const auto dec = ecm::greedy_decompose(a, dict, *k);
  const auto rep = ecm::verify_energy_identity(dec, dict);

  json out;
  out["k"] = dec.k;
  out["steps"] = dec.steps;
  out["certified"] = dec.certified;
  out["energy_log"] = dec.energy_log;
  out["coeffs"] = dec.coeffs;
  out["q_k_membership"] = ecm::q_k_membership(dec);
  json verify;
  verify["max_identity_violation"] = rep.max_identity_violation;
  verify["max_coeff_mismatch"] = rep.max_coeff_mismatch;
  verify["max_energy_log_error"] = rep.max_energy_log_error;
  verify["chained_bound_ok"] = rep.chained_bound_ok;
  verify["max_chain_excess"] = rep.max_chain_excess;
  verify["residual_seminorm"] = rep.residual_seminorm;
  verify["residual_certified"] = rep.residual_certified;
  verify["pass"] = rep.pass(c.tol);
  out["verify"] = verify;
  if (c.out.has_value()) {
    ecm::io::save_json_file(*c.out, ecm::io::to_json(dec));
    out["decomposition_file"] = *c.out;
  } else {
    out["decomposition"] = ecm::io::to_json(dec);
  }
  emit(c, std::move(out));
  return 0;
}

int run_pf(Common& c, std::optional<std::string> model_path,
           std::optional<std::string> graph_path,
           std::optional<std::string> engine) {
  const json cfg = load_config(c);
  fallback(cfg, "model", model_path);
  fallback(cfg, "graph", graph_path);
  fallback(cfg, "engine", engine);
  fallback_seed(cfg, c);
  fallback_tol(cfg, c);
  if (!model_path || !graph_path)
    throw ecm::precondition_error("pf needs --model and --graph");
  const std::string eng = engine.value_or("contract");
  if (eng != "brute" && eng != "contract")
    throw ecm::precondition_error("engine must be 'brute' or 'contract'");

  const ecm::EdgeModel model = ecm::io::load_model(*model_path);
  const ecm::SimpleGraph graph = ecm::io::load_graph(*graph_path);
  const double value = ecm::partition_function(
      model, graph, eng == "brute" ? ecm::Engine::brute : ecm::Engine::contract);

  json out;
  out["value"] = value;
  out["engine"] = eng;
  out["kernel_backend"] = ecm::kernels::active_backend();
  if (c.verbose) out["contraction_order"] = ecm::contraction_order(graph);
  if (c.out.has_value()) ecm::io::save_json_file(*c.out, out);
  emit(c, std::move(out));
  return 0;
}

int run_tau(Common& c, std::optional<std::string> graphon_path,
            std::optional<std::string> graph_path) {
  const json cfg = load_config(c);
  fallback(cfg, "graphon", graphon_path);
  fallback(cfg, "graph", graph_path);
  fallback_seed(cfg, c);
  if (!graphon_path || !graph_path)
    throw ecm::precondition_error("tau needs --graphon and --graph");
  const ecm::StepGraphon w = ecm::io::load_graphon(*graphon_path);
  const ecm::SimpleGraph f = ecm::io::load_graph(*graph_path);
  json out;
  out["value"] = ecm::tau(w, f);
  if (c.out.has_value()) ecm::io::save_json_file(*c.out, out);
  emit(c, std::move(out));
  return 0;
}

int run_cutnorm(Common& c, std::optional<std::string> graphon_path) {
  const json cfg = load_config(c);
  fallback(cfg, "graphon", graphon_path);
  fallback_seed(cfg, c);
  if (!graphon_path) throw ecm::precondition_error("cutnorm needs --graphon");
  const ecm::StepGraphon w = ecm::io::load_graphon(*graphon_path);
  const auto sv = ecm::cut_seminorm(w);
  json out;
  out["value"] = sv.value;
  out["kind"] =
      sv.kind == ecm::SeminormValue::Kind::exact ? "exact" : "lower_bound";
  out["witness_s"] = mask_to_blocks(sv.cut_s, w.q);
  out["witness_t"] = mask_to_blocks(sv.cut_t, w.q);
  if (c.out.has_value()) ecm::io::save_json_file(*c.out, out);
  emit(c, std::move(out));
  return 0;
}

int run_cutdist(Common& c, std::optional<std::string> g1,
                std::optional<std::string> g2) {
  const json cfg = load_config(c);
  fallback(cfg, "graphon", g1);
  fallback(cfg, "graphon2", g2);
  fallback_seed(cfg, c);
  if (!g1 || !g2)
    throw ecm::precondition_error("cutdist needs --graphon and --graphon2");
  const auto w1 = ecm::io::load_graphon(*g1);
  const auto w2 = ecm::io::load_graphon(*g2);
  const auto d = ecm::cut_distance_aligned(w1, w2);
  json out;
  out["value"] = d.value;
  out["kind"] = "upper_bound_on_orbit_distance";
  out["permutation"] = d.permutation;
  if (c.out.has_value()) ecm::io::save_json_file(*c.out, out);
  emit(c, std::move(out));
  return 0;
}

int run_orbitdist(Common& c, std::optional<std::string> x_path,
                  std::optional<std::string> y_path,
                  std::optional<std::string> model_x,
                  std::optional<std::string> model_y,
                  std::optional<std::string> group,
                  std::optional<std::string> metric,
                  std::optional<std::string> dict_path,
                  std::optional<int> samples, std::optional<int> refine) {
  const json cfg = load_config(c);
  fallback(cfg, "tensor", x_path);
  fallback(cfg, "tensor2", y_path);
  fallback(cfg, "model", model_x);
  fallback(cfg, "model2", model_y);
  fallback(cfg, "group", group);
  fallback(cfg, "metric", metric);
  fallback(cfg, "dict", dict_path);
  fallback(cfg, "samples", samples);
  fallback(cfg, "refine", refine);
  fallback_seed(cfg, c);

  const bool tensors = x_path.has_value() || y_path.has_value();
  const bool models = model_x.has_value() || model_y.has_value();
  if (tensors == models)
    throw ecm::precondition_error(
        "orbitdist needs either --tensor/--tensor2 or --model/--model2");
  if (tensors && (!x_path || !y_path))
    throw ecm::precondition_error("orbitdist needs both --tensor and --tensor2");
  if (models && (!model_x || !model_y))
    throw ecm::precondition_error("orbitdist needs both --model and --model2");

  const std::string group_name = group.value_or("permutations");
  ecm::GroupSpec spec;
  if (group_name == "permutations")
    spec.variant = ecm::GroupSpec::Variant::permutations;
  else if (group_name == "signed_permutations")
    spec.variant = ecm::GroupSpec::Variant::signed_permutations;
  else if (group_name == "sampled_orthogonal")
    spec.variant = ecm::GroupSpec::Variant::sampled_orthogonal;
  else
    throw ecm::precondition_error("unknown group variant '" + group_name + "'");
  spec.seed = c.seed;
  if (samples) spec.sample_count = *samples;
  if (refine) spec.refine_steps = *refine;

  const std::string metric_name = metric.value_or("hilbert");
  ecm::OrbitDistance d;
  if (tensors) {
    const auto x = ecm::io::load_tensor(*x_path);
    const auto y = ecm::io::load_tensor(*y_path);
    spec.n = x.dim();
    ecm::OrbitMetric m = ecm::OrbitMetric::hilbert();
    if (metric_name == "seminorm") {
      if (!dict_path)
        throw ecm::precondition_error("metric 'seminorm' needs --dict");
      m = ecm::OrbitMetric::seminorm_metric(ecm::io::load_dictionary(*dict_path));
    } else if (metric_name != "hilbert") {
      throw ecm::precondition_error("metric must be 'hilbert' or 'seminorm'");
    }
    d = ecm::orbit_distance(x, y, spec, m);
  } else {
    const auto mx = ecm::io::load_model(*model_x);
    const auto my = ecm::io::load_model(*model_y);
    spec.n = mx.dim();
    ecm::OrbitMetric m = ecm::OrbitMetric::hilbert();
    if (metric_name == "seminorm") {
      // rank-one-ball dictionary at every level
      std::map<int, ecm::Dictionary> dicts;
      for (int k = 1; k <= mx.max_order(); ++k)
        dicts.emplace(k, ecm::Dictionary::rank_one_ball(k, mx.dim()));
      m = ecm::OrbitMetric::seminorm_per_order(std::move(dicts));
    } else if (metric_name != "hilbert") {
      throw ecm::precondition_error("metric must be 'hilbert' or 'seminorm'");
    }
    d = ecm::orbit_distance(mx, my, spec, m);
  }

  json out;
  out["value"] = d.value;
  out["kind"] =
      d.kind == ecm::OrbitDistance::Kind::exact ? "exact" : "upper_bound";
  out["group"] = group_name;
  out["metric"] = metric_name;
  if (c.verbose) out["witness"] = d.witness;
  if (c.out.has_value()) ecm::io::save_json_file(*c.out, out);
  emit(c, std::move(out));
  return 0;
}

int run_converge(Common& c, std::optional<std::string> family,
                 std::optional<std::string> model_path,
                 std::vector<std::string> graph_paths, std::optional<int> i_max,
                 std::optional<double> noise_scale) {
  const json cfg = load_config(c);
  fallback(cfg, "family", family);
  fallback(cfg, "model", model_path);
  fallback(cfg, "imax", i_max);
  fallback(cfg, "noise_scale", noise_scale);
  if (graph_paths.empty() && cfg.contains("graphs"))
    graph_paths = cfg.at("graphs").get<std::vector<std::string>>();
  fallback_seed(cfg, c);
  fallback_tol(cfg, c);
  if (!family) throw ecm::precondition_error("converge needs --family a|b|c");
  if (graph_paths.empty())
    throw ecm::precondition_error("converge needs --graph files");
  if (!c.out) throw ecm::precondition_error("converge needs --out <prefix>");

  ecm::ConvergeSpec spec;
  if (*family == "a")
    spec.family = ecm::ConvergeSpec::Family::perturb;
  else if (*family == "b")
    spec.family = ecm::ConvergeSpec::Family::embed;
  else if (*family == "c")
    spec.family = ecm::ConvergeSpec::Family::sample;
  else
    throw ecm::precondition_error("family must be one of a, b, c");
  spec.i_max = i_max.value_or(8);
  spec.seed = c.seed;
  if (noise_scale) spec.noise_scale = *noise_scale;
  if (spec.family != ecm::ConvergeSpec::Family::sample) {
    if (!model_path)
      throw ecm::precondition_error("families a and b need --model");
    spec.base = ecm::io::load_model(*model_path);
  }
  for (const auto& p : graph_paths) {
    spec.graphs.push_back(ecm::io::load_graph(p));
    auto name = p;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
      name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
      name = name.substr(0, dot);
    spec.graph_names.push_back(name);
  }

  const auto rep = ecm::converge_models(spec);

  // assemble everything before touching the filesystem
  const std::string csv = ecm::convergence_csv(rep);
  json summary;
  summary["family"] = *family;
  summary["i_max"] = spec.i_max;
  summary["graph_names"] = rep.graph_names;
  summary["limit_values"] = rep.limit_values;
  summary["tail_start"] = rep.tail_start;
  summary["tail_oscillation"] = rep.tail_oscillation;
  summary["bounds_certified"] = rep.bounds_certified;
  summary["bounds_hold"] = rep.bounds_hold;
  summary["rows"] = rep.rows.size();
  summary["seed"] = c.seed;
  summary["tolerances"] = tolerances_json(c);

  std::ofstream csv_file(*c.out + ".csv");
  if (!csv_file) throw ecm::error(*c.out + ".csv: cannot open for writing");
  csv_file << csv;
  csv_file.close();
  ecm::io::save_json_file(*c.out + ".json", summary);

  json out;
  out["csv"] = *c.out + ".csv";
  out["summary"] = *c.out + ".json";
  out["bounds_hold"] = rep.bounds_hold;
  emit(c, std::move(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-colouring model laboratory"};
  app.require_subcommand(1);

  Common c_dec, c_pf, c_tau, c_cutnorm, c_cutdist, c_orbit, c_conv;

  auto* dec = app.add_subcommand("decompose", "greedy dictionary decomposition");
  std::optional<std::string> dec_tensor, dec_dict;
  std::optional<int> dec_k;
  dec->add_option("--tensor", dec_tensor, "input tensor file");
  dec->add_option("--dict", dec_dict, "dictionary file");
  dec->add_option("-k,--k", dec_k, "number of allowed atoms");
  add_common(dec, c_dec);

  auto* pf =
      app.add_subcommand("pf", "partition function of an edge-colouring model");
  std::optional<std::string> pf_model, pf_graph, pf_engine;
  pf->add_option("--model", pf_model, "edge model file");
  pf->add_option("--graph", pf_graph, "graph file");
  pf->add_option("--engine", pf_engine, "brute or contract");
  add_common(pf, c_pf);

  auto* tau_cmd =
      app.add_subcommand("tau", "homomorphism density of a step graphon");
  std::optional<std::string> tau_graphon, tau_graph;
  tau_cmd->add_option("--graphon", tau_graphon, "step graphon file");
  tau_cmd->add_option("--graph", tau_graph, "graph file");
  add_common(tau_cmd, c_tau);

  auto* cutnorm = app.add_subcommand("cutnorm", "cut seminorm of a step graphon");
  std::optional<std::string> cutnorm_graphon;
  cutnorm->add_option("--graphon", cutnorm_graphon, "step graphon file");
  add_common(cutnorm, c_cutnorm);

  auto* cutdist =
      app.add_subcommand("cutdist", "aligned cut distance of two step graphons");
  std::optional<std::string> cd_g1, cd_g2;
  cutdist->add_option("--graphon", cd_g1, "first step graphon file");
  cutdist->add_option("--graphon2", cd_g2, "second step graphon file");
  add_common(cutdist, c_cutdist);

  auto* orbit =
      app.add_subcommand("orbitdist", "quotient distance under a group action");
  std::optional<std::string> ob_x, ob_y, ob_mx, ob_my, ob_group, ob_metric, ob_dict;
  std::optional<int> ob_samples, ob_refine;
  orbit->add_option("--tensor", ob_x, "first tensor file");
  orbit->add_option("--tensor2", ob_y, "second tensor file");
  orbit->add_option("--model", ob_mx, "first model file");
  orbit->add_option("--model2", ob_my, "second model file");
  orbit->add_option("--group", ob_group,
                    "permutations | signed_permutations | sampled_orthogonal");
  orbit->add_option("--metric", ob_metric, "hilbert | seminorm");
  orbit->add_option("--dict", ob_dict, "dictionary file for the seminorm metric");
  orbit->add_option("--samples", ob_samples, "sample count for sampled_orthogonal");
  orbit->add_option("--refine", ob_refine, "refinement steps per sample");
  add_common(orbit, c_orbit);

  auto* conv = app.add_subcommand("converge", "limit behaviour of a model family");
  std::optional<std::string> cv_family, cv_model;
  std::vector<std::string> cv_graphs;
  std::optional<int> cv_imax;
  std::optional<double> cv_noise;
  conv->add_option("--family", cv_family,
                   "a (perturb) | b (embed) | c (sampled graphs)");
  conv->add_option("--model", cv_model, "base model for families a and b");
  conv->add_option("--graph", cv_graphs, "graph file (repeatable)");
  conv->add_option("--imax", cv_imax, "last index of the family");
  conv->add_option("--noise-scale", cv_noise, "noise amplitude for family a");
  add_common(conv, c_conv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed()) return run_decompose(c_dec, dec_tensor, dec_dict, dec_k);
    if (pf->parsed()) return run_pf(c_pf, pf_model, pf_graph, pf_engine);
    if (tau_cmd->parsed()) return run_tau(c_tau, tau_graphon, tau_graph);
    if (cutnorm->parsed()) return run_cutnorm(c_cutnorm, cutnorm_graphon);
    if (cutdist->parsed()) return run_cutdist(c_cutdist, cd_g1, cd_g2);
    if (orbit->parsed())
      return run_orbitdist(c_orbit, ob_x, ob_y, ob_mx, ob_my, ob_group,
                           ob_metric, ob_dict, ob_samples, ob_refine);
    if (conv->parsed())
      return run_converge(c_conv, cv_family, cv_model, cv_graphs, cv_imax,
                          cv_noise);
  } catch (const ecm::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ecm::budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ecm::precondition_error& e) {
    std::cerr << "precondition violation: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
