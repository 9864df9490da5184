#include "ecm/io.hpp"

#include <fstream>

#include "ecm/errors.hpp"

namespace ecm::io {

namespace {

const json& field(const json& j, const char* name, const std::string& ctx) {
  const auto it = j.find(name);
  if (it == j.end())
    throw parse_error(ctx + ": missing field '" + name + "'");
  return *it;
}

int int_field(const json& j, const char* name, const std::string& ctx) {
  const json& f = field(j, name, ctx);
  if (!f.is_number_integer())
    throw parse_error(ctx + ": field '" + name + "' must be an integer");
  return f.get<int>();
}

std::vector<double> number_array(const json& j, const char* name,
                                 const std::string& ctx) {
  const json& f = field(j, name, ctx);
  if (!f.is_array())
    throw parse_error(ctx + ": field '" + name + "' must be an array");
  std::vector<double> out;
  out.reserve(f.size());
  for (const auto& x : f) {
    if (!x.is_number())
      throw parse_error(ctx + ": field '" + name + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path + ": invalid JSON: " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
}

json to_json(const Tensor& t) {
  json j;
  j["order"] = t.order();
  j["dim"] = t.dim();
  j["values"] = std::vector<double>(t.values().begin(), t.values().end());
  return j;
}

Tensor tensor_from_json(const json& j, const std::string& ctx) {
  const int order = int_field(j, "order", ctx);
  const int dim = int_field(j, "dim", ctx);
  auto values = number_array(j, "values", ctx);
  try {
    return Tensor::from_values(order, dim, std::move(values));
  } catch (const budget_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(ctx + ": " + e.what());
  }
}

json to_json(const EdgeModel& m) {
  json j;
  j["dim"] = m.dim();
  json arr = json::array();
  for (const auto& t : m.levels()) arr.push_back(to_json(t));
  j["tensors"] = arr;
  return j;
}

EdgeModel model_from_json(const json& j, const std::string& ctx) {
  const int dim = int_field(j, "dim", ctx);
  const json& arr = field(j, "tensors", ctx);
  if (!arr.is_array() || arr.empty())
    throw parse_error(ctx + ": field 'tensors' must be a non-empty array");
  std::vector<Tensor> levels;
  int k = 0;
  for (const auto& tj : arr)
    levels.push_back(tensor_from_json(tj, ctx + ": tensors[" + std::to_string(k++) + "]"));
  try {
    return {dim, std::move(levels)};
  } catch (const error& e) {
    throw parse_error(ctx + ": " + e.what());
  }
}

json to_json(const Dictionary& d) {
  json j;
  switch (d.variant()) {
    case Dictionary::Variant::finite_set: {
      j["variant"] = "finite_set";
      json arr = json::array();
      for (const auto& a : d.atoms()) arr.push_back(to_json(a));
      j["atoms"] = arr;
      break;
    }
    case Dictionary::Variant::rank_one_ball:
      j["variant"] = "rank_one_ball";
      j["order"] = d.order();
      j["dim"] = d.dim();
      j["restarts"] = d.budget().restarts;
      j["max_iter"] = d.budget().max_iter;
      break;
    case Dictionary::Variant::cut_products:
      j["variant"] = "cut_products";
      j["q"] = d.q();
      j["mu"] = d.mu();
      break;
  }
  return j;
}

Dictionary dictionary_from_json(const json& j, const std::string& ctx) {
  const json& v = field(j, "variant", ctx);
  if (!v.is_string())
    throw parse_error(ctx + ": field 'variant' must be a string");
  const std::string variant = v.get<std::string>();
  try {
    if (variant == "finite_set") {
      const json& arr = field(j, "atoms", ctx);
      if (!arr.is_array())
        throw parse_error(ctx + ": field 'atoms' must be an array");
      std::vector<Tensor> atoms;
      int i = 0;
      for (const auto& tj : arr)
        atoms.push_back(tensor_from_json(tj, ctx + ": atoms[" + std::to_string(i++) + "]"));
      return Dictionary::finite_set(std::move(atoms));
    }
    if (variant == "rank_one_ball") {
      SearchBudget budget;
      if (j.contains("restarts")) budget.restarts = int_field(j, "restarts", ctx);
      if (j.contains("max_iter")) budget.max_iter = int_field(j, "max_iter", ctx);
      return Dictionary::rank_one_ball(int_field(j, "order", ctx),
                                       int_field(j, "dim", ctx), budget);
    }
    if (variant == "cut_products") {
      return Dictionary::cut_products(int_field(j, "q", ctx),
                                      number_array(j, "mu", ctx));
    }
  } catch (const parse_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(ctx + ": " + e.what());
  }
  throw parse_error(ctx + ": unknown dictionary variant '" + variant + "'");
}

json to_json(const SimpleGraph& g) {
  json j;
  j["n_vertices"] = g.n_vertices();
  json arr = json::array();
  for (auto [u, v] : g.edges()) arr.push_back(json::array({u, v}));
  j["edges"] = arr;
  return j;
}

SimpleGraph graph_from_json(const json& j, const std::string& ctx) {
  const int n = int_field(j, "n_vertices", ctx);
  const json& arr = field(j, "edges", ctx);
  if (!arr.is_array())
    throw parse_error(ctx + ": field 'edges' must be an array");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw parse_error(ctx + ": field 'edges' must hold [u, v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return {n, std::move(edges)};
  } catch (const error& e) {
    throw parse_error(ctx + ": " + e.what());
  }
}

json to_json(const StepGraphon& w) {
  json j;
  j["q"] = w.q;
  j["mu"] = w.mu;
  json rows = json::array();
  for (int i = 0; i < w.q; ++i) {
    json row = json::array();
    for (int k = 0; k < w.q; ++k) row.push_back(w.at(i, k));
    rows.push_back(row);
  }
  j["vals"] = rows;
  return j;
}

StepGraphon graphon_from_json(const json& j, const std::string& ctx) {
  const int q = int_field(j, "q", ctx);
  auto mu = number_array(j, "mu", ctx);
  const json& rows = field(j, "vals", ctx);
  if (!rows.is_array() || static_cast<int>(rows.size()) != q)
    throw parse_error(ctx + ": field 'vals' must be a q x q array");
  std::vector<double> vals;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != q)
      throw parse_error(ctx + ": field 'vals' must be a q x q array");
    for (const auto& x : row) {
      if (!x.is_number())
        throw parse_error(ctx + ": field 'vals' must hold numbers");
      vals.push_back(x.get<double>());
    }
  }
  try {
    return {q, std::move(mu), std::move(vals)};
  } catch (const error& e) {
    throw parse_error(ctx + ": " + e.what());
  }
}

json to_json(const Decomposition& dec) {
  json j;
  j["k"] = dec.k;
  j["steps"] = dec.steps;
  j["certified"] = dec.certified;
  j["original"] = to_json(dec.original);
  json atoms = json::array();
  for (const auto& a : dec.atoms) atoms.push_back(to_json(a));
  j["atoms"] = atoms;
  j["coeffs"] = dec.coeffs;
  j["residual"] = to_json(dec.residual);
  j["energy_log"] = dec.energy_log;
  return j;
}

Decomposition decomposition_from_json(const json& j, const std::string& ctx) {
  Decomposition dec;
  dec.k = int_field(j, "k", ctx);
  dec.steps = int_field(j, "steps", ctx);
  const json& cert = field(j, "certified", ctx);
  if (!cert.is_boolean())
    throw parse_error(ctx + ": field 'certified' must be a boolean");
  dec.certified = cert.get<bool>();
  dec.original = tensor_from_json(field(j, "original", ctx), ctx + ": original");
  const json& atoms = field(j, "atoms", ctx);
  if (!atoms.is_array())
    throw parse_error(ctx + ": field 'atoms' must be an array");
  int i = 0;
  for (const auto& a : atoms)
    dec.atoms.push_back(tensor_from_json(a, ctx + ": atoms[" + std::to_string(i++) + "]"));
  dec.coeffs = number_array(j, "coeffs", ctx);
  dec.residual = tensor_from_json(field(j, "residual", ctx), ctx + ": residual");
  dec.energy_log = number_array(j, "energy_log", ctx);
  return dec;
}

Tensor load_tensor(const std::string& path) {
  return tensor_from_json(load_json_file(path), path);
}
EdgeModel load_model(const std::string& path) {
  return model_from_json(load_json_file(path), path);
}
Dictionary load_dictionary(const std::string& path) {
  return dictionary_from_json(load_json_file(path), path);
}
SimpleGraph load_graph(const std::string& path) {
  return graph_from_json(load_json_file(path), path);
}
StepGraphon load_graphon(const std::string& path) {
  return graphon_from_json(load_json_file(path), path);
}

}  // namespace ecm::io
