#ifndef ECM_IO_HPP
#define ECM_IO_HPP

#include <string>

#include <json.hpp>

#include "ecm/dictionary.hpp"
#include "ecm/graph.hpp"
#include "ecm/graphon.hpp"
#include "ecm/regularity.hpp"
#include "ecm/tensor.hpp"
#include "ecm/vertex_model.hpp"

// JSON file formats. Doubles survive a round trip bit-exactly (values are
// printed with shortest round-trip precision).
//
//   tensor      {"order": k, "dim": n, "values": [n^k numbers, row-major]}
//   model       {"dim": n, "tensors": [tensor_0 .. tensor_K]}
//   dictionary  {"variant": "finite_set",    "atoms": [tensor...]}
//               {"variant": "rank_one_ball", "order": k, "dim": n,
//                "restarts": r, "max_iter": m}
//               {"variant": "cut_products",  "q": q, "mu": [q numbers]}
//   graph       {"n_vertices": n, "edges": [[u, v]...]}
//   graphon     {"q": q, "mu": [q numbers], "vals": [[row]...]}

namespace ecm::io {

using nlohmann::json;

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

json to_json(const Tensor& t);
Tensor tensor_from_json(const json& j, const std::string& ctx);

json to_json(const EdgeModel& m);
EdgeModel model_from_json(const json& j, const std::string& ctx);

json to_json(const Dictionary& d);
Dictionary dictionary_from_json(const json& j, const std::string& ctx);

json to_json(const SimpleGraph& g);
SimpleGraph graph_from_json(const json& j, const std::string& ctx);

json to_json(const StepGraphon& w);
StepGraphon graphon_from_json(const json& j, const std::string& ctx);

json to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const json& j, const std::string& ctx);

Tensor load_tensor(const std::string& path);
EdgeModel load_model(const std::string& path);
Dictionary load_dictionary(const std::string& path);
SimpleGraph load_graph(const std::string& path);
StepGraphon load_graphon(const std::string& path);

}  // namespace ecm::io

#endif
