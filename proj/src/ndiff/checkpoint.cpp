#include "beat/ndiff/checkpoint.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <nlohmann/json.hpp>

namespace beat::ndiff {

std::string checkpoint_to_json(const ParameterSet& params, std::uint64_t seed) {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["params"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < params.count(); ++k) {
    const Parameter& p = params[k];
    nlohmann::ordered_json entry;
    entry["name"] = p.name;
    entry["shape"] = p.value.shape();
    entry["values"] = p.value.values();
    doc["params"].push_back(std::move(entry));
  }
  return doc.dump() + "\n";
}

std::uint64_t load_checkpoint_json(const std::string& text, ParameterSet& params) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  if (!doc.contains("params") || !doc["params"].is_array()) throw ParseError("checkpoint: missing params array");
  std::size_t loaded = 0;
  for (const auto& entry : doc["params"]) {
    const std::string name = entry.at("name").get<std::string>();
    Parameter* p = params.find(name);
    if (p == nullptr) throw DataMismatch("checkpoint: unknown parameter " + name);
    const auto shape = entry.at("shape").get<Shape>();
    if (shape != p->value.shape()) {
      throw DataMismatch("checkpoint: parameter " + name + " has shape " + shape_string(shape) + ", model expects " +
                         shape_string(p->value.shape()));
    }
    auto values = entry.at("values").get<std::vector<double>>();
    p->value = Tensor(shape, std::move(values));
    ++loaded;
  }
  if (loaded != params.count()) {
    throw DataMismatch("checkpoint: holds " + std::to_string(loaded) + " parameters, model has " +
                       std::to_string(params.count()));
  }
  return doc.value("seed", std::uint64_t{0});
}

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params, std::uint64_t seed) {
  write_text_file(path, checkpoint_to_json(params, seed));
}

std::uint64_t load_checkpoint(const std::filesystem::path& path, ParameterSet& params) {
  return load_checkpoint_json(read_text_file(path), params);
}

}  // namespace beat::ndiff
