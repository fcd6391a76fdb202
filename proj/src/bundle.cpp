#include "aocgcn/bundle.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace aocgcn {

using json = nlohmann::ordered_json;

namespace {

json tensor(const Matrix& m) {
  json t;
  t["shape"] = {m.rows(), m.cols()};
  auto& data = t["data"] = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return t;
}

Matrix tensor_from(const json& t, const std::string& name) {
  try {
    const auto rows = t.at("shape").at(0).get<Eigen::Index>();
    const auto cols = t.at("shape").at(1).get<Eigen::Index>();
    const auto& data = t.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
      throw Error(ErrorCode::ShapeMismatch, name + ": data length does not match shape");
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, name + ": " + e.what());
  }
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, fmt::format("{} bundle: {}", what, e.what()));
  }
}

}  // namespace

std::string model_to_json(const GcnModel& model, const std::string& config_json, std::uint64_t seed) {
  json j;
  j["version"] = 1;
  j["kind"] = "gcn_model";
  j["layer_plan"] = model.layer_plan;
  auto& tensors = j["tensors"] = json::object();
  model.for_each([&](const std::string& name, const Matrix& m) { tensors[name] = tensor(m); });
  j["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  j["seed"] = seed;
  return j.dump() + "\n";
}

GcnModel model_from_json(const std::string& text) {
  const auto j = parse_json(text, "model");
  GcnModel model;
  try {
    if (j.at("kind") != "gcn_model") throw Error(ErrorCode::MalformedRow, "not a model bundle");
    model.layer_plan = j.at("layer_plan").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("model bundle: ") + e.what());
  }
  validate_layer_plan(model.layer_plan);
  model.layers.resize(model.layer_plan.size() - 1);
  const auto& tensors = j.at("tensors");
  model.for_each([&](const std::string& name, Matrix& m) {
    if (!tensors.contains(name)) throw Error(ErrorCode::MalformedRow, "model bundle lacks " + name);
    m = tensor_from(tensors.at(name), name);
  });
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(model.layer_plan[l]);
    const auto half = static_cast<Eigen::Index>(model.layer_plan[l + 1] / 2);
    const auto& p = model.layers[l];
    if (p.W.rows() != in || p.W.cols() != half || p.V.rows() != in || p.V.cols() != half ||
        p.bW.cols() != half || p.bV.cols() != half) {
      throw Error(ErrorCode::ShapeMismatch, fmt::format("layer {} shapes disagree with plan", l));
    }
  }
  if (model.head_W.rows() != static_cast<Eigen::Index>(2 * model.layer_plan.back()) ||
      model.head_W.cols() != 2 || model.features.cols() != static_cast<Eigen::Index>(model.layer_plan[0])) {
    throw Error(ErrorCode::ShapeMismatch, "head or feature shapes disagree with plan");
  }
  return model;
}

std::string embeddings_to_json(const EmbeddingBundle& bundle, const std::string& config_json) {
  json j;
  j["version"] = 1;
  j["kind"] = "embeddings";
  j["dimension"] = bundle.words.cols();
  j["vocab"] = {{"tokens", bundle.vocab.tokens()}, {"counts", bundle.vocab.counts()}};
  j["occupation_ids"] = bundle.occupation_ids;
  j["skill_ids"] = bundle.skill_ids;
  j["tensors"] = {{"words", tensor(bundle.words)},
                  {"documents", tensor(bundle.documents)},
                  {"skills", tensor(bundle.skills)}};
  j["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  j["seed"] = bundle.seed;
  return j.dump() + "\n";
}

EmbeddingBundle embeddings_from_json(const std::string& text) {
  const auto j = parse_json(text, "embedding");
  EmbeddingBundle b;
  try {
    if (j.at("kind") != "embeddings") throw Error(ErrorCode::MalformedRow, "not an embedding bundle");
    b.vocab = Vocabulary(j.at("vocab").at("tokens").get<std::vector<std::string>>(),
                         j.at("vocab").at("counts").get<std::vector<std::size_t>>());
    b.occupation_ids = j.at("occupation_ids").get<std::vector<std::string>>();
    b.skill_ids = j.at("skill_ids").get<std::vector<std::string>>();
    b.seed = j.at("seed").get<std::uint64_t>();
    const auto& t = j.at("tensors");
    b.words = tensor_from(t.at("words"), "words");
    b.documents = tensor_from(t.at("documents"), "documents");
    b.skills = tensor_from(t.at("skills"), "skills");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("embedding bundle: ") + e.what());
  }
  if (b.words.rows() != static_cast<Eigen::Index>(b.vocab.size()) ||
      b.documents.rows() != static_cast<Eigen::Index>(b.occupation_ids.size()) ||
      b.skills.rows() != static_cast<Eigen::Index>(b.skill_ids.size()) ||
      b.documents.cols() != b.words.cols() || b.skills.cols() != b.words.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "embedding bundle tensors disagree");
  }
  return b;
}

}  // namespace aocgcn
