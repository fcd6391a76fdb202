#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/corpus.hpp"
#include "aocgcn/gcn.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aocgcn {

// Tensors are serialized as {"shape": [rows, cols], "data": [row-major]}
// with round-trip double precision.

// `config_json` is embedded verbatim as the "config" member (must be JSON).
std::string model_to_json(const GcnModel& model, const std::string& config_json, std::uint64_t seed);
GcnModel model_from_json(const std::string& text);

struct EmbeddingBundle {
  Vocabulary vocab;
  Matrix words;      // V x d
  Matrix documents;  // one row per occupation in `occupation_ids` order
  Matrix skills;     // one row per skill in `skill_ids` order
  std::vector<std::string> occupation_ids;
  std::vector<std::string> skill_ids;
  std::uint64_t seed = 0;
};

std::string embeddings_to_json(const EmbeddingBundle& bundle, const std::string& config_json);
EmbeddingBundle embeddings_from_json(const std::string& text);

}  // namespace aocgcn
