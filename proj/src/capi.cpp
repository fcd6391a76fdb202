#include "aocgcn/aocgcn.h"

#include "aocgcn/bundle.hpp"
#include "aocgcn/config.hpp"
#include "aocgcn/csv.hpp"
#include "aocgcn/pipeline.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

struct aoc_config {
  aocgcn::RunConfig cfg;
};
struct aoc_corpus {
  aocgcn::Corpus corpus;
};
struct aoc_graph {
  aocgcn::BipartiteGraph graph;
};
struct aoc_model {
  aocgcn::GcnModel model;
};

namespace {

thread_local std::string g_last_error;

aoc_status fail(aocgcn::ErrorCode code, const std::string& detail) {
  const aocgcn::Error e(code, detail);
  g_last_error = e.reason();
  return static_cast<aoc_status>(aocgcn::error_class(code));
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
aoc_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return AOC_OK;
  } catch (const aocgcn::Error& e) {
    g_last_error = e.reason();
    return static_cast<aoc_status>(aocgcn::error_class(e.code()));
  } catch (const std::bad_alloc&) {
    return fail(aocgcn::ErrorCode::IoError, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(aocgcn::ErrorCode::IoError, e.what());
  } catch (const std::exception& e) {
    return fail(aocgcn::ErrorCode::IoError, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw aocgcn::Error(aocgcn::ErrorCode::Usage, std::string(what) + " is NULL");
}

void copy_out(const std::string& text, char* buffer, std::size_t capacity, std::size_t* needed) {
  if (needed) *needed = text.size();
  if (buffer && capacity > 0) {
    const auto n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
  }
}

}  // namespace

extern "C" {

const char* aoc_version(void) { return AOCGCN_VERSION; }

const char* aoc_last_error(void) { return g_last_error.c_str(); }

aoc_status aoc_config_new(aoc_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new aoc_config{};
  });
}

aoc_status aoc_config_load(const char* path, aoc_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new aoc_config{aocgcn::load_config(path)};
  });
}

aoc_status aoc_config_set(aoc_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    aocgcn::set_config_value(config->cfg, key, value);
  });
}

aoc_status aoc_config_to_ini(const aoc_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(config, "config");
    copy_out(aocgcn::config_to_ini(config->cfg), buffer, capacity, needed);
  });
}

void aoc_config_free(aoc_config* config) { delete config; }

size_t aoc_stage_count(void) { return aocgcn::stage_names().size(); }

const char* aoc_stage_name(size_t index) {
  const auto& names = aocgcn::stage_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int aoc_is_stage(const char* name) { return name && aocgcn::is_stage(name) ? 1 : 0; }

aoc_status aoc_stage_run(const aoc_config* config, const char* stage, char* summary, size_t capacity,
                         size_t* needed) {
  return guarded([&] {
    require(config, "config");
    require(stage, "stage");
    const auto outcome = aocgcn::run_stage(stage, config->cfg);
    copy_out(outcome.summary, summary, capacity, needed);
  });
}

aoc_status aoc_corpus_load(const char* data_dir, aoc_corpus** out) {
  return guarded([&] {
    require(data_dir, "data_dir");
    require(out, "out");
    *out = nullptr;
    *out = new aoc_corpus{aocgcn::load_corpus(aocgcn::CorpusPaths::in_directory(data_dir))};
  });
}

aoc_status aoc_corpus_counts(const aoc_corpus* corpus, size_t* occupations, size_t* skills, size_t* links,
                             size_t* labels) {
  return guarded([&] {
    require(corpus, "corpus");
    if (occupations) *occupations = corpus->corpus.occupations.size();
    if (skills) *skills = corpus->corpus.skills.size();
    if (links) *links = corpus->corpus.links.size();
    if (labels) *labels = corpus->corpus.labels.size();
  });
}

void aoc_corpus_free(aoc_corpus* corpus) { delete corpus; }

aoc_status aoc_graph_load(const aoc_config* config, aoc_graph** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    const auto& cfg = config->cfg;
    const auto path = cfg.out_dir / "embed" / "embeddings.json";
    if (!std::filesystem::exists(path)) {
      throw aocgcn::Error(aocgcn::ErrorCode::MissingArtifact, path.string() + " not found; run `embed` first");
    }
    const auto corpus = aocgcn::load_run_corpus(cfg);
    const auto bundle = aocgcn::embeddings_from_json(aocgcn::csv::read_text(path));
    *out = new aoc_graph{aocgcn::graph_from(corpus, bundle, cfg)};
  });
}

aoc_status aoc_graph_counts(const aoc_graph* graph, size_t* occupations, size_t* skills, size_t* edges) {
  return guarded([&] {
    require(graph, "graph");
    if (occupations) *occupations = graph->graph.num_occupations();
    if (skills) *skills = graph->graph.num_skills();
    if (edges) *edges = graph->graph.num_edges();
  });
}

const char* aoc_graph_occupation(const aoc_graph* graph, size_t index) {
  if (!graph || index >= graph->graph.num_occupations()) return nullptr;
  return graph->graph.occupation_ids()[index].c_str();
}

void aoc_graph_free(aoc_graph* graph) { delete graph; }

aoc_status aoc_model_load(const char* path, aoc_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new aoc_model{aocgcn::model_from_json(aocgcn::csv::read_text(path))};
  });
}

aoc_status aoc_model_predict(const aoc_model* model, const aoc_graph* graph, double* probabilities,
                             size_t capacity, size_t* count) {
  return guarded([&] {
    require(model, "model");
    require(graph, "graph");
    if (model->model.features.rows() != static_cast<Eigen::Index>(graph->graph.num_nodes())) {
      throw aocgcn::Error(aocgcn::ErrorCode::ShapeMismatch, "model and graph node counts differ");
    }
    const auto p = aocgcn::predict(model->model, graph->graph);
    if (count) *count = p.size();
    if (probabilities) {
      if (capacity < p.size()) {
        throw aocgcn::Error(aocgcn::ErrorCode::Usage,
                            "buffer holds " + std::to_string(capacity) + ", need " + std::to_string(p.size()));
      }
      std::copy(p.begin(), p.end(), probabilities);
    }
  });
}

void aoc_model_free(aoc_model* model) { delete model; }

}  // extern "C"
