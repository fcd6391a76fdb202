#include "aocgcn/pipeline.hpp"

#include "aocgcn/baseline.hpp"
#include "aocgcn/csv.hpp"
#include "aocgcn/embed.hpp"
#include "aocgcn/viz.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace aocgcn {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string hex_digest(EVP_MD_CTX* ctx) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

struct DigestCtx {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  DigestCtx() {
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorCode::IoError, "sha256 unavailable");
    }
  }
  ~DigestCtx() { EVP_MD_CTX_free(ctx); }
};

}  // namespace

std::string sha256_text(const std::string& text) {
  DigestCtx d;
  EVP_DigestUpdate(d.ctx, text.data(), text.size());
  return hex_digest(d.ctx);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  DigestCtx d;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(d.ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  return hex_digest(d.ctx);
}

Corpus load_run_corpus(const RunConfig& cfg) {
  if (!fs::is_directory(cfg.data_dir)) {
    throw Error(ErrorCode::MissingFile, "data directory " + cfg.data_dir.string());
  }
  return load_corpus(CorpusPaths::in_directory(cfg.data_dir));
}

Embeddings compute_embeddings(const Corpus& corpus, const EmbedConfig& cfg, const fs::path& pretrained) {
  cfg.validate();
  const auto sequences = task_sequences(corpus.occupations);
  const auto vocab = build_vocabulary(sequences, cfg.min_count);
  EncodedCorpus encoded;
  encoded.reserve(sequences.size());
  for (const auto& s : sequences) encoded.push_back(vocab.encode(s));

  Embeddings out;
  WordEmbeddingTable init;
  if (!pretrained.empty()) {
    auto loaded = load_pretrained(pretrained, vocab, cfg.dimension, cfg.seed);
    out.pretrained_coverage = loaded.coverage;
    init = std::move(loaded.table);
  } else {
    init = random_table(vocab, cfg.dimension, cfg.seed);
  }
  auto words = train_word2vec(encoded, vocab, init, cfg);

  std::vector<EncodedCorpus> documents;
  documents.reserve(corpus.occupations.size());
  std::size_t k = 0;
  for (const auto& occ : corpus.occupations) {
    EncodedCorpus doc;
    for (std::size_t t = 0; t < occ.task_statements.size(); ++t) doc.push_back(encoded[k++]);
    documents.push_back(std::move(doc));
  }
  auto docs = train_doc2vec(documents, vocab, words.table, cfg);
  auto skills = skill_features(corpus.skills, words.table, vocab, cfg.fusion);

  out.bundle.vocab = vocab;
  out.bundle.words = words.table.vectors;
  out.bundle.documents = docs.table.vectors;
  out.bundle.skills = skills.features;
  for (const auto& o : corpus.occupations) out.bundle.occupation_ids.push_back(o.soc_code);
  for (const auto& s : corpus.skills) out.bundle.skill_ids.push_back(s.skill_id);
  out.bundle.seed = cfg.seed;
  out.word_stats = words.stats;
  out.doc_stats = docs.stats;
  out.unresolved_skills = skills.unresolved;
  return out;
}

namespace {

Matrix unit_rows_of(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double n = out.row(r).norm();
    if (n > 0.0) out.row(r) /= n;
  }
  return out;
}

}  // namespace

BipartiteGraph graph_from(const Corpus& corpus, const EmbeddingBundle& bundle, IsolatedPolicy policy,
                          bool unit_rows) {
  bool aligned = bundle.occupation_ids.size() == corpus.occupations.size() &&
                 bundle.skill_ids.size() == corpus.skills.size();
  for (std::size_t i = 0; aligned && i < corpus.occupations.size(); ++i) {
    aligned = bundle.occupation_ids[i] == corpus.occupations[i].soc_code;
  }
  for (std::size_t i = 0; aligned && i < corpus.skills.size(); ++i) {
    aligned = bundle.skill_ids[i] == corpus.skills[i].skill_id;
  }
  if (!aligned) {
    throw Error(ErrorCode::MissingArtifact, "embedding bundle does not match the corpus; re-run embed");
  }
  if (!unit_rows) {
    return build_graph(corpus.occupations, corpus.skills, corpus.links, bundle.documents, bundle.skills, policy);
  }
  return build_graph(corpus.occupations, corpus.skills, corpus.links, unit_rows_of(bundle.documents),
                     unit_rows_of(bundle.skills), policy);
}

BipartiteGraph graph_from(const Corpus& corpus, const EmbeddingBundle& bundle, const RunConfig& cfg) {
  return graph_from(corpus, bundle, cfg.isolated, cfg.unit_features);
}

LabelSet label_set(const Corpus& corpus, const BipartiteGraph& graph) {
  LabelSet ls;
  ls.labels.assign(graph.num_occupations(), -1);
  for (const auto& l : corpus.labels) {
    const auto i = graph.occupation_index(l.soc_code);
    if (i == BipartiteGraph::npos) continue;  // dropped as isolated
    ls.labels[i] = static_cast<int>(l.label);
  }
  for (std::size_t i = 0; i < ls.labels.size(); ++i) {
    if (ls.labels[i] < 0) continue;
    ls.labeled.push_back(i);
    ls.classes.push_back(ls.labels[i]);
  }
  return ls;
}

ModelRun train_model(const BipartiteGraph& graph, const LabelSet& labels, const std::vector<std::size_t>& plan,
                     const TrainConfig& train_cfg, std::uint64_t split_seed, std::uint64_t init_seed) {
  ModelRun run;
  run.split = split_labels(labels.labeled, labels.classes, split_seed);
  auto model = init_model(plan, graph.features(), init_seed);
  auto cfg = train_cfg;
  cfg.seed = init_seed;
  run.result = train(model, graph, labels.labels, run.split, cfg);
  return run;
}

namespace {

std::vector<int> truths_of(const LabelSet& labels, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  for (auto r : rows) out.push_back(labels.labels.at(r));
  return out;
}

EvaluationRow make_row(const std::string& name, const std::vector<int>& predicted, const std::vector<int>& truth) {
  EvaluationRow row{name, confusion(predicted, truth), {}};
  row.metrics = metrics(row.counts);
  return row;
}

}  // namespace

std::vector<EvaluationRow> evaluate_models(const BipartiteGraph& graph, const LabelSet& labels, const Split& split,
                                           const GcnModel& model, const RunConfig& cfg) {
  const auto truth = truths_of(labels, split.test);
  std::vector<EvaluationRow> rows;

  const auto fwd = forward(model, graph);
  rows.push_back(make_row("AOC-GCN", argmax_classes(fwd.probabilities, split.test), truth));

  const auto train_fm = build_feature_matrix(graph, split.train);
  const auto test_fm = build_feature_matrix(graph, split.test);
  const auto train_y = truths_of(labels, split.train);

  TreeOptions tree;
  tree.max_depth = cfg.dt_max_depth;
  rows.push_back(make_row("DecisionTree", train_decision_tree(train_fm.rows, train_y, tree).predict(test_fm.rows), truth));

  ForestOptions forest;
  forest.n_trees = cfg.rf_trees;
  forest.seed = cfg.baseline_seed();
  rows.push_back(
      make_row("RandomForest", train_random_forest(train_fm.rows, train_y, forest).predict(test_fm.rows), truth));

  rows.push_back(
      make_row("AdaBoost", train_adaboost(train_fm.rows, train_y, cfg.ada_rounds).predict(test_fm.rows), truth));
  return rows;
}

std::string metrics_csv(const std::vector<EvaluationRow>& rows, std::uint64_t seed) {
  std::string out = csv::format_row({"model", "accuracy", "precision", "recall", "f1", "seed"});
  for (const auto& r : rows) {
    out += csv::format_row({r.model, fmt::format("{:.6f}", r.metrics.accuracy), fmt::format("{:.6f}", r.metrics.precision),
                            fmt::format("{:.6f}", r.metrics.recall), fmt::format("{:.6f}", r.metrics.f1),
                            std::to_string(seed)});
  }
  return out;
}

std::string metrics_table(const std::vector<EvaluationRow>& rows) {
  std::string out = fmt::format("{:<14}{:>10}{:>11}{:>9}{:>9}   tp fp tn fn\n", "Model", "Accuracy", "Precision",
                                "Recall", "F1");
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += fmt::format("{:<14}{:>10.4f}{:>11.4f}{:>9.4f}{:>9.4f}  {:>3}{:>3}{:>3}{:>3}{}\n", r.model, m.accuracy,
                       m.precision, m.recall, m.f1, r.counts.tp, r.counts.fp, r.counts.tn, r.counts.fn,
                       (m.precision_degenerate || m.recall_degenerate) ? "  (degenerate)" : "");
  }
  return out;
}

RiskTable risk_table(const GcnModel& model, const BipartiteGraph& graph, double cutoff) {
  return rank(predict(model, graph), graph.occupation_ids(), graph.occupation_titles(), cutoff);
}

std::vector<SweepCell> run_sweep(const Corpus& corpus, const RunConfig& cfg) {
  const auto& dims = cfg.sweep_dimensions;
  const auto& hidden = cfg.sweep_hidden;
  std::vector<SweepCell> cells(dims.size() * hidden.size());

  // Embeddings and graphs depend only on the dimension; build them first.
  std::vector<BipartiteGraph> graphs;
  for (auto d : dims) {
    auto ecfg = cfg.embed;
    ecfg.dimension = d;
    ecfg.seed = cfg.embed_seed();
    const auto emb = compute_embeddings(corpus, ecfg, cfg.pretrained.empty() || d != cfg.embed.dimension
                                                           ? fs::path()
                                                           : cfg.pretrained);
    graphs.push_back(graph_from(corpus, emb.bundle, cfg));
  }
  const auto labels = label_set(corpus, graphs.front());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        const auto di = c / hidden.size(), hi = c % hidden.size();
        std::vector<std::size_t> plan{dims[di]};
        for (std::size_t l = 0; l < cfg.gcn_layers; ++l) plan.push_back(hidden[hi]);
        const auto run = train_model(graphs[di], labels, plan, cfg.train, cfg.split_seed(), cfg.init_seed());
        const auto probs = forward(run.result.model, graphs[di]).probabilities;
        const auto m = metrics(confusion(argmax_classes(probs, run.split.test), truths_of(labels, run.split.test)));
        cells[c] = {dims[di], hidden[hi], cfg.seed, m.accuracy, m.f1, run.result.best_val_f1, run.result.best_epoch};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min(cfg.threads, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out = csv::format_row({"dimension", "hidden", "accuracy", "f1", "val_f1", "best_epoch", "seed"});
  for (const auto& c : cells) {
    out += csv::format_row({std::to_string(c.dimension), std::to_string(c.hidden), fmt::format("{:.6f}", c.accuracy),
                            fmt::format("{:.6f}", c.f1), fmt::format("{:.6f}", c.val_f1),
                            std::to_string(c.best_epoch), std::to_string(c.seed)});
  }
  return out;
}

// ---- stages ----

namespace {

struct StageWriter {
  const RunConfig& cfg;
  std::string stage;
  fs::path dir;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;

  StageWriter(const RunConfig& c, std::string name) : cfg(c), stage(std::move(name)), dir(c.out_dir / stage) {
    fs::create_directories(dir);
  }

  void input(const fs::path& p) { inputs.push_back(p); }
  void data_inputs() {
    const auto p = CorpusPaths::in_directory(cfg.data_dir);
    for (const auto& f : {p.occupations, p.tasks, p.skills, p.links, p.labels}) input(f);
  }
  void write(const std::string& name, const std::string& text) {
    csv::write_text(dir / name, text);
    outputs.push_back(dir / name);
  }

  void manifest() const {
    json j;
    j["stage"] = stage;
    j["version"] = AOCGCN_VERSION;
    j["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                      {"fmt", FMT_VERSION},
                      {"openssl", OPENSSL_VERSION_TEXT}};
    j["seeds"] = {{"run", cfg.seed},
                  {"embed", cfg.embed_seed()},
                  {"split", cfg.split_seed()},
                  {"init", cfg.init_seed()},
                  {"baseline", cfg.baseline_seed()},
                  {"viz", cfg.viz_seed()}};
    j["config"] = json::parse(config_to_json(cfg));
    auto digests = [&](const std::vector<fs::path>& files) {
      auto arr = json::array();
      for (const auto& f : files) {
        const auto rel = f.lexically_relative(cfg.out_dir);
        const auto shown = (!rel.empty() && *rel.begin() != "..") ? rel.generic_string() : f.generic_string();
        arr.push_back({{"path", shown}, {"sha256", sha256_file(f)}});
      }
      return arr;
    };
    j["inputs"] = digests(inputs);
    j["outputs"] = digests(outputs);
    j["rerun"] = fmt::format("aocgcn {} --config {}", stage, (dir / "config.ini").generic_string());
    csv::write_text(dir / "config.ini", config_to_ini(cfg));
    csv::write_text(dir / "manifest.json", j.dump(2) + "\n");
  }
};

fs::path artifact(const RunConfig& cfg, const std::string& stage, const std::string& name) {
  const auto p = cfg.out_dir / stage / name;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::MissingArtifact, fmt::format("{} not found; run `{}` first", p.string(), stage));
  }
  return p;
}

EmbeddingBundle load_bundle(const RunConfig& cfg, StageWriter& w) {
  const auto p = artifact(cfg, "embed", "embeddings.json");
  w.input(p);
  return embeddings_from_json(csv::read_text(p));
}

GcnModel load_model(const RunConfig& cfg, StageWriter& w) {
  const auto p = artifact(cfg, "train", "model.json");
  w.input(p);
  return model_from_json(csv::read_text(p));
}

Split load_split(const RunConfig& cfg, const BipartiteGraph& graph, StageWriter& w) {
  const auto p = artifact(cfg, "train", "split.json");
  w.input(p);
  Split split;
  try {
    const auto j = json::parse(csv::read_text(p));
    auto part = [&](const char* key) {
      std::vector<std::size_t> out;
      for (const auto& id : j.at(key)) {
        const auto i = graph.occupation_index(id.get<std::string>());
        if (i == BipartiteGraph::npos) throw Error(ErrorCode::UnresolvedReference, "split occupation " + id.dump());
        out.push_back(i);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    split = {part("train"), part("validation"), part("test")};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, p.string() + ": " + e.what());
  }
  return split;
}

void check_model_fits(const GcnModel& model, const BipartiteGraph& graph) {
  if (model.features.rows() != static_cast<Eigen::Index>(graph.num_nodes())) {
    throw Error(ErrorCode::MissingArtifact, "model does not match the graph; re-run train");
  }
}

StageOutcome stage_ingest(const RunConfig& cfg) {
  StageWriter w(cfg, "ingest");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto declining = parse_declining(cfg.declining_path());
  w.input(cfg.declining_path());
  std::size_t automated = 0, statements = 0;
  for (const auto& l : corpus.labels) automated += l.label == Label::Automated ? 1 : 0;
  for (const auto& o : corpus.occupations) statements += o.task_statements.size();
  json j;
  j["occupation_rows"] = corpus.occupation_rows;
  j["occupations"] = corpus.occupations.size();
  j["skills"] = corpus.skills.size();
  j["links"] = corpus.links.size();
  j["duplicate_links"] = corpus.duplicate_links;
  j["task_statements"] = statements;
  j["labels"] = corpus.labels.size();
  j["labels_automated"] = automated;
  j["labels_non_automated"] = corpus.labels.size() - automated;
  j["ignored_labels"] = corpus.ignored_labels;
  j["declining"] = declining.size();
  auto& ex = j["excluded"] = json::array();
  for (const auto& e : corpus.excluded) ex.push_back({{"soc_code", e.soc_code}, {"reason", e.reason}});
  w.write("corpus_summary.json", j.dump(2) + "\n");
  w.manifest();
  return {"ingest", w.dir,
          fmt::format("occupations={} skills={} links={} labels={} automated={} excluded={} declining={}",
                      corpus.occupations.size(), corpus.skills.size(), corpus.links.size(), corpus.labels.size(),
                      automated, corpus.excluded.size(), declining.size())};
}

StageOutcome stage_embed(const RunConfig& cfg) {
  StageWriter w(cfg, "embed");
  w.data_inputs();
  if (!cfg.pretrained.empty()) w.input(cfg.pretrained);
  auto ecfg = cfg.embed;
  ecfg.seed = cfg.embed_seed();
  const auto corpus = load_run_corpus(cfg);
  const auto emb = compute_embeddings(corpus, ecfg, cfg.pretrained);
  w.write("embeddings.json", embeddings_to_json(emb.bundle, config_to_json(cfg)));
  json s;
  s["vocabulary"] = emb.bundle.vocab.size();
  s["dimension"] = ecfg.dimension;
  s["word2vec"] = {{"initial_loss", emb.word_stats.initial_loss},
                   {"final_loss", emb.word_stats.final_loss},
                   {"epoch_losses", emb.word_stats.epoch_losses}};
  s["doc2vec"] = {{"initial_loss", emb.doc_stats.initial_loss},
                  {"final_loss", emb.doc_stats.final_loss},
                  {"epoch_losses", emb.doc_stats.epoch_losses}};
  s["unresolved_skills"] = emb.unresolved_skills;
  s["pretrained_coverage"] = emb.pretrained_coverage;
  w.write("stats.json", s.dump(2) + "\n");
  w.manifest();
  return {"embed", w.dir,
          fmt::format("vocabulary={} dimension={} word_loss={:.4f}->{:.4f} doc_loss={:.4f}->{:.4f}",
                      emb.bundle.vocab.size(), ecfg.dimension, emb.word_stats.initial_loss,
                      emb.word_stats.final_loss, emb.doc_stats.initial_loss, emb.doc_stats.final_loss)};
}

StageOutcome stage_build_graph(const RunConfig& cfg) {
  StageWriter w(cfg, "build-graph");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto report = validate(graph);
  w.write("graph.json", graph_to_json(graph));
  json s;
  s["occupations"] = report.occupations;
  s["skills"] = report.skills;
  s["edges"] = report.edges;
  s["occupation_degree_sum"] = report.occupation_degree_sum;
  s["skill_degree_sum"] = report.skill_degree_sum;
  s["bipartite"] = report.bipartite;
  s["duplicate_edges"] = report.duplicate_edges;
  s["isolated"] = report.isolated.size();
  s["dropped_isolated"] = graph.dropped_isolated;
  auto hist = [](const std::map<std::size_t, std::size_t>& h) {
    json a = json::array();
    for (const auto& [deg, n] : h) a.push_back({deg, n});
    return a;
  };
  s["occupation_degree_histogram"] = hist(report.occupation_degree_histogram);
  s["skill_degree_histogram"] = hist(report.skill_degree_histogram);
  s["ok"] = report.ok();
  w.write("structure.json", s.dump(2) + "\n");
  w.manifest();
  return {"build-graph", w.dir,
          fmt::format("occupations={} skills={} edges={} bipartite={} isolated={}", report.occupations,
                      report.skills, report.edges, report.bipartite ? "yes" : "no", report.isolated.size())};
}

StageOutcome stage_train(const RunConfig& cfg) {
  StageWriter w(cfg, "train");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto labels = label_set(corpus, graph);
  const auto run = train_model(graph, labels, cfg.layer_plan(), cfg.train, cfg.split_seed(), cfg.init_seed());
  w.write("model.json", model_to_json(run.result.model, config_to_json(cfg), cfg.init_seed()));
  w.write("split.json", split_to_json(run.split, graph.occupation_ids()));
  std::string hist = csv::format_row({"epoch", "train_loss", "train_accuracy", "val_loss", "val_accuracy", "val_f1"});
  for (const auto& e : run.result.history) {
    hist += csv::format_row({std::to_string(e.epoch), fmt::format("{:.10g}", e.train_loss),
                             fmt::format("{:.10g}", e.train_accuracy), fmt::format("{:.10g}", e.val_loss),
                             fmt::format("{:.10g}", e.val_accuracy), fmt::format("{:.10g}", e.val_f1)});
  }
  w.write("history.csv", hist);
  w.manifest();
  return {"train", w.dir,
          fmt::format("plan={} train={} val={} test={} epochs_run={} best_epoch={} best_val_f1={:.4f}",
                      fmt::format("{}", fmt::join(cfg.layer_plan(), "-")), run.split.train.size(),
                      run.split.validation.size(), run.split.test.size(), run.result.history.size(),
                      run.result.best_epoch, run.result.best_val_f1)};
}

StageOutcome stage_evaluate(const RunConfig& cfg) {
  StageWriter w(cfg, "evaluate");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto model = load_model(cfg, w);
  check_model_fits(model, graph);
  const auto split = load_split(cfg, graph, w);
  const auto rows = evaluate_models(graph, label_set(corpus, graph), split, model, cfg);
  w.write("metrics.csv", metrics_csv(rows, cfg.seed));
  w.write("metrics.txt", metrics_table(rows));
  w.manifest();
  std::string summary;
  for (const auto& r : rows) {
    summary += fmt::format("{}{}_f1={:.4f}", summary.empty() ? "" : " ", r.model, r.metrics.f1);
  }
  return {"evaluate", w.dir, fmt::format("test={} accuracy={:.4f} {}", split.test.size(), rows[0].metrics.accuracy, summary)};
}

StageOutcome stage_predict(const RunConfig& cfg) {
  StageWriter w(cfg, "predict");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto model = load_model(cfg, w);
  check_model_fits(model, graph);
  const auto table = risk_table(model, graph, cfg.cutoff);
  w.write("risk_table.csv", risk_table_csv(table));
  json s;
  s["cutoff"] = cfg.cutoff;
  s["occupations"] = table.rows.size();
  s["flagged"] = table.flagged();
  s["flagged_fraction"] = table.flagged_fraction();
  s["max_probability"] = table.max_probability();
  auto& top = s["top10"] = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, table.rows.size()); ++i) {
    top.push_back({{"soc_code", table.rows[i].soc_code},
                   {"title", table.rows[i].title},
                   {"probability", table.rows[i].probability}});
  }
  w.write("summary.json", s.dump(2) + "\n");
  w.manifest();
  return {"predict", w.dir,
          fmt::format("occupations={} flagged={} fraction={:.4f} max_probability={:.4f} top=\"{}\"", table.rows.size(),
                      table.flagged(), table.flagged_fraction(), table.max_probability(),
                      table.rows.empty() ? "" : table.rows.front().title)};
}

StageOutcome stage_compare_bls(const RunConfig& cfg) {
  StageWriter w(cfg, "compare-bls");
  w.data_inputs();
  w.input(cfg.declining_path());
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto model = load_model(cfg, w);
  check_model_fits(model, graph);
  const auto report = compare_declining(risk_table(model, graph, cfg.cutoff), parse_declining(cfg.declining_path()),
                                        cfg.bls_threshold);
  w.write("comparison.json", comparison_to_json(report));
  w.manifest();
  return {"compare-bls", w.dir,
          fmt::format("matched={} unmatched={} above={} fraction={}", report.matched.size(), report.unmatched.size(),
                      report.above, report.degenerate ? std::string("undefined") : fmt::format("{:.4f}", report.fraction))};
}

StageOutcome stage_sweep(const RunConfig& cfg) {
  StageWriter w(cfg, "sweep");
  w.data_inputs();
  const auto cells = run_sweep(load_run_corpus(cfg), cfg);
  w.write("sweep.csv", sweep_csv(cells));
  w.manifest();
  const auto best = std::max_element(cells.begin(), cells.end(),
                                     [](const SweepCell& a, const SweepCell& b) { return a.f1 < b.f1; });
  return {"sweep", w.dir,
          fmt::format("cells={} best_f1={:.4f} at dimension={} hidden={}", cells.size(), best->f1, best->dimension,
                      best->hidden)};
}

StageOutcome stage_project(const RunConfig& cfg) {
  StageWriter w(cfg, "project");
  w.data_inputs();
  const auto corpus = load_run_corpus(cfg);
  const auto graph = graph_from(corpus, load_bundle(cfg, w), cfg);
  const auto model = load_model(cfg, w);
  check_model_fits(model, graph);

  const auto emb = node_embeddings(model, graph);
  const auto fwd = forward(model, graph);
  const auto n_occ = graph.num_occupations();
  const std::size_t n = cfg.project_all_nodes ? graph.num_nodes() : n_occ;
  const Matrix X = emb.topRows(static_cast<Eigen::Index>(n));
  std::vector<std::string> ids, classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_occ) {
      ids.push_back(graph.occupation_ids()[i]);
      classes.push_back(fwd.probabilities(static_cast<Eigen::Index>(i), 1) >
                                fwd.probabilities(static_cast<Eigen::Index>(i), 0)
                            ? "automated"
                            : "non-automated");
    } else {
      ids.push_back(graph.skill_ids()[i - n_occ]);
      classes.push_back("skill");
    }
  }

  json s;
  s["points"] = n;
  s["all_nodes"] = cfg.project_all_nodes;
  std::vector<std::string> parts;
  const bool all = cfg.project_method == "all";
  if (all || cfg.project_method == "pca" || cfg.project_method == "kmeans") {
    const auto p = pca(X, 2);
    s["pca"] = {{"explained_ratio", p.explained_ratio}};
    if (all || cfg.project_method == "pca") {
      w.write("pca.csv", coordinates_csv(ids, p.projected, classes));
      w.write("pca.svg", scatter_svg(p.projected, classes, "PCA of GCN node embeddings"));
      parts.push_back(fmt::format("pca_ratio={:.4f},{:.4f}", p.explained_ratio[0], p.explained_ratio[1]));
    }
    if (all || cfg.project_method == "kmeans") {
      const auto km = kmeans(X, cfg.kmeans_k, cfg.viz_seed(), 300, cfg.kmeans_restarts);
      std::vector<std::string> clusters;
      for (auto a : km.assignments) clusters.push_back(fmt::format("cluster {}", a));
      w.write("kmeans.csv", coordinates_csv(ids, p.projected, clusters));
      w.write("kmeans.svg", scatter_svg(p.projected, clusters, "K-means clusters on PCA projection"));
      s["kmeans"] = {{"k", cfg.kmeans_k}, {"inertia", km.inertia}, {"iterations", km.iterations},
                     {"inertia_history", km.inertia_history}};
      parts.push_back(fmt::format("kmeans_inertia={:.4f}", km.inertia));
    }
  }
  if (all || cfg.project_method == "tsne") {
    TsneOptions opts;
    opts.perplexity = cfg.tsne_perplexity;
    opts.iterations = cfg.tsne_iterations;
    opts.seed = cfg.viz_seed();
    const auto t = tsne(X, opts);
    w.write("tsne.csv", coordinates_csv(ids, t.embedding, classes));
    w.write("tsne.svg", scatter_svg(t.embedding, classes, "t-SNE of GCN node embeddings"));
    s["tsne"] = {{"perplexity", opts.perplexity}, {"iterations", opts.iterations},
                 {"initial_kl", t.initial_kl}, {"final_kl", t.final_kl}};
    parts.push_back(fmt::format("tsne_kl={:.4f}->{:.4f}", t.initial_kl, t.final_kl));
  }
  w.write("projection.json", s.dump(2) + "\n");
  w.manifest();
  return {"project", w.dir, fmt::format("method={} points={} {}", cfg.project_method, n, fmt::join(parts, " "))};
}

const std::vector<std::string> kAllStages{"ingest",  "embed",       "build-graph", "train", "evaluate",
                                          "predict", "compare-bls", "project"};

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"ingest",  "embed",       "build-graph", "train",   "evaluate",
                                              "predict", "compare-bls", "sweep",       "project", "run-all"};
  return names;
}

bool is_stage(const std::string& name) {
  const auto& n = stage_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

StageOutcome run_stage(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  if (name == "ingest") return stage_ingest(cfg);
  if (name == "embed") return stage_embed(cfg);
  if (name == "build-graph") return stage_build_graph(cfg);
  if (name == "train") return stage_train(cfg);
  if (name == "evaluate") return stage_evaluate(cfg);
  if (name == "predict") return stage_predict(cfg);
  if (name == "compare-bls") return stage_compare_bls(cfg);
  if (name == "sweep") return stage_sweep(cfg);
  if (name == "project") return stage_project(cfg);
  if (name == "run-all") {
    std::string summary;
    for (const auto& s : kAllStages) {
      const auto r = run_stage(s, cfg);
      summary += (summary.empty() ? "" : "\n") + fmt::format("[{}] {}", s, r.summary);
    }
    return {"run-all", cfg.out_dir, summary};
  }
  throw Error(ErrorCode::Usage, "unknown stage '" + name + "'");
}

}  // namespace aocgcn
