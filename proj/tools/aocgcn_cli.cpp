// Command-line front end. Talks to the pipeline only through the C API.
#include "aocgcn/aocgcn.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Handle {
  aoc_config* cfg = nullptr;
  ~Handle() { aoc_config_free(cfg); }
};

int report(aoc_status st) {
  std::cerr << aoc_last_error() << "\n";
  return static_cast<int>(st);
}

int usage_error(const std::string& detail, const std::string& help) {
  std::cerr << help << "\n";
  std::string flat = detail;
  for (auto& c : flat) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error=Usage class=usage detail=" << flat << "\n";
  return AOC_ERR_USAGE;
}

const char* describe(const std::string& stage) {
  if (stage == "ingest") return "Parse and validate the data directory";
  if (stage == "embed") return "Train word, document and skill embeddings";
  if (stage == "build-graph") return "Build the occupation-skill graph and report its structure";
  if (stage == "train") return "Train the GCN classifier";
  if (stage == "evaluate") return "Test-set metrics for the GCN and the baselines";
  if (stage == "predict") return "Rank occupations by automation risk";
  if (stage == "compare-bls") return "Compare risk scores with the declining-occupations list";
  if (stage == "sweep") return "Embedding-size x hidden-size parameter grid";
  if (stage == "project") return "PCA, k-means and t-SNE projections with SVG plots";
  if (stage == "run-all") return "ingest through project, excluding sweep";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupation automation-risk pipeline (version " + std::string(aoc_version()) + ")", "aocgcn"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, out_dir, data_dir, seed, threads, method;
  bool deterministic = false, all_nodes = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--data", data_dir, "data directory");
  app.add_option("--threads", threads, "worker threads for sweep cells");
  app.add_flag("--deterministic", deterministic, "reproducible single-stream execution (default)");
  app.add_option("--set", overrides, "override a config value, section.key=value")->take_all();

  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < aoc_stage_count(); ++i) {
    const std::string name = aoc_stage_name(i);
    auto* sub = app.add_subcommand(name, describe(name));
    if (name == "project") {
      sub->add_option("--method", method, "pca, kmeans, tsne or all")
          ->check(CLI::IsMember({"pca", "kmeans", "tsne", "all"}));
      sub->add_flag("--all-nodes", all_nodes, "project skill nodes too");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what(), app.help());
  }

  std::string stage;
  for (auto* s : subs) {
    if (s->parsed()) stage = s->get_name();
  }

  Handle h;
  aoc_status st = config_path.empty() ? aoc_config_new(&h.cfg) : aoc_config_load(config_path.c_str(), &h.cfg);
  if (st != AOC_OK) return report(st);

  std::vector<std::pair<std::string, std::string>> sets;
  if (!data_dir.empty()) sets.emplace_back("paths.data_dir", data_dir);
  if (!out_dir.empty()) sets.emplace_back("paths.out_dir", out_dir);
  if (!seed.empty()) sets.emplace_back("run.seed", seed);
  if (!threads.empty()) sets.emplace_back("run.threads", threads);
  if (deterministic) sets.emplace_back("run.deterministic", "true");
  if (!method.empty()) sets.emplace_back("project.method", method);
  if (all_nodes) sets.emplace_back("project.all_nodes", "true");
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) return usage_error("--set expects section.key=value, got '" + kv + "'", app.help());
    sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [k, v] : sets) {
    if ((st = aoc_config_set(h.cfg, k.c_str(), v.c_str())) != AOC_OK) return report(st);
  }

  std::size_t needed = 0;
  std::vector<char> buf(4096);
  st = aoc_stage_run(h.cfg, stage.c_str(), buf.data(), buf.size(), &needed);
  if (st != AOC_OK) return report(st);
  if (needed >= buf.size()) {  // summary longer than the first buffer; the stage has already run
    std::cout << std::string(buf.data()) << "...\n";
  } else {
    std::cout << buf.data() << "\n";
  }
  return 0;
}
