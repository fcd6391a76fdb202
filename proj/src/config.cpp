#include "aocgcn/config.hpp"

#include "aocgcn/csv.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace aocgcn {

std::vector<std::size_t> RunConfig::layer_plan() const {
  std::vector<std::size_t> plan{embed.dimension};
  for (std::size_t l = 0; l < gcn_layers; ++l) plan.push_back(gcn_hidden);
  return plan;
}

std::filesystem::path RunConfig::declining_path() const {
  return declining.empty() ? data_dir / "declining_occupations.csv" : declining;
}

std::uint64_t RunConfig::embed_seed() const { return derive_seed(seed, 1); }
std::uint64_t RunConfig::split_seed() const { return derive_seed(seed, 2); }
std::uint64_t RunConfig::init_seed() const { return derive_seed(seed, 3); }
std::uint64_t RunConfig::baseline_seed() const { return derive_seed(seed, 4); }
std::uint64_t RunConfig::viz_seed() const { return derive_seed(seed, 5); }

void RunConfig::validate() const {
  if (data_dir.empty()) throw Error(ErrorCode::Usage, "paths.data_dir is required");
  if (out_dir.empty()) throw Error(ErrorCode::Usage, "paths.out_dir is empty");
  if (threads < 1) throw Error(ErrorCode::Usage, "run.threads must be >= 1");
  embed.validate();
  validate_layer_plan(layer_plan());
  if (train.learning_rate <= 0 || train.weight_decay < 0 || train.eval_every < 1) {
    throw Error(ErrorCode::Usage, "invalid train settings");
  }
  if (!(cutoff > 0 && cutoff < 1)) throw Error(ErrorCode::Usage, "risk.cutoff must lie in (0,1)");
  if (!(bls_threshold > 0 && bls_threshold < 1)) {
    throw Error(ErrorCode::Usage, "risk.bls_threshold must lie in (0,1)");
  }
  if (rf_trees < 1 || ada_rounds < 1) throw Error(ErrorCode::Usage, "baseline ensembles need >= 1 member");
  if (sweep_dimensions.empty() || sweep_hidden.empty()) throw Error(ErrorCode::Usage, "empty sweep grid");
  for (auto h : sweep_hidden) {
    if (h == 0 || h % 2) throw Error(ErrorCode::Usage, "sweep.hidden values must be even and positive");
  }
  for (auto d : sweep_dimensions) {
    if (d == 0) throw Error(ErrorCode::Usage, "sweep.dimensions values must be positive");
  }
  if (project_method != "pca" && project_method != "kmeans" && project_method != "tsne" &&
      project_method != "all") {
    throw Error(ErrorCode::Usage, "project.method must be pca, kmeans, tsne or all");
  }
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw Error(ErrorCode::Usage, fmt::format("{}: bad value '{}'", key, v));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Usage, fmt::format("{}: bad value '{}'", key, v));
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::Usage, fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw Error(ErrorCode::Usage, key + ": empty list item");
    out.push_back(parse_number<std::size_t>(key, item.substr(b, e - b + 1)));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&, const std::filesystem::path&)>;

const std::map<std::string, Setter>& setters() {
  auto path = [](std::filesystem::path RunConfig::*m) -> Setter {
    return [m](RunConfig& c, const std::string&, const std::string& v, const std::filesystem::path& base) {
      // absolute and normalized so manifests rerun from any directory
      std::filesystem::path p(v);
      if (!v.empty()) p = std::filesystem::absolute(p.is_absolute() || base.empty() ? p : base / p).lexically_normal();
      c.*m = p;
    };
  };
  auto size = [](auto get) -> Setter {
    return [get](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
      get(c) = parse_number<std::size_t>(k, v);
    };
  };
  auto real = [](auto get) -> Setter {
    return [get](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
      get(c) = parse_double(k, v);
    };
  };
  auto flag = [](auto get) -> Setter {
    return [get](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
      get(c) = parse_bool(k, v);
    };
  };
  static const std::map<std::string, Setter> table{
      {"paths.data_dir", path(&RunConfig::data_dir)},
      {"paths.out_dir", path(&RunConfig::out_dir)},
      {"paths.pretrained", path(&RunConfig::pretrained)},
      {"paths.declining", path(&RunConfig::declining)},
      {"run.seed",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         c.seed = parse_number<std::uint64_t>(k, v);
       }},
      {"run.threads", size([](RunConfig& c) -> std::size_t& { return c.threads; })},
      {"run.deterministic", flag([](RunConfig& c) -> bool& { return c.deterministic; })},
      {"embed.dimension", size([](RunConfig& c) -> std::size_t& { return c.embed.dimension; })},
      {"embed.window", size([](RunConfig& c) -> std::size_t& { return c.embed.window; })},
      {"embed.negative", size([](RunConfig& c) -> std::size_t& { return c.embed.negative; })},
      {"embed.epochs", size([](RunConfig& c) -> std::size_t& { return c.embed.epochs; })},
      {"embed.doc_epochs", size([](RunConfig& c) -> std::size_t& { return c.embed.doc_epochs; })},
      {"embed.min_count", size([](RunConfig& c) -> std::size_t& { return c.embed.min_count; })},
      {"embed.learning_rate", real([](RunConfig& c) -> double& { return c.embed.learning_rate; })},
      {"embed.min_learning_rate", real([](RunConfig& c) -> double& { return c.embed.min_learning_rate; })},
      {"embed.subsample", real([](RunConfig& c) -> double& { return c.embed.subsample; })},
      {"embed.doc_mode",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         if (v == "joint") c.embed.doc_mode = DocMode::Joint;
         else if (v == "frozen_words") c.embed.doc_mode = DocMode::FrozenWords;
         else throw Error(ErrorCode::Usage, k + ": expected joint or frozen_words");
       }},
      {"embed.fusion",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         if (v == "sum") c.embed.fusion = Fusion::Sum;
         else if (v == "mean") c.embed.fusion = Fusion::Mean;
         else throw Error(ErrorCode::Usage, k + ": expected sum or mean");
       }},
      {"graph.isolated",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         if (v == "error") c.isolated = IsolatedPolicy::Error;
         else if (v == "drop") c.isolated = IsolatedPolicy::Drop;
         else if (v == "keep") c.isolated = IsolatedPolicy::Keep;
         else throw Error(ErrorCode::Usage, k + ": expected error, drop or keep");
       }},
      {"graph.unit_features", flag([](RunConfig& c) -> bool& { return c.unit_features; })},
      {"gcn.layers", size([](RunConfig& c) -> std::size_t& { return c.gcn_layers; })},
      {"gcn.hidden", size([](RunConfig& c) -> std::size_t& { return c.gcn_hidden; })},
      {"gcn.epochs", size([](RunConfig& c) -> std::size_t& { return c.train.epochs; })},
      {"gcn.learning_rate", real([](RunConfig& c) -> double& { return c.train.learning_rate; })},
      {"gcn.weight_decay", real([](RunConfig& c) -> double& { return c.train.weight_decay; })},
      {"gcn.patience", size([](RunConfig& c) -> std::size_t& { return c.train.patience; })},
      {"gcn.train_features", flag([](RunConfig& c) -> bool& { return c.train.train_features; })},
      {"risk.cutoff", real([](RunConfig& c) -> double& { return c.cutoff; })},
      {"risk.bls_threshold", real([](RunConfig& c) -> double& { return c.bls_threshold; })},
      {"baseline.dt_max_depth", size([](RunConfig& c) -> std::size_t& { return c.dt_max_depth; })},
      {"baseline.rf_trees", size([](RunConfig& c) -> std::size_t& { return c.rf_trees; })},
      {"baseline.ada_rounds", size([](RunConfig& c) -> std::size_t& { return c.ada_rounds; })},
      {"sweep.dimensions",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         c.sweep_dimensions = parse_list(k, v);
       }},
      {"sweep.hidden",
       [](RunConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
         c.sweep_hidden = parse_list(k, v);
       }},
      {"project.method",
       [](RunConfig& c, const std::string&, const std::string& v, const std::filesystem::path&) {
         c.project_method = v;
       }},
      {"project.all_nodes", flag([](RunConfig& c) -> bool& { return c.project_all_nodes; })},
      {"project.perplexity", real([](RunConfig& c) -> double& { return c.tsne_perplexity; })},
      {"project.tsne_iterations", size([](RunConfig& c) -> std::size_t& { return c.tsne_iterations; })},
      {"project.kmeans_k", size([](RunConfig& c) -> std::size_t& { return c.kmeans_k; })},
      {"project.kmeans_restarts", size([](RunConfig& c) -> std::size_t& { return c.kmeans_restarts; })},
  };
  return table;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, const std::filesystem::path& base) {
  const auto& t = setters();
  const auto it = t.find(key);
  if (it == t.end()) throw Error(ErrorCode::Usage, "unknown config key '" + key + "'");
  it->second(cfg, key, value, base);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::Usage, fmt::format("config line {}: {}", e.line(), e.message()));
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::Usage, "config key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) apply(cfg, section + "." + key, value.data(), base_dir);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(csv::read_text(path), path.parent_path());
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  apply(cfg, key, value, {});
}

namespace {

std::vector<std::pair<std::string, std::string>> effective(const RunConfig& c) {
  auto list = [](const std::vector<std::size_t>& v) { return fmt::format("{}", fmt::join(v, ",")); };
  auto real = [](double d) { return fmt::format("{}", d); };
  // the default out_dir is relative; written configs must not depend on where they are stored
  auto path = [](const std::filesystem::path& p) {
    return p.empty() ? std::string() : std::filesystem::absolute(p).lexically_normal().string();
  };
  const char* iso = c.isolated == IsolatedPolicy::Error ? "error" : c.isolated == IsolatedPolicy::Drop ? "drop" : "keep";
  return {
      {"paths.data_dir", path(c.data_dir)},
      {"paths.out_dir", path(c.out_dir)},
      {"paths.pretrained", path(c.pretrained)},
      {"paths.declining", path(c.declining)},
      {"run.seed", std::to_string(c.seed)},
      {"run.threads", std::to_string(c.threads)},
      {"run.deterministic", c.deterministic ? "true" : "false"},
      {"embed.dimension", std::to_string(c.embed.dimension)},
      {"embed.window", std::to_string(c.embed.window)},
      {"embed.negative", std::to_string(c.embed.negative)},
      {"embed.epochs", std::to_string(c.embed.epochs)},
      {"embed.doc_epochs", std::to_string(c.embed.doc_epochs)},
      {"embed.min_count", std::to_string(c.embed.min_count)},
      {"embed.learning_rate", real(c.embed.learning_rate)},
      {"embed.min_learning_rate", real(c.embed.min_learning_rate)},
      {"embed.subsample", real(c.embed.subsample)},
      {"embed.doc_mode", c.embed.doc_mode == DocMode::Joint ? "joint" : "frozen_words"},
      {"embed.fusion", c.embed.fusion == Fusion::Sum ? "sum" : "mean"},
      {"graph.isolated", iso},
      {"graph.unit_features", c.unit_features ? "true" : "false"},
      {"gcn.layers", std::to_string(c.gcn_layers)},
      {"gcn.hidden", std::to_string(c.gcn_hidden)},
      {"gcn.epochs", std::to_string(c.train.epochs)},
      {"gcn.learning_rate", real(c.train.learning_rate)},
      {"gcn.weight_decay", real(c.train.weight_decay)},
      {"gcn.patience", std::to_string(c.train.patience)},
      {"gcn.train_features", c.train.train_features ? "true" : "false"},
      {"risk.cutoff", real(c.cutoff)},
      {"risk.bls_threshold", real(c.bls_threshold)},
      {"baseline.dt_max_depth", std::to_string(c.dt_max_depth)},
      {"baseline.rf_trees", std::to_string(c.rf_trees)},
      {"baseline.ada_rounds", std::to_string(c.ada_rounds)},
      {"sweep.dimensions", list(c.sweep_dimensions)},
      {"sweep.hidden", list(c.sweep_hidden)},
      {"project.method", c.project_method},
      {"project.all_nodes", c.project_all_nodes ? "true" : "false"},
      {"project.perplexity", real(c.tsne_perplexity)},
      {"project.tsne_iterations", std::to_string(c.tsne_iterations)},
      {"project.kmeans_k", std::to_string(c.kmeans_k)},
      {"project.kmeans_restarts", std::to_string(c.kmeans_restarts)},
  };
}

}  // namespace

std::string config_to_ini(const RunConfig& cfg) {
  std::string out, section;
  for (const auto& [key, value] : effective(cfg)) {
    const auto dot = key.find('.');
    const auto s = key.substr(0, dot);
    if (s != section) {
      out += (out.empty() ? "" : "\n") + fmt::format("[{}]\n", s);
      section = s;
    }
    out += fmt::format("{} = {}\n", key.substr(dot + 1), value);
  }
  return out;
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : effective(cfg)) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return j.dump();
}

}  // namespace aocgcn
