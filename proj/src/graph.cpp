#include "aocgcn/graph.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace aocgcn {

std::size_t BipartiteGraph::stacked_index(const NodeRef& node) const {
  if (node.kind == NodeKind::Occupation) {
    if (node.index >= num_occupations()) {
      throw Error(ErrorCode::InvalidNode, "occupation index " + std::to_string(node.index));
    }
    return node.index;
  }
  if (node.index >= num_skills()) {
    throw Error(ErrorCode::InvalidNode, "skill index " + std::to_string(node.index));
  }
  return num_occupations() + node.index;
}

NodeRef BipartiteGraph::node_at(std::size_t stacked) const {
  if (stacked < num_occupations()) return {NodeKind::Occupation, stacked};
  if (stacked < num_nodes()) return {NodeKind::Skill, stacked - num_occupations()};
  throw Error(ErrorCode::InvalidNode, "stacked index " + std::to_string(stacked));
}

std::size_t BipartiteGraph::occupation_index(const std::string& soc_code) const {
  auto it = occupation_lookup_.find(soc_code);
  return it == occupation_lookup_.end() ? npos : it->second;
}

std::size_t BipartiteGraph::skill_index(const std::string& skill_id) const {
  auto it = skill_lookup_.find(skill_id);
  return it == skill_lookup_.end() ? npos : it->second;
}

BipartiteGraph build_graph(const std::vector<OccupationRecord>& occupations,
                           const std::vector<SkillRecord>& skills,
                           const std::vector<LinkRecord>& links, const Matrix& occupation_features,
                           const Matrix& skill_features, IsolatedPolicy policy) {
  if (static_cast<std::size_t>(occupation_features.rows()) != occupations.size() ||
      static_cast<std::size_t>(skill_features.rows()) != skills.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature rows do not match node counts");
  }
  if (occupation_features.cols() != skill_features.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "occupation feature dim " + std::to_string(occupation_features.cols()) +
                    " != skill feature dim " + std::to_string(skill_features.cols()));
  }

  std::map<std::string, std::size_t> occ_input, skill_input;
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    if (!occ_input.emplace(occupations[i].soc_code, i).second) {
      throw Error(ErrorCode::DuplicateSocCode, occupations[i].soc_code);
    }
  }
  for (std::size_t i = 0; i < skills.size(); ++i) {
    if (!skill_input.emplace(skills[i].skill_id, i).second) {
      throw Error(ErrorCode::MalformedRow, "duplicate skill_id " + skills[i].skill_id);
    }
  }

  std::set<std::pair<std::string, std::string>> edge_set;
  for (const auto& l : links) {
    if (!occ_input.count(l.soc_code)) {
      throw Error(ErrorCode::UnresolvedReference, "link soc_code " + l.soc_code);
    }
    if (!skill_input.count(l.skill_id)) {
      throw Error(ErrorCode::UnresolvedReference, "link skill_id " + l.skill_id);
    }
    edge_set.emplace(l.soc_code, l.skill_id);
  }

  std::set<std::string> linked_occ, linked_skill;
  for (const auto& [o, s] : edge_set) {
    linked_occ.insert(o);
    linked_skill.insert(s);
  }
  std::vector<std::string> isolated;
  for (const auto& [id, _] : occ_input) {
    if (!linked_occ.count(id)) isolated.push_back("occupation:" + id);
  }
  for (const auto& [id, _] : skill_input) {
    if (!linked_skill.count(id)) isolated.push_back("skill:" + id);
  }
  if (!isolated.empty() && policy == IsolatedPolicy::Error) {
    std::string list;
    for (const auto& s : isolated) list += (list.empty() ? "" : " ") + s;
    throw Error(ErrorCode::IsolatedNode, list);
  }

  BipartiteGraph g;
  const bool drop = policy == IsolatedPolicy::Drop;
  if (drop) g.dropped_isolated = isolated;
  // std::map iteration gives ascending identifier order
  std::vector<std::size_t> occ_rows, skill_rows;
  for (const auto& [id, row] : occ_input) {
    if (drop && !linked_occ.count(id)) continue;
    g.occupation_lookup_.emplace(id, g.occupation_ids_.size());
    g.occupation_ids_.push_back(id);
    g.occupation_titles_.push_back(occupations[row].title);
    occ_rows.push_back(row);
  }
  for (const auto& [id, row] : skill_input) {
    if (drop && !linked_skill.count(id)) continue;
    g.skill_lookup_.emplace(id, g.skill_ids_.size());
    g.skill_ids_.push_back(id);
    skill_rows.push_back(row);
  }

  for (const auto& [o, s] : edge_set) {
    g.edges_.emplace_back(g.occupation_lookup_.at(o), g.skill_lookup_.at(s));
  }
  std::sort(g.edges_.begin(), g.edges_.end());

  const std::size_t n_occ = g.occupation_ids_.size();
  g.adjacency_.assign(g.num_nodes(), {});
  for (const auto& [o, s] : g.edges_) {
    g.adjacency_[o].push_back(n_occ + s);
    g.adjacency_[n_occ + s].push_back(o);
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());

  g.features_.resize(static_cast<Eigen::Index>(g.num_nodes()), occupation_features.cols());
  for (std::size_t i = 0; i < occ_rows.size(); ++i) {
    g.features_.row(static_cast<Eigen::Index>(i)) =
        occupation_features.row(static_cast<Eigen::Index>(occ_rows[i]));
  }
  for (std::size_t j = 0; j < skill_rows.size(); ++j) {
    g.features_.row(static_cast<Eigen::Index>(n_occ + j)) =
        skill_features.row(static_cast<Eigen::Index>(skill_rows[j]));
  }
  return g;
}

std::vector<NodeRef> neighbors(const BipartiteGraph& graph, const NodeRef& node) {
  const auto v = graph.stacked_index(node);
  std::vector<NodeRef> out;
  out.reserve(graph.degree(v));
  for (auto u : graph.adjacency()[v]) out.push_back(graph.node_at(u));
  return out;
}

StructureReport validate(const BipartiteGraph& graph) {
  StructureReport r;
  r.occupations = graph.num_occupations();
  r.skills = graph.num_skills();
  r.edges = graph.num_edges();
  const std::size_t n_occ = graph.num_occupations();
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    const auto& adj = graph.adjacency()[v];
    const bool is_occ = v < n_occ;
    for (std::size_t k = 0; k < adj.size(); ++k) {
      const bool other_occ = adj[k] < n_occ;
      if (other_occ == is_occ || adj[k] == v) r.bipartite = false;
      if (k > 0 && adj[k] == adj[k - 1]) r.duplicate_edges = true;
    }
    const auto d = adj.size();
    if (is_occ) {
      r.occupation_degree_sum += d;
      ++r.occupation_degree_histogram[d];
    } else {
      r.skill_degree_sum += d;
      ++r.skill_degree_histogram[d];
    }
    ++r.degree_histogram[d];
    if (d == 0) r.isolated.push_back(graph.node_at(v));
  }
  const auto& e = graph.edges();
  for (std::size_t k = 1; k < e.size(); ++k) {
    if (e[k] == e[k - 1]) r.duplicate_edges = true;
  }
  return r;
}

std::string graph_to_json(const BipartiteGraph& graph) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["occupations"] = graph.occupation_ids();
  j["skills"] = graph.skill_ids();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [o, s] : graph.edges()) edges.push_back({o, s});
  j["edges"] = std::move(edges);
  j["feature_dim"] = graph.feature_dim();
  return j.dump() + "\n";
}

}  // namespace aocgcn
