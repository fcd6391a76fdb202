#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/corpus.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace aocgcn {

enum class NodeKind { Occupation, Skill };

struct NodeRef {
  NodeKind kind = NodeKind::Occupation;
  std::size_t index = 0;

  auto operator<=>(const NodeRef&) const = default;
};

enum class IsolatedPolicy {
  Error,  // default: any degree-0 node aborts the build
  Drop,   // remove degree-0 nodes
  Keep,   // diagnostic only; propagation is undefined on such nodes
};

// Undirected occupation-skill bipartite graph. Occupations are ordered by
// ascending soc_code, skills by ascending skill_id. In the stacked node
// numbering used by feature matrices, occupations come first:
// row i < num_occupations() is occupation i, row num_occupations() + j is skill j.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  std::size_t num_occupations() const { return occupation_ids_.size(); }
  std::size_t num_skills() const { return skill_ids_.size(); }
  std::size_t num_nodes() const { return num_occupations() + num_skills(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }

  const std::vector<std::string>& occupation_ids() const { return occupation_ids_; }
  const std::vector<std::string>& occupation_titles() const { return occupation_titles_; }
  const std::vector<std::string>& skill_ids() const { return skill_ids_; }
  // (occupation index, skill index), sorted
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  // Stacked (|O|+|S|) x d initial feature matrix.
  const Matrix& features() const { return features_; }

  // Stacked-numbering adjacency, each list ascending.
  const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }
  std::size_t degree(std::size_t stacked) const { return adjacency_.at(stacked).size(); }
  std::size_t stacked_index(const NodeRef& node) const;
  NodeRef node_at(std::size_t stacked) const;

  // Index lookup by external identifier; npos if absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t occupation_index(const std::string& soc_code) const;
  std::size_t skill_index(const std::string& skill_id) const;

  std::vector<std::string> dropped_isolated;

 private:
  friend BipartiteGraph build_graph(const std::vector<OccupationRecord>&,
                                    const std::vector<SkillRecord>&,
                                    const std::vector<LinkRecord>&, const Matrix&, const Matrix&,
                                    IsolatedPolicy);

  std::vector<std::string> occupation_ids_;
  std::vector<std::string> occupation_titles_;
  std::vector<std::string> skill_ids_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  Matrix features_;
  std::map<std::string, std::size_t> occupation_lookup_;
  std::map<std::string, std::size_t> skill_lookup_;
};

// `occupation_features` rows align with `occupations`, `skill_features` rows
// with `skills` (input order). Duplicate links are collapsed.
BipartiteGraph build_graph(const std::vector<OccupationRecord>& occupations,
                           const std::vector<SkillRecord>& skills,
                           const std::vector<LinkRecord>& links, const Matrix& occupation_features,
                           const Matrix& skill_features,
                           IsolatedPolicy policy = IsolatedPolicy::Error);

std::vector<NodeRef> neighbors(const BipartiteGraph& graph, const NodeRef& node);

struct StructureReport {
  std::size_t occupations = 0;
  std::size_t skills = 0;
  std::size_t edges = 0;
  std::size_t occupation_degree_sum = 0;
  std::size_t skill_degree_sum = 0;
  std::map<std::size_t, std::size_t> occupation_degree_histogram;
  std::map<std::size_t, std::size_t> skill_degree_histogram;
  std::map<std::size_t, std::size_t> degree_histogram;  // both kinds
  bool bipartite = true;
  bool duplicate_edges = false;
  std::vector<NodeRef> isolated;

  bool ok() const {
    return bipartite && !duplicate_edges && isolated.empty() &&
           occupation_degree_sum == edges && skill_degree_sum == edges;
  }
};

StructureReport validate(const BipartiteGraph& graph);

// {version, occupations, skills, edges, feature_dim}
std::string graph_to_json(const BipartiteGraph& graph);

}  // namespace aocgcn
