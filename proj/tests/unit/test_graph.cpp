#include "aocgcn/graph.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>

using namespace aocgcn;
using testing::error_of;

namespace {

std::vector<OccupationRecord> occs(std::initializer_list<const char*> socs) {
  std::vector<OccupationRecord> out;
  for (const char* s : socs) out.push_back({s, std::string("T") + s, {"task"}});
  return out;
}

std::vector<SkillRecord> skills(std::initializer_list<const char*> ids) {
  std::vector<SkillRecord> out;
  for (const char* s : ids) out.push_back({s, s});
  return out;
}

// o1..o3 x s1,s2 with links (o1,s1),(o1,s2),(o2,s1),(o3,s2)
BipartiteGraph toy() {
  return build_graph(occs({"o1", "o2", "o3"}), skills({"s1", "s2"}),
                     {{"o1", "s1"}, {"o1", "s2"}, {"o2", "s1"}, {"o3", "s2"}}, Matrix::Zero(3, 2),
                     Matrix::Zero(2, 2));
}

const Corpus& fixture_corpus() {
  static const Corpus c = load_corpus(CorpusPaths::in_directory(testing::fixture_dir()));
  return c;
}

BipartiteGraph fixture_graph(const std::vector<OccupationRecord>& o) {
  const auto& c = fixture_corpus();
  Matrix of(static_cast<Eigen::Index>(o.size()), 3);
  for (std::size_t i = 0; i < o.size(); ++i) of.row(static_cast<Eigen::Index>(i)) << double(i), 1.0, -1.0;
  return build_graph(o, c.skills, c.links, of, Matrix::Ones(static_cast<Eigen::Index>(c.skills.size()), 3));
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("minimal graph") {
  const auto g = build_graph(occs({"o1"}), skills({"s1"}), {{"o1", "s1"}}, Matrix::Zero(1, 2), Matrix::Zero(1, 2));
  CHECK(g.num_edges() == 1);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  const auto r = validate(g);
  CHECK(r.degree_histogram == std::map<std::size_t, std::size_t>{{1, 2}});
  CHECK(r.ok());
  CHECK(neighbors(g, {NodeKind::Occupation, 0}) == std::vector<NodeRef>{{NodeKind::Skill, 0}});
}

TEST_CASE("toy degrees and neighbors") {
  const auto g = toy();
  CHECK(g.degree(g.stacked_index({NodeKind::Skill, 0})) == 2);
  CHECK(g.degree(g.stacked_index({NodeKind::Skill, 1})) == 2);
  CHECK(g.degree(g.stacked_index({NodeKind::Occupation, 0})) == 2);
  CHECK(neighbors(g, {NodeKind::Occupation, 0}) ==
        std::vector<NodeRef>{{NodeKind::Skill, 0}, {NodeKind::Skill, 1}});
  CHECK(neighbors(g, {NodeKind::Skill, 0}) ==
        std::vector<NodeRef>{{NodeKind::Occupation, 0}, {NodeKind::Occupation, 1}});
  CHECK(error_of([&] { neighbors(g, {NodeKind::Skill, 2}); }) == ErrorCode::InvalidNode);
  CHECK(error_of([&] { neighbors(g, {NodeKind::Occupation, 9}); }) == ErrorCode::InvalidNode);
}

TEST_CASE("nodes are ordered by identifier") {
  const auto g = build_graph(occs({"b", "a"}), skills({"y", "x"}), {{"b", "y"}, {"a", "x"}},
                             (Matrix(2, 1) << 2.0, 1.0).finished(), (Matrix(2, 1) << 20.0, 10.0).finished());
  CHECK(g.occupation_ids() == std::vector<std::string>{"a", "b"});
  CHECK(g.skill_ids() == std::vector<std::string>{"x", "y"});
  CHECK(g.features()(0, 0) == 1.0);
  CHECK(g.features()(2, 0) == 10.0);
  using E = std::pair<std::size_t, std::size_t>;
  CHECK(g.edges() == std::vector<E>{{0, 0}, {1, 1}});
}

TEST_CASE("build errors") {
  CHECK(error_of([] {
          build_graph(occs({"o1"}), skills({"s1"}), {{"o1", "s9"}}, Matrix::Zero(1, 2), Matrix::Zero(1, 2));
        }) == ErrorCode::UnresolvedReference);
  CHECK(error_of([] {
          build_graph(occs({"o1"}), skills({"s1"}), {{"o1", "s1"}}, Matrix::Zero(1, 2), Matrix::Zero(1, 3));
        }) == ErrorCode::DimensionMismatch);
  CHECK(error_of([] {
          build_graph(occs({"o1", "o2"}), skills({"s1"}), {{"o1", "s1"}}, Matrix::Zero(2, 2), Matrix::Zero(1, 2));
        }) == ErrorCode::IsolatedNode);
}

TEST_CASE("isolated nodes: drop and keep") {
  const auto dropped = build_graph(occs({"o1", "o2"}), skills({"s1", "s2"}), {{"o1", "s1"}}, Matrix::Zero(2, 2),
                                   Matrix::Zero(2, 2), IsolatedPolicy::Drop);
  CHECK(dropped.num_occupations() == 1);
  CHECK(dropped.num_skills() == 1);
  CHECK(dropped.dropped_isolated.size() == 2);
  CHECK(validate(dropped).ok());

  const auto kept = build_graph(occs({"o1", "o2"}), skills({"s1"}), {{"o1", "s1"}}, Matrix::Zero(2, 2),
                                Matrix::Zero(1, 2), IsolatedPolicy::Keep);
  const auto r = validate(kept);
  REQUIRE(r.isolated.size() == 1);
  CHECK(r.isolated[0] == NodeRef{NodeKind::Occupation, 1});
  CHECK_FALSE(r.ok());
}

TEST_CASE("fixture graph structure") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = fixture_graph(fixture_corpus().occupations);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 10.0);
  CHECK(g.num_occupations() == 910);
  CHECK(g.num_skills() == 135);
  CHECK(g.num_edges() == 13222);
  const auto r = validate(g);
  CHECK(r.bipartite);
  CHECK(r.isolated.empty());
  CHECK(r.occupation_degree_sum == g.num_edges());
  CHECK(r.skill_degree_sum == g.num_edges());
  std::size_t hist_nodes = 0;
  for (const auto& [deg, n] : r.degree_histogram) hist_nodes += n;
  CHECK(hist_nodes == g.num_nodes());

  for (std::size_t o = 0; o < g.num_occupations(); ++o) {
    const auto nb = neighbors(g, {NodeKind::Occupation, o});
    REQUIRE_FALSE(nb.empty());
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    for (const auto& s : nb) REQUIRE(s.kind == NodeKind::Skill);
    const auto back = neighbors(g, nb.front());
    CHECK(std::find(back.begin(), back.end(), NodeRef{NodeKind::Occupation, o}) != back.end());
  }
}

TEST_CASE("rebuild and row permutation give identical serialization") {
  const auto& c = fixture_corpus();
  const auto a = graph_to_json(fixture_graph(c.occupations));
  CHECK(a == graph_to_json(fixture_graph(c.occupations)));
  auto shuffled = c.occupations;
  Rng rng(99);
  rng.shuffle(shuffled.begin(), shuffled.end());
  REQUIRE(shuffled != c.occupations);
  // features follow the rows, so rebuild them from the permuted order
  std::vector<OccupationRecord> original = c.occupations;
  const auto b_graph = [&] {
    Matrix of(static_cast<Eigen::Index>(shuffled.size()), 3);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      const auto pos = std::find(original.begin(), original.end(), shuffled[i]) - original.begin();
      of.row(static_cast<Eigen::Index>(i)) << double(pos), 1.0, -1.0;
    }
    return build_graph(shuffled, c.skills, c.links, of,
                       Matrix::Ones(static_cast<Eigen::Index>(c.skills.size()), 3));
  }();
  CHECK(graph_to_json(b_graph) == a);
  CHECK(b_graph.features() == fixture_graph(c.occupations).features());
}

}  // TEST_SUITE
