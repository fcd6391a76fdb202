#include "aocgcn/corpus.hpp"

#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace aocgcn;
using testing::TempDir;
using testing::error_of;

TEST_SUITE("corpus") {

TEST_CASE("tokenize examples") {
  CHECK(tokenize("Compile, sort and verify data.") == TokenSequence{"compile", "sort", "and", "verify", "data"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("C++ 3D-modeling") == TokenSequence{"3d", "modeling"});
  CHECK(tokenize("  ROUTE 66 a x9 ") == TokenSequence{"route", "66", "x9"});
}

TEST_CASE("vocabulary ordering and ties") {
  const auto v = build_vocabulary({{"a", "b", "a"}, {"b", "c"}}, 2);
  REQUIRE(v.size() == 2);
  CHECK(v.index("a") == 0);
  CHECK(v.index("b") == 1);
  CHECK_FALSE(v.contains("c"));
  CHECK(v.count(0) == 2);

  const auto one = build_vocabulary({{"x"}}, 1);
  CHECK(one.size() == 1);
  CHECK(one.index("x") == 0);

  CHECK(error_of([] { build_vocabulary({{"a", "b"}}, 5); }) == ErrorCode::EmptyCorpus);
  CHECK(v.encode({"c", "b", "a", "zz"}) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("parse_occupations groups task statements") {
  TempDir d;
  const auto occ = d.write("occupations.csv", "soc_code,title\n11-1011.00,Chief Executives\n43-4071.00,File Clerks\n");
  const auto tasks = d.write("tasks.csv",
                             "soc_code,task_text\n43-4071.00,File records.\n11-1011.00,Direct budgets.\n"
                             "43-4071.00,\"Sort mail, quickly\"\n");
  const auto recs = parse_occupations(occ, tasks);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].soc_code == "11-1011.00");
  CHECK(recs[0].task_statements.size() == 1);
  CHECK(recs[1].task_statements == std::vector<std::string>{"File records.", "Sort mail, quickly"});
}

TEST_CASE("header-only files give empty lists") {
  TempDir d;
  const auto occ = d.write("o.csv", "soc_code,title\n");
  const auto tasks = d.write("t.csv", "soc_code,task_text\n");
  CHECK(parse_occupations(occ, tasks).empty());
}

TEST_CASE("parse errors") {
  TempDir d;
  const auto tasks = d.write("t.csv", "soc_code,task_text\n");
  CHECK(error_of([&] { parse_occupations(d / "nope.csv", tasks); }) == ErrorCode::MissingFile);
  const auto dup = d.write("dup.csv", "soc_code,title\n11-1011.00,A\n11-1011.00,B\n");
  CHECK(error_of([&] { parse_occupations(dup, tasks); }) == ErrorCode::DuplicateSocCode);
  const auto bad = d.write("bad.csv", "soc_code,title\n11-1011.00\n");
  CHECK(error_of([&] { parse_occupations(bad, tasks); }) == ErrorCode::MalformedRow);
  const auto header = d.write("hdr.csv", "code,name\n11-1011.00,A\n");
  CHECK(error_of([&] { parse_occupations(header, tasks); }) == ErrorCode::MalformedRow);
  const auto quote = d.write("q.csv", "soc_code,title\n11-1011.00,\"open\n");
  CHECK(error_of([&] { parse_occupations(quote, tasks); }) == ErrorCode::MalformedRow);
}

TEST_CASE("links, labels and reference resolution") {
  TempDir d;
  const std::vector<OccupationRecord> occ{{"11-1011.00", "Chief Executives", {"x"}},
                                          {"43-4071.00", "File Clerks", {"y"}}};
  const std::vector<SkillRecord> skills{{"2.A.1.a", "Reading Comprehension"}, {"2.A.1.b", "Active Listening"}};

  const auto links = d.write("l.csv", "soc_code,skill_id\n11-1011.00,2.A.1.a\n11-1011.00,2.A.1.a\n43-4071.00,2.A.1.b\n");
  const auto lr = parse_links(links, occ, skills);
  CHECK(lr.links.size() == 2);
  CHECK(lr.duplicates == 1);

  const auto bad_skill = d.write("l2.csv", "soc_code,skill_id\n11-1011.00,9.Z\n");
  CHECK(error_of([&] { parse_links(bad_skill, occ, skills); }) == ErrorCode::UnresolvedReference);
  const auto bad_soc = d.write("l3.csv", "soc_code,skill_id\n99-9999.00,2.A.1.a\n");
  CHECK(error_of([&] { parse_links(bad_soc, occ, skills); }) == ErrorCode::UnresolvedReference);

  const auto one = d.write("lab.csv", "soc_code,label\n11-1011.00,1\n");
  const auto labels = parse_labels(one, occ);
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].label == Label::Automated);

  const auto dup = d.write("lab2.csv", "soc_code,label\n11-1011.00,1\n11-1011.00,0\n");
  CHECK(error_of([&] { parse_labels(dup, occ); }) == ErrorCode::DuplicateLabel);
  const auto unknown = d.write("lab3.csv", "soc_code,label\n12-0000.00,1\n");
  CHECK(error_of([&] { parse_labels(unknown, occ); }) == ErrorCode::UnresolvedReference);
  const auto bad_value = d.write("lab4.csv", "soc_code,label\n11-1011.00,2\n");
  CHECK(error_of([&] { parse_labels(bad_value, occ); }) == ErrorCode::MalformedRow);
}

TEST_CASE("fixture corpus counts") {
  const auto c = load_corpus(CorpusPaths::in_directory(testing::fixture_dir()));
  CHECK(c.occupations.size() == 910);
  CHECK(c.skills.size() == 135);
  CHECK(c.links.size() == 13222);
  REQUIRE(c.labels.size() == 112);
  const auto automated = std::count_if(c.labels.begin(), c.labels.end(),
                                       [](const LabelRecord& l) { return l.label == Label::Automated; });
  CHECK(automated == 56);
  CHECK(c.occupation_rows == c.occupations.size() + c.excluded.size());
  for (const auto& o : c.occupations) CHECK_FALSE(o.task_statements.empty());
}

TEST_CASE("round trip through the file format") {
  const auto c = load_corpus(CorpusPaths::in_directory(testing::fixture_dir()));
  TempDir d;
  write_occupations(d / "occupations.csv", d / "task_statements.csv", c.occupations);
  write_skills(d / "skills.csv", c.skills);
  write_links(d / "occupation_skills.csv", c.links);
  write_labels(d / "labels.csv", c.labels);
  const auto occ = parse_occupations(d / "occupations.csv", d / "task_statements.csv");
  CHECK(occ == c.occupations);
  CHECK(parse_skills(d / "skills.csv") == c.skills);
  const auto links = parse_links(d / "occupation_skills.csv", occ, c.skills);
  CHECK(links.links == c.links);
  CHECK(links.duplicates == 0);
  CHECK(parse_labels(d / "labels.csv", occ) == c.labels);
}

TEST_CASE("tokenizer is idempotent on the fixture") {
  const auto c = load_corpus(CorpusPaths::in_directory(testing::fixture_dir()));
  std::size_t checked = 0;
  for (const auto& o : c.occupations) {
    for (const auto& t : o.task_statements) {
      const auto once = tokenize(t);
      std::string joined;
      for (const auto& tok : once) joined += tok + " ";
      REQUIRE(tokenize(joined) == once);
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("vocabulary is a dense frequency-sorted permutation") {
  const auto c = load_corpus(CorpusPaths::in_directory(testing::fixture_dir()));
  const auto seqs = task_sequences(c.occupations);
  const auto v = build_vocabulary(seqs, 2);
  std::map<std::string, std::size_t> freq;
  for (const auto& s : seqs) {
    for (const auto& t : s) ++freq[t];
  }
  std::set<std::size_t> indices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    indices.insert(v.index(v.token(i)));
    CHECK(v.count(i) == freq[v.token(i)]);
    CHECK(v.count(i) >= 2);
    if (i + 1 < v.size()) {
      CHECK(v.count(i) >= v.count(i + 1));
      if (v.count(i) == v.count(i + 1)) CHECK(v.token(i) < v.token(i + 1));
    }
  }
  CHECK(indices.size() == v.size());
  CHECK(*indices.rbegin() == v.size() - 1);
  std::size_t eligible = 0;
  for (const auto& [t, n] : freq) eligible += n >= 2;
  CHECK(eligible == v.size());
}

}  // TEST_SUITE
