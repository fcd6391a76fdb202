#include "aocgcn/corpus.hpp"

#include "aocgcn/common.hpp"
#include "aocgcn/csv.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

namespace aocgcn {

namespace {

void expect_header(const std::vector<csv::Row>& rows, const std::filesystem::path& path,
                   const std::vector<std::string>& header) {
  if (rows.empty()) {
    throw Error(ErrorCode::MalformedRow, path.filename().string() + " line 1: missing header");
  }
  if (rows.front().fields != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::MalformedRow,
                path.filename().string() + " line 1: header must be '" + want + "'");
  }
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw Error(ErrorCode::MalformedRow,
              path.filename().string() + " line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> checked_fields(const csv::Row& row, const std::filesystem::path& path,
                                        std::size_t width) {
  if (row.fields.size() != width) {
    malformed(path, row.line,
              "expected " + std::to_string(width) + " fields, got " +
                  std::to_string(row.fields.size()));
  }
  std::vector<std::string> out;
  out.reserve(width);
  for (const auto& f : row.fields) out.push_back(trim(f));
  return out;
}

}  // namespace

std::vector<OccupationRecord> parse_occupations(const std::filesystem::path& occupations_path,
                                                const std::filesystem::path& tasks_path) {
  const auto occ_rows = csv::read_file(occupations_path);
  expect_header(occ_rows, occupations_path, {"soc_code", "title"});
  std::vector<OccupationRecord> out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < occ_rows.size(); ++r) {
    auto f = checked_fields(occ_rows[r], occupations_path, 2);
    if (f[0].empty()) malformed(occupations_path, occ_rows[r].line, "empty soc_code");
    if (f[1].empty()) malformed(occupations_path, occ_rows[r].line, "empty title");
    if (index.count(f[0])) {
      throw Error(ErrorCode::DuplicateSocCode, occupations_path.filename().string() + " line " +
                                                   std::to_string(occ_rows[r].line) + ": " + f[0]);
    }
    index.emplace(f[0], out.size());
    out.push_back({f[0], f[1], {}});
  }

  const auto task_rows = csv::read_file(tasks_path);
  expect_header(task_rows, tasks_path, {"soc_code", "task_text"});
  for (std::size_t r = 1; r < task_rows.size(); ++r) {
    auto f = checked_fields(task_rows[r], tasks_path, 2);
    auto it = index.find(f[0]);
    if (it == index.end()) {
      throw Error(ErrorCode::UnresolvedReference, tasks_path.filename().string() + " line " +
                                                      std::to_string(task_rows[r].line) +
                                                      ": soc_code " + f[0]);
    }
    if (f[1].empty()) malformed(tasks_path, task_rows[r].line, "empty task_text");
    out[it->second].task_statements.push_back(f[1]);
  }
  return out;
}

std::vector<SkillRecord> parse_skills(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  expect_header(rows, path, {"skill_id", "skill_name"});
  std::vector<SkillRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto f = checked_fields(rows[r], path, 2);
    if (f[0].empty()) malformed(path, rows[r].line, "empty skill_id");
    if (f[1].empty()) malformed(path, rows[r].line, "empty skill_name");
    if (!seen.insert(f[0]).second) malformed(path, rows[r].line, "duplicate skill_id " + f[0]);
    out.push_back({f[0], f[1]});
  }
  return out;
}

LinkParseResult parse_links(const std::filesystem::path& path,
                            const std::vector<OccupationRecord>& occupations,
                            const std::vector<SkillRecord>& skills) {
  const auto rows = csv::read_file(path);
  expect_header(rows, path, {"soc_code", "skill_id"});
  std::unordered_set<std::string> socs, skill_ids;
  for (const auto& o : occupations) socs.insert(o.soc_code);
  for (const auto& s : skills) skill_ids.insert(s.skill_id);

  LinkParseResult out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto f = checked_fields(rows[r], path, 2);
    const auto where = path.filename().string() + " line " + std::to_string(rows[r].line);
    if (!socs.count(f[0])) throw Error(ErrorCode::UnresolvedReference, where + ": soc_code " + f[0]);
    if (!skill_ids.count(f[1])) {
      throw Error(ErrorCode::UnresolvedReference, where + ": skill_id " + f[1]);
    }
    if (!seen.emplace(f[0], f[1]).second) {
      ++out.duplicates;
      continue;
    }
    out.links.push_back({f[0], f[1]});
  }
  return out;
}

std::vector<LabelRecord> parse_labels(const std::filesystem::path& path,
                                      const std::vector<OccupationRecord>& occupations) {
  const auto rows = csv::read_file(path);
  expect_header(rows, path, {"soc_code", "label"});
  std::unordered_set<std::string> socs;
  for (const auto& o : occupations) socs.insert(o.soc_code);

  std::vector<LabelRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto f = checked_fields(rows[r], path, 2);
    const auto where = path.filename().string() + " line " + std::to_string(rows[r].line);
    if (!socs.count(f[0])) throw Error(ErrorCode::UnresolvedReference, where + ": soc_code " + f[0]);
    Label label;
    if (f[1] == "1") {
      label = Label::Automated;
    } else if (f[1] == "0") {
      label = Label::NonAutomated;
    } else {
      malformed(path, rows[r].line, "label must be 0 or 1, got '" + f[1] + "'");
    }
    if (!seen.insert(f[0]).second) throw Error(ErrorCode::DuplicateLabel, where + ": " + f[0]);
    out.push_back({f[0], label});
  }
  return out;
}

void write_occupations(const std::filesystem::path& occupations_path,
                       const std::filesystem::path& tasks_path,
                       const std::vector<OccupationRecord>& occupations) {
  std::vector<std::vector<std::string>> occ_rows, task_rows;
  for (const auto& o : occupations) {
    occ_rows.push_back({o.soc_code, o.title});
    for (const auto& t : o.task_statements) task_rows.push_back({o.soc_code, t});
  }
  csv::write_file(occupations_path, {"soc_code", "title"}, occ_rows);
  csv::write_file(tasks_path, {"soc_code", "task_text"}, task_rows);
}

void write_skills(const std::filesystem::path& path, const std::vector<SkillRecord>& skills) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : skills) rows.push_back({s.skill_id, s.name});
  csv::write_file(path, {"skill_id", "skill_name"}, rows);
}

void write_links(const std::filesystem::path& path, const std::vector<LinkRecord>& links) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : links) rows.push_back({l.soc_code, l.skill_id});
  csv::write_file(path, {"soc_code", "skill_id"}, rows);
}

void write_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& labels) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : labels) {
    rows.push_back({l.soc_code, l.label == Label::Automated ? "1" : "0"});
  }
  csv::write_file(path, {"soc_code", "label"}, rows);
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> counts)
    : tokens_(std::move(tokens)), counts_(std::move(counts)) {
  if (tokens_.size() != counts_.size()) {
    throw Error(ErrorCode::LengthMismatch, "vocabulary tokens/counts");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw Error(ErrorCode::MalformedRow, "duplicate vocabulary token " + tokens_[i]);
    }
  }
}

std::size_t Vocabulary::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? npos : it->second;
}

std::vector<std::size_t> Vocabulary::encode(const TokenSequence& seq) const {
  std::vector<std::size_t> out;
  out.reserve(seq.size());
  for (const auto& t : seq) {
    const auto i = index(t);
    if (i != npos) out.push_back(i);
  }
  return out;
}

Vocabulary build_vocabulary(const std::vector<TokenSequence>& sequences, std::size_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::Usage, "min_count must be >= 1");
  std::map<std::string, std::size_t> freq;
  for (const auto& seq : sequences) {
    for (const auto& t : seq) ++freq[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= min_count) kept.emplace_back(tok, n);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyCorpus,
                "no token reaches min_count " + std::to_string(min_count));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  for (auto& [tok, n] : kept) {
    tokens.push_back(tok);
    counts.push_back(n);
  }
  return Vocabulary(std::move(tokens), std::move(counts));
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "occupations.csv", dir / "task_statements.csv", dir / "skills.csv",
          dir / "occupation_skills.csv", dir / "labels.csv"};
}

Corpus load_corpus(const CorpusPaths& paths) {
  Corpus c;
  auto all = parse_occupations(paths.occupations, paths.tasks);
  c.occupation_rows = all.size();
  c.skills = parse_skills(paths.skills);
  auto links = parse_links(paths.links, all, c.skills);
  c.duplicate_links = links.duplicates;
  auto labels = parse_labels(paths.labels, all);

  std::unordered_set<std::string> linked;
  for (const auto& l : links.links) linked.insert(l.soc_code);
  std::unordered_set<std::string> admitted;
  for (auto& o : all) {
    if (o.task_statements.empty()) {
      c.excluded.push_back({o.soc_code, "no_task_statements"});
    } else if (!linked.count(o.soc_code)) {
      c.excluded.push_back({o.soc_code, "no_skill_links"});
    } else {
      admitted.insert(o.soc_code);
      c.occupations.push_back(std::move(o));
    }
  }
  for (auto& l : links.links) {
    if (admitted.count(l.soc_code)) c.links.push_back(std::move(l));
  }
  for (auto& l : labels) {
    if (admitted.count(l.soc_code)) {
      c.labels.push_back(std::move(l));
    } else {
      c.ignored_labels.push_back(l.soc_code);
    }
  }
  return c;
}

std::vector<TokenSequence> task_sequences(const std::vector<OccupationRecord>& occupations) {
  std::vector<TokenSequence> out;
  for (const auto& o : occupations) {
    for (const auto& t : o.task_statements) out.push_back(tokenize(t));
  }
  return out;
}

}  // namespace aocgcn
