#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aocgcn {

struct OccupationRecord {
  std::string soc_code;
  std::string title;
  std::vector<std::string> task_statements;

  bool operator==(const OccupationRecord&) const = default;
};

struct SkillRecord {
  std::string skill_id;
  std::string name;

  bool operator==(const SkillRecord&) const = default;
};

struct LinkRecord {
  std::string soc_code;
  std::string skill_id;

  bool operator==(const LinkRecord&) const = default;
};

enum class Label { NonAutomated = 0, Automated = 1 };

struct LabelRecord {
  std::string soc_code;
  Label label = Label::NonAutomated;

  bool operator==(const LabelRecord&) const = default;
};

using TokenSequence = std::vector<std::string>;

struct LinkParseResult {
  std::vector<LinkRecord> links;
  std::size_t duplicates = 0;
};

// Occupations come from two files: occupations.csv (soc_code,title) and
// task_statements.csv (soc_code,task_text). Input order of occupations.csv is
// preserved; task statements keep their file order within an occupation.
std::vector<OccupationRecord> parse_occupations(const std::filesystem::path& occupations_path,
                                                const std::filesystem::path& tasks_path);
std::vector<SkillRecord> parse_skills(const std::filesystem::path& path);
LinkParseResult parse_links(const std::filesystem::path& path,
                            const std::vector<OccupationRecord>& occupations,
                            const std::vector<SkillRecord>& skills);
std::vector<LabelRecord> parse_labels(const std::filesystem::path& path,
                                      const std::vector<OccupationRecord>& occupations);

void write_occupations(const std::filesystem::path& occupations_path,
                       const std::filesystem::path& tasks_path,
                       const std::vector<OccupationRecord>& occupations);
void write_skills(const std::filesystem::path& path, const std::vector<SkillRecord>& skills);
void write_links(const std::filesystem::path& path, const std::vector<LinkRecord>& links);
void write_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& labels);

// Lowercase, split on every non-alphanumeric byte, drop tokens shorter than two
// characters. Digit-containing tokens are kept.
TokenSequence tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> counts);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  // npos for out-of-vocabulary tokens.
  std::size_t index(std::string_view token) const;
  bool contains(std::string_view token) const { return index(token) != npos; }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::size_t count(std::size_t i) const { return counts_.at(i); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

  std::vector<std::size_t> encode(const TokenSequence& seq) const;  // OOV dropped

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Tokens with frequency >= min_count, indexed by descending frequency with
// lexicographic tie-break. Throws EmptyCorpus when nothing survives.
Vocabulary build_vocabulary(const std::vector<TokenSequence>& sequences, std::size_t min_count);

struct Exclusion {
  std::string soc_code;
  std::string reason;  // "no_task_statements" | "no_skill_links"
};

// Every input table, validated and cross-resolved. `occupations` holds only
// occupations admitted to the graph (at least one task statement and one link);
// the rest are listed in `excluded`.
struct Corpus {
  std::vector<OccupationRecord> occupations;
  std::vector<SkillRecord> skills;
  std::vector<LinkRecord> links;
  std::vector<LabelRecord> labels;
  std::vector<Exclusion> excluded;
  std::vector<std::string> ignored_labels;  // labels of excluded occupations
  std::size_t occupation_rows = 0;
  std::size_t duplicate_links = 0;
};

struct CorpusPaths {
  std::filesystem::path occupations;
  std::filesystem::path tasks;
  std::filesystem::path skills;
  std::filesystem::path links;
  std::filesystem::path labels;

  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

Corpus load_corpus(const CorpusPaths& paths);

// One token sequence per task statement, occupation order then statement order.
std::vector<TokenSequence> task_sequences(const std::vector<OccupationRecord>& occupations);

}  // namespace aocgcn
