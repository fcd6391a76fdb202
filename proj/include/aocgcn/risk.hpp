#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn {

struct RiskRow {
  std::string soc_code;
  std::string title;
  double probability = 0.0;
  std::size_t rank = 0;  // 1-based position in the sorted table
  bool at_risk = false;

  bool operator==(const RiskRow&) const = default;
};

struct RiskTable {
  std::vector<RiskRow> rows;
  double cutoff = 0.0;

  std::size_t flagged() const;
  double flagged_fraction() const;
  double max_probability() const;
};

// Sorted by descending probability, ties by ascending soc_code. The cutoff is
// inclusive: probability >= cutoff is at risk.
RiskTable rank(const std::vector<double>& probabilities, const std::vector<std::string>& soc_codes,
               const std::vector<std::string>& titles, double cutoff);

std::string risk_table_csv(const RiskTable& table);
void write_risk_table(const std::filesystem::path& path, const RiskTable& table);

struct DecliningEntry {
  std::string title;
  std::string soc_code;  // may be empty
  double decline = 0.0;
};

// CSV with header title,soc_code,decline
std::vector<DecliningEntry> parse_declining(const std::filesystem::path& path);

struct DecliningMatch {
  DecliningEntry entry;
  std::string soc_code;  // matched occupation
  std::string title;
  double probability = 0.0;
  bool above = false;
  bool by_soc = false;  // false: matched on normalized title
};

struct ComparisonReport {
  double threshold = 0.0;
  std::vector<DecliningMatch> matched;
  std::vector<DecliningEntry> unmatched;
  std::size_t above = 0;
  double fraction = 0.0;    // above / matched
  bool degenerate = false;  // nothing matched
};

// Exact soc_code match when the entry has one, else a case-insensitive match
// on titles with punctuation folded to single spaces.
ComparisonReport compare_declining(const RiskTable& table, const std::vector<DecliningEntry>& declining,
                                   double threshold);

std::string normalize_title(const std::string& title);
std::string comparison_to_json(const ComparisonReport& report);

}  // namespace aocgcn
