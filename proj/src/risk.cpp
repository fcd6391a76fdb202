#include "aocgcn/risk.hpp"

#include "aocgcn/common.hpp"
#include "aocgcn/csv.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace aocgcn {

std::size_t RiskTable::flagged() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const RiskRow& r) { return r.at_risk; }));
}

double RiskTable::flagged_fraction() const {
  if (rows.empty()) return 0.0;
  return static_cast<double>(flagged()) / static_cast<double>(rows.size());
}

double RiskTable::max_probability() const { return rows.empty() ? 0.0 : rows.front().probability; }

RiskTable rank(const std::vector<double>& probabilities, const std::vector<std::string>& soc_codes,
               const std::vector<std::string>& titles, double cutoff) {
  if (probabilities.size() != soc_codes.size() || probabilities.size() != titles.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                fmt::format("{} probabilities for {} occupations", probabilities.size(), soc_codes.size()));
  }
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw Error(ErrorCode::Usage, "cutoff must lie in (0,1)");
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::DegenerateInput, "probability outside [0,1]");
    }
  }
  std::vector<std::size_t> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (probabilities[a] != probabilities[b]) return probabilities[a] > probabilities[b];
    return soc_codes[a] < soc_codes[b];
  });
  RiskTable table;
  table.cutoff = cutoff;
  table.rows.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto k = order[i];
    table.rows.push_back({soc_codes[k], titles[k], probabilities[k], i + 1, probabilities[k] >= cutoff});
  }
  return table;
}

std::string risk_table_csv(const RiskTable& table) {
  std::string out = csv::format_row({"soc_code", "title", "probability", "rank", "at_risk"});
  for (const auto& r : table.rows) {
    out += csv::format_row({r.soc_code, r.title, fmt::format("{:.6f}", r.probability),
                            std::to_string(r.rank), r.at_risk ? "1" : "0"});
  }
  return out;
}

void write_risk_table(const std::filesystem::path& path, const RiskTable& table) {
  csv::write_text(path, risk_table_csv(table));
}

std::vector<DecliningEntry> parse_declining(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty() || rows[0].fields != std::vector<std::string>{"title", "soc_code", "decline"}) {
    throw Error(ErrorCode::MalformedRow, path.string() + ": expected header title,soc_code,decline");
  }
  std::vector<DecliningEntry> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    const auto where = fmt::format("{}:{}", path.string(), rows[i].line);
    if (f.size() != 3) throw Error(ErrorCode::MalformedRow, where + ": expected 3 fields");
    if (f[0].empty()) throw Error(ErrorCode::MalformedRow, where + ": empty title");
    DecliningEntry e{f[0], f[1], 0.0};
    try {
      std::size_t used = 0;
      e.decline = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument(f[2]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRow, where + ": bad decline value '" + f[2] + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string normalize_title(const std::string& title) {
  std::string out;
  bool space = false;
  for (unsigned char c : title) {
    if (std::isalnum(c)) {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      space = true;
    }
  }
  return out;
}

ComparisonReport compare_declining(const RiskTable& table, const std::vector<DecliningEntry>& declining,
                                   double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::Usage, "threshold must lie in (0,1)");
  std::map<std::string, std::size_t> by_soc, by_title;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    by_soc.emplace(table.rows[i].soc_code, i);
    by_title.emplace(normalize_title(table.rows[i].title), i);
  }
  ComparisonReport report;
  report.threshold = threshold;
  for (const auto& e : declining) {
    std::size_t hit = table.rows.size();
    bool soc = false;
    if (!e.soc_code.empty()) {
      if (auto it = by_soc.find(e.soc_code); it != by_soc.end()) {
        hit = it->second;
        soc = true;
      }
    } else if (auto it = by_title.find(normalize_title(e.title)); it != by_title.end()) {
      hit = it->second;
    }
    if (hit == table.rows.size()) {
      report.unmatched.push_back(e);
      continue;
    }
    const auto& row = table.rows[hit];
    const bool above = row.probability > threshold;
    report.matched.push_back({e, row.soc_code, row.title, row.probability, above, soc});
    report.above += above ? 1 : 0;
  }
  report.degenerate = report.matched.empty();
  if (!report.degenerate) {
    report.fraction = static_cast<double>(report.above) / static_cast<double>(report.matched.size());
  }
  return report;
}

std::string comparison_to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["threshold"] = report.threshold;
  j["matched_count"] = report.matched.size();
  j["above_count"] = report.above;
  j["fraction"] = report.degenerate ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(report.fraction);
  j["degenerate"] = report.degenerate;
  auto& m = j["matched"] = nlohmann::ordered_json::array();
  for (const auto& x : report.matched) {
    m.push_back({{"declining_title", x.entry.title},
                 {"soc_code", x.soc_code},
                 {"title", x.title},
                 {"probability", x.probability},
                 {"above", x.above},
                 {"match", x.by_soc ? "soc_code" : "title"}});
  }
  auto& u = j["unmatched"] = nlohmann::ordered_json::array();
  for (const auto& x : report.unmatched) u.push_back({{"title", x.title}, {"soc_code", x.soc_code}});
  return j.dump(2) + "\n";
}

}  // namespace aocgcn
