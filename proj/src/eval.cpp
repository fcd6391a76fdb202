#include "aocgcn/eval.hpp"

#include "aocgcn/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace aocgcn {

namespace {

// Largest-remainder apportionment of `total` across classes sized `sizes`.
std::array<std::size_t, 2> apportion(std::size_t total, const std::array<std::size_t, 2>& sizes) {
  const double n = static_cast<double>(sizes[0] + sizes[1]);
  std::array<std::size_t, 2> out{};
  std::array<double, 2> rem{};
  std::size_t given = 0;
  for (int c = 0; c < 2; ++c) {
    const double exact = n > 0 ? static_cast<double>(total) * static_cast<double>(sizes[c]) / n : 0.0;
    out[c] = std::min(sizes[c], static_cast<std::size_t>(std::floor(exact)));
    rem[c] = exact - static_cast<double>(out[c]);
    given += out[c];
  }
  while (given < total) {
    // larger remainder first, ties to the class with more members left, then class 0
    int best = -1;
    for (int c = 0; c < 2; ++c) {
      if (out[c] >= sizes[c]) continue;
      if (best < 0 || rem[c] > rem[best] ||
          (rem[c] == rem[best] && sizes[c] - out[c] > sizes[best] - out[best])) {
        best = c;
      }
    }
    if (best < 0) break;
    ++out[best];
    rem[best] -= 1.0;
    ++given;
  }
  return out;
}

}  // namespace

Split split_labels(const std::vector<std::size_t>& labeled, const std::vector<int>& labels,
                   std::uint64_t seed) {
  if (labeled.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "labeled indices vs labels");
  }
  const std::size_t n = labeled.size();
  if (n < 10) {
    throw Error(ErrorCode::TooFewLabels, "need >= 10 labeled nodes, have " + std::to_string(n));
  }
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorCode::MalformedRow, "label must be 0 or 1");
    }
    by_class[static_cast<std::size_t>(labels[i])].push_back(labeled[i]);
  }
  Rng rng(seed);
  for (auto& members : by_class) {
    std::sort(members.begin(), members.end());
    rng.shuffle(members.begin(), members.end());
  }

  const auto part = static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0));
  const auto test_quota = apportion(part, {by_class[0].size(), by_class[1].size()});
  const auto val_quota = apportion(
      part, {by_class[0].size() - test_quota[0], by_class[1].size() - test_quota[1]});

  Split s;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& m = by_class[c];
    std::size_t k = 0;
    for (; k < test_quota[c]; ++k) s.test.push_back(m[k]);
    for (std::size_t j = 0; j < val_quota[c]; ++j, ++k) s.validation.push_back(m[k]);
    for (; k < m.size(); ++k) s.train.push_back(m[k]);
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

ConfusionCounts confusion(const std::vector<int>& predictions, const std::vector<int>& truths) {
  if (predictions.size() != truths.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                               std::to_string(truths.size()) + " truths");
  }
  if (predictions.empty()) throw Error(ErrorCode::Empty, "no items to evaluate");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool p = predictions[i] == 1, t = truths[i] == 1;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricsReport metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(ErrorCode::Empty, "empty confusion counts");
  MetricsReport m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp == 0) {
    m.precision_degenerate = true;
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    m.recall_degenerate = true;
  } else {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f1_degenerate = true;
  }
  return m;
}

std::string split_to_json(const Split& split, const std::vector<std::string>& ids) {
  auto names = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(ids.at(i));
    return out;
  };
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["train"] = names(split.train);
  j["validation"] = names(split.validation);
  j["test"] = names(split.test);
  return j.dump(2) + "\n";
}

}  // namespace aocgcn
