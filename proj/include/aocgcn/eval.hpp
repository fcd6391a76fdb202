#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace aocgcn {

// Indices refer to whatever numbering the caller labels with (occupation
// indices in the pipeline). Each part is sorted ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Stratified 8:1:1 split: test = round(n/10), validation = round(n/10),
// train = the rest. `labels[i]` is the class (0/1) of `labeled[i]`.
Split split_labels(const std::vector<std::size_t>& labeled, const std::vector<int>& labels,
                   std::uint64_t seed);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Class 1 (automated) is positive.
ConfusionCounts confusion(const std::vector<int>& predictions, const std::vector<int>& truths);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;  // no positive predictions
  bool recall_degenerate = false;     // no positive truths
  bool f1_degenerate = false;         // precision + recall == 0
};

MetricsReport metrics(const ConfusionCounts& counts);

std::string split_to_json(const Split& split, const std::vector<std::string>& ids);

}  // namespace aocgcn
