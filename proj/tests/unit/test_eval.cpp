#include "aocgcn/eval.hpp"

#include "support.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace aocgcn;
using testing::error_of;

namespace {

std::vector<int> repeat(std::initializer_list<std::pair<int, int>> runs) {
  std::vector<int> out;
  for (auto [value, n] : runs) out.insert(out.end(), static_cast<std::size_t>(n), value);
  return out;
}

std::size_t count_class(const std::vector<std::size_t>& part, const std::vector<std::size_t>& labeled,
                        const std::vector<int>& labels, int cls) {
  std::size_t n = 0;
  for (auto idx : part) {
    const auto pos = std::find(labeled.begin(), labeled.end(), idx) - labeled.begin();
    n += labels[static_cast<std::size_t>(pos)] == cls;
  }
  return n;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("confusion arithmetic tp=7 fp=0 fn=1 tn=3") {
  // tp=7, fp=0, fn=1, tn=3 on an 11-item test set
  const auto truths = repeat({{1, 7}, {1, 1}, {0, 3}});
  const auto preds = repeat({{1, 7}, {0, 1}, {0, 3}});
  const auto c = confusion(preds, truths);
  CHECK(c == ConfusionCounts{7, 0, 3, 1});
  const auto m = metrics(c);
  CHECK(fmt::format("{:.4f}", m.accuracy) == "0.9091");
  CHECK(fmt::format("{:.4f}", m.precision) == "1.0000");
  CHECK(fmt::format("{:.4f}", m.recall) == "0.8750");
  CHECK(fmt::format("{:.4f}", m.f1) == "0.9333");
  // hand fractions: 10/11, 7/7, 7/8, 2*7/(2*7+0+1)
  CHECK(m.accuracy == 10.0 / 11.0);
  CHECK(m.recall == 7.0 / 8.0);
  CHECK(std::abs(m.f1 - 14.0 / 15.0) < 1e-12);
}

TEST_CASE("metric edge cases") {
  const auto all = metrics(confusion({1, 0, 1}, {1, 0, 1}));
  CHECK(all.accuracy == 1.0);
  CHECK(all.f1 == 1.0);

  const auto none = metrics(confusion({0, 0, 0}, {1, 0, 1}));
  CHECK(none.precision == 0.0);
  CHECK(none.precision_degenerate);
  CHECK(none.recall == 0.0);
  CHECK_FALSE(none.recall_degenerate);
  CHECK(none.f1 == 0.0);
  CHECK(none.f1_degenerate);

  CHECK(error_of([] { confusion({1}, {1, 0}); }) == ErrorCode::LengthMismatch);
  CHECK(error_of([] { confusion({}, {}); }) == ErrorCode::Empty);
}

TEST_CASE("metric identities on random vectors") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<int> p(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.below(2));
      t[i] = static_cast<int>(rng.below(2));
    }
    const auto c = confusion(p, t);
    REQUIRE(c.total() == n);
    const auto m = metrics(c);
    CHECK(m.accuracy == static_cast<double>(c.tp + c.tn) / static_cast<double>(n));
    if (m.precision + m.recall > 0) {
      CHECK(std::abs(m.f1 - 2 * m.precision * m.recall / (m.precision + m.recall)) <= 1e-12);
    }
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) CHECK((v >= 0.0 && v <= 1.0));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    std::vector<int> pp(n), tt(n);
    for (std::size_t i = 0; i < n; ++i) {
      pp[i] = p[perm[i]];
      tt[i] = t[perm[i]];
    }
    const auto mp = metrics(confusion(pp, tt));
    CHECK(mp.accuracy == m.accuracy);
    CHECK(mp.precision == m.precision);
    CHECK(mp.recall == m.recall);
    CHECK(mp.f1 == m.f1);
  }
}

TEST_CASE("split sizes and stratification") {
  std::vector<std::size_t> labeled(112);
  std::iota(labeled.begin(), labeled.end(), 1000);
  std::vector<int> labels(112);
  for (std::size_t i = 0; i < 112; ++i) labels[i] = i % 2 == 0;
  const auto s = split_labels(labeled, labels, 5);
  CHECK(s.train.size() == 90);
  CHECK(s.validation.size() == 11);
  CHECK(s.test.size() == 11);
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    CHECK(std::is_sorted(part->begin(), part->end()));
    const double expected = static_cast<double>(part->size()) * 56.0 / 112.0;
    CHECK(std::abs(static_cast<double>(count_class(*part, labeled, labels, 1)) - expected) <= 1.0);
  }
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  CHECK(all.size() == 112);
  CHECK(*all.begin() == 1000);

  const auto again = split_labels(labeled, labels, 5);
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  CHECK(split_labels(labeled, labels, 6).test != s.test);

  std::vector<std::size_t> ten(10);
  std::iota(ten.begin(), ten.end(), 0);
  const auto small = split_labels(ten, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, 1);
  CHECK(small.train.size() == 8);
  CHECK(small.validation.size() == 1);
  CHECK(small.test.size() == 1);

  CHECK(error_of([] { split_labels({0, 1, 2}, {0, 1, 0}, 1); }) == ErrorCode::TooFewLabels);
}

TEST_CASE("split stratification over many seeds and sizes") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + rng.below(200);
    std::vector<std::size_t> labeled(n);
    std::iota(labeled.begin(), labeled.end(), 0);
    std::vector<int> labels(n);
    std::size_t pos = 0;
    for (auto& l : labels) pos += (l = static_cast<int>(rng.below(2)));
    const auto s = split_labels(labeled, labels, rng.next());
    const auto tenth = static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0));
    CHECK(s.test.size() == tenth);
    CHECK(s.validation.size() == tenth);
    CHECK(s.train.size() == n - 2 * tenth);
    const double share = static_cast<double>(pos) / static_cast<double>(n);
    for (const auto* part : {&s.train, &s.validation, &s.test}) {
      const double expected = static_cast<double>(part->size()) * share;
      CHECK(std::abs(static_cast<double>(count_class(*part, labeled, labels, 1)) - expected) <= 1.0);
    }
  }
}

}  // TEST_SUITE
