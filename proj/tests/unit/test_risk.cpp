#include "aocgcn/risk.hpp"

#include "support.hpp"

#include <numeric>

using namespace aocgcn;
using testing::TempDir;
using testing::error_of;


TEST_SUITE("risk") {

TEST_CASE("rank examples") {
  const auto t = rank({0.7, 0.1, 0.7}, {"b", "c", "a"}, {"B", "C", "A"}, 0.69);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].soc_code == "a");
  CHECK(t.rows[1].soc_code == "b");
  CHECK(t.rows[2].soc_code == "c");
  CHECK(t.rows[0].rank == 1);
  CHECK(t.rows[2].rank == 3);
  CHECK(t.flagged() == 2);
  CHECK(t.rows[1].at_risk);
  CHECK_FALSE(t.rows[2].at_risk);
  CHECK(t.max_probability() == 0.7);

  const auto zeros = rank({0.0, 0.0}, {"a", "b"}, {"A", "B"}, 0.69);
  CHECK(zeros.flagged() == 0);
  const auto exact = rank({0.69}, {"a"}, {"A"}, 0.69);
  CHECK(exact.rows[0].at_risk);

  CHECK(error_of([] { rank({0.5}, {"a", "b"}, {"A", "B"}, 0.5); }) == ErrorCode::ShapeMismatch);
  CHECK(error_of([] { rank({0.5}, {"a"}, {"A"}, 1.0); }) == ErrorCode::Usage);
  CHECK(error_of([] { rank({0.5}, {"a"}, {"A"}, 0.0); }) == ErrorCode::Usage);
}

TEST_CASE("csv layout") {
  const auto t = rank({0.25, 0.75}, {"11-1011.00", "43-4071.00"}, {"Chief Executives", "File Clerks, General"}, 0.69);
  CHECK(risk_table_csv(t) ==
        "soc_code,title,probability,rank,at_risk\n"
        "43-4071.00,\"File Clerks, General\",0.750000,1,1\n"
        "11-1011.00,Chief Executives,0.250000,2,0\n");
}

TEST_CASE("table properties on random inputs") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<double> p(n);
    std::vector<std::string> soc(n), title(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<double>(rng.below(21)) / 20.0;
      soc[i] = std::to_string(10000 + rng.below(90000)) + "." + std::to_string(i);
      title[i] = "T" + std::to_string(i);
    }
    const double cutoff = rng.uniform(0.05, 0.95);
    const auto t = rank(p, soc, title, cutoff);

    std::size_t expected = 0;
    for (double v : p) expected += v >= cutoff;
    CHECK(t.flagged_fraction() == static_cast<double>(expected) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(t.rows[i].rank == i + 1);
      CHECK(t.rows[i].at_risk == (t.rows[i].probability >= cutoff));
      if (i + 1 < n) {
        const auto& a = t.rows[i];
        const auto& b = t.rows[i + 1];
        CHECK((a.probability > b.probability || (a.probability == b.probability && a.soc_code < b.soc_code)));
      }
    }

    // lowering the cutoff never unflags
    const auto lower = rank(p, soc, title, cutoff * 0.8);
    for (std::size_t i = 0; i < n; ++i) {
      if (t.rows[i].at_risk) CHECK(lower.rows[i].at_risk);
    }

    // shuffled input gives the same table
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    std::vector<double> sp(n);
    std::vector<std::string> ss(n), st(n);
    for (std::size_t i = 0; i < n; ++i) {
      sp[i] = p[perm[i]];
      ss[i] = soc[perm[i]];
      st[i] = title[perm[i]];
    }
    CHECK(rank(sp, ss, st, cutoff).rows == t.rows);
  }
}

TEST_CASE("declining-list comparison") {
  const auto t = rank({0.9, 0.3, 0.5, 0.6}, {"43-4071.00", "11-1011.00", "41-2011.00", "43-9022.00"},
                      {"File Clerks", "Chief Executives", "Cashiers", "Word Processors and Typists"}, 0.69);
  const auto one = compare_declining(t, {{"File Clerks", "43-4071.00", -10.0}}, 0.5);
  CHECK(one.fraction == 1.0);
  CHECK(one.matched.size() == 1);
  CHECK(one.matched[0].by_soc);

  const auto empty = compare_declining(t, {}, 0.5);
  CHECK(empty.degenerate);

  const std::vector<DecliningEntry> list{
      {"word-processors AND typists", "", -30.0},  // title match
      {"Cashiers", "41-2011.00", -10.0},         // exactly at the threshold: not above
      {"Switchboard Operators", "", -5.0},       // unmatched
      {"Anything", "11-1011.00", -1.0},          // soc wins over title
  };
  const auto r = compare_declining(t, list, 0.5);
  REQUIRE(r.matched.size() == 3);
  CHECK(r.unmatched.size() == 1);
  CHECK(r.above == 1);
  CHECK(r.fraction == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(r.matched[0].by_soc);
  CHECK(r.matched[0].soc_code == "43-9022.00");
  CHECK(r.matched[2].title == "Chief Executives");
  CHECK(normalize_title("  Word-Processors & TYPISTS ") == "word processors typists");
}

TEST_CASE("declining csv") {
  TempDir d;
  const auto ok = d.write("dec.csv", "title,soc_code,decline\nFile Clerks,43-4071.00,-23.4\nCashiers,,-10\n");
  const auto e = parse_declining(ok);
  REQUIRE(e.size() == 2);
  CHECK(e[1].soc_code.empty());
  CHECK(e[0].decline == -23.4);
  const auto bad = d.write("bad.csv", "name,decline\nx,1\n");
  CHECK(error_of([&] { parse_declining(bad); }) == ErrorCode::MalformedRow);
}

}  // TEST_SUITE
