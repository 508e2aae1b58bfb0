#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "catdag/data.hpp"
#include "catdag/errors.hpp"

using namespace catdag;

TEST(Csv, ParsesHeaderAndSortsLevels) {
  std::istringstream in("a,b\nyes,2\nno,1\nyes, 1\r\n");
  const Dataset ds = parse_csv(in);
  ASSERT_EQ(ds.num_rows(), 3u);
  ASSERT_EQ(ds.num_vars(), 2);
  EXPECT_EQ(ds.names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.levels(0), (std::vector<std::string>{"no", "yes"}));
  EXPECT_EQ(ds.at(0, 0), 1);
  EXPECT_EQ(ds.at(2, 1), 0);
  EXPECT_EQ(ds.find_variable("b"), 1);
  EXPECT_EQ(ds.find_level(0, "no"), 0);
}

TEST(Csv, QuotedFieldsAndCustomDelimiter) {
  std::istringstream in("x;y\n\"p;q\";0\nr;1\n");
  CsvOptions o;
  o.delimiter = ';';
  const Dataset ds = parse_csv(in, o);
  EXPECT_EQ(ds.levels(0), (std::vector<std::string>{"p;q", "r"}));
}

TEST(Csv, NoHeaderNamesColumns) {
  std::istringstream in("0,1\n1,0\n");
  CsvOptions o;
  o.header = false;
  const Dataset ds = parse_csv(in, o);
  EXPECT_EQ(ds.num_rows(), 2u);
  EXPECT_EQ(ds.name(0), "X1");
}

TEST(Csv, Errors) {
  std::istringstream empty("a,b\n");
  EXPECT_THROW(parse_csv(empty), InputError);
  std::istringstream ragged("a,b\n0,1\n1\n");
  EXPECT_THROW(parse_csv(ragged), InputError);
  std::istringstream constant("a,b\n0,1\n0,0\n");
  EXPECT_THROW(parse_csv(constant), InputError);
  std::istringstream missing("a,b\n0,\n1,0\n");
  EXPECT_THROW(parse_csv(missing), InputError);
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv"), InputError);
}

TEST(Csv, WriteParseRoundTrip) {
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 3}, {{0, 2}, {1, 0}, {1, 1}});
  std::stringstream ss;
  write_csv(ss, ds);
  const Dataset back = parse_csv(ss);
  for (std::size_t i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_EQ(back.at(i, j), ds.at(i, j));
  }
}

TEST(ConfigCoder, FirstParentLeastSignificant) {
  const std::vector<int> cards{2, 3, 4};
  const std::vector<int> pa{1, 2};
  const ConfigCoder coder(pa, cards);
  EXPECT_EQ(coder.size(), 12u);
  const std::vector<int> digits{2, 1};
  EXPECT_EQ(coder.encode(digits), 2u + 3u * 1u);
  EXPECT_EQ(coder.decode(5), digits);
}

TEST(ConfigCoder, OverflowIsInputError) {
  const std::vector<int> cards(70, 2);
  std::vector<int> pa(65);
  for (int i = 0; i < 65; ++i) pa[static_cast<std::size_t>(i)] = i;
  EXPECT_THROW(ConfigCoder(pa, cards), InputError);
}

TEST(FamilyCounts, MatchesHandCount) {
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2}, {{0, 0}, {0, 1}, {1, 1}, {1, 1}});
  const std::vector<int> pa{0};
  const auto fc = family_counts(ds, 1, pa);
  ASSERT_EQ(fc.table.size(), 2u);
  EXPECT_EQ(fc.table[0].counts, (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(fc.table[1].counts, (std::vector<std::uint32_t>{0, 2}));
  EXPECT_EQ(fc.total(), 4u);
  const std::vector<int> self{1};
  EXPECT_THROW(family_counts(ds, 1, self), std::logic_error);
}

TEST(CountsCache, HitsMissesAndEviction) {
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2}, {{0, 0, 1}, {1, 1, 0}});
  CountsCache cache(ds, 2);
  const std::vector<int> a{0};
  const std::vector<int> b{2, 0};
  cache.get(1, a);
  cache.get(1, a);
  cache.get(1, b);
  cache.get(2, a);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.hits(), 1u);
  EXPECT_EQ(cache.misses(), 3u);
  const std::vector<int> b_sorted{0, 2};
  EXPECT_EQ(cache.get(1, b)->parents, b_sorted);
}

TEST(CountsCache, ConcurrentReadersAgree) {
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2}, {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}});
  CountsCache cache(ds, 4);
  std::vector<std::thread> threads;
  std::vector<std::uint64_t> totals(8);
  for (std::size_t t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      std::uint64_t sum = 0;
      for (int rep = 0; rep < 200; ++rep) {
        const std::vector<int> pa{static_cast<int>((t + static_cast<std::size_t>(rep)) % 2)};
        sum += cache.get(2, pa)->total();
      }
      totals[t] = sum;
    });
  }
  for (auto& th : threads) th.join();
  for (auto s : totals) EXPECT_EQ(s, 600u);
}
