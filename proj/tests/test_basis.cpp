#include <doctest.h>

#include <random>

#include "tjsim/basis.hpp"

using namespace tjs;

TEST_CASE("sector dimensions") {
  CHECK(sector_dimension(3, 1, 1) == 6);
  CHECK(sector_dimension(19, 1, 1) == 342);
  CHECK(sector_dimension(19, 1, 2) == 2907);  // 19 * C(18,2)
  SUBCASE("match the binomial formula for random parameters") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 19);
      const int h = static_cast<int>(rng() % (n + 1));
      const int u = static_cast<int>(rng() % (n - h + 1));
      // independent brute-force count on small systems
      if (static_cast<double>(sector_dimension(n, h, u)) > 2e5) continue;
      std::size_t count = 0;
      std::vector<int> word(n, 0);
      for (;;) {
        int holes = 0, ups = 0;
        for (int s : word) {
          holes += s == 2;
          ups += s == 1;
        }
        if (holes == h && ups == u) ++count;
        int k = n - 1;
        while (k >= 0 && word[k] == 2) word[k--] = 0;
        if (k < 0) break;
        ++word[k];
      }
      CHECK(count == sector_dimension(n, h, u));
    }
  }
}

TEST_CASE("sector enumeration is lexicographic and ranked consistently") {
  SectorBasis basis(5, 1, 2);
  CHECK(basis.dimension() == sector_dimension(5, 1, 2));
  SUBCASE("first and last configurations take the extreme ranks") {
    CHECK(basis.rank(basis.config(0)) == 0);
    CHECK(basis.rank(basis.config(basis.dimension() - 1)) == basis.dimension() - 1);
  }
  SUBCASE("enumeration is strictly increasing in word order") {
    for (std::size_t m = 0; m + 1 < basis.dimension(); ++m)
      CHECK(basis.config(m).to_string(5) < basis.config(m + 1).to_string(5));
  }
  SUBCASE("rank equals the position found by a linear scan") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t m = rng() % basis.dimension();
      const Configuration& c = basis.config(m);
      std::size_t scan = 0;
      while (!(basis.config(scan) == c)) ++scan;
      CHECK(basis.rank(c) == scan);
      CHECK(scan == m);
    }
  }
}

TEST_CASE("rank/unrank bijection over whole sectors") {
  for (auto [n, h, u] : {std::array<int, 3>{6, 1, 2}, {8, 2, 3}, {10, 1, 4}, {12, 1, 1}}) {
    SectorBasis basis(n, h, u);
    REQUIRE(basis.dimension() <= 100000);
    for (std::size_t m = 0; m < basis.dimension(); ++m) CHECK(basis.rank(basis.config(m)) == m);
  }
}

TEST_CASE("rank rejects configurations outside the sector") {
  SectorBasis basis(4, 1, 1);
  CHECK_THROWS_AS(basis.rank(Configuration::from_string("dddd")), std::invalid_argument);
  CHECK_THROWS_AS(basis.rank(Configuration::from_string("uuhd")), std::invalid_argument);
}

TEST_CASE("dimension cap yields an explicit capacity error") {
  CHECK_THROWS_AS(SectorBasis(37, 1, 18), std::runtime_error);  // paper-scale balanced sector
  CHECK_NOTHROW(SectorBasis(19, 1, 2));
}

TEST_CASE("configuration strings round-trip") {
  const Configuration c = Configuration::from_string("duhdu");
  CHECK(c.to_string(5) == "duhdu");
  CHECK(c.at(0) == Local::down);
  CHECK(c.at(1) == Local::up);
  CHECK(c.at(2) == Local::hole);
  CHECK_THROWS_AS(Configuration::from_string("dug"), std::invalid_argument);
  const SiteWord word = site_word_from_string("dughL");
  CHECK(to_string(word) == "dughL");
}
