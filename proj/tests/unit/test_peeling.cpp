#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <random>
#include <vector>

#include "fxlt/peeling.hpp"
#include "peel_oracle.hpp"
#include "test_support.hpp"

using namespace fxlt;

namespace {

Neighborhood nb3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  Neighborhood nb;
  nb.locations = {a, b, c, 0};
  return nb;
}

}  // namespace

TEST_CASE("XorSet algebra") {
  XorSet s;
  s.add(5);
  s.add(3);
  CHECK(s == XorSet{6, 2});
  CHECK_FALSE(s.singleton());
  s.remove(3);
  CHECK(s == XorSet{5, 1});
  REQUIRE(s.singleton());
  CHECK(*s.singleton() == 5);

  XorSet t;
  t.add(42);
  t.remove(42);
  CHECK(t == XorSet{0, 0});
  CHECK_FALSE(t.singleton());
}

TEST_CASE("XorSet result is independent of operation order") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    // (index, isAdd) with every removal matched by an earlier add in the base order.
    std::vector<std::pair<std::uint32_t, bool>> ops;
    std::vector<std::uint32_t> live;
    for (int i = 0; i < 30; ++i) {
      if (!live.empty() && rng() % 3 == 0) {
        const std::size_t pick = rng() % live.size();
        ops.emplace_back(live[pick], false);
        live.erase(live.begin() + pick);
      } else {
        const auto idx = static_cast<std::uint32_t>(rng() % 1000);
        ops.emplace_back(idx, true);
        live.push_back(idx);
      }
    }
    auto apply = [](const auto& seq) {
      XorSet s;
      for (const auto& [idx, isAdd] : seq) isAdd ? s.add(idx) : s.remove(idx);
      return s;
    };
    const XorSet expected = apply(ops);
    std::shuffle(ops.begin(), ops.end(), rng);
    CHECK(apply(ops) == expected);
    CHECK(expected.cardinality == live.size());
  }
}

TEST_CASE("peelLinear small instances") {
  SUBCASE("empty") {
    const auto r = peelLinear(std::span<const Neighborhood>{}, 10, 3);
    CHECK(r.ok());
    CHECK(r.order.empty());
  }
  SUBCASE("single key is emitted from its lowest singleton slot") {
    const std::vector<Neighborhood> nbs = {nb3(2, 5, 9)};
    const auto r = peelLinear(nbs, 10, 3);
    REQUIRE(r.ok());
    REQUIRE(r.order.size() == 1);
    CHECK(r.order[0] == PeelEntry{0, 2, 0});
  }
  SUBCASE("fully overlapping keys never peel") {
    const std::vector<Neighborhood> nbs = {nb3(1, 4, 7), nb3(1, 4, 7), nb3(1, 4, 7)};
    const auto linear = peelLinear(nbs, 8, 3);
    CHECK_FALSE(linear.ok());
    CHECK(linear.unpeeled == 3);
    const auto legacy = peelGreedyLegacy(nbs, 8, 3);
    CHECK_FALSE(legacy.ok());
    CHECK(legacy.unpeeled == 3);
  }
  SUBCASE("a key hitting one slot twice is not a singleton there") {
    const std::vector<Neighborhood> nbs = {nb3(3, 3, 6)};
    const auto r = peelLinear(nbs, 8, 3);
    REQUIRE(r.ok());
    CHECK(r.order[0] == PeelEntry{0, 6, 2});
    CHECK(isValidPeelOrder(r.order, nbs, 8, 3));
  }
  SUBCASE("a key with all locations equal cannot be peeled") {
    const std::vector<Neighborhood> nbs = {nb3(4, 4, 4)};
    CHECK(peelLinear(nbs, 8, 3).unpeeled == 1);
    CHECK(peelGreedyLegacy(nbs, 8, 3).unpeeled == 1);
  }
  SUBCASE("chain peels in FIFO order") {
    // Initial singletons are slots 0 and 4; peeling them frees slot 1.
    const std::vector<Neighborhood> nbs = {nb3(0, 1, 2), nb3(1, 2, 3), nb3(2, 3, 4)};
    const auto r = peelLinear(nbs, 5, 3);
    REQUIRE(r.ok());
    const std::vector<PeelEntry> expected = {{0, 0, 0}, {2, 4, 2}, {1, 1, 0}};
    CHECK(r.order == expected);
    CHECK(isValidPeelOrder(r.order, nbs, 5, 3));
  }
}

TEST_CASE("validity checker rejects bad orders") {
  const std::vector<Neighborhood> nbs = {nb3(0, 1, 2), nb3(1, 2, 3), nb3(2, 3, 4)};
  const auto r = peelLinear(nbs, 5, 3);
  REQUIRE(r.ok());
  REQUIRE(isValidPeelOrder(r.order, nbs, 5, 3));
  auto reversed = r.order;
  std::reverse(reversed.begin(), reversed.end());
  CHECK_FALSE(isValidPeelOrder(reversed, nbs, 5, 3));
  auto wrongTau = r.order;
  wrongTau[0].tau = (wrongTau[0].tau + 1) % 3;
  CHECK_FALSE(isValidPeelOrder(wrongTau, nbs, 5, 3));
  CHECK_FALSE(isValidPeelOrder(std::span(r.order).first(2), nbs, 5, 3));
}

TEST_CASE("peelers agree with the 2-core oracles on random small instances") {
  std::mt19937_64 rng(2024);
  int successes = 0;
  for (int t = 0; t < 1500; ++t) {
    const std::uint32_t k = 3 + (t % 2);
    const std::size_t n = rng() % 13;
    const std::uint32_t m = k + static_cast<std::uint32_t>(rng() % 20);
    const auto inst = test::randomInstance(rng, n, m, k);
    const bool expected = test::twoCoreEmpty(inst);
    CHECK(test::noStoppingSet(inst) == expected);

    const auto linear = peelLinear(inst.neighborhoods, m, k);
    const auto legacy = peelGreedyLegacy(inst.neighborhoods, m, k);
    CHECK(linear.ok() == expected);
    CHECK(legacy.ok() == expected);
    if (linear.ok()) {
      ++successes;
      CHECK(isValidPeelOrder(linear.order, inst.neighborhoods, m, k));
      CHECK(isValidPeelOrder(legacy.order, inst.neighborhoods, m, k));
    }
  }
  // Both outcomes must actually be exercised.
  CHECK(successes > 100);
  CHECK(successes < 1400);
}

TEST_CASE("peelLinear work is linear in n + m") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    for (std::uint32_t k : {3u, 4u}) {
      const auto m = static_cast<std::uint32_t>(n * 1.5);
      const auto inst = test::randomInstance(rng, n, m, k);
      PeelCounters counters;
      const auto r = peelLinear(inst.neighborhoods, m, k, &counters);
      REQUIRE(r.ok());
      // 2nk set updates + at most (m + nk) pushes and as many pops.
      CHECK(counters.total() <= 16 * (n + m));
      CHECK(counters.queuePops == counters.queuePushes);
    }
  }
}

TEST_CASE("legacy peel is slower than linear peel at n = 10^5") {
  std::mt19937_64 rng(17);
  const std::size_t n = 100000;
  const auto m = static_cast<std::uint32_t>(n * 1.25);
  const auto inst = test::randomInstance(rng, n, m, 3);
  using Clock = std::chrono::steady_clock;

  auto best = [&](auto&& run) {
    double fastest = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = Clock::now();
      const auto r = run();
      fastest = std::min(fastest, std::chrono::duration<double>(Clock::now() - start).count());
      REQUIRE(r.ok());
    }
    return fastest;
  };
  const double linear = best([&] { return peelLinear(inst.neighborhoods, m, 3); });
  const double legacy = best([&] { return peelGreedyLegacy(inst.neighborhoods, m, 3); });
  CHECK(legacy >= linear);
}
