#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "idyn/density.hpp"
#include "idyn/intset.hpp"
#include "idyn/util.hpp"

using namespace idyn;

namespace {

// ---- independent oracles ---------------------------------------------------

// Exact prefix count of the pow4 block family below n.
std::uint64_t blocks_count_below(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t lo = 1; lo < n; lo <<= 2) {
    const std::uint64_t hi = std::min(lo << 1, n);
    c += hi - lo;
  }
  return c;
}

// Extremes of the closed-form prefix ratio over the estimator's window.
double blocks_ratio_extreme(std::uint64_t horizon, bool upper) {
  const std::uint64_t lo = std::max<std::uint64_t>(1, std::bit_floor(horizon) / 2);
  double best = static_cast<double>(blocks_count_below(lo)) / static_cast<double>(lo);
  for (std::uint64_t m = lo + 1; m <= horizon; ++m) {
    const double r = static_cast<double>(blocks_count_below(m)) / static_cast<double>(m);
    best = upper ? std::max(best, r) : std::min(best, r);
  }
  return best;
}

// Plain long-double harmonic tail ratio for a progression step q, offset h.
double ld_progression_oracle(std::uint64_t q, std::uint64_t h, std::uint64_t horizon) {
  const std::uint64_t t0 = std::bit_floor(horizon) / 4;
  long double num = 0, den = 0;
  for (std::uint64_t k = t0 + 1; k <= horizon - 1; ++k) {
    den += 1.0L / static_cast<long double>(k);
    if (k >= h && (k - h) % q == 0) num += 1.0L / static_cast<long double>(k);
  }
  return static_cast<double>(num / den);
}

std::vector<IntSet> structured_corpus(std::uint64_t horizon) {
  std::vector<IntSet> sets;
  for (std::uint64_t q = 1; q <= 7; ++q) sets.push_back(IntSet::build("ap:" + std::to_string(q) + ",1", horizon));
  sets.push_back(IntSet::build("blocks:pow4", horizon));
  sets.push_back(IntSet::build("squares", horizon));
  sets.push_back(set_complement(IntSet::build("blocks:pow4", horizon)));
  sets.push_back(IntSet::full(horizon));
  sets.push_back(IntSet(horizon));
  // two-scale set: a solid chunk right after the quarter mark plus a
  // half-density tail; stresses the chain at the estimator boundaries
  {
    const std::uint64_t n2 = std::bit_floor(horizon);
    IntSet chunk = set_union(
        IntSet::build("intervals:" + std::to_string(n2 / 4) + "-" + std::to_string(n2 / 4 + n2 / 8), horizon),
        set_intersect(IntSet::build("ap:2,0", horizon),
                      IntSet::build("intervals:" + std::to_string(n2 / 2) + "-" + std::to_string(horizon - 1),
                                    horizon)));
    sets.push_back(std::move(chunk));
  }
  // left halves of dyadic shells
  {
    std::vector<std::uint64_t> es;
    for (std::uint64_t lo = 2; lo < horizon; lo <<= 1) {
      for (std::uint64_t n = lo; n < std::min(lo + lo / 2, horizon); ++n) es.push_back(n);
    }
    sets.push_back(IntSet::from_elements(es, horizon));
  }
  return sets;
}

}  // namespace

TEST_CASE("asymptotic: progression value") {
  const IntSet s = IntSet::build("ap:3,0", 1000000);
  CHECK(std::fabs(asymptotic(s, Side::upper).value - 1.0 / 3) < 1e-3);
  CHECK(std::fabs(asymptotic(s, Side::lower).value - 1.0 / 3) < 1e-3);
}

TEST_CASE("asymptotic: block family matches the prefix-count oracle") {
  const std::uint64_t horizon = std::uint64_t{1} << 21;
  const IntSet s = IntSet::build("blocks:pow4", horizon);
  const double up = asymptotic(s, Side::upper).value;
  const double lo = asymptotic(s, Side::lower).value;
  CHECK(std::fabs(up - blocks_ratio_extreme(horizon, true)) < 1e-12);
  CHECK(std::fabs(lo - blocks_ratio_extreme(horizon, false)) < 1e-12);
  // the closed-form limit values
  CHECK(std::fabs(up - 2.0 / 3) < 0.01);
  CHECK(std::fabs(lo - 1.0 / 3) < 0.01);
}

TEST_CASE("full and empty sets are exact for every kind") {
  const IntSet full = IntSet::full(1u << 16);
  const IntSet none(1u << 16);
  CHECK(asymptotic(full, Side::upper).value == 1.0);
  CHECK(asymptotic(full, Side::lower).value == 1.0);
  CHECK(banach(full, Side::upper).value == 1.0);
  CHECK(banach(full, Side::lower).value == 1.0);
  CHECK(logarithmic_upper(full).value == 1.0);
  CHECK(asymptotic(none, Side::upper).value == 0.0);
  CHECK(asymptotic(none, Side::lower).value == 0.0);
  CHECK(banach(none, Side::upper).value == 0.0);
  CHECK(banach(none, Side::lower).value == 0.0);
  CHECK(logarithmic_upper(none).value == 0.0);
}

TEST_CASE("banach: forced window count of a progression") {
  const IntSet s = IntSet::build("ap:3,0", 1000000);
  CHECK(std::fabs(banach(s, Side::upper).value - 1.0 / 3) < 1e-3);
}

TEST_CASE("banach: blocks contain long intervals") {
  const IntSet s = IntSet::build("blocks:pow4", std::uint64_t{1} << 21);
  CHECK(banach(s, Side::upper).value >= 0.999);
  CHECK(banach(s, Side::lower).value <= 1e-3);
}

TEST_CASE("banach upper is 1 exactly when an interval of the largest window length exists") {
  const std::uint64_t horizon = 1u << 16;
  const std::uint64_t wmax = horizon / 4;
  const IntSet exact = IntSet::build(
      "intervals:" + std::to_string(horizon / 2) + "-" + std::to_string(horizon / 2 + wmax - 1), horizon);
  const IntSet short1 = IntSet::build(
      "intervals:" + std::to_string(horizon / 2) + "-" + std::to_string(horizon / 2 + wmax - 2), horizon);
  CHECK(banach(exact, Side::upper).value == 1.0);
  CHECK(banach(short1, Side::upper).value < 1.0);
}

TEST_CASE("logarithmic: full set scores exactly 1") {
  CHECK(logarithmic_upper(IntSet::full(1000000)).value == 1.0);
}

TEST_CASE("logarithmic: progression matches the harmonic-sum oracle") {
  const std::uint64_t horizon = 1000000;
  const IntSet s = IntSet::build("ap:2,0", horizon);
  const double got = logarithmic_upper(s).value;
  CHECK(std::fabs(got - ld_progression_oracle(2, 0, horizon)) < 1e-9);
  CHECK(std::fabs(got - 0.5) < 0.02);
}

TEST_CASE("logarithmic: blocks carry harmonic mass log 2 per dyadic pair") {
  const std::uint64_t horizon = std::uint64_t{1} << 21;
  const IntSet s = IntSet::build("blocks:pow4", horizon);
  // oracle: the tail of the blocks inside the window is exactly [2^20, 2^21)
  const std::uint64_t t0 = horizon / 4;
  long double num = 0, den = 0;
  for (std::uint64_t k = t0 + 1; k < horizon; ++k) {
    den += 1.0L / static_cast<long double>(k);
    if (k >= (std::uint64_t{1} << 20)) num += 1.0L / static_cast<long double>(k);
  }
  const double got = logarithmic_upper(s).value;
  CHECK(std::fabs(got - static_cast<double>(num / den)) < 1e-9);
  CHECK(std::fabs(got - 0.5) < 0.05);
}

TEST_CASE("chain inequality holds on random, structured, and adversarial sets") {
  const std::uint64_t horizon = 1u << 16;
  std::vector<IntSet> corpus = structured_corpus(horizon);
  SplitMix64 rng(2024);
  const double probs[] = {0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9};
  for (double p : probs) {
    for (int t = 0; t < 25; ++t) corpus.push_back(IntSet::random(horizon, p, rng.next()));
  }
  for (const IntSet& s : corpus) {
    const double ld = logarithmic_upper(s).value;
    const double d = asymptotic(s, Side::upper).value;
    const double bd = banach(s, Side::upper).value;
    const double dl = asymptotic(s, Side::lower).value;
    const double bl = banach(s, Side::lower).value;
    CHECK(ld <= d + 1e-9);
    CHECK(d <= bd + 1e-9);
    CHECK(dl <= d + 1e-9);
    CHECK(bl <= bd + 1e-9);
  }
}

TEST_CASE("chain inequality is horizon-shape independent") {
  SplitMix64 rng(909);
  for (const std::uint64_t horizon : {std::uint64_t{100003}, std::uint64_t{65536}, std::uint64_t{12345}}) {
    std::vector<IntSet> corpus = structured_corpus(horizon);
    for (int t = 0; t < 10; ++t) corpus.push_back(IntSet::random(horizon, 0.05 + 0.09 * t, rng.next()));
    for (const IntSet& s : corpus) {
      const double ld = logarithmic_upper(s).value;
      const double d = asymptotic(s, Side::upper).value;
      const double bd = banach(s, Side::upper).value;
      CHECK(ld <= d + 1e-9);
      CHECK(d <= bd + 1e-9);
    }
  }
}

TEST_CASE("shift invariance: asymptotic moves by at most 2k/horizon") {
  const std::uint64_t horizon = 1u << 18;
  std::vector<IntSet> corpus = structured_corpus(horizon);
  SplitMix64 rng(55);
  for (int t = 0; t < 10; ++t) corpus.push_back(IntSet::random(horizon, 0.1 + 0.08 * t, rng.next()));
  for (const IntSet& s : corpus) {
    const double d = asymptotic(s, Side::upper).value;
    for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{5}, std::uint64_t{64}}) {
      const IntSet shifted = affine_image(s, 1, k, true).set;
      const double ds = asymptotic(shifted, Side::upper).value;
      CHECK(std::fabs(ds - d) <= 2.0 * static_cast<double>(k) / static_cast<double>(horizon) + 1e-12);
    }
  }
}

TEST_CASE("shift invariance: banach moves by at most k/window_min") {
  const std::uint64_t horizon = 1u << 18;
  const IntSet s = IntSet::build("blocks:pow4", horizon);
  const DensityEstimate base = banach(s, Side::upper);
  for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{64}}) {
    const double shifted = banach(affine_image(s, 1, k, true).set, Side::upper).value;
    CHECK(std::fabs(shifted - base.value) <=
          static_cast<double>(k) / static_cast<double>(base.window_min) + 1e-12);
  }
}

TEST_CASE("dilation law on progressions") {
  const std::uint64_t horizon = 1u << 18;
  for (std::uint64_t q = 1; q <= 5; ++q) {
    const IntSet s = IntSet::build("ap:" + std::to_string(q) + ",0", horizon);
    const double d = asymptotic(s, Side::upper).value;
    for (std::uint64_t k : {std::uint64_t{2}, std::uint64_t{3}, std::uint64_t{5}}) {
      const IntSet scaled = affine_image(s, k, 0, true).set;
      CHECK(std::fabs(asymptotic(scaled, Side::upper).value - d / static_cast<double>(k)) <=
            2.0 / static_cast<double>(horizon));
    }
  }
}

TEST_CASE("lower estimates never exceed uppers") {
  SplitMix64 rng(31337);
  for (int t = 0; t < 30; ++t) {
    const IntSet s = IntSet::random(1u << 14, rng.next_double(), rng.next());
    CHECK(asymptotic(s, Side::lower).value <= asymptotic(s, Side::upper).value);
    CHECK(banach(s, Side::lower).value <= banach(s, Side::upper).value);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(asymptotic(IntSet(1), Side::upper), std::invalid_argument);
  CHECK_THROWS_AS(logarithmic_upper(IntSet(2)), std::invalid_argument);
}

TEST_CASE("csv row format") {
  const IntSet s = IntSet::build("ap:2,0", 1024);
  const std::string row = density_csv_row("ap:2,0", asymptotic(s, Side::upper));
  CHECK(row.rfind("ap:2,0,upper_asymptotic,1024,", 0) == 0);
}
