#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "idyn/dynsys.hpp"
#include "idyn/util.hpp"

using namespace idyn;

namespace {
constexpr double kGolden = 0.618033988749894848;
}

TEST_CASE("rotation by one half has period two") {
  auto sys = make_system("rotation:0.5");
  const Point x = sys->parse_point("0.0");
  CHECK(std::get<double>(sys->advance(x, 1)) == 0.5);
  CHECK(std::get<double>(sys->advance(x, 2)) == 0.0);
  CHECK(detect_period(*sys, x, 10, 0.0) == 2);
  CHECK(!sys->warnings().empty());  // rational alpha warning
}

TEST_CASE("rotation rejects alpha outside (0,1)") {
  CHECK_THROWS_AS(make_system("rotation:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_system("rotation:0"), std::invalid_argument);
}

TEST_CASE("golden rotation: closed form tracks iterated stepping") {
  auto sys = make_system("rotation:" + std::to_string(kGolden));
  CHECK(sys->warnings().empty());
  Point p = sys->parse_point("0.0");
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) p = sys->step(p);
  const Point closed = sys->advance(sys->parse_point("0.0"), n);
  CHECK(sys->metric(p, closed) < 1e-9);  // agreement as circle points
}

TEST_CASE("golden rotation has no short period") {
  auto sys = make_system("rotation:" + std::to_string(kGolden));
  CHECK(!detect_period(*sys, sys->parse_point("0.0"), 10000, 1e-9).has_value());
}

TEST_CASE("rotation orbit points stay in the unit interval") {
  auto sys = make_system("rotation:" + std::to_string(kGolden));
  const Point x = sys->parse_point("0.0");
  for (std::uint64_t n = 0; n < 5; ++n) {
    const double v = std::get<double>(sys->advance(x, n));
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("doubling: one third is a period-two orbit, exactly") {
  auto sys = make_system("doubling");
  sys->set_horizon_hint(1u << 10);
  const Point x = sys->parse_point("1/3");
  CHECK(detect_period(*sys, x, 10, 0.0) == 2);
  CHECK(sys->metric(sys->advance(x, 1), x) > 0.3);  // 2/3 vs 1/3
}

TEST_CASE("doubling: precision exhaustion is an explicit error") {
  auto sys = make_system("doubling");
  sys->set_horizon_hint(256);
  const Point x = sys->parse_point("1/3");
  CHECK_THROWS_AS((void)sys->metric(sys->advance(x, 100000), x), std::runtime_error);
}

TEST_CASE("cantor shift: the zero word is a fixed point") {
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(1u << 10);
  const Point z = sys->parse_point("zeros");
  CHECK(detect_period(*sys, z, 5, 0.0) == 1);
}

TEST_CASE("cantor shift: champernowne word shifts left") {
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(1u << 10);
  const WordPoint w = std::get<WordPoint>(sys->parse_point("champernowne"));
  const WordPoint s1 = std::get<WordPoint>(sys->step(Point{w}));
  CHECK(s1.offset == w.offset + 1);
  for (int i = 0; i < 16; ++i) CHECK(s1.bits->bit(s1.offset + i) == w.bits->bit(w.offset + i + 1));
}

TEST_CASE("cantor metric: cylinder depth and strict balls") {
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(256);
  const Point a = sys->parse_point("10110000");
  const Point b = sys->parse_point("10111111");  // agrees on first 4 symbols
  CHECK(sys->metric(a, b) == std::ldexp(1.0, -4));
  CHECK(ball_membership(*sys, a, std::ldexp(1.0, -3), b));   // 2^-4 < 2^-3
  CHECK(!ball_membership(*sys, a, std::ldexp(1.0, -4), b));  // boundary excluded
}

TEST_CASE("cantor shift is a group homomorphism for xor") {
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(1024);
  SplitMix64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto xa = BitExpansion::random(rng.next(), 1024 + 128);
    const auto xb = BitExpansion::random(rng.next(), 1024 + 128);
    const WordPoint a{std::make_shared<BitExpansion>(xa), 0};
    const WordPoint b{std::make_shared<BitExpansion>(xb), 0};
    const WordPoint sum{std::make_shared<BitExpansion>(xa.xor_with(xb)), 0};
    // T(a xor b) = T(a) xor T(b): compare cylinders of depth 32
    const WordPoint lhs = std::get<WordPoint>(sys->step(Point{sum}));
    const WordPoint ra = std::get<WordPoint>(sys->step(Point{a}));
    const WordPoint rb = std::get<WordPoint>(sys->step(Point{b}));
    const WordPoint rhs{std::make_shared<BitExpansion>(ra.bits->xor_with(*rb.bits)), ra.offset};
    CHECK(sys->metric(Point{lhs}, Point{rhs}) == 0.0);
  }
}

TEST_CASE("cantor shift: finitely supported words reach zero and stay") {
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(512);
  const Point zero = sys->parse_point("zeros");
  SplitMix64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t support = 1 + rng.next_below(40);
    std::string bits;
    for (std::uint64_t i = 0; i < support; ++i) bits.push_back((rng.next() & 1) ? '1' : '0');
    const Point z = sys->parse_point(bits);  // zeros beyond the literal
    for (std::uint64_t n = support; n < support + 20; ++n) {
      CHECK(sys->metric(sys->advance(z, n), zero) == 0.0);
    }
  }
}

TEST_CASE("weighted shift: truncated backward iteration") {
  auto sys = make_system("wshift:4,2,2,2");
  const Point x = sys->parse_point("1,1,1,1");
  const std::vector<std::vector<double>> want = {
      {2, 2, 2, 0}, {4, 4, 0, 0}, {8, 0, 0, 0}, {0, 0, 0, 0}};
  Point p = x;
  for (const auto& step_want : want) {
    p = sys->step(p);
    CHECK(std::get<std::vector<double>>(p) == step_want);
  }
  // nilpotent from dimension onward
  CHECK(std::get<std::vector<double>>(sys->advance(x, 7)) == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("weighted shift: bad specs throw") {
  CHECK_THROWS_AS(make_system("wshift:4,2,2"), std::invalid_argument);      // needs d-1 weights
  CHECK_THROWS_AS(make_system("wshift:4,2,0,2"), std::invalid_argument);    // nonpositive weight
  CHECK_THROWS_AS(make_system("cantor:63"), std::invalid_argument);         // depth cap
  CHECK_THROWS_AS(make_system("mystery"), std::invalid_argument);
}

TEST_CASE("circle ball membership wraps around") {
  auto sys = make_system("rotation:" + std::to_string(kGolden));
  CHECK(ball_membership(*sys, sys->parse_point("0.95"), 0.1, sys->parse_point("0.02")));
  // distance exactly the radius: the ball is open (dyadic literals keep the
  // comparison exact)
  CHECK(!ball_membership(*sys, sys->parse_point("0.25"), 0.0625, sys->parse_point("0.3125")));
}

TEST_CASE("orbit views: exact systems agree with repeated stepping") {
  auto sys = make_system("doubling");
  sys->set_horizon_hint(4096);
  const Point x = sys->parse_point("champernowne");
  Orbit orbit(sys, x, 1024);
  CHECK(!orbit.drift_flag());
  Point p = x;
  for (std::uint64_t n = 0; n < 64; ++n) {
    CHECK(sys->metric(orbit.at(n), p) == 0.0);
    p = sys->step(p);
  }
}

TEST_CASE("orbit views: sequential cache for the weighted shift") {
  auto sys = make_system("wshift:8,2,2,2,2,2,2,2");
  std::vector<double> x0(8, 0.5);
  Orbit orbit(sys, Point{x0}, 64);
  CHECK(orbit.drift_flag());
  const auto v3 = std::get<std::vector<double>>(orbit.at(3));
  const auto v1 = std::get<std::vector<double>>(orbit.at(1));  // backwards access re-derives
  CHECK(v1[0] == 2.0 * 0.5);
  CHECK(v3[4] == doctest::Approx(8 * 0.5));
}

TEST_CASE("orbit shift identity: N(T^k x, U) = N(x, U) - k on the shared horizon") {
  struct Instance {
    std::string system, x_lit, center_lit;
    double radius;
  };
  const std::vector<Instance> instances = {
      {"doubling", "champernowne", "0.3", 0.07},
      {"cantor:32", "champernowne", "0101", 0.1},
      {"rotation:0.618033988749894848", "0.0", "0.3", 0.07},
      {"wshift:6,2,2,2,2,2", "0.5,0.5,0.5,0.5,0.5,0.5", "0,0,0,0,0,0", 0.4},
  };
  for (const auto& inst : instances) {
    auto sys = make_system(inst.system);
    sys->set_horizon_hint(1u << 14);
    const Point x = sys->parse_point(inst.x_lit);
    const Point center = sys->parse_point(inst.center_lit);
    const std::uint64_t horizon = 1u << 12;
    const std::uint64_t k = 37;

    Orbit base(sys, x, horizon);
    Orbit shifted(sys, sys->advance(x, k), horizon - k);
    for (std::uint64_t n = 0; n < horizon - k; ++n) {
      const bool in_shifted = sys->metric(center, shifted.at(n)) < inst.radius;
      const bool in_base = sys->metric(center, base.at(n + k)) < inst.radius;
      CHECK(in_shifted == in_base);
    }
  }
}

TEST_CASE("point parsing errors") {
  auto sys = make_system("doubling");
  CHECK_THROWS_AS(sys->parse_point("2/1"), std::invalid_argument);
  CHECK_THROWS_AS(sys->parse_point("01012"), std::invalid_argument);
  auto rot = make_system("rotation:" + std::to_string(kGolden));
  CHECK_THROWS_AS(rot->parse_point("1.25"), std::invalid_argument);
}
