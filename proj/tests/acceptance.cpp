// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances and wall-clock budget.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "idyn/analysis.hpp"
#include "idyn/checks.hpp"
#include "idyn/density.hpp"
#include "idyn/dynsys.hpp"
#include "idyn/intset.hpp"
#include "idyn/submeasure.hpp"
#include "idyn/suite.hpp"
#include "idyn/util.hpp"

using namespace idyn;

namespace {

constexpr double kGolden = 0.618033988749894848;

int failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string title, double budget_seconds)
      : number_(number), title_(std::move(title)), budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void expect(bool ok, const std::string& detail) {
    if (!ok) {
      ok_ = false;
      if (!detail.empty() && first_problem_.empty()) first_problem_ = detail;
    }
  }

  ~Criterion() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (elapsed > budget_) {
      ok_ = false;
      if (first_problem_.empty()) first_problem_ = "over time budget";
    }
    std::printf("criterion %2d: %s  [%5.1fs/%.0fs]  %s%s%s\n", number_, ok_ ? "PASS" : "FAIL", elapsed,
                budget_, title_.c_str(), first_problem_.empty() ? "" : " -- ", first_problem_.c_str());
    std::fflush(stdout);
    if (!ok_) ++failures;
  }

 private:
  int number_;
  std::string title_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::string first_problem_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void criterion_1_density_chain() {
  Criterion c(1, "density chain ld* <= d* <= bd* on 1000 sets at 2^20", 30.0);
  const std::uint64_t horizon = std::uint64_t{1} << 20;
  std::vector<IntSet> corpus;
  corpus.reserve(1000);
  for (std::uint64_t k = 1; k <= 16; ++k) {
    for (std::uint64_t h = 0; h < 4; ++h) {
      corpus.push_back(IntSet::build("ap:" + std::to_string(k) + "," + std::to_string(h), horizon));
    }
  }
  corpus.push_back(IntSet::build("blocks:pow4", horizon));
  corpus.push_back(set_complement(IntSet::build("blocks:pow4", horizon)));
  corpus.push_back(IntSet::build("squares", horizon));
  corpus.push_back(IntSet::full(horizon));
  corpus.push_back(IntSet(horizon));
  for (int j = 0; j < 10; ++j) {
    const std::uint64_t a = (horizon / 16) * j;
    corpus.push_back(IntSet::build(
        "intervals:" + std::to_string(a) + "-" + std::to_string(a + horizon / 8), horizon));
  }
  SplitMix64 rng(1);
  const double probs[] = {0.01, 0.03, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9};
  while (corpus.size() < 1000) {
    corpus.push_back(IntSet::random(horizon, probs[corpus.size() % 10], rng.next()));
  }
  int bad = 0;
  for (const IntSet& s : corpus) {
    const double ld = logarithmic_upper(s).value;
    const double d = asymptotic(s, Side::upper).value;
    const double bd = banach(s, Side::upper).value;
    if (!(ld <= d + 1e-9 && d <= bd + 1e-9)) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " chain violations");
}

void criterion_2_blocks() {
  Criterion c(2, "pow4 block family densities and syndeticity at 2^21", 5.0);
  const std::uint64_t horizon = std::uint64_t{1} << 21;
  const IntSet s = IntSet::build("blocks:pow4", horizon);
  const double d = asymptotic(s, Side::upper).value;
  const double bd = banach(s, Side::upper).value;
  const double bdl = banach(s, Side::lower).value;
  c.expect(std::fabs(d - 2.0 / 3) <= 0.01, "d*=" + fmt(d));
  c.expect(bd >= 0.999, "bd*=" + fmt(bd));
  c.expect(bdl <= 1e-3, "bd_lower=" + fmt(bdl));
  c.expect(!gap_profile(s).is_syndetic_at_horizon, "set syndetic");
  c.expect(!gap_profile(set_complement(s)).is_syndetic_at_horizon, "complement syndetic");
}

void criterion_3_exh_consistency() {
  Criterion c(3, "nu tail-norm verdicts agree with zero-density labels", 30.0);
  const std::uint64_t horizon = std::uint64_t{1} << 20;
  struct Labeled {
    std::string spec;
    IntSet set;
    bool zero;
  };
  std::vector<Labeled> family;
  for (std::uint64_t k = 1; k <= 16; ++k) {
    const std::string spec = "ap:" + std::to_string(k) + ",0";
    family.push_back({spec, IntSet::build(spec, horizon), false});
  }
  family.push_back({"squares", IntSet::build("squares", horizon), true});
  family.push_back({"blocks:pow4", IntSet::build("blocks:pow4", horizon), false});
  SplitMix64 rng(3);
  for (int t = 0; t < 8; ++t) {
    const std::string spec = "random:" + std::to_string(0.05 + 0.06 * t) + "," + std::to_string(rng.next());
    family.push_back({spec, IntSet::build(spec, horizon), false});
  }
  const Submeasure nu = Submeasure::nu();
  int disagreements = 0;
  std::string first;
  for (const auto& item : family) {
    const auto v = membership_verdict(nu, Regime::exh, item.set, 0.01);
    const bool member = v.status == VerdictStatus::member;
    const bool positive = v.status == VerdictStatus::positive;
    if ((item.zero && !member) || (!item.zero && !positive)) {
      ++disagreements;
      if (first.empty()) first = item.spec;
    }
  }
  c.expect(disagreements == 0, std::to_string(disagreements) + " disagreements, first: " + first);
}

void criterion_4_rotation_dichotomy() {
  Criterion c(4, "golden rotation: every target clusters at r=0.05, no limit evidence at K=9", 60.0);
  const std::uint64_t horizon = 1000000;
  auto sys = make_system("rotation:" + std::to_string(kGolden));
  sys->set_horizon_hint(horizon);
  const Point x = sys->parse_point("0.0");
  const Submeasure nu = Submeasure::nu();
  for (int t = 0; t < 10; ++t) {
    char lit[16];
    std::snprintf(lit, sizeof(lit), "%.2f", t / 10.0);
    const Point eta = sys->parse_point(lit);
    const ClusterReport rep = cluster_value(sys, x, eta, 0.05, 9, nu, horizon, 0.01, true);
    c.expect(rep.is_cluster, std::string("target ") + lit + " not a cluster point");
    const double d = asymptotic(rep.returns.front(), Side::upper).value;
    c.expect(std::fabs(d - 0.1) <= 0.02, std::string("target ") + lit + " d*=" + fmt(d));
    c.expect(rep.u_value <= 0.01, std::string("target ") + lit + " u=" + fmt(rep.u_value));
  }
}

void criterion_5_champernowne_universality() {
  Criterion c(5, "champernowne on doubling: 32-target visit frequencies and nu-universality", 60.0);
  const std::uint64_t horizon = 1000000;
  auto sys = make_system("doubling");
  sys->set_horizon_hint(horizon);
  const Point x = sys->parse_point("champernowne");
  const Submeasure nu = Submeasure::nu();
  const auto targets = space_grid(*sys, 32);
  const double r = 1.0 / 64;
  Orbit orbit(sys, x, horizon);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const IntSet n = return_set_raw(*sys, orbit, targets[t], r);
    const double d = asymptotic(n, Side::upper).value;
    c.expect(std::fabs(d - 2.0 * r) <= 0.01, "target " + std::to_string(t) + " d*=" + fmt(d));
  }
  const ClassifyRecord rec = classify(sys, x, nu, targets, r, horizon);
  c.expect(rec.universal.status == VerdictStatus::positive,
           "universal verdict " + std::string(verdict_name(rec.universal.status)));
}

void criterion_6_ansari() {
  Criterion c(6, "power decomposition identity, 100 random (x,U) per system, k in {2,3}", 30.0);
  const std::uint64_t horizon = std::uint64_t{1} << 16;
  SplitMix64 rng(6);
  int mismatches = 0;
  for (const std::string& spec : {std::string("doubling"), std::string("rotation:") + std::to_string(kGolden)}) {
    auto sys = make_system(spec);
    sys->set_horizon_hint(horizon + 8);
    for (int k : {2, 3}) {
      for (int t = 0; t < 100; ++t) {
        Point x, center;
        if (spec == "doubling") {
          x = WordPoint{std::make_shared<BitExpansion>(BitExpansion::random(rng.next(), horizon + 256)), 0};
        } else {
          char lit[40];
          std::snprintf(lit, sizeof(lit), "%.17f", rng.next_double());
          x = sys->parse_point(lit);
        }
        char lit[40];
        std::snprintf(lit, sizeof(lit), "%.17f", rng.next_double());
        center = sys->parse_point(lit);
        const double radius = 0.02 + 0.2 * rng.next_double();
        if (!ansari_decompose(sys, x, center, radius, k, horizon).equal) ++mismatches;
      }
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
}

void criterion_7_null_orbit() {
  Criterion c(7, "null-orbit transfer: 100 random configurations, exact containments", 30.0);
  const std::uint64_t horizon = std::uint64_t{1} << 14;
  auto cantor = make_system("cantor:32");
  cantor->set_horizon_hint(horizon);
  auto wshift = make_system("wshift:8,2,2,2,2,2,2,2");
  SplitMix64 rng(7);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t vbits = 2 + rng.next_below(5);
    std::string vpat;
    for (std::uint64_t i = 0; i < vbits + 8; ++i) vpat.push_back((rng.next() & 1) ? '1' : '0');
    const Point v = WordPoint{
        std::make_shared<BitExpansion>(BitExpansion::from_binary_string(vpat, horizon + 128)), 0};
    const double rv = std::ldexp(1.5, -static_cast<int>(vbits));
    const double ru = std::ldexp(1.5, -static_cast<int>(2 + rng.next_below(4)));
    if (t % 2 == 0) {
      const Point x = WordPoint{
          std::make_shared<BitExpansion>(BitExpansion::random(rng.next(), horizon + 128)), 0};
      const Point u = WordPoint{
          std::make_shared<BitExpansion>(BitExpansion::random(rng.next(), horizon + 128)), 0};
      const TransferOutcome o = null_orbit_transfer_cantor(cantor, x, u, ru, v, rv, "", 64, horizon);
      if (!o.applicable || !o.containment_exact) ++bad;
    } else {
      std::string pattern;
      const std::uint64_t plen = 1 + rng.next_below(8);
      for (std::uint64_t i = 0; i < plen; ++i) pattern.push_back((rng.next() & 1) ? '1' : '0');
      const TransferOutcome o =
          null_orbit_transfer_cantor(cantor, Point{}, Point{}, ru, v, rv, pattern, 64, horizon);
      if (!o.applicable || !o.containment_exact || !o.periodic_exact || !o.syndetic_bound_ok) ++bad;
    }
  }
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(8), u(8, 0.0), v(8);
    for (auto& q : x) q = rng.next_double();
    for (auto& q : v) q = 0.5 * rng.next_double();
    const TransferOutcome o =
        null_orbit_transfer_wshift(wshift, x, u, 0.25 + 0.5 * rng.next_double(), v, 0.25, 4096);
    if (!o.containment_exact) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " bad configurations");
}

void criterion_8_c_parameter() {
  Criterion c(8, "zero-block champernowne: nu norms of zero-cylinder returns stay at 1/2 up to k=10", 120.0);
  const std::uint64_t horizon = std::uint64_t{1} << 22;
  auto sys = make_system("cantor:32");
  sys->set_horizon_hint(horizon);
  const Point x = sys->parse_point("champernowne0");
  const Point zero = sys->parse_point("zeros");
  const Submeasure nu = Submeasure::nu();

  const ClusterReport rep = cluster_value(sys, x, zero, 1.0, 11, nu, horizon, 0.01, true);
  for (int k = 0; k <= 10; ++k) {
    c.expect(rep.norms[static_cast<std::size_t>(k)] >= 0.5,
             "norm at k=" + std::to_string(k) + " is " + fmt(rep.norms[static_cast<std::size_t>(k)]));
  }
  const CParameterResult cp = estimate_c_parameter(sys, zero, nu, {x}, 1.0, 11, horizon);
  c.expect(cp.candidate_passed[0], "candidate failed the dense-orbit surrogate");
  c.expect(cp.value >= 0.5, "c estimate " + fmt(cp.value));
  const ExtractionResult ex = extract_limit_subsequence(rep, nu);
  c.expect(ex.norm >= 0.5 - 1e-3, "extracted norm " + fmt(ex.norm));
}

void criterion_9_gap_dichotomy() {
  Criterion c(9, "gap dichotomy: large observed gaps with positive window density; rotation min-gap", 60.0);
  const std::uint64_t horizon = 1000000;
  auto dbl = make_system("doubling");
  dbl->set_horizon_hint(horizon);
  const Point x = dbl->parse_point("champernowne");
  Orbit orbit(dbl, x, horizon);
  const IntSet n = return_set_raw(*dbl, orbit, dbl->parse_point("1/3"), 0.05);
  const GapProfile prof = gap_profile(n);
  const double bd = banach(n, Side::upper).value;
  c.expect(prof.max_gap >= 10, "max gap " + std::to_string(prof.max_gap));
  c.expect(bd >= 0.05, "bd* " + fmt(bd));

  auto rot = make_system("rotation:" + std::to_string(kGolden));
  const Point x0 = rot->parse_point("0.0");
  bool found = false;
  for (int j = 2; j < 24 && !found; ++j) {
    const double r = std::ldexp(0.4, -j);
    Orbit ro(rot, x0, horizon);
    const IntSet ret = return_set_raw(*rot, ro, x0, r);
    if (ret.cardinality() < 3) break;
    const GapProfile p = gap_profile(ret);
    std::uint64_t min_gap = ~std::uint64_t{0};
    for (auto g : p.gaps) min_gap = std::min(min_gap, g);
    found = !p.gaps.empty() && min_gap > 10;
  }
  c.expect(found, "no radius with min-gap > 10");
}

void criterion_10_difference_sets() {
  Criterion c(10, "difference sets of 100 planted window-dense sets have gaps at most 10", 30.0);
  // pre-validate the bound by exhaustive scan at a small horizon
  SplitMix64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const IntSet s = IntSet::random(1u << 10, 0.25 + 0.35 * rng.next_double(), rng.next());
    std::uint64_t best = 0;
    for (std::uint64_t k = 0; k + 64 <= (1u << 10); ++k) {
      std::uint64_t cnt = 0;
      for (std::uint64_t j = k; j < k + 64; ++j) cnt += s.contains(j) ? 1 : 0;
      best = std::max(best, cnt);
    }
    if (static_cast<double>(best) / 64.0 < 0.2) continue;
    const GapProfile prof = gap_profile(difference_set(s, s));
    c.expect(prof.max_gap <= 10, "oracle calibration gap " + std::to_string(prof.max_gap));
  }
  const std::uint64_t horizon = std::uint64_t{1} << 20;
  int planted = 0;
  for (int t = 0; planted < 100 && t < 130; ++t) {
    const IntSet s = IntSet::random(horizon, 0.25 + 0.35 * rng.next_double(), rng.next());
    if (banach(s, Side::upper).value < 0.2) continue;
    ++planted;
    const GapProfile prof = gap_profile(difference_set(s, s));
    c.expect(prof.max_gap <= 10 && prof.leading_gap <= 10,
             "planted set " + std::to_string(t) + " gap " + std::to_string(prof.max_gap));
  }
  c.expect(planted == 100, "only planted " + std::to_string(planted));
}

void criterion_11_determinism() {
  Criterion c(11, "verify --suite all --seed 42 twice: byte-identical CSV output", 300.0);
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.horizon = std::uint64_t{1} << 16;
  cfg.trials = 10;
  const auto dir = std::filesystem::temp_directory_path() / "idyn_acceptance_det";
  run_suite(cfg, {"all"}, (dir / "a").string());
  run_suite(cfg, {"all"}, (dir / "b").string());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir / "a" / "results.csv");
  c.expect(!a.empty() && a == slurp(dir / "b" / "results.csv"), "results.csv differs");
  c.expect(slurp(dir / "a" / "summary.txt") == slurp(dir / "b" / "summary.txt"), "summary.txt differs");
}

}  // namespace

int main() {
  criterion_1_density_chain();
  criterion_2_blocks();
  criterion_3_exh_consistency();
  criterion_4_rotation_dichotomy();
  criterion_5_champernowne_universality();
  criterion_6_ansari();
  criterion_7_null_orbit();
  criterion_8_c_parameter();
  criterion_9_gap_dichotomy();
  criterion_10_difference_sets();
  criterion_11_determinism();
  if (failures != 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all criteria passed\n");
  return 0;
}
