#include "idyn/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "idyn/util.hpp"

namespace idyn {

namespace {

double wrap01(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

// Number of leading symbols two points must share to sit within `radius`
// under the cylinder metric (metric < radius  <=>  first difference > log2(1/radius)).
std::uint64_t cylinder_prefix_for_radius(double radius) {
  std::uint64_t need = 0;
  double r = 1.0;
  while (r >= radius && need < 62) {
    r *= 0.5;
    ++need;
  }
  return need;  // smallest L with 2^-L < radius
}

}  // namespace

IntSet return_set_raw(const System& sys, const Orbit& orbit, const Point& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("return_set: radius must be positive");
  std::vector<std::uint64_t> hits;
  for (std::uint64_t n = 0; n < orbit.horizon(); ++n) {
    if (sys.metric(center, orbit.at(n)) < radius) hits.push_back(n);
  }
  return IntSet::from_elements(hits, orbit.horizon());
}

ReturnSetReport return_set(const std::shared_ptr<const System>& sys, const Point& x, const Point& center,
                           double radius, std::uint64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("return_set: horizon must be >= 1");
  Orbit orbit(sys, x, horizon);
  ReturnSetReport rep;
  rep.system_spec = sys->spec();
  rep.point_desc = sys->format_point(x);
  rep.center_desc = sys->format_point(center);
  rep.radius = radius;
  rep.horizon = horizon;
  rep.returns = return_set_raw(*sys, orbit, center, radius);
  if (horizon >= 3) {
    rep.d_upper = asymptotic(rep.returns, Side::upper);
    rep.d_lower = asymptotic(rep.returns, Side::lower);
    rep.bd_upper = banach(rep.returns, Side::upper);
  }
  rep.gaps = gap_profile(rep.returns);
  return rep;
}

std::vector<Point> ball_grid(const System& sys, const Point& center, double radius, int count) {
  if (count < 1) throw std::invalid_argument("ball_grid: count must be >= 1");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(center);  // the center always samples its own ball
  const int rest = count - 1;
  const std::string& spec = sys.spec();

  if (spec.rfind("rotation", 0) == 0) {
    const double c = std::get<double>(center);
    for (int i = 0; i < rest; ++i) {
      const double y = c - radius + (2.0 * i + 1.0) * radius / (rest + 1);
      out.push_back(wrap01(y));
    }
    return out;
  }
  if (spec.rfind("doubling", 0) == 0) {
    // First 30 symbols pin the value inside the ball; a seeded pseudorandom
    // continuation keeps the sampled orbits alive past those symbols.
    const WordPoint c = std::get<WordPoint>(center);
    const double cv = c.bits->value_at(c.offset);
    const std::uint64_t len = sys.horizon_hint() + 128;
    for (int i = 0; i < rest; ++i) {
      double y = wrap01(cv - radius + (2.0 * i + 1.0) * radius / (rest + 1));
      std::string bits;
      double f = y;
      for (int b = 0; b < 30; ++b) {
        f *= 2.0;
        const int bit = static_cast<int>(f);
        bits.push_back(bit ? '1' : '0');
        f -= bit;
      }
      BitExpansion tail = BitExpansion::random(0x9d1f0c5b2e3a7741ULL + static_cast<std::uint64_t>(i), len);
      for (std::uint64_t b = 30; b < len; ++b) bits.push_back(tail.bit(b) ? '1' : '0');
      out.push_back(WordPoint{std::make_shared<BitExpansion>(BitExpansion::from_binary_string(bits, len)), 0});
    }
    return out;
  }
  if (spec.rfind("cantor", 0) == 0) {
    const WordPoint c = std::get<WordPoint>(center);
    const std::uint64_t prefix_len = cylinder_prefix_for_radius(radius);
    const std::uint64_t len = sys.horizon_hint() + 128;
    const int suffix_bits = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(count))));
    for (int i = 0; i < rest; ++i) {
      std::string bits;
      for (std::uint64_t b = 0; b < prefix_len; ++b) bits.push_back(c.bits->bit(c.offset + b) ? '1' : '0');
      for (int b = 0; b < suffix_bits; ++b) bits.push_back(((i >> b) & 1) ? '1' : '0');
      BitExpansion tail = BitExpansion::random(0x51a9cc2b44d08f13ULL + static_cast<std::uint64_t>(i), len);
      for (std::uint64_t b = bits.size(); b < len; ++b) bits.push_back(tail.bit(b) ? '1' : '0');
      out.push_back(WordPoint{std::make_shared<BitExpansion>(BitExpansion::from_binary_string(bits, len)), 0});
    }
    return out;
  }
  if (spec.rfind("wshift", 0) == 0) {
    const auto& c = std::get<std::vector<double>>(center);
    for (int i = 0; i < rest; ++i) {
      std::vector<double> y = c;
      y[0] = c[0] - radius + (2.0 * i + 1.0) * radius / (rest + 1);
      out.push_back(std::move(y));
    }
    return out;
  }
  throw std::invalid_argument("ball_grid: unsupported system " + spec);
}

IntSet hitting_set(const std::shared_ptr<const System>& sys, const Point& u_center, double u_radius,
                   const Point& v_center, double v_radius, int grid, std::uint64_t horizon,
                   std::vector<Point>* grid_out) {
  if (grid < 1) throw std::invalid_argument("hitting_set: grid must be >= 1");
  std::vector<Point> pts =
      grid == 1 ? std::vector<Point>{u_center} : ball_grid(*sys, u_center, u_radius, grid);
  IntSet acc(horizon);
  for (const Point& y : pts) {
    Orbit orbit(sys, y, horizon);
    acc = set_union(acc, return_set_raw(*sys, orbit, v_center, v_radius));
  }
  if (grid_out != nullptr) *grid_out = std::move(pts);
  return acc;
}

ClusterReport cluster_value(const std::shared_ptr<const System>& sys, const Point& x, const Point& eta,
                            double r0, int schedule_length, const Submeasure& m, std::uint64_t horizon,
                            double threshold, bool keep_return_sets) {
  if (!(r0 > 0.0)) throw std::invalid_argument("cluster_value: r0 must be positive");
  if (schedule_length < 2) throw std::invalid_argument("cluster_value: schedule needs K >= 2");
  ClusterReport rep;
  rep.system_spec = sys->spec();
  rep.point_desc = sys->format_point(x);
  rep.eta_desc = sys->format_point(eta);
  rep.r0 = r0;
  rep.schedule_length = schedule_length;
  rep.horizon = horizon;
  rep.threshold = threshold;

  Orbit orbit(sys, x, horizon);
  for (int k = 0; k < schedule_length; ++k) {
    const double r = r0 * std::ldexp(1.0, -k);
    rep.radii.push_back(r);
    IntSet n_k = return_set_raw(*sys, orbit, eta, r);
    rep.norms.push_back(exh_norm(m, n_k).value);
    if (keep_return_sets) rep.returns.push_back(std::move(n_k));
  }
  rep.u_value = rep.norms.back();
  rep.is_cluster = rep.norms.front() >= threshold;
  rep.is_limit = rep.u_value >= threshold;
  return rep;
}

std::vector<std::string> cluster_csv_rows(const ClusterReport& report) {
  std::vector<std::string> rows;
  for (std::size_t k = 0; k < report.norms.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g", k, report.radii[k], report.norms[k]);
    rows.push_back(report.system_spec + ',' + report.point_desc + ',' + report.eta_desc + ',' + buf);
  }
  return rows;
}

ExtractionResult extract_limit_subsequence(const ClusterReport& report, const Submeasure& m) {
  if (!(report.u_value > 0.0)) {
    throw std::invalid_argument("extract_limit_subsequence: u_value must be positive");
  }
  if (report.returns.empty()) {
    throw std::invalid_argument("extract_limit_subsequence: report was built without return sets");
  }
  const std::uint64_t horizon = report.horizon;
  const double u = report.u_value;
  const int last = static_cast<int>(report.returns.size()) - 1;

  ExtractionResult out;
  out.subsequence = IntSet(horizon);
  std::uint64_t prev = 0;  // blocks live strictly beyond prev

  const std::uint64_t n2 = std::bit_floor(horizon);
  for (int k = 1;; ++k) {
    const double target = u * (1.0 - std::ldexp(1.0, -k));
    const IntSet& source = report.returns[static_cast<std::size_t>(std::min(k, last))];
    // Grow the block to successive dyadic boundaries until phi reaches the
    // target; dyadic ends align the mass with the norm's tail windows.
    std::uint64_t chosen_end = 0;
    IntSet block;
    for (std::uint64_t end = std::bit_ceil(prev + 2); end <= n2; end <<= 1) {
      IntSet candidate = restrict_range(source, prev + 1, end);
      if (m.phi(candidate) >= target && !candidate.empty()) {
        chosen_end = end;
        block = std::move(candidate);
        break;
      }
    }
    if (chosen_end == 0) {
      // Horizon exhausted; acceptable only if the set built so far already
      // carries the norm.
      const double have = exh_norm(m, out.subsequence).value;
      if (have + 1e-9 >= u) break;
      throw std::runtime_error("extract_limit_subsequence: block " + std::to_string(k) +
                               " found no mass below the horizon (evidence horizon too small)");
    }
    out.blocks.emplace_back(prev + 1, chosen_end);
    out.subsequence = set_union(out.subsequence, block);
    prev = chosen_end - 1;
    if (prev + 2 > n2) {
      const double have = exh_norm(m, out.subsequence).value;
      if (have + 1e-9 >= u) break;
      throw std::runtime_error("extract_limit_subsequence: block " + std::to_string(k + 1) +
                               " cannot fit below the horizon (evidence horizon too small)");
    }
  }
  out.norm = exh_norm(m, out.subsequence).value;
  return out;
}

std::vector<Point> space_grid(const System& sys, int count) {
  std::vector<Point> out;
  const std::string& spec = sys.spec();
  if (spec.rfind("rotation", 0) == 0) {
    for (int i = 0; i < count; ++i) out.push_back(static_cast<double>(i) / count);
    return out;
  }
  if (spec.rfind("doubling", 0) == 0 || spec.rfind("cantor", 0) == 0) {
    const int bits = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(count - 1))));
    const std::uint64_t len = sys.horizon_hint() + 128;
    for (int i = 0; i < count; ++i) {
      std::string s;
      for (int b = bits - 1; b >= 0; --b) s.push_back(((i >> b) & 1) ? '1' : '0');
      out.push_back(WordPoint{std::make_shared<BitExpansion>(BitExpansion::from_binary_string(s, len)), 0});
    }
    return out;
  }
  throw std::invalid_argument("space_grid: unsupported system " + spec);
}

bool dense_orbit_surrogate(const std::shared_ptr<const System>& sys, const Point& x, std::uint64_t horizon,
                           int grid) {
  const std::vector<Point> targets = space_grid(*sys, grid);
  const bool cylinder = sys->spec().rfind("cantor", 0) == 0;
  // Radius covering one grid cell: adjacent circle targets are 1/grid apart;
  // cylinder targets differ within bit_width(grid-1) symbols.
  const double radius = cylinder
                            ? 1.5 * std::ldexp(1.0, -std::max(1, static_cast<int>(std::bit_width(
                                                                    static_cast<unsigned>(grid - 1)))))
                            : 1.0 / grid;
  Orbit orbit(sys, x, horizon);
  std::vector<bool> seen(targets.size(), false);
  std::size_t remaining = targets.size();
  for (std::uint64_t n = 0; n < horizon && remaining > 0; ++n) {
    const Point p = orbit.at(n);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!seen[t] && sys->metric(targets[t], p) < radius) {
        seen[t] = true;
        --remaining;
      }
    }
  }
  return remaining == 0;
}

ClassifyRecord classify(const std::shared_ptr<const System>& sys, const Point& x, const Submeasure& m,
                        const std::vector<Point>& targets, double radius, std::uint64_t horizon,
                        double threshold, int schedule_length) {
  if (targets.empty()) throw std::invalid_argument("classify: target grid must be nonempty");
  ClassifyRecord rec;
  rec.threshold = threshold;
  rec.radius = radius;
  rec.target_count = targets.size();
  rec.horizon = horizon;

  const ClusterReport self = cluster_value(sys, x, x, radius, schedule_length, m, horizon, threshold);
  rec.recurrent.property = "recurrent";
  rec.recurrent.witness = self.norms.front();
  rec.recurrent.status = self.is_cluster ? VerdictStatus::positive : VerdictStatus::member;
  rec.recurrent.detail = "norm of N(x,B(x,r)) at r=" + std::to_string(radius);

  rec.strong_recurrent.property = "strong_recurrent";
  rec.strong_recurrent.witness = self.u_value;
  rec.strong_recurrent.status = self.is_limit ? VerdictStatus::positive : VerdictStatus::member;
  rec.strong_recurrent.detail = "u-value at x along the radius schedule";

  double worst_norm = 1.0;
  double worst_u = 1.0;
  for (const Point& eta : targets) {
    const ClusterReport rep = cluster_value(sys, x, eta, radius, schedule_length, m, horizon, threshold);
    rec.target_norms.push_back(rep.norms.front());
    rec.target_u.push_back(rep.u_value);
    worst_norm = std::min(worst_norm, rep.norms.front());
    worst_u = std::min(worst_u, rep.u_value);
  }
  rec.universal.property = "universal";
  rec.universal.witness = worst_norm;
  rec.universal.status = worst_norm >= threshold ? VerdictStatus::positive : VerdictStatus::member;
  rec.universal.detail = "least fixed-radius norm across the target grid";

  rec.strong_universal.property = "strong_universal";
  rec.strong_universal.witness = worst_u;
  rec.strong_universal.status = worst_u >= threshold ? VerdictStatus::positive : VerdictStatus::member;
  rec.strong_universal.detail = "least u-value across the target grid";
  return rec;
}

CParameterResult estimate_c_parameter(const std::shared_ptr<const System>& sys, const Point& eta,
                                      const Submeasure& m, const std::vector<Point>& candidates, double r0,
                                      int schedule_length, std::uint64_t horizon) {
  if (candidates.empty()) throw std::invalid_argument("estimate_c_parameter: empty candidate list");
  if (schedule_length < 1) throw std::invalid_argument("estimate_c_parameter: K must be >= 1");
  CParameterResult out;
  out.schedule_length = schedule_length;

  std::vector<std::vector<double>> norms;  // per candidate, per k
  for (const Point& cand : candidates) {
    const bool passed = dense_orbit_surrogate(sys, cand, horizon);
    out.candidate_passed.push_back(passed);
    if (!passed) {
      norms.emplace_back();
      out.candidate_final_norms.push_back(0.0);
      continue;
    }
    Orbit orbit(sys, cand, horizon);
    std::vector<double> per_k;
    for (int k = 0; k < schedule_length; ++k) {
      const double r = r0 * std::ldexp(1.0, -k);
      per_k.push_back(exh_norm(m, return_set_raw(*sys, orbit, eta, r)).value);
    }
    out.candidate_final_norms.push_back(per_k.back());
    norms.push_back(std::move(per_k));
  }

  double value = 0.0;
  bool any = false;
  for (int k = 0; k < schedule_length; ++k) {
    double best = 0.0;
    bool seen = false;
    for (const auto& per_k : norms) {
      if (per_k.empty()) continue;
      best = std::max(best, per_k[static_cast<std::size_t>(k)]);
      seen = true;
    }
    if (!seen) break;
    value = k == 0 ? best : std::min(value, best);
    any = true;
  }
  out.value = any ? value : 0.0;
  return out;
}

}  // namespace idyn
