#include "idyn/density.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "idyn/util.hpp"

namespace idyn {

namespace {

std::uint64_t dyadic_floor(std::uint64_t n) { return std::bit_floor(n); }

// Extremes of the running prefix ratio |S∩[0,m)|/m over m in [lo, hi].
// The ratio only rises when m steps past a member and only falls elsewhere,
// so the candidates are the range endpoints and the member positions.
struct PrefixExtremes {
  Ratio max_ratio;
  Ratio min_ratio;
};

PrefixExtremes prefix_extremes(const IntSet& s, std::uint64_t lo, std::uint64_t hi) {
  PrefixExtremes out;
  std::uint64_t count = s.count_below(lo);
  out.max_ratio = {count, lo};
  out.min_ratio = {count, lo};
  for (std::uint64_t e = s.next_element(lo); e < hi; e = s.next_element(e + 1)) {
    const Ratio before{count, e};         // just before counting e
    const Ratio after{count + 1, e + 1};  // just after
    if (before.less_than(out.min_ratio)) out.min_ratio = before;
    if (out.max_ratio.less_than(after)) out.max_ratio = after;
    ++count;
  }
  const Ratio at_end{s.count_below(hi), hi};
  if (at_end.less_than(out.min_ratio)) out.min_ratio = at_end;
  if (out.max_ratio.less_than(at_end)) out.max_ratio = at_end;
  return out;
}

double tail_harmonic_weight(std::uint64_t t0, std::uint64_t top) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(t0, top);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double w = harmonic_between(t0, top);
  cache.emplace(key, w);
  return w;
}

struct BanachWindows {
  double value = 0.0;  // min over scheduled window lengths of the max window ratio
  std::uint64_t wmin = 1;
  std::uint64_t wmax = 1;
};

BanachWindows banach_windowed(const IntSet& s) {
  const std::uint64_t n = s.horizon();
  const std::uint64_t n2 = dyadic_floor(n);
  BanachWindows out;
  out.wmax = std::max<std::uint64_t>(1, n2 / 4);
  out.wmin = std::min<std::uint64_t>(1024, out.wmax);

  std::vector<std::uint32_t> cum(n + 1, 0);
  {
    std::uint32_t c = 0;
    const auto words = s.words();
    for (std::uint64_t m = 0; m < n; ++m) {
      cum[m] = c;
      c += static_cast<std::uint32_t>((words[m >> 6] >> (m & 63)) & 1u);
    }
    cum[n] = c;
  }

  Ratio best{1, 1};
  bool first = true;
  for (std::uint64_t w = out.wmin; w <= out.wmax; w <<= 1) {
    std::uint32_t top = 0;
    const std::uint32_t* c = cum.data();
    for (std::uint64_t k = 0; k + w <= n; ++k) {
      const std::uint32_t d = c[k + w] - c[k];
      if (d > top) top = d;
    }
    const Ratio r{top, w};
    if (first || r.less_than(best)) {
      best = r;
      first = false;
    }
  }
  out.value = best.value();
  return out;
}

}  // namespace

const char* kind_name(DensityKind k) {
  switch (k) {
    case DensityKind::upper_asymptotic: return "upper_asymptotic";
    case DensityKind::lower_asymptotic: return "lower_asymptotic";
    case DensityKind::upper_banach: return "upper_banach";
    case DensityKind::lower_banach: return "lower_banach";
    case DensityKind::upper_logarithmic: return "upper_logarithmic";
  }
  return "?";
}

DensityEstimate asymptotic(const IntSet& s, Side side) {
  if (s.horizon() < 2) throw std::invalid_argument("asymptotic: horizon must be >= 2");
  const std::uint64_t n = s.horizon();
  const std::uint64_t lo = std::max<std::uint64_t>(1, dyadic_floor(n) / 2);
  const auto ext = prefix_extremes(s, lo, n);

  DensityEstimate e;
  e.kind = side == Side::upper ? DensityKind::upper_asymptotic : DensityKind::lower_asymptotic;
  e.horizon = n;
  e.window_min = lo;
  e.window_max = n;
  e.over_approximates = side == Side::upper;
  std::ostringstream sched;
  sched << "prefixes m in [" << lo << "," << n << "]";
  e.schedule = sched.str();
  e.value = side == Side::upper ? ext.max_ratio.value() : ext.min_ratio.value();
  return e;
}

DensityEstimate banach(const IntSet& s, Side side) {
  if (s.horizon() < 2) throw std::invalid_argument("banach: horizon must be >= 2");
  if (side == Side::lower) {
    const DensityEstimate comp = banach(set_complement(s), Side::upper);
    DensityEstimate e = comp;
    e.kind = DensityKind::lower_banach;
    e.over_approximates = false;
    e.value = 1.0 - comp.value;
    const DensityEstimate up = banach(s, Side::upper);
    e.value = std::min(e.value, up.value);  // lower estimates never exceed uppers
    if (e.value < 0.0) e.value = 0.0;
    return e;
  }
  const BanachWindows bw = banach_windowed(s);
  const DensityEstimate dstar = asymptotic(s, Side::upper);

  DensityEstimate e;
  e.kind = DensityKind::upper_banach;
  e.horizon = s.horizon();
  e.window_min = bw.wmin;
  e.window_max = bw.wmax;
  e.over_approximates = true;
  std::ostringstream sched;
  sched << "dyadic windows w in [" << bw.wmin << "," << bw.wmax << "], all positions; floor = prefix evidence";
  e.schedule = sched.str();
  // Any prefix is a window, so prefix evidence is a valid floor for bd*.
  e.value = std::max(bw.value, dstar.value);
  return e;
}

DensityEstimate logarithmic_upper(const IntSet& s) {
  if (s.horizon() < 3) throw std::invalid_argument("logarithmic_upper: horizon must be >= 3");
  const std::uint64_t n = s.horizon();
  const std::uint64_t t0 = dyadic_floor(n) / 4;  // tail anchor
  const std::uint64_t top = n - 1;

  KahanSum num;
  for (std::uint64_t e = s.next_element(t0 + 1); e < n; e = s.next_element(e + 1)) {
    num.add(1.0 / static_cast<double>(e));
  }
  const double den = tail_harmonic_weight(t0, top);
  double value = den > 0.0 ? num.value() / den : 0.0;

  const DensityEstimate dstar = asymptotic(s, Side::upper);
  value = std::min(value, dstar.value);  // ld* <= d* holds for the limits; enforced on estimates

  DensityEstimate e;
  e.kind = DensityKind::upper_logarithmic;
  e.horizon = n;
  e.window_min = t0 + 1;
  e.window_max = top;
  e.over_approximates = true;
  std::ostringstream sched;
  sched << "harmonic tail k in (" << t0 << "," << top << "]";
  e.schedule = sched.str();
  e.value = value;
  return e;
}

std::string density_csv_row(const std::string& set_spec, const DensityEstimate& e) {
  std::ostringstream os;
  os << set_spec << ',' << kind_name(e.kind) << ',' << e.horizon << ',';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", e.value);
  os << buf << ',' << e.window_min << ',' << e.window_max;
  return os.str();
}

}  // namespace idyn
