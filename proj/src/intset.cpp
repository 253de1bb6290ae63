#include "idyn/intset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "idyn/util.hpp"

namespace idyn {

namespace {

std::uint64_t words_needed(std::uint64_t horizon) { return (horizon + 63) / 64; }

// Word i of `s` viewed as if the whole bitset were shifted right by `off` bits.
inline std::uint64_t shifted_word(std::span<const std::uint64_t> w, std::uint64_t off, std::uint64_t i) {
  const std::uint64_t q = off >> 6;
  const std::uint64_t r = off & 63;
  const std::uint64_t n = w.size();
  std::uint64_t lo = (q + i < n) ? w[q + i] : 0;
  if (r == 0) return lo;
  std::uint64_t hi = (q + i + 1 < n) ? w[q + i + 1] : 0;
  return (lo >> r) | (hi << (64 - r));
}

}  // namespace

IntSet::IntSet(std::uint64_t horizon) : horizon_(horizon), words_(words_needed(horizon), 0) {
  if (horizon == 0) throw std::invalid_argument("IntSet: horizon must be positive");
}

IntSet IntSet::full(std::uint64_t horizon) {
  IntSet s(horizon);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  const std::uint64_t tail = horizon & 63;
  if (tail != 0) s.words_.back() &= (std::uint64_t{1} << tail) - 1;
  s.card_ = horizon;
  return s;
}

IntSet IntSet::from_elements(std::span<const std::uint64_t> elems, std::uint64_t horizon) {
  IntSet s(horizon);
  for (std::uint64_t e : elems) {
    if (e < horizon) s.set_bit(e);
  }
  s.recount();
  return s;
}

IntSet IntSet::from_predicate(std::uint64_t horizon, const std::function<bool(std::uint64_t)>& pred) {
  IntSet s(horizon);
  for (std::uint64_t n = 0; n < horizon; ++n) {
    if (pred(n)) s.set_bit(n);
  }
  s.recount();
  return s;
}

IntSet IntSet::random(std::uint64_t horizon, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("IntSet::random: p outside [0,1]");
  IntSet s(horizon);
  SplitMix64 rng(seed);
  for (std::uint64_t n = 0; n < horizon; ++n) {
    if (rng.next_double() < p) s.set_bit(n);
  }
  s.recount();
  return s;
}

IntSet IntSet::build(const std::string& spec, std::uint64_t horizon) {
  if (spec.empty()) throw std::invalid_argument("set spec: empty string");
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);

  if (head == "ap") {
    auto parts = split_string(rest, ',');
    if (parts.size() != 2) throw std::invalid_argument("set spec: ap wants ap:<k>,<h>");
    const std::uint64_t k = parse_u64(parts[0], "ap step");
    const std::uint64_t h = parse_u64(parts[1], "ap offset");
    if (k == 0) throw std::invalid_argument("set spec: ap step k must be >= 1");
    IntSet s(horizon);
    for (std::uint64_t n = h; n < horizon; n += k) s.set_bit(n);
    s.recount();
    return s;
  }
  if (head == "list") {
    IntSet s(horizon);
    if (!rest.empty()) {
      for (const auto& tok : split_string(rest, ',')) {
        const std::uint64_t e = parse_u64(tok, "list element");
        if (e < horizon) s.set_bit(e);
      }
    }
    s.recount();
    return s;
  }
  if (head == "intervals") {
    IntSet s(horizon);
    if (!rest.empty()) {
      for (const auto& tok : split_string(rest, ';')) {
        if (tok.empty()) continue;
        auto ab = split_string(tok, '-');
        if (ab.size() != 2) throw std::invalid_argument("set spec: interval wants <a>-<b>");
        const std::uint64_t a = parse_u64(ab[0], "interval start");
        const std::uint64_t b = parse_u64(ab[1], "interval end");
        if (b < a) throw std::invalid_argument("set spec: interval end before start");
        for (std::uint64_t n = a; n <= b && n < horizon; ++n) s.set_bit(n);
      }
    }
    s.recount();
    return s;
  }
  if (head == "blocks") {
    if (rest != "pow4") throw std::invalid_argument("set spec: unknown blocks family '" + rest + "'");
    IntSet s(horizon);
    for (std::uint64_t lo = 1; lo < horizon; lo <<= 2) {
      const std::uint64_t hi = std::min<std::uint64_t>(lo << 1, horizon);
      for (std::uint64_t n = lo; n < hi; ++n) s.set_bit(n);
    }
    s.recount();
    return s;
  }
  if (head == "squares") {
    IntSet s(horizon);
    for (std::uint64_t j = 0;; ++j) {
      const std::uint64_t sq = j * j;
      if (sq >= horizon) break;
      s.set_bit(sq);
    }
    s.recount();
    return s;
  }
  if (head == "random") {
    auto parts = split_string(rest, ',');
    if (parts.size() != 2) throw std::invalid_argument("set spec: random wants random:<p>,<seed>");
    const double p = parse_double(parts[0], "random p");
    const std::uint64_t seed = parse_u64(parts[1], "random seed");
    return random(horizon, p, seed);
  }
  if (head == "file") {
    std::ifstream in(rest);
    if (!in) throw std::invalid_argument("set spec: cannot open file '" + rest + "'");
    IntSet s(horizon);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::uint64_t e = parse_u64(line, "file element");
      if (e < horizon) s.set_bit(e);
    }
    s.recount();
    return s;
  }
  throw std::invalid_argument("set spec: unknown form '" + spec + "'");
}

void IntSet::recount() {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  card_ = c;
}

std::vector<std::uint64_t> IntSet::elements() const {
  std::vector<std::uint64_t> out;
  out.reserve(card_);
  for (std::uint64_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const int b = std::countr_zero(w);
      out.push_back(i * 64 + static_cast<std::uint64_t>(b));
      w &= w - 1;
    }
  }
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> IntSet::runs() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t begin = next_element(0);
  while (begin < horizon_) {
    std::uint64_t end = begin + 1;
    while (end < horizon_ && contains(end)) ++end;
    out.emplace_back(begin, end);
    begin = next_element(end);
  }
  return out;
}

std::uint64_t IntSet::count_below(std::uint64_t n) const {
  if (n >= horizon_) return card_;
  const std::uint64_t q = n >> 6;
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < q; ++i) c += static_cast<std::uint64_t>(std::popcount(words_[i]));
  const std::uint64_t r = n & 63;
  if (r != 0) c += static_cast<std::uint64_t>(std::popcount(words_[q] & ((std::uint64_t{1} << r) - 1)));
  return c;
}

std::uint64_t IntSet::count_range(std::uint64_t lo, std::uint64_t hi) const {
  if (hi <= lo) return 0;
  return count_below(hi) - count_below(lo);
}

std::uint64_t IntSet::next_element(std::uint64_t from) const {
  if (from >= horizon_) return horizon_;
  std::uint64_t q = from >> 6;
  std::uint64_t w = words_[q] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (w != 0) {
      const std::uint64_t n = q * 64 + static_cast<std::uint64_t>(std::countr_zero(w));
      return n < horizon_ ? n : horizon_;
    }
    if (++q >= words_.size()) return horizon_;
    w = words_[q];
  }
}

void IntSet::write(std::ostream& os) const {
  os << "horizon=" << horizon_ << '\n';
  for (std::uint64_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const int b = std::countr_zero(w);
      os << (i * 64 + static_cast<std::uint64_t>(b)) << '\n';
      w &= w - 1;
    }
  }
}

IntSet IntSet::read(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("horizon=", 0) != 0) {
    throw std::invalid_argument("IntSet::read: missing horizon header");
  }
  const std::uint64_t horizon = parse_u64(line.substr(8), "horizon");
  IntSet s(horizon);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::uint64_t e = parse_u64(line, "element");
    if (e >= horizon) throw std::invalid_argument("IntSet::read: element beyond horizon");
    s.set_bit(e);
  }
  s.recount();
  return s;
}

namespace {
void require_same_horizon(const IntSet& a, const IntSet& b, const char* op) {
  if (a.horizon() != b.horizon()) {
    throw std::invalid_argument(std::string(op) + ": mismatched horizons");
  }
}
}  // namespace

IntSet set_union(const IntSet& a, const IntSet& b) {
  require_same_horizon(a, b, "union");
  IntSet r(a.horizon_);
  for (std::uint64_t i = 0; i < r.words_.size(); ++i) r.words_[i] = a.words_[i] | b.words_[i];
  r.recount();
  return r;
}

IntSet set_intersect(const IntSet& a, const IntSet& b) {
  require_same_horizon(a, b, "intersect");
  IntSet r(a.horizon_);
  for (std::uint64_t i = 0; i < r.words_.size(); ++i) r.words_[i] = a.words_[i] & b.words_[i];
  r.recount();
  return r;
}

IntSet set_minus(const IntSet& a, const IntSet& b) {
  require_same_horizon(a, b, "minus");
  IntSet r(a.horizon_);
  for (std::uint64_t i = 0; i < r.words_.size(); ++i) r.words_[i] = a.words_[i] & ~b.words_[i];
  r.recount();
  return r;
}

IntSet set_complement(const IntSet& a) {
  IntSet r(a.horizon_);
  for (std::uint64_t i = 0; i < r.words_.size(); ++i) r.words_[i] = ~a.words_[i];
  const std::uint64_t tail = a.horizon_ & 63;
  if (tail != 0) r.words_.back() &= (std::uint64_t{1} << tail) - 1;
  r.recount();
  return r;
}

IntSet restrict_range(const IntSet& s, std::uint64_t lo, std::uint64_t hi) {
  IntSet r(s.horizon());
  hi = std::min(hi, s.horizon());
  if (lo >= hi) return r;
  const std::uint64_t first = lo >> 6;
  const std::uint64_t last = (hi - 1) >> 6;
  for (std::uint64_t i = first; i <= last; ++i) {
    std::uint64_t w = s.words()[i];
    if (i == first && (lo & 63) != 0) w &= ~std::uint64_t{0} << (lo & 63);
    if (i == last && (hi & 63) != 0) w &= (std::uint64_t{1} << (hi & 63)) - 1;
    r.words_[i] = w;
  }
  r.recount();
  return r;
}

AffineImage affine_image(const IntSet& s, std::uint64_t k, std::uint64_t h, bool forward) {
  if (k == 0) throw std::invalid_argument("affine_image: k must be >= 1");
  AffineImage out;
  out.set = IntSet(s.horizon());
  if (forward) {
    for (std::uint64_t i = 0; i < s.words_.size(); ++i) {
      std::uint64_t w = s.words_[i];
      while (w != 0) {
        const std::uint64_t n = i * 64 + static_cast<std::uint64_t>(std::countr_zero(w));
        w &= w - 1;
        const std::uint64_t m = n * k + h;
        if (m < s.horizon()) {
          out.set.set_bit(m);
        } else {
          ++out.clipped;
        }
      }
    }
  } else {
    for (std::uint64_t i = 0; i < s.words_.size(); ++i) {
      std::uint64_t w = s.words_[i];
      while (w != 0) {
        const std::uint64_t n = i * 64 + static_cast<std::uint64_t>(std::countr_zero(w));
        w &= w - 1;
        if (n < h || (n - h) % k != 0) {
          ++out.clipped;
          continue;
        }
        out.set.set_bit((n - h) / k);
      }
    }
  }
  out.set.recount();
  return out;
}

IntSet difference_set(const IntSet& a, const IntSet& b) {
  require_same_horizon(a, b, "difference_set");
  const std::uint64_t horizon = a.horizon();
  IntSet r(horizon);

  // Sparse b: accumulate word-shifted copies of a, one per element of b.
  // Dense b: decide each n by testing b against a shifted by n; for dense
  // inputs the first word almost always witnesses membership.
  if (b.cardinality() <= 2048) {
    for (std::uint64_t k : b.elements()) {
      const std::uint64_t q = k >> 6;
      const std::uint64_t sh = k & 63;
      const std::uint64_t n = r.words_.size();
      for (std::uint64_t i = 0; i + q < n; ++i) {
        std::uint64_t v = a.words_[i + q] >> sh;
        if (sh != 0 && i + q + 1 < n) v |= a.words_[i + q + 1] << (64 - sh);
        r.words_[i] |= v;
      }
    }
  } else {
    const auto aw = a.words();
    const auto bw = b.words();
    for (std::uint64_t n = 0; n < horizon; ++n) {
      for (std::uint64_t i = 0; i < bw.size(); ++i) {
        if (bw[i] == 0) continue;
        if ((bw[i] & shifted_word(aw, n, i)) != 0) {
          r.set_bit(n);
          break;
        }
      }
    }
  }
  // Clip: results must stay within [0, horizon); shifts already guarantee it.
  r.recount();
  return r;
}

GapProfile gap_profile(const IntSet& s, std::optional<std::uint64_t> syndetic_bound) {
  GapProfile p;
  const std::uint64_t bound =
      syndetic_bound.value_or(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(s.horizon()))));
  p.bound_used = bound;
  if (s.empty()) {
    p.empty = true;
    return p;
  }
  std::uint64_t prev = s.next_element(0);
  p.leading_gap = prev;
  std::uint64_t run = 1;
  p.max_interval = 1;
  for (std::uint64_t e = s.next_element(prev + 1); e < s.horizon(); e = s.next_element(e + 1)) {
    const std::uint64_t gap = e - prev;
    p.gaps.push_back(gap);
    p.max_gap = std::max(p.max_gap, gap);
    run = (gap == 1) ? run + 1 : 1;
    p.max_interval = std::max(p.max_interval, run);
    prev = e;
  }
  p.trailing_gap = (s.horizon() - 1) - prev;
  // Longest missing run anywhere in [0, horizon); windows of length bound+1
  // all meet the set iff no missing run exceeds bound.
  std::uint64_t worst_missing = std::max(p.leading_gap, p.trailing_gap);
  if (p.max_gap > 0) worst_missing = std::max(worst_missing, p.max_gap - 1);
  p.is_syndetic_at_horizon = worst_missing <= bound;
  return p;
}

}  // namespace idyn
