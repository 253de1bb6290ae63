#include "idyn/dynsys.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "idyn/util.hpp"

namespace idyn {

namespace {

constexpr std::uint64_t kExpansionSlack = 128;  // metric lookahead past the horizon

double circle_distance(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

double fractional(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

const std::array<std::uint8_t, 256>& byte_reverse_table() {
  static const std::array<std::uint8_t, 256> table = [] {
    std::array<std::uint8_t, 256> t{};
    for (int b = 0; b < 256; ++b) {
      std::uint8_t r = 0;
      for (int i = 0; i < 8; ++i) {
        if ((b >> i) & 1) r = static_cast<std::uint8_t>(r | (1u << (7 - i)));
      }
      t[static_cast<std::size_t>(b)] = r;
    }
    return t;
  }();
  return table;
}

std::uint64_t reverse_bits64(std::uint64_t v) {
  const auto& t = byte_reverse_table();
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) {
    r = (r << 8) | t[(v >> (i * 8)) & 0xff];
  }
  return r;
}

}  // namespace

BitExpansion::BitExpansion(std::uint64_t length) : length_(length), words_((length + 63) / 64 + 1, 0) {}

BitExpansion BitExpansion::zeros(std::uint64_t length) { return BitExpansion(length); }

BitExpansion BitExpansion::from_binary_string(const std::string& bits, std::uint64_t length) {
  BitExpansion e(std::max<std::uint64_t>(length, bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      e.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("binary word: symbols must be 0/1");
    }
  }
  return e;
}

BitExpansion BitExpansion::from_rational(std::uint64_t p, std::uint64_t q, std::uint64_t length) {
  if (q == 0 || p >= q) throw std::invalid_argument("rational point: need p/q in [0,1)");
  BitExpansion e(length);
  std::uint64_t rem = p;
  for (std::uint64_t i = 0; i < length; ++i) {
    rem <<= 1;
    if (rem >= q) {
      e.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
      rem -= q;
    }
  }
  return e;
}

BitExpansion BitExpansion::champernowne(std::uint64_t length) {
  BitExpansion e(length);
  std::uint64_t pos = 0;
  for (std::uint64_t n = 0; pos < length; ++n) {
    const int width = (n == 0) ? 1 : 64 - std::countl_zero(n);
    for (int b = width - 1; b >= 0 && pos < length; --b, ++pos) {
      if ((n >> b) & 1) e.words_[pos >> 6] |= std::uint64_t{1} << (pos & 63);
    }
  }
  return e;
}

BitExpansion BitExpansion::zero_block_champernowne(std::uint64_t length) {
  BitExpansion e(length);
  constexpr std::uint64_t kFirstZeroBlock = 12;
  constexpr std::uint64_t kOverhang = 64;  // zero runs exceed the half block by this much
  std::uint64_t n = 0;
  int bit_index = 0;  // next bit of n to emit, counted from the top
  int width = 1;
  for (std::uint64_t pos = 0; pos < length; ++pos) {
    bool zero_region = false;
    if (pos >= (std::uint64_t{1} << kFirstZeroBlock)) {
      const int m = 63 - std::countl_zero(pos);
      const std::uint64_t lo = std::uint64_t{1} << m;
      zero_region = pos >= lo + lo / 2 - kOverhang;
    }
    if (zero_region) continue;  // bit stays 0; enumeration stream pauses
    if ((n >> (width - 1 - bit_index)) & 1) {
      e.words_[pos >> 6] |= std::uint64_t{1} << (pos & 63);
    }
    if (++bit_index == width) {
      ++n;
      bit_index = 0;
      width = (n == 0) ? 1 : 64 - std::countl_zero(n);
    }
  }
  return e;
}

BitExpansion BitExpansion::random(std::uint64_t seed, std::uint64_t length) {
  BitExpansion e(length);
  SplitMix64 rng(seed);
  for (auto& w : e.words_) w = rng.next();
  // keep slack words zero so chunk64 past the end reads zeros
  const std::uint64_t used = length;
  for (std::uint64_t i = used; i < e.words_.size() * 64; ++i) {
    e.words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  return e;
}

std::uint64_t BitExpansion::chunk64(std::uint64_t offset) const {
  const std::uint64_t q = offset >> 6;
  const std::uint64_t r = offset & 63;
  if (q >= words_.size()) return 0;
  std::uint64_t lo = words_[q];
  if (r == 0) return lo;
  std::uint64_t hi = (q + 1 < words_.size()) ? words_[q + 1] : 0;
  return (lo >> r) | (hi << (64 - r));
}

double BitExpansion::value_at(std::uint64_t offset) const {
  if (offset + 53 > length_) {
    throw std::runtime_error("binary expansion exhausted: need " + std::to_string(offset + 53) +
                             " symbols, have " + std::to_string(length_));
  }
  const std::uint64_t chunk = chunk64(offset);
  return static_cast<double>(reverse_bits64(chunk) >> 11) * 0x1.0p-53;
}

BitExpansion BitExpansion::xor_with(const BitExpansion& other) const {
  BitExpansion out(std::max(length_, other.length_));
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    const std::uint64_t a = i < words_.size() ? words_[i] : 0;
    const std::uint64_t b = i < other.words_.size() ? other.words_[i] : 0;
    out.words_[i] = a ^ b;
  }
  return out;
}

Point System::advance(const Point& x, std::uint64_t n) const {
  Point p = x;
  for (std::uint64_t i = 0; i < n; ++i) p = step(p);
  return p;
}

namespace {

WordPoint word_point_of(const Point& p, const char* sys) {
  if (const auto* wp = std::get_if<WordPoint>(&p)) return *wp;
  throw std::invalid_argument(std::string(sys) + ": point has the wrong representation");
}

double double_of(const Point& p, const char* sys) {
  if (const auto* d = std::get_if<double>(&p)) return *d;
  throw std::invalid_argument(std::string(sys) + ": point has the wrong representation");
}

const std::vector<double>& vec_of(const Point& p, const char* sys) {
  if (const auto* v = std::get_if<std::vector<double>>(&p)) return *v;
  throw std::invalid_argument(std::string(sys) + ": point has the wrong representation");
}

class RotationSystem final : public System {
 public:
  RotationSystem(std::string spec, double alpha) : System(std::move(spec)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("rotation: alpha must be in (0,1)");
    for (std::uint64_t q = 1; q <= 64; ++q) {
      const double scaled = alpha * static_cast<double>(q);
      if (std::fabs(scaled - std::round(scaled)) < 1e-12 * static_cast<double>(q)) {
        warnings_.push_back("alpha is (close to) rational with denominator " + std::to_string(q) +
                            "; degenerate for irrational-rotation properties");
        break;
      }
    }
  }

  Point step(const Point& x) const override { return fractional(double_of(x, "rotation") + alpha_); }

  Point advance(const Point& x, std::uint64_t n) const override {
    // x + n*alpha mod 1 in closed form; iterated stepping would accumulate
    // n rounding errors.
    const double shift = fractional(static_cast<double>(n) * alpha_);
    return fractional(double_of(x, "rotation") + shift);
  }

  double metric(const Point& a, const Point& b) const override {
    return circle_distance(double_of(a, "rotation"), double_of(b, "rotation"));
  }

  Point parse_point(const std::string& lit) const override {
    const double v = parse_double(lit, "rotation point");
    if (v < 0.0 || v >= 1.0) throw std::invalid_argument("rotation point: need value in [0,1)");
    return v;
  }

  std::string format_point(const Point& x) const override {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", double_of(x, "rotation"));
    return buf;
  }

  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

// Shared base for the two binary-shift instances.
class ShiftSystem : public System {
 public:
  using System::System;

  Point step(const Point& x) const override {
    WordPoint wp = word_point_of(x, spec_.c_str());
    ++wp.offset;
    return wp;
  }

  Point advance(const Point& x, std::uint64_t n) const override {
    WordPoint wp = word_point_of(x, spec_.c_str());
    wp.offset += n;
    return wp;
  }

  Point parse_point(const std::string& lit) const override {
    const std::uint64_t len = horizon_hint_ + kExpansionSlack;
    std::shared_ptr<const BitExpansion> bits;
    if (lit == "zeros") {
      bits = std::make_shared<BitExpansion>(BitExpansion::zeros(len));
    } else if (lit == "champernowne") {
      bits = std::make_shared<BitExpansion>(BitExpansion::champernowne(len));
    } else if (lit == "champernowne0") {
      bits = std::make_shared<BitExpansion>(BitExpansion::zero_block_champernowne(len));
    } else if (lit.find('/') != std::string::npos) {
      const auto parts = split_string(lit, '/');
      if (parts.size() != 2) throw std::invalid_argument("point: bad fraction '" + lit + "'");
      bits = std::make_shared<BitExpansion>(BitExpansion::from_rational(
          parse_u64(parts[0], "numerator"), parse_u64(parts[1], "denominator"), len));
    } else if (lit.find('.') != std::string::npos) {
      const double v = parse_double(lit, "point");
      if (v < 0.0 || v >= 1.0) throw std::invalid_argument("point: need value in [0,1)");
      // 53 bits of the double, zeros beyond.
      std::string s;
      double f = v;
      for (int i = 0; i < 53; ++i) {
        f *= 2.0;
        const int b = static_cast<int>(f);
        s.push_back(b ? '1' : '0');
        f -= b;
      }
      bits = std::make_shared<BitExpansion>(BitExpansion::from_binary_string(s, len));
    } else {
      bits = std::make_shared<BitExpansion>(BitExpansion::from_binary_string(lit, len));
    }
    return WordPoint{std::move(bits), 0};
  }

  std::string format_point(const Point& x) const override {
    const WordPoint wp = word_point_of(x, spec_.c_str());
    std::string s = "word@";
    s += std::to_string(wp.offset);
    s += ":";
    const std::uint64_t show = std::min<std::uint64_t>(16, wp.bits->length() - std::min(wp.bits->length(), wp.offset));
    for (std::uint64_t i = 0; i < show; ++i) s.push_back(wp.bits->bit(wp.offset + i) ? '1' : '0');
    return s;
  }
};

class DoublingSystem final : public ShiftSystem {
 public:
  explicit DoublingSystem(std::string spec) : ShiftSystem(std::move(spec)) {}

  double metric(const Point& a, const Point& b) const override {
    const WordPoint pa = word_point_of(a, "doubling");
    const WordPoint pb = word_point_of(b, "doubling");
    return circle_distance(pa.bits->value_at(pa.offset), pb.bits->value_at(pb.offset));
  }
};

class CantorShiftSystem final : public ShiftSystem {
 public:
  CantorShiftSystem(std::string spec, std::uint64_t depth) : ShiftSystem(std::move(spec)), depth_(depth) {
    if (depth == 0 || depth > 62) throw std::invalid_argument("cantor: depth must be in [1,62]");
    mask_ = (std::uint64_t{1} << depth) - 1;
  }

  double metric(const Point& a, const Point& b) const override {
    const WordPoint pa = word_point_of(a, "cantor");
    const WordPoint pb = word_point_of(b, "cantor");
    if (pa.offset + depth_ > pa.bits->length() || pb.offset + depth_ > pb.bits->length()) {
      throw std::runtime_error("binary expansion exhausted under cylinder metric");
    }
    const std::uint64_t diff = (pa.bits->chunk64(pa.offset) ^ pb.bits->chunk64(pb.offset)) & mask_;
    if (diff == 0) return 0.0;  // indistinguishable at resolution depth
    return std::ldexp(1.0, -std::countr_zero(diff));
  }

  std::uint64_t depth() const { return depth_; }

 private:
  std::uint64_t depth_;
  std::uint64_t mask_;
};

class WeightedShiftSystem final : public System {
 public:
  WeightedShiftSystem(std::string spec, std::uint64_t dim, std::vector<double> weights)
      : System(std::move(spec)), dim_(dim), weights_(std::move(weights)) {
    if (dim_ < 1) throw std::invalid_argument("wshift: dimension must be >= 1");
    if (weights_.size() != dim_ - 1) {
      throw std::invalid_argument("wshift: need d-1 weights");
    }
    for (double w : weights_) {
      if (!(w > 0.0)) throw std::invalid_argument("wshift: weights must be positive");
    }
  }

  Point step(const Point& x) const override {
    const auto& v = vec_of(x, "wshift");
    if (v.size() != dim_) throw std::invalid_argument("wshift: point has wrong dimension");
    std::vector<double> y(dim_, 0.0);
    for (std::uint64_t i = 0; i + 1 < dim_; ++i) y[i] = weights_[i] * v[i + 1];
    return y;
  }

  double metric(const Point& a, const Point& b) const override {
    const auto& va = vec_of(a, "wshift");
    const auto& vb = vec_of(b, "wshift");
    double d = 0.0;
    for (std::uint64_t i = 0; i < dim_; ++i) d = std::max(d, std::fabs(va[i] - vb[i]));
    return d;
  }

  Point parse_point(const std::string& lit) const override {
    std::vector<double> v;
    for (const auto& tok : split_string(lit, ',')) v.push_back(parse_double(tok, "wshift point"));
    if (v.size() != dim_) throw std::invalid_argument("wshift point: wrong dimension");
    return v;
  }

  std::string format_point(const Point& x) const override {
    const auto& v = vec_of(x, "wshift");
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.12g", v[i]);
      os << buf;
    }
    return os.str();
  }

  bool exact_advance() const override { return false; }

  std::uint64_t dim() const { return dim_; }

 private:
  std::uint64_t dim_;
  std::vector<double> weights_;
};

}  // namespace

std::shared_ptr<System> make_system(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);

  if (head == "rotation") return std::make_shared<RotationSystem>(spec, parse_double(rest, "alpha"));
  if (head == "doubling") {
    if (!rest.empty()) throw std::invalid_argument("doubling takes no parameters");
    return std::make_shared<DoublingSystem>(spec);
  }
  if (head == "cantor") return std::make_shared<CantorShiftSystem>(spec, parse_u64(rest, "depth"));
  if (head == "wshift") {
    auto parts = split_string(rest, ',');
    if (parts.empty()) throw std::invalid_argument("wshift wants wshift:<d>,<w1>,...");
    const std::uint64_t d = parse_u64(parts[0], "wshift dimension");
    std::vector<double> w;
    for (std::size_t i = 1; i < parts.size(); ++i) w.push_back(parse_double(parts[i], "wshift weight"));
    return std::make_shared<WeightedShiftSystem>(spec, d, std::move(w));
  }
  throw std::invalid_argument("unknown system spec '" + spec + "'");
}

Orbit::Orbit(std::shared_ptr<const System> sys, Point base, std::uint64_t horizon)
    : sys_(std::move(sys)), base_(std::move(base)), horizon_(horizon), drift_(!sys_->exact_advance()),
      cache_point_(base_) {
  if (horizon == 0) throw std::invalid_argument("Orbit: horizon must be >= 1");
}

Point Orbit::at(std::uint64_t n) const {
  if (sys_->exact_advance()) return sys_->advance(base_, n);
  if (n < cache_index_) {
    cache_index_ = 0;
    cache_point_ = base_;
  }
  while (cache_index_ < n) {
    cache_point_ = sys_->step(cache_point_);
    ++cache_index_;
  }
  return cache_point_;
}

bool ball_membership(const System& sys, const Point& center, double radius, const Point& p) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_membership: radius must be positive");
  return sys.metric(center, p) < radius;
}

std::optional<std::uint64_t> detect_period(const System& sys, const Point& x, std::uint64_t max_n, double tol) {
  if (max_n < 1) throw std::invalid_argument("detect_period: max_n must be >= 1");
  if (tol < 0.0) throw std::invalid_argument("detect_period: tol must be >= 0");
  for (std::uint64_t p = 1; p <= max_n; ++p) {
    if (sys.metric(sys.advance(x, p), x) <= tol && sys.metric(sys.advance(x, 2 * p), x) <= tol) {
      return p;
    }
  }
  return std::nullopt;
}

}  // namespace idyn
