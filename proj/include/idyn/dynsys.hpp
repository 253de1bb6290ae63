#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace idyn {

/// Immutable bit sequence; the exact-arithmetic backbone for the binary-shift
/// systems. Symbol i is bit i; fractional values read the symbols most
/// significant first.
class BitExpansion {
 public:
  static BitExpansion zeros(std::uint64_t length);
  static BitExpansion from_binary_string(const std::string& bits, std::uint64_t length);
  /// Binary expansion of p/q in [0,1), long division, exact for all rationals.
  static BitExpansion from_rational(std::uint64_t p, std::uint64_t q, std::uint64_t length);
  /// Concatenated binary representations of 0,1,2,...
  static BitExpansion champernowne(std::uint64_t length);
  /// Champernowne stream with solid zero runs covering slightly more than the
  /// right half of every dyadic position block [2^m, 2^{m+1}), m >= 12. The
  /// enumeration keeps the orbit dense while the zero runs hold the tail
  /// frequency of long zero cylinders above one half.
  static BitExpansion zero_block_champernowne(std::uint64_t length);
  static BitExpansion random(std::uint64_t seed, std::uint64_t length);

  std::uint64_t length() const { return length_; }
  bool bit(std::uint64_t i) const { return ((words_[i >> 6] >> (i & 63)) & 1u) != 0; }
  /// 64 symbols starting at offset, zero-padded past the end.
  std::uint64_t chunk64(std::uint64_t offset) const;
  /// Value of the dyadic fraction 0.b(offset) b(offset+1) ... truncated to 53
  /// bits. Throws when fewer than 53 symbols remain (precision exhaustion).
  double value_at(std::uint64_t offset) const;

  BitExpansion xor_with(const BitExpansion& other) const;

 private:
  explicit BitExpansion(std::uint64_t length);
  std::uint64_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A shared expansion plus a shift offset; stepping a binary-shift system is
/// an offset bump, so whole orbits share one allocation.
struct WordPoint {
  std::shared_ptr<const BitExpansion> bits;
  std::uint64_t offset = 0;
};

using Point = std::variant<double, WordPoint, std::vector<double>>;

/// A concrete dynamical system: step map, metric, point parsing.
///
/// Instances: rotation:<alpha> (circle, closed-form advance),
/// doubling (binary shift read as a circle point), cantor:<depth>
/// (binary shift under the cylinder metric at resolution depth, a group
/// homomorphism for xor), wshift:<d>,<w1>,... (truncated weighted backward
/// shift on R^d, sup metric, nilpotent).
class System {
 public:
  virtual ~System() = default;

  const std::string& spec() const { return spec_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Expansions created by parse_point are sized for this many exact steps.
  void set_horizon_hint(std::uint64_t n) { horizon_hint_ = n; }
  std::uint64_t horizon_hint() const { return horizon_hint_; }

  virtual Point step(const Point& x) const = 0;
  virtual Point advance(const Point& x, std::uint64_t n) const;
  virtual double metric(const Point& a, const Point& b) const = 0;
  virtual Point parse_point(const std::string& literal) const = 0;
  virtual std::string format_point(const Point& x) const = 0;
  /// True when advance(x, n) is drift-free for all n below the horizon hint.
  virtual bool exact_advance() const { return true; }

 protected:
  explicit System(std::string spec) : spec_(std::move(spec)) {}
  std::string spec_;
  std::vector<std::string> warnings_;
  std::uint64_t horizon_hint_ = 1u << 20;
};

/// Factory for system spec strings. Throws std::invalid_argument on errors
/// (unknown system, alpha outside (0,1), nonpositive weights, depth > 62).
std::shared_ptr<System> make_system(const std::string& spec);

/// Orbit view over [0, horizon): points are produced by closed-form advance
/// where available and by cached sequential stepping otherwise. Not
/// thread-safe; share the system, not the orbit.
class Orbit {
 public:
  Orbit(std::shared_ptr<const System> sys, Point base, std::uint64_t horizon);

  std::uint64_t horizon() const { return horizon_; }
  const Point& base() const { return base_; }
  bool drift_flag() const { return drift_; }
  Point at(std::uint64_t n) const;

 private:
  std::shared_ptr<const System> sys_;
  Point base_;
  std::uint64_t horizon_;
  bool drift_;
  mutable Point cache_point_;
  mutable std::uint64_t cache_index_ = 0;
};

/// Open-ball membership: metric(center, p) < radius, strictly.
bool ball_membership(const System& sys, const Point& center, double radius, const Point& p);

/// Least p <= max_n with metric(T^p x, x) <= tol, confirmed on a second lap
/// metric(T^{2p} x, x) <= tol; nullopt when none qualifies.
std::optional<std::uint64_t> detect_period(const System& sys, const Point& x, std::uint64_t max_n, double tol);

}  // namespace idyn
