#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace idyn {

/// Gap statistics of a finite set of nonnegative integers.
///
/// Internal gaps are differences between consecutive members; the runs of
/// missing values before the first member and after the last one are reported
/// separately (syndeticity is an eventual property, so boundary runs do not
/// enter max_gap).
struct GapProfile {
  bool empty = false;                     ///< distinguished profile for the empty set
  std::vector<std::uint64_t> gaps;        ///< consecutive-member differences, each >= 1
  std::uint64_t max_gap = 0;              ///< max of gaps; 0 when fewer than two members
  std::uint64_t leading_gap = 0;          ///< distance from 0 to the first member
  std::uint64_t trailing_gap = 0;         ///< distance from the last member to horizon-1
  std::uint64_t max_interval = 0;         ///< longest run of consecutive members
  std::uint64_t bound_used = 0;           ///< syndeticity bound the verdict was taken at
  bool is_syndetic_at_horizon = false;    ///< every length-(bound+1) window inside [0,horizon) meets the set
};

class IntSet;

/// Result of an affine map with the number of elements lost to clipping, so
/// density estimators can correct for boundary loss.
struct AffineImage;

/// Canonical subset of [0, horizon), packed 64 elements per word.
///
/// Two IntSets with equal horizons and equal elements are bit-for-bit equal:
/// unused tail bits of the last word are always zero. Instances are immutable
/// after construction and safe to share across threads.
class IntSet {
 public:
  IntSet() = default;
  explicit IntSet(std::uint64_t horizon);

  static IntSet full(std::uint64_t horizon);
  static IntSet from_elements(std::span<const std::uint64_t> elems, std::uint64_t horizon);
  static IntSet from_predicate(std::uint64_t horizon, const std::function<bool(std::uint64_t)>& pred);
  static IntSet random(std::uint64_t horizon, double p, std::uint64_t seed);

  /// Builds from the set-specification mini-language:
  ///   ap:<k>,<h> | list:<n1>,<n2>,... | intervals:<a1>-<b1>;... (inclusive)
  ///   | blocks:pow4 | squares | random:<p>,<seed> | file:<path>
  /// Throws std::invalid_argument on malformed specs (empty string, k=0,
  /// p outside [0,1], unreadable file).
  static IntSet build(const std::string& spec, std::uint64_t horizon);

  std::uint64_t horizon() const { return horizon_; }
  std::uint64_t cardinality() const { return card_; }
  bool contains(std::uint64_t n) const {
    return n < horizon_ && ((words_[n >> 6] >> (n & 63)) & 1u) != 0;
  }
  bool empty() const { return card_ == 0; }

  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<std::uint64_t> elements() const;
  /// Run-length summary: maximal runs of consecutive members as [begin, end)
  /// pairs, in order. Derived from the packed form, so the two views always
  /// agree on cardinality.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs() const;

  /// Number of members below n (exclusive prefix count).
  std::uint64_t count_below(std::uint64_t n) const;
  /// Number of members in [lo, hi).
  std::uint64_t count_range(std::uint64_t lo, std::uint64_t hi) const;
  /// Smallest member >= from, or horizon if none.
  std::uint64_t next_element(std::uint64_t from) const;

  bool operator==(const IntSet& o) const = default;

  /// Serialization: header line "horizon=<N>", then one decimal member per line.
  void write(std::ostream& os) const;
  static IntSet read(std::istream& is);

 private:
  std::uint64_t horizon_ = 0;
  std::uint64_t card_ = 0;
  std::vector<std::uint64_t> words_;

  void set_bit(std::uint64_t n) { words_[n >> 6] |= (std::uint64_t{1} << (n & 63)); }
  void recount();
  friend IntSet set_union(const IntSet&, const IntSet&);
  friend IntSet set_intersect(const IntSet&, const IntSet&);
  friend IntSet set_minus(const IntSet&, const IntSet&);
  friend IntSet set_complement(const IntSet&);
  friend IntSet restrict_range(const IntSet&, std::uint64_t, std::uint64_t);
  friend IntSet difference_set(const IntSet&, const IntSet&);
  friend AffineImage affine_image(const IntSet&, std::uint64_t, std::uint64_t, bool);
};

struct AffineImage {
  IntSet set;
  std::uint64_t clipped = 0;
};

/// forward: k*S + h clipped to [0, horizon).
/// backward: (S - h) elementwise (negatives dropped), then exact division by k
/// (non-multiples dropped). Requires k >= 1.
AffineImage affine_image(const IntSet& s, std::uint64_t k, std::uint64_t h, bool forward);

/// A - B := union over k in B of (A - k), within the common horizon.
/// Both operands must share a horizon.
IntSet difference_set(const IntSet& a, const IntSet& b);

IntSet set_union(const IntSet& a, const IntSet& b);
IntSet set_intersect(const IntSet& a, const IntSet& b);
IntSet set_minus(const IntSet& a, const IntSet& b);
IntSet set_complement(const IntSet& a);

/// Elements of s in [lo, hi), same horizon.
IntSet restrict_range(const IntSet& s, std::uint64_t lo, std::uint64_t hi);

/// Gap statistics; bound defaults to floor(sqrt(horizon)) — a sublinear
/// surrogate for "bounded gaps eventually".
GapProfile gap_profile(const IntSet& s, std::optional<std::uint64_t> syndetic_bound = std::nullopt);

}  // namespace idyn
