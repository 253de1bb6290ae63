#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idyn {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so that identical seeds give identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Compensated (Kahan) accumulator for long sums of small terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Sum of 1/k for k in (lo, hi], computed term by term with compensation.
/// Term-by-term evaluation keeps ratios of such sums bit-stable, which the
/// density code relies on (a full set must score exactly 1).
double harmonic_between(std::uint64_t lo, std::uint64_t hi);

/// A nonnegative rational tracked exactly for argmax/argmin scans.
/// Comparisons cross-multiply in unsigned 128-bit, so counts and positions up
/// to 2^32 never lose a tie.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

  bool less_than(const Ratio& o) const {
    return static_cast<unsigned __int128>(num) * o.den < static_cast<unsigned __int128>(o.num) * den;
  }
};

std::vector<std::string> split_string(const std::string& s, char sep);

/// Parses a decimal unsigned integer, rejecting trailing junk.
std::uint64_t parse_u64(const std::string& s, const std::string& what);

/// Parses a double, rejecting trailing junk.
double parse_double(const std::string& s, const std::string& what);

}  // namespace idyn
