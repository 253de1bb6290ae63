#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idyn/intset.hpp"

namespace idyn {

/// A lower semicontinuous submeasure evaluated exactly on truncated sets.
///
/// Kinds:
///   counting           phi(S) = |S|
///   summable(a_n)      phi(S) = sum of a_n over S
///   nu                 phi(S) = sup over dyadic blocks [2^j, 2^{j+1}) of count/2^j
///   matrix(rows)       phi(S) = max over stored rows of sum_{k in S} row[k]
class Submeasure {
 public:
  enum class Kind { summable, nu, matrix };

  static Submeasure counting();
  static Submeasure summable_harmonic();  // a_n = 1/(n+1)
  static Submeasure summable(std::vector<double> weights, std::string name);
  static Submeasure nu();
  static Submeasure matrix(std::vector<std::vector<double>> rows, std::string name);

  /// Spec strings: counting | summable:harmonic | summable:file=<path> |
  /// nu | matrix:file=<path> (CSV rows).
  static Submeasure parse(const std::string& spec);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// phi on the truncated set.
  double phi(const IntSet& s) const { return phi_tail(s, 0, false); }
  /// phi(S \ [0, cutoff]); pass include_all=false with cutoff 0 for phi(S\{0})…
  /// use phi() for the whole set.
  double phi_above(const IntSet& s, std::uint64_t cutoff) const { return phi_tail(s, cutoff, true); }
  /// phi of a prefix S ∩ [0, m).
  double phi_prefix(const IntSet& s, std::uint64_t m) const;

 private:
  Submeasure(Kind k, std::string name) : kind_(k), name_(std::move(name)) {}
  double phi_tail(const IntSet& s, std::uint64_t cutoff, bool strict_above) const;

  Kind kind_;
  std::string name_;
  std::function<double(std::uint64_t)> weight_;       // summable
  std::vector<std::vector<double>> rows_;             // matrix
  std::vector<std::string> warnings_;
};

/// Exhaustive norm ||S||_phi estimated as phi(S \ [0, c_max]) where the
/// cutoff schedule c = 2^j - 1 grows geometrically and stops at a sixteenth
/// of the dyadic horizon. Monotonicity makes the infimum over initial
/// segments attained at the largest cutoff; the cap keeps an evaluable tail
/// spanning several dyadic blocks. `cutoff` reports the smallest scheduled
/// cutoff already achieving the value; `decay` records the full schedule.
struct ExhNormResult {
  double value = 0.0;
  std::uint64_t cutoff = 0;
  std::vector<std::pair<std::uint64_t, double>> decay;
};

ExhNormResult exh_norm(const Submeasure& m, const IntSet& s);

enum class Regime { fin, exh };
enum class VerdictStatus { member, positive, undetermined };

/// Finite horizons cannot decide ideal membership; verdicts are three-valued
/// with the numeric evidence attached.
struct MembershipVerdict {
  VerdictStatus status = VerdictStatus::undetermined;
  double witness = 0.0;
  std::uint64_t horizon = 0;
  std::string detail;
};

MembershipVerdict membership_verdict(const Submeasure& m, Regime regime, const IntSet& s, double threshold);

/// Least i >= 0 with ||S||_phi > 2^-i (strict), or nullopt when the norm
/// vanishes at the horizon.
std::optional<int> furstenberg_level(const Submeasure& m, const IntSet& s);

/// Empirical strong-right-translation-invariance constant: the smallest
/// observed ||S-k||_phi / ||S||_phi over all (sample, shift) pairs with a
/// positive base norm.
struct InvarianceReport {
  struct Entry {
    std::size_t sample = 0;
    std::uint64_t shift = 0;
    double base_norm = 0.0;
    double shifted_norm = 0.0;
    double ratio = 0.0;
  };
  double c_empirical = 0.0;
  std::vector<Entry> entries;
};

InvarianceReport invariance_check(const Submeasure& m, const std::vector<IntSet>& samples,
                                  const std::vector<std::uint64_t>& shifts);

const char* verdict_name(VerdictStatus s);

/// CSV row per the verdict schema: set_spec,submeasure,regime,status,witness,horizon
std::string verdict_csv_row(const std::string& set_spec, const Submeasure& m, Regime regime,
                            const MembershipVerdict& v);

}  // namespace idyn
