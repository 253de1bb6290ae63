#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idyn/analysis.hpp"
#include "idyn/dynsys.hpp"
#include "idyn/intset.hpp"

namespace idyn {

/// Knobs shared by every registered check. All randomness is derived from
/// `seed`, salted per check, so identical configs give identical output.
struct SuiteConfig {
  std::uint64_t horizon = std::uint64_t{1} << 17;
  std::uint64_t seed = 42;
  int trials = 20;
  double threshold = 0.01;
  int workers = 4;
  std::uint64_t support_bound = 64;  ///< largest allowed support for null-orbit witnesses
  std::uint64_t gap_target = 10;     ///< observed-gap goal for the gap checks
};

enum class CheckStatus { pass, fail, inconclusive };

/// Outcome of one registered check. fail <=> violations > 0; inconclusive is
/// reserved for failed precondition surrogates (typically: the horizon is too
/// small for the evidence the check needs).
struct CheckResult {
  std::string check;
  std::string statement;
  int instances = 0;
  int violations = 0;
  std::string first_counterexample;
  std::vector<std::string> evidence;
  std::vector<std::string> warnings;
  CheckStatus status = CheckStatus::pass;

  void note_violation(const std::string& counterexample) {
    ++violations;
    if (first_counterexample.empty()) first_counterexample = counterexample;
    status = CheckStatus::fail;
  }
};

// ---------------------------------------------------------------------------
// Per-instance operations (the drivers below sample instances over these).
// ---------------------------------------------------------------------------

/// Smallest k with sample + k inside `target_returns`, scanning all shifts
/// word-parallel; nullopt when no shift below the horizon works.
std::optional<std::uint64_t> find_embedding_shift(const IntSet& target_returns,
                                                  const std::vector<std::uint64_t>& sample);

/// Both sides of the power-decomposition identity
///   N_T(x,U) = union over i<k of (k * N_{T^k}(T^i x, U) + i)
/// computed over [0, floor(H/k)*k): the left side by a direct scan, the right
/// side through the strided return sets and the affine image machinery.
struct AnsariOutcome {
  bool equal = false;
  IntSet lhs, rhs;
};
AnsariOutcome ansari_decompose(const std::shared_ptr<const System>& sys, const Point& x, const Point& center,
                               double radius, int k, std::uint64_t horizon);

/// Null-orbit transfer on a shift group instance: given x and a target ball
/// V, picks z in (x xor V) with finite support, sets y = x xor z and checks
///   N(x, U0) \ [0, s) subset of N(y, U) exactly, U0 the half-radius ball.
/// When `periodic_pattern` is nonempty, x is taken to be the periodic word
/// with that pattern and (k*omega) \ [0,s) subset of N(y,U) is checked too.
struct TransferOutcome {
  bool applicable = true;        ///< false when no witness within the support bound
  bool containment_exact = false;
  bool periodic_checked = false;
  bool periodic_exact = false;
  std::uint64_t support = 0;
  bool syndetic_checked = false;    ///< the syndetic-intersection norm bound
  bool syndetic_bound_ok = false;
  double syndetic_best_norm = 0.0;
  std::string detail;
};
TransferOutcome null_orbit_transfer_cantor(const std::shared_ptr<const System>& sys, const Point& x,
                                           const Point& u_center, double u_radius, const Point& v_center,
                                           double v_radius, const std::string& periodic_pattern,
                                           std::uint64_t support_bound, std::uint64_t horizon);
TransferOutcome null_orbit_transfer_wshift(const std::shared_ptr<const System>& sys,
                                           const std::vector<double>& x, const std::vector<double>& u_center,
                                           double u_radius, const std::vector<double>& v_center,
                                           double v_radius, std::uint64_t horizon);

// ---------------------------------------------------------------------------
// Registered checks.
// ---------------------------------------------------------------------------

CheckResult check_translation_embedding(const SuiteConfig& cfg);
CheckResult check_gap_properties(const SuiteConfig& cfg);
CheckResult check_difference_return(const SuiteConfig& cfg);
CheckResult check_ansari_decomposition(const SuiteConfig& cfg);
CheckResult check_null_orbit_transfer(const SuiteConfig& cfg);
CheckResult check_arithmetic_ideal(const SuiteConfig& cfg);

}  // namespace idyn
