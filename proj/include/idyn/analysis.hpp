#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "idyn/density.hpp"
#include "idyn/dynsys.hpp"
#include "idyn/intset.hpp"
#include "idyn/submeasure.hpp"

namespace idyn {

/// Return set N(x, B(center, radius)) with attached density evidence.
struct ReturnSetReport {
  std::string system_spec;
  std::string point_desc;
  std::string center_desc;
  double radius = 0.0;
  std::uint64_t horizon = 0;
  IntSet returns;
  DensityEstimate d_upper, d_lower, bd_upper;
  GapProfile gaps;
};

/// Exact membership scan of the orbit against the open ball.
IntSet return_set_raw(const System& sys, const Orbit& orbit, const Point& center, double radius);

ReturnSetReport return_set(const std::shared_ptr<const System>& sys, const Point& x, const Point& center,
                           double radius, std::uint64_t horizon);

/// Deterministic sample of `count` points of the open ball; used by the
/// hitting-set under-approximation. Recorded grids make refinement
/// reproducible.
std::vector<Point> ball_grid(const System& sys, const Point& center, double radius, int count);

/// Under-approximation of N(U, V) = {n : T^n y in V for some y in U} by the
/// union of N(y_i, V) over a deterministic grid {y_i} in U. Only sound on the
/// subset side of containments.
IntSet hitting_set(const std::shared_ptr<const System>& sys, const Point& u_center, double u_radius,
                   const Point& v_center, double v_radius, int grid, std::uint64_t horizon,
                   std::vector<Point>* grid_out = nullptr);

/// Per-target cluster/limit evidence along the radius schedule r_k = r0*2^-k.
struct ClusterReport {
  std::string system_spec;
  std::string point_desc;
  std::string eta_desc;
  double r0 = 0.0;
  int schedule_length = 0;
  std::uint64_t horizon = 0;
  double threshold = 0.01;
  std::vector<double> radii;
  std::vector<double> norms;     ///< ||N(x, B(eta, r_k))||_phi, nonincreasing in k
  std::vector<IntSet> returns;   ///< kept only when requested (memory)
  double u_value = 0.0;          ///< last scheduled norm, no extrapolation
  bool is_cluster = false;       ///< norm at the fixed radius r0 >= threshold
  bool is_limit = false;         ///< u_value >= threshold
};

ClusterReport cluster_value(const std::shared_ptr<const System>& sys, const Point& x, const Point& eta,
                            double r0, int schedule_length, const Submeasure& m, std::uint64_t horizon,
                            double threshold = 0.01, bool keep_return_sets = false);

/// CSV rows per the cluster schema: system,point,eta,k,radius,norm
std::vector<std::string> cluster_csv_rows(const ClusterReport& report);

/// Greedy block extraction of an index set A with ||A||_phi >= u_value:
/// block k is drawn from the k-th scheduled return set past the previous
/// block, grown to a dyadic boundary until phi reaches u*(1 - 2^-k).
/// Throws std::runtime_error naming the failing block when the horizon
/// cannot supply the mass (evidence horizon too small); requires u_value > 0.
struct ExtractionResult {
  IntSet subsequence;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;  ///< [begin, end) per block
  double norm = 0.0;                                            ///< recomputed ||A||_phi
};

ExtractionResult extract_limit_subsequence(const ClusterReport& report, const Submeasure& m);

/// Orbit denseness surrogate: every cell of a 64-target grid is visited at
/// the grid resolution within the horizon. Stands in for universality, which
/// no finite run can certify.
bool dense_orbit_surrogate(const std::shared_ptr<const System>& sys, const Point& x, std::uint64_t horizon,
                           int grid = 64);

/// Evenly spread targets covering the space at the given count (circle
/// points, cylinder patterns); wshift is not a compact instance and has none.
std::vector<Point> space_grid(const System& sys, int count);

/// Four finite-horizon verdicts with evidence, one per notion.
struct ClassifyRecord {
  struct Item {
    std::string property;
    VerdictStatus status = VerdictStatus::undetermined;
    double witness = 0.0;
    std::string detail;
  };
  Item recurrent, strong_recurrent, universal, strong_universal;
  std::vector<double> target_norms;   ///< fixed-radius norm per target
  std::vector<double> target_u;       ///< u_value per target
  double threshold = 0.01;
  double radius = 0.0;                ///< grid resolution the verdicts were taken at
  std::size_t target_count = 0;
  std::uint64_t horizon = 0;
};

ClassifyRecord classify(const std::shared_ptr<const System>& sys, const Point& x, const Submeasure& m,
                        const std::vector<Point>& targets, double radius, std::uint64_t horizon,
                        double threshold = 0.01, int schedule_length = 9);

/// Finite inf-sup of return-set norms over pseudo-universal candidates:
/// min over the radius schedule of the max over candidates.
struct CParameterResult {
  double value = 0.0;
  std::vector<bool> candidate_passed;   ///< surrogate outcome per candidate
  std::vector<double> candidate_final_norms;
  int schedule_length = 0;
};

CParameterResult estimate_c_parameter(const std::shared_ptr<const System>& sys, const Point& eta,
                                      const Submeasure& m, const std::vector<Point>& candidates, double r0,
                                      int schedule_length, std::uint64_t horizon);

}  // namespace idyn
