#include <cstdio>
#include <fstream>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idyn/analysis.hpp"
#include "idyn/density.hpp"
#include "idyn/dynsys.hpp"
#include "idyn/intset.hpp"
#include "idyn/submeasure.hpp"
#include "idyn/suite.hpp"
#include "idyn/util.hpp"

namespace {

int run_density(const std::string& set_spec, const std::string& kind, std::uint64_t horizon) {
  const idyn::IntSet s = idyn::IntSet::build(set_spec, horizon);
  std::vector<idyn::DensityEstimate> rows;
  if (kind == "upper_asymptotic" || kind == "all") rows.push_back(idyn::asymptotic(s, idyn::Side::upper));
  if (kind == "lower_asymptotic" || kind == "all") rows.push_back(idyn::asymptotic(s, idyn::Side::lower));
  if (kind == "upper_banach" || kind == "all") rows.push_back(idyn::banach(s, idyn::Side::upper));
  if (kind == "lower_banach" || kind == "all") rows.push_back(idyn::banach(s, idyn::Side::lower));
  if (kind == "upper_logarithmic" || kind == "all") rows.push_back(idyn::logarithmic_upper(s));
  if (rows.empty()) {
    std::cerr << "unknown density kind '" << kind << "'\n";
    return 2;
  }
  std::cout << "set_spec,kind,horizon,value,window_min,window_max\n";
  for (const auto& e : rows) std::cout << idyn::density_csv_row(set_spec, e) << '\n';
  return 0;
}

int run_returnset(const std::string& system, const std::string& point, const std::string& center,
                  double radius, std::uint64_t horizon) {
  auto sys = idyn::make_system(system);
  sys->set_horizon_hint(horizon);
  const idyn::Point x = sys->parse_point(point);
  const idyn::Point c = sys->parse_point(center);
  const idyn::ReturnSetReport rep = idyn::return_set(sys, x, c, radius, horizon);
  std::cout << "system,point,center,radius,horizon,card,dstar,bdstar,maxgap\n";
  char rbuf[32], dbuf[32], bbuf[32];
  std::snprintf(rbuf, sizeof(rbuf), "%.6g", radius);
  std::snprintf(dbuf, sizeof(dbuf), "%.12g", rep.d_upper.value);
  std::snprintf(bbuf, sizeof(bbuf), "%.12g", rep.bd_upper.value);
  std::cout << system << ',' << point << ',' << center << ',' << rbuf << ',' << rep.horizon << ','
            << rep.returns.cardinality() << ',' << dbuf << ',' << bbuf << ',' << rep.gaps.max_gap << '\n';
  return 0;
}

int run_classify(const std::string& system, const std::string& point, const std::string& ideal,
                 double radius, std::uint64_t horizon, int targets, const std::string& cluster_out) {
  auto sys = idyn::make_system(system);
  sys->set_horizon_hint(horizon);
  const idyn::Point x = sys->parse_point(point);
  const idyn::Submeasure m = idyn::Submeasure::parse(ideal);
  const auto grid = idyn::space_grid(*sys, targets);
  const idyn::ClassifyRecord rec = idyn::classify(sys, x, m, grid, radius, horizon);
  std::cout << "system,point,ideal,property,status,witness\n";
  for (const auto* item : {&rec.recurrent, &rec.strong_recurrent, &rec.universal, &rec.strong_universal}) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", item->witness);
    std::cout << system << ',' << point << ',' << ideal << ',' << item->property << ','
              << idyn::verdict_name(item->status) << ',' << buf << '\n';
  }
  if (!cluster_out.empty()) {
    std::ofstream out(cluster_out, std::ios::binary);
    out << "system,point,eta,k,radius,norm\n";
    for (const idyn::Point& eta : grid) {
      const idyn::ClusterReport rep = idyn::cluster_value(sys, x, eta, radius, 9, m, horizon);
      for (const auto& row : idyn::cluster_csv_rows(rep)) out << row << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational dynamics over ideals on the nonnegative integers"};
  app.require_subcommand(1);

  // density
  auto* density = app.add_subcommand("density", "density estimates of an integer set");
  std::string set_spec, kind = "all";
  std::uint64_t horizon = 1u << 20;
  density->add_option("--set", set_spec, "set spec (ap:k,h | list:... | intervals:a-b;... | blocks:pow4 | squares | random:p,seed | file:path)")->required();
  density->add_option("--kind", kind, "upper_asymptotic|lower_asymptotic|upper_banach|lower_banach|upper_logarithmic|all");
  density->add_option("--horizon", horizon, "finite horizon");

  // returnset
  auto* returnset = app.add_subcommand("returnset", "return set of an orbit into a ball");
  std::string system, point, center;
  double radius = 0.05;
  std::uint64_t rs_horizon = 1u << 20;
  returnset->add_option("--system", system, "rotation:<alpha> | doubling | cantor:<depth> | wshift:<d>,<w1>,...")->required();
  returnset->add_option("--point", point, "base point literal")->required();
  returnset->add_option("--center", center, "ball center literal")->required();
  returnset->add_option("--radius", radius, "ball radius");
  returnset->add_option("--horizon", rs_horizon, "finite horizon");

  // classify
  auto* classify = app.add_subcommand("classify", "recurrence/universality verdicts");
  std::string cl_system, cl_point, ideal = "nu", cluster_out;
  double cl_radius = 0.05;
  std::uint64_t cl_horizon = 1u << 20;
  int targets = 16;
  classify->add_option("--system", cl_system)->required();
  classify->add_option("--point", cl_point)->required();
  classify->add_option("--ideal", ideal, "counting | summable:harmonic | summable:file=... | nu | matrix:file=...");
  classify->add_option("--radius", cl_radius);
  classify->add_option("--horizon", cl_horizon);
  classify->add_option("--targets", targets, "target grid size");
  classify->add_option("--cluster-out", cluster_out, "also write per-target cluster rows to this CSV");

  // verify
  auto* verify = app.add_subcommand("verify", "run the property-check suite");
  std::string suite = "all", out_dir = "verify-out", config_path;
  idyn::SuiteConfig cfg;
  bool horizon_set = false, seed_set = false, trials_set = false, workers_set = false;
  std::uint64_t v_horizon = 0, v_seed = 0;
  int v_trials = 0, v_workers = 0;
  verify->add_option("--suite", suite, "all or comma-separated check names");
  verify->add_option("--horizon", v_horizon)->each([&](const std::string&) { horizon_set = true; });
  verify->add_option("--seed", v_seed)->each([&](const std::string&) { seed_set = true; });
  verify->add_option("--trials", v_trials)->each([&](const std::string&) { trials_set = true; });
  verify->add_option("--workers", v_workers)->each([&](const std::string&) { workers_set = true; });
  verify->add_option("--out", out_dir, "output directory for results.csv and summary.txt");
  verify->add_option("--config", config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (density->parsed()) return run_density(set_spec, kind, horizon);
    if (returnset->parsed()) return run_returnset(system, point, center, radius, rs_horizon);
    if (classify->parsed()) return run_classify(cl_system, cl_point, ideal, cl_radius, cl_horizon, targets, cluster_out);
    if (verify->parsed()) {
      if (!config_path.empty()) cfg = idyn::load_config(config_path);
      if (horizon_set) cfg.horizon = v_horizon;
      if (seed_set) cfg.seed = v_seed;
      if (trials_set) cfg.trials = v_trials;
      if (workers_set) cfg.workers = v_workers;
      const auto which = idyn::split_string(suite, ',');
      const idyn::SuiteReport rep = idyn::run_suite(cfg, which, out_dir);
      for (const auto& r : rep.results) {
        std::cout << r.check << ": "
                  << (r.status == idyn::CheckStatus::pass
                          ? "pass"
                          : (r.status == idyn::CheckStatus::fail ? "FAIL" : "inconclusive"))
                  << " (" << r.instances << " instances, " << r.violations << " violations)\n";
      }
      return rep.exit_code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
