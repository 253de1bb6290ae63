#include "idyn/suite.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "idyn/util.hpp"

namespace idyn {

namespace {

using CheckFn = CheckResult (*)(const SuiteConfig&);

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> reg = {
      {"ansari_decomposition", &check_ansari_decomposition},
      {"arithmetic_ideal", &check_arithmetic_ideal},
      {"difference_return", &check_difference_return},
      {"gap_properties", &check_gap_properties},
      {"null_orbit_transfer", &check_null_orbit_transfer},
      {"translation_embedding", &check_translation_embedding},
  };
  return reg;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n') c = ';';
  }
  return out;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

std::vector<std::string> registered_checks() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

void apply_config_entry(SuiteConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "horizon") {
    cfg.horizon = parse_u64(value, "horizon");
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, "seed");
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(parse_u64(value, "trials"));
  } else if (key == "threshold") {
    cfg.threshold = parse_double(value, "threshold");
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_u64(value, "workers"));
  } else if (key == "support_bound") {
    cfg.support_bound = parse_u64(value, "support_bound");
  } else if (key == "gap_target") {
    cfg.gap_target = parse_u64(value, "gap_target");
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  SuiteConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

SuiteReport run_suite(const SuiteConfig& cfg, const std::vector<std::string>& which,
                      const std::string& out_dir) {
  std::vector<std::string> names;
  if (which.size() == 1 && which[0] == "all") {
    names = registered_checks();
  } else {
    for (const auto& name : which) {
      if (registry().find(name) == registry().end()) {
        throw std::invalid_argument("unknown check '" + name + "'");
      }
      names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }

  SuiteReport report;
  report.results.resize(names.size());

  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(names.size())));
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= names.size()) break;
      report.results[i] = registry().at(names[i])(cfg);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : report.results) {
    if (r.status == CheckStatus::fail) report.exit_code = 1;
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    {
      std::ofstream csv(out_dir + "/results.csv", std::ios::binary);
      csv << "check,status,instances,violations,counterexample\n";
      for (const auto& r : report.results) {
        csv << r.check << ',' << status_name(r.status) << ',' << r.instances << ',' << r.violations << ','
            << sanitize(r.first_counterexample) << '\n';
      }
    }
    {
      std::ofstream sum(out_dir + "/summary.txt", std::ios::binary);
      sum << "suite: horizon=" << cfg.horizon << " seed=" << cfg.seed << " trials=" << cfg.trials
          << " workers=" << cfg.workers << '\n';
      for (const auto& r : report.results) {
        sum << r.check << ": " << status_name(r.status) << " (" << r.instances << " instances, "
            << r.violations << " violations)\n";
        sum << "  claim: " << r.statement << '\n';
        for (const auto& e : r.evidence) sum << "  evidence: " << e << '\n';
        for (const auto& w : r.warnings) sum << "  warning: " << w << '\n';
        if (!r.first_counterexample.empty()) {
          sum << "  counterexample: " << r.first_counterexample << '\n';
          sum << "  replay: ideal-dyn verify --suite " << r.check << " --horizon " << cfg.horizon
              << " --seed " << cfg.seed << '\n';
        }
      }
      sum << (report.exit_code == 0 ? "RESULT: ok\n" : "RESULT: violations found\n");
    }
  }
  return report;
}

}  // namespace idyn
