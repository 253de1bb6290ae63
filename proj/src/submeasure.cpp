#include "idyn/submeasure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "idyn/util.hpp"

namespace idyn {

Submeasure Submeasure::counting() {
  Submeasure m(Kind::summable, "counting");
  m.weight_ = [](std::uint64_t) { return 1.0; };
  return m;
}

Submeasure Submeasure::summable_harmonic() {
  Submeasure m(Kind::summable, "summable:harmonic");
  m.weight_ = [](std::uint64_t n) { return 1.0 / static_cast<double>(n + 1); };
  return m;
}

Submeasure Submeasure::summable(std::vector<double> weights, std::string name) {
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("summable: negative weight");
  }
  Submeasure m(Kind::summable, std::move(name));
  KahanSum total;
  KahanSum three_quarters;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total.add(weights[i]);
    if (i < weights.size() * 3 / 4) three_quarters.add(weights[i]);
  }
  // Divergence is unprovable finitely; a near-flat tail is only a warning.
  if (!weights.empty() && total.value() - three_quarters.value() < 1e-9 * std::max(1.0, total.value())) {
    m.warnings_.push_back("weight series looks convergent at horizon");
  }
  auto vec = std::make_shared<std::vector<double>>(std::move(weights));
  m.weight_ = [vec](std::uint64_t n) { return n < vec->size() ? (*vec)[n] : 0.0; };
  return m;
}

Submeasure Submeasure::nu() { return Submeasure(Kind::nu, "nu"); }

Submeasure Submeasure::matrix(std::vector<std::vector<double>> rows, std::string name) {
  if (rows.empty()) throw std::invalid_argument("matrix: no rows");
  Submeasure m(Kind::matrix, std::move(name));
  for (const auto& row : rows) {
    KahanSum sum;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("matrix: negative entry");
      sum.add(v);
    }
    if (std::abs(sum.value() - 1.0) > 0.05) {
      m.warnings_.push_back("row sum " + std::to_string(sum.value()) + " outside [0.95,1.05]");
    }
  }
  m.rows_ = std::move(rows);
  return m;
}

Submeasure Submeasure::parse(const std::string& spec) {
  if (spec == "counting") return counting();
  if (spec == "nu") return nu();
  if (spec == "summable:harmonic") return summable_harmonic();
  if (spec.rfind("summable:file=", 0) == 0) {
    const std::string path = spec.substr(14);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("summable: cannot open '" + path + "'");
    std::vector<double> w;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) w.push_back(parse_double(line, "weight"));
    }
    return summable(std::move(w), spec);
  }
  if (spec.rfind("matrix:file=", 0) == 0) {
    const std::string path = spec.substr(12);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("matrix: cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    constexpr std::size_t kMaxRows = 64;  // the supremum is taken over the stored rows only
    while (std::getline(in, line) && rows.size() < kMaxRows) {
      if (line.empty()) continue;
      std::vector<double> row;
      for (const auto& tok : split_string(line, ',')) row.push_back(parse_double(tok, "matrix entry"));
      rows.push_back(std::move(row));
    }
    return matrix(std::move(rows), spec);
  }
  throw std::invalid_argument("unknown submeasure spec '" + spec + "'");
}

double Submeasure::phi_tail(const IntSet& s, std::uint64_t cutoff, bool strict_above) const {
  const std::uint64_t start = strict_above ? cutoff + 1 : 0;
  switch (kind_) {
    case Kind::summable: {
      KahanSum sum;
      for (std::uint64_t e = s.next_element(start); e < s.horizon(); e = s.next_element(e + 1)) {
        sum.add(weight_(e));
      }
      return sum.value();
    }
    case Kind::nu: {
      // sup over dyadic blocks [2^j, 2^{j+1}); the top block may be cut by the
      // horizon but keeps its dyadic denominator (phi of the truncated set).
      double best = 0.0;
      for (std::uint64_t lo = 1; lo < s.horizon(); lo <<= 1) {
        const std::uint64_t hi = std::min(lo << 1, s.horizon());
        const std::uint64_t from = std::max(lo, start);
        if (from >= hi) continue;
        const double ratio =
            static_cast<double>(s.count_range(from, hi)) / static_cast<double>(lo);
        best = std::max(best, ratio);
      }
      return best;
    }
    case Kind::matrix: {
      double best = 0.0;
      for (const auto& row : rows_) {
        KahanSum sum;
        const std::uint64_t stop = std::min<std::uint64_t>(row.size(), s.horizon());
        for (std::uint64_t e = s.next_element(start); e < stop; e = s.next_element(e + 1)) {
          sum.add(row[e]);
        }
        best = std::max(best, sum.value());
      }
      return best;
    }
  }
  return 0.0;
}

double Submeasure::phi_prefix(const IntSet& s, std::uint64_t m) const {
  switch (kind_) {
    case Kind::summable: {
      KahanSum sum;
      const std::uint64_t stop = std::min(m, s.horizon());
      for (std::uint64_t e = s.next_element(0); e < stop; e = s.next_element(e + 1)) sum.add(weight_(e));
      return sum.value();
    }
    case Kind::nu: {
      double best = 0.0;
      const std::uint64_t stop = std::min(m, s.horizon());
      for (std::uint64_t lo = 1; lo < stop; lo <<= 1) {
        const std::uint64_t hi = std::min(lo << 1, stop);
        best = std::max(best, static_cast<double>(s.count_range(lo, hi)) / static_cast<double>(lo));
      }
      return best;
    }
    case Kind::matrix: {
      double best = 0.0;
      const std::uint64_t stop = std::min(m, s.horizon());
      for (const auto& row : rows_) {
        KahanSum sum;
        const std::uint64_t rstop = std::min<std::uint64_t>(row.size(), stop);
        for (std::uint64_t e = s.next_element(0); e < rstop; e = s.next_element(e + 1)) sum.add(row[e]);
        best = std::max(best, sum.value());
      }
      return best;
    }
  }
  return 0.0;
}

ExhNormResult exh_norm(const Submeasure& m, const IntSet& s) {
  const std::uint64_t n2 = std::bit_floor(s.horizon());
  // The deepest cutoff leaves a tail spanning four dyadic blocks; a shorter
  // window would blank out block-structured sets on half of all horizons.
  const std::uint64_t tail_start = std::max<std::uint64_t>(1, n2 / 16);

  ExhNormResult out;
  for (std::uint64_t lo = 1;; lo <<= 1) {
    const std::uint64_t c = lo - 1;  // tail = [lo, horizon)
    out.decay.emplace_back(c, m.phi_above(s, c));
    if (lo >= tail_start) break;
  }
  out.value = out.decay.back().second;
  out.cutoff = out.decay.back().first;
  // Smallest scheduled cutoff already achieving the reported value.
  for (const auto& [c, v] : out.decay) {
    if (v <= out.value + 1e-12) {
      out.cutoff = c;
      break;
    }
  }
  return out;
}

MembershipVerdict membership_verdict(const Submeasure& m, Regime regime, const IntSet& s, double threshold) {
  if (threshold <= 0.0) throw std::invalid_argument("membership_verdict: threshold must be positive");
  MembershipVerdict v;
  v.horizon = s.horizon();
  if (regime == Regime::fin) {
    // phi on dyadic prefixes; membership in Fin(phi) needs a finite value,
    // witnessed by a stabilized prefix curve below the threshold.
    std::vector<double> curve;
    for (std::uint64_t p = 2;; p <<= 1) {
      const std::uint64_t stop = std::min(p, s.horizon());
      curve.push_back(m.phi_prefix(s, stop));
      if (stop == s.horizon()) break;
    }
    const double final = curve.back();
    v.witness = final;
    const std::size_t back = std::min(curve.size() - 1, std::max<std::size_t>(1, curve.size() / 4));
    const double growth = final - curve[curve.size() - 1 - back];
    const bool stabilized = growth <= 1e-9 * std::max(1.0, final) + 1e-12;
    if (final < threshold && stabilized) {
      v.status = VerdictStatus::member;
      v.detail = "phi stabilized below threshold";
    } else if (final >= threshold && !stabilized) {
      v.status = VerdictStatus::positive;
      v.detail = "phi past threshold and still growing";
    } else {
      v.status = VerdictStatus::undetermined;
      v.detail = "phi evidence inconclusive at horizon";
    }
    return v;
  }
  const ExhNormResult norm = exh_norm(m, s);
  v.witness = norm.value;
  const std::size_t q = std::max<std::size_t>(1, norm.decay.size() / 4);
  double lo = norm.decay.back().second, hi = lo;
  for (std::size_t i = norm.decay.size() - q; i < norm.decay.size(); ++i) {
    lo = std::min(lo, norm.decay[i].second);
    hi = std::max(hi, norm.decay[i].second);
  }
  const bool stable = (hi - lo) <= std::max(0.25 * norm.value, 1e-9);
  if (norm.value < threshold) {
    v.status = VerdictStatus::member;
    v.detail = "tail norm below threshold";
  } else if (stable) {
    v.status = VerdictStatus::positive;
    v.detail = "tail norm above threshold with stable tail";
  } else {
    v.status = VerdictStatus::undetermined;
    v.detail = "tail norm above threshold but still decaying";
  }
  return v;
}

std::optional<int> furstenberg_level(const Submeasure& m, const IntSet& s) {
  const double norm = exh_norm(m, s).value;
  if (norm <= 0.0) return std::nullopt;
  for (int i = 0; i <= 64; ++i) {
    if (norm > std::ldexp(1.0, -i)) return i;
  }
  return std::nullopt;
}

InvarianceReport invariance_check(const Submeasure& m, const std::vector<IntSet>& samples,
                                  const std::vector<std::uint64_t>& shifts) {
  if (samples.empty() || shifts.empty()) {
    throw std::invalid_argument("invariance_check: needs samples and shifts");
  }
  InvarianceReport rep;
  bool first = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double base = exh_norm(m, samples[i]).value;
    for (std::uint64_t k : shifts) {
      InvarianceReport::Entry e;
      e.sample = i;
      e.shift = k;
      e.base_norm = base;
      const IntSet shifted = affine_image(samples[i], 1, k, /*forward=*/false).set;
      e.shifted_norm = exh_norm(m, shifted).value;
      e.ratio = base > 0.0 ? e.shifted_norm / base : 0.0;
      rep.entries.push_back(e);
      if (base > 0.0) {
        if (first || e.ratio < rep.c_empirical) {
          rep.c_empirical = e.ratio;
          first = false;
        }
      }
    }
  }
  return rep;
}

const char* verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::member: return "member";
    case VerdictStatus::positive: return "positive";
    case VerdictStatus::undetermined: return "undetermined";
  }
  return "?";
}

std::string verdict_csv_row(const std::string& set_spec, const Submeasure& m, Regime regime,
                            const MembershipVerdict& v) {
  std::ostringstream os;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v.witness);
  os << set_spec << ',' << m.name() << ',' << (regime == Regime::fin ? "fin" : "exh") << ','
     << verdict_name(v.status) << ',' << buf << ',' << v.horizon;
  return os.str();
}

}  // namespace idyn
