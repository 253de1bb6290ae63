#include "idyn/util.hpp"

#include <sstream>
#include <stdexcept>

namespace idyn {

double harmonic_between(std::uint64_t lo, std::uint64_t hi) {
  KahanSum s;
  for (std::uint64_t k = lo + 1; k <= hi; ++k) {
    s.add(1.0 / static_cast<double>(k));
  }
  return s.value();
}

std::vector<std::string> split_string(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument(what + ": empty integer");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument(what + ": bad integer '" + s + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument(what + ": empty number");
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad number '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument(what + ": bad number '" + s + "'");
  return v;
}

}  // namespace idyn
