#pragma once
// Cross-sectional moments of biennial income/consumption growth on unbalanced
// panels: symbolic moment keys, the per-specification target lists, empirical
// evaluation with pairwise deletion and stationarity pooling, standardized
// skewness/kurtosis views, and CSV serialization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "passthru/common.hpp"
#include "passthru/residual_panel.hpp"

namespace passthru {

// ------------------------------------------------------------------ keys

// One factor of a moment product: series value at wave t+lead raised to a
// power.  Key strings look like "y^2*y-2" (income growth squared times
// income growth lagged one wave) or "y*y+2*c+2".
struct MomentTerm {
  char series = 'y';  // 'y' income growth, 'c' consumption growth
  int lead = 0;       // years relative to the anchor wave: -2, 0, +2
  int power = 1;

  friend bool operator==(const MomentTerm&, const MomentTerm&) = default;
  friend auto operator<=>(const MomentTerm& a, const MomentTerm& b) {
    // y-terms before c-terms; within a series the anchor (lead 0) term comes
    // first, then lagged before led -- the order the moment lists are
    // conventionally written in
    return std::tuple(a.series == 'y' ? 0 : 1, a.lead == 0 ? 0 : 1, a.lead, a.power) <=>
           std::tuple(b.series == 'y' ? 0 : 1, b.lead == 0 ? 0 : 1, b.lead, b.power);
  }
};

struct MomentKey {
  std::vector<MomentTerm> terms;  // canonical: sorted, merged, validated

  static MomentKey parse(std::string_view text);
  std::string str() const;
  int total_power() const {
    int t = 0;
    for (const auto& m : terms) t += m.power;
    return t;
  }

  friend bool operator==(const MomentKey&, const MomentKey&) = default;
  friend auto operator<=>(const MomentKey& a, const MomentKey& b) {
    return a.terms <=> b.terms;
  }

  void canonicalize() {
    std::sort(terms.begin(), terms.end());
    std::vector<MomentTerm> merged;
    for (const auto& t : terms) {
      if (!merged.empty() && merged.back().series == t.series && merged.back().lead == t.lead)
        merged.back().power += t.power;
      else
        merged.push_back(t);
    }
    terms = std::move(merged);
    validate();
  }

  void validate() const {
    if (terms.empty()) throw error("moment key: empty");
    if (terms.size() > 3) throw error("moment key '" + str() + "': more than 3 distinct terms");
    if (total_power() > 4) throw error("moment key '" + str() + "': total power exceeds 4");
    for (const auto& t : terms) {
      if (t.series != 'y' && t.series != 'c')
        throw error("moment key: series must be y or c");
      if (t.lead != -2 && t.lead != 0 && t.lead != 2)
        throw error("moment key '" + str() + "': lead must be -2, 0, or +2");
      if (t.power < 1 || t.power > 4)
        throw error("moment key '" + str() + "': power must be in 1..4");
    }
  }
};

inline MomentKey MomentKey::parse(std::string_view text) {
  MomentKey key;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw error("cannot parse moment key '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    MomentTerm t;
    if (text[i] != 'y' && text[i] != 'c') fail("expected series y or c");
    t.series = text[i++];
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      int sign = text[i] == '+' ? 1 : -1;
      ++i;
      if (i >= text.size() || text[i] != '2') fail("lead must be +2 or -2");
      ++i;
      t.lead = 2 * sign;
    }
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i >= text.size() || text[i] < '1' || text[i] > '9') fail("bad power");
      t.power = text[i++] - '0';
    }
    key.terms.push_back(t);
    if (i < text.size()) {
      if (text[i] != '*') fail("expected '*' between terms");
      ++i;
      if (i == text.size()) fail("trailing '*'");
    }
  }
  key.canonicalize();
  return key;
}

inline std::string MomentKey::str() const {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += '*';
    out += terms[i].series;
    if (terms[i].lead > 0) out += "+2";
    if (terms[i].lead < 0) out += "-2";
    if (terms[i].power > 1) {
      out += '^';
      out += static_cast<char>('0' + terms[i].power);
    }
  }
  return out;
}

// --------------------------------------------------------------- vectors

struct MomentEntry {
  MomentKey key;
  double value = 0.0;
  long n_cells = 0;  // contributing (household, wave) cells; analytic => 0
};

struct MomentVector {
  std::vector<MomentEntry> entries;  // deterministic order (target-set order)

  const MomentEntry* find(const MomentKey& k) const {
    for (const auto& e : entries)
      if (e.key == k) return &e;
    return nullptr;
  }
  double at(std::string_view name) const {
    MomentKey k = MomentKey::parse(name);
    const MomentEntry* e = find(k);
    if (!e) throw error("moment vector is missing required key '" + std::string(name) + "'");
    return e->value;
  }
  bool has(std::string_view name) const { return find(MomentKey::parse(name)) != nullptr; }
};

// ------------------------------------------------------- specifications

enum class Specification {
  income_2nd,
  income_3rd,
  income_4th,
  cons_linear_2nd,
  cons_linear_3rd,
  cons_linear_4th,
  cons_quadratic,
};

inline std::string to_string(Specification s) {
  switch (s) {
    case Specification::income_2nd: return "income_2nd";
    case Specification::income_3rd: return "income_3rd";
    case Specification::income_4th: return "income_4th";
    case Specification::cons_linear_2nd: return "cons_linear_2nd";
    case Specification::cons_linear_3rd: return "cons_linear_3rd";
    case Specification::cons_linear_4th: return "cons_linear_4th";
    case Specification::cons_quadratic: return "cons_quadratic";
  }
  throw error("unknown specification");
}

inline Specification specification_from_string(std::string_view s) {
  if (s == "income_2nd") return Specification::income_2nd;
  if (s == "income_3rd") return Specification::income_3rd;
  if (s == "income_4th") return Specification::income_4th;
  if (s == "cons_linear_2nd") return Specification::cons_linear_2nd;
  if (s == "cons_linear_3rd") return Specification::cons_linear_3rd;
  if (s == "cons_linear_4th") return Specification::cons_linear_4th;
  if (s == "cons_quadratic") return Specification::cons_quadratic;
  throw error("unknown specification '" + std::string(s) + "'");
}

inline bool is_income_spec(Specification s) {
  return s == Specification::income_2nd || s == Specification::income_3rd ||
         s == Specification::income_4th;
}

// The targeted moment lists, in publication order.  Income: 2 keys at second
// order, +3 at third, +4 at fourth.  Consumption linear: 4 / 15 / 26 keys.
// Quadratic: 10 keys ending with y*y+2*c+2.
inline std::vector<MomentKey> target_set(Specification s) {
  static const std::vector<std::string> income = {
      "y^2", "y*y-2",                                    // 2nd
      "y^3", "y^2*y-2", "y*y-2^2",                       // 3rd
      "y^4", "y^2*y-2^2", "y^3*y-2", "y*y-2^3",          // 4th
  };
  static const std::vector<std::string> cons = {
      "c^2", "c*c-2", "y*c", "y*c-2",                    // 2nd (rows 1-4)
      "c^3", "c^2*c-2", "c*c-2^2", "y^2*c", "y*c^2",     // 3rd (rows 5-15)
      "y^2*c-2", "y*c-2^2", "y-2^2*c", "y*y+2*c", "y*y+2*c-2", "y*y+2*c+2",
      "c^4", "c^2*c-2^2", "c^3*c-2", "c*c-2^3",          // 4th (rows 16-26)
      "y^2*c^2", "y^3*c", "y*c^3", "y^2*c-2^2", "y-2^2*c^2", "y^3*c-2", "y*c-2^3",
  };
  static const std::vector<std::string> quad = {
      "c^2", "c*c-2", "y*c", "y*c-2", "y^2*c",
      "y^2*c-2", "y-2^2*c", "y*y+2*c", "y*y+2*c-2", "y*y+2*c+2",
  };
  auto take = [](const std::vector<std::string>& names, std::size_t n) {
    std::vector<MomentKey> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(MomentKey::parse(names[i]));
    return out;
  };
  switch (s) {
    case Specification::income_2nd: return take(income, 2);
    case Specification::income_3rd: return take(income, 5);
    case Specification::income_4th: return take(income, 9);
    case Specification::cons_linear_2nd: return take(cons, 4);
    case Specification::cons_linear_3rd: return take(cons, 15);
    case Specification::cons_linear_4th: return take(cons, 26);
    case Specification::cons_quadratic: return take(quad, 10);
  }
  throw error("unknown specification");
}

// -------------------------------------------------------- standardization

// Central 3rd/4th moment -> standardized skewness / kurtosis.
inline double standardize(double central, double variance, int order) {
  if (!(variance > 0.0)) throw error("standardize: variance must be positive");
  if (order == 3) return central / (variance * std::sqrt(variance));
  if (order == 4) return central / (variance * variance);
  throw error("standardize: order must be 3 or 4");
}

// ------------------------------------------------------------- empirical

struct MomentStat {
  double value = nan_v;
  long n_cells = 0;
  double cluster_se = nan_v;  // household-clustered s.e. of the mean
};

namespace detail {

inline const std::optional<double>& cell_value(const ResidualCell& c, char series) {
  return series == 'y' ? c.dy : c.dc;
}

// Evaluate one key over one household; appends (product, 1) contributions.
// Cells are sorted by wave, so lead lookups are binary searches.
template <typename F>
void for_each_cell_product(const HouseholdResiduals& h, const MomentKey& key, F&& emit) {
  const auto& cells = h.cells;
  auto find_wave = [&](int wave) -> const ResidualCell* {
    auto it = std::lower_bound(cells.begin(), cells.end(), wave,
                               [](const ResidualCell& c, int w) { return c.wave < w; });
    return (it != cells.end() && it->wave == wave) ? &*it : nullptr;
  };
  for (const auto& anchor : cells) {
    double prod = 1.0;
    bool ok = true;
    for (const auto& t : key.terms) {
      const ResidualCell* c = t.lead == 0 ? &anchor : find_wave(anchor.wave + t.lead);
      if (!c) {
        ok = false;
        break;
      }
      const auto& v = cell_value(*c, t.series);
      if (!v) {
        ok = false;
        break;
      }
      double x = *v;
      for (int p = 0; p < t.power; ++p) prod *= x;
    }
    if (ok) emit(prod);
  }
}

}  // namespace detail

// Mean over all (household, wave) cells where every term of the key is
// observed (pairwise deletion), pooled across waves.
inline std::pair<double, long> empirical_moment(const ResidualPanel& rp, const MomentKey& key) {
  key.validate();
  kahan sum;
  long n = 0;
  for (const auto& h : rp.households) {
    detail::for_each_cell_product(h, key, [&](double prod) {
      sum.add(prod);
      ++n;
    });
  }
  return {n ? sum.value() / n : nan_v, n};
}

// Same mean plus a household-clustered standard error: with s_i the household
// sum and n_i its cell count, se^2 = sum_i (s_i - mean*n_i)^2 / (sum_i n_i)^2.
inline MomentStat empirical_moment_stat(const ResidualPanel& rp, const MomentKey& key) {
  key.validate();
  kahan sum;
  long n = 0;
  std::vector<std::pair<double, long>> per_hh;
  per_hh.reserve(rp.households.size());
  for (const auto& h : rp.households) {
    kahan hsum;
    long hn = 0;
    detail::for_each_cell_product(h, key, [&](double prod) {
      hsum.add(prod);
      ++hn;
    });
    if (hn) per_hh.emplace_back(hsum.value(), hn);
    sum.add(hsum.value());
    n += hn;
  }
  MomentStat out;
  out.n_cells = n;
  if (!n) return out;
  out.value = sum.value() / n;
  kahan dev2;
  for (const auto& [s, hn] : per_hh) {
    double d = s - out.value * hn;
    dev2.add(d * d);
  }
  out.cluster_se = std::sqrt(dev2.value()) / n;
  return out;
}

struct MomentComputation {
  MomentVector kept;                                  // n_cells >= floor
  std::vector<std::pair<MomentKey, long>> dropped;    // key, deficient count
};

inline MomentComputation empirical_moments(const ResidualPanel& rp,
                                           const std::vector<MomentKey>& keys,
                                           long min_cells = 30) {
  MomentComputation out;
  for (const auto& k : keys) {
    auto [value, n] = empirical_moment(rp, k);
    if (n >= min_cells)
      out.kept.entries.push_back({k, value, n});
    else
      out.dropped.emplace_back(k, n);
  }
  return out;
}

// ------------------------------------------------------------------- CSV

inline void write_moments_csv(const MomentVector& m, std::ostream& os) {
  os << "key,value,n_cells\n";
  os.precision(17);
  for (const auto& e : m.entries) os << e.key.str() << ',' << e.value << ',' << e.n_cells << '\n';
}

inline MomentVector read_moments_csv(std::istream& is) {
  MomentVector m;
  std::string line;
  if (!std::getline(is, line)) throw error("moments CSV: empty file");
  // tolerate trailing \r from foreign line endings
  auto strip = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  strip(line);
  if (line != "key,value,n_cells") throw error("moments CSV: bad header '" + line + "'");
  while (std::getline(is, line)) {
    strip(line);
    if (line.empty()) continue;
    std::size_t a = line.find(','), b = line.rfind(',');
    if (a == std::string::npos || b == a) throw error("moments CSV: bad row '" + line + "'");
    MomentEntry e;
    e.key = MomentKey::parse(line.substr(0, a));
    e.value = std::stod(line.substr(a + 1, b - a - 1));
    e.n_cells = std::stol(line.substr(b + 1));
    m.entries.push_back(e);
  }
  return m;
}

}  // namespace passthru
