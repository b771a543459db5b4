#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "passthru/moments.hpp"
#include "passthru/rng.hpp"

using namespace passthru;

TEST_CASE("moment key parsing round-trips and canonicalizes") {
  for (const char* s : {"y^2", "y*y-2", "y^3*y-2", "y*y-2^3", "c*c-2", "y*c-2",
                        "y-2^2*c", "y*y+2*c+2", "y^2*c-2^2", "c^4"}) {
    REQUIRE(MomentKey::parse(s).str() == s);
  }
  // merging and reordering to canonical form
  REQUIRE(MomentKey::parse("y*y").str() == "y^2");
  REQUIRE(MomentKey::parse("y-2*y").str() == "y*y-2");
  REQUIRE(MomentKey::parse("c-2*y^2").str() == "y^2*c-2");
  REQUIRE(MomentKey::parse("c*y*y+2").str() == "y*y+2*c");
  REQUIRE(MomentKey::parse("y*y*y*y").str() == "y^4");
  REQUIRE(MomentKey::parse("y^2").total_power() == 2);
  REQUIRE(MomentKey::parse("y*y+2*c+2").total_power() == 3);
}

TEST_CASE("moment key validation rejects malformed descriptors") {
  REQUIRE_THROWS_AS(MomentKey::parse(""), error);
  REQUIRE_THROWS_AS(MomentKey::parse("x^2"), error);
  REQUIRE_THROWS_AS(MomentKey::parse("y^5"), error);
  REQUIRE_THROWS_AS(MomentKey::parse("y^3*c^2"), error);       // total power 5
  REQUIRE_THROWS_AS(MomentKey::parse("y+4"), error);           // bad lead
  REQUIRE_THROWS_AS(MomentKey::parse("y*"), error);
  REQUIRE_THROWS_AS(MomentKey::parse("y*c*y-2*c-2"), error);   // 4 distinct terms
}

TEST_CASE("target sets have the published sizes and contents") {
  auto names = [](Specification s) {
    std::vector<std::string> out;
    for (const auto& k : target_set(s)) out.push_back(k.str());
    return out;
  };
  REQUIRE(names(Specification::income_2nd) ==
          std::vector<std::string>{"y^2", "y*y-2"});
  REQUIRE(target_set(Specification::income_3rd).size() == 5);
  REQUIRE(target_set(Specification::income_4th).size() == 9);
  REQUIRE(target_set(Specification::cons_linear_2nd).size() == 4);
  REQUIRE(target_set(Specification::cons_linear_3rd).size() == 15);
  REQUIRE(target_set(Specification::cons_linear_4th).size() == 26);
  auto quad = names(Specification::cons_quadratic);
  REQUIRE(quad.size() == 10);
  REQUIRE(quad.back() == "y*y+2*c+2");

  // nesting: each order extends the previous
  auto is_prefix = [&](Specification lo, Specification hi) {
    auto a = names(lo), b = names(hi);
    return std::equal(a.begin(), a.end(), b.begin());
  };
  REQUIRE(is_prefix(Specification::income_2nd, Specification::income_3rd));
  REQUIRE(is_prefix(Specification::income_3rd, Specification::income_4th));
  REQUIRE(is_prefix(Specification::cons_linear_2nd, Specification::cons_linear_3rd));
  REQUIRE(is_prefix(Specification::cons_linear_3rd, Specification::cons_linear_4th));
  // every quadratic key is drawn from the linear 3rd-order list
  auto lin3 = names(Specification::cons_linear_3rd);
  for (const auto& q : quad)
    REQUIRE(std::find(lin3.begin(), lin3.end(), q) != lin3.end());
}

TEST_CASE("standardize matches its definition") {
  // central/variance^1.5: -0.008 / 0.033^1.5 = -1.33451...
  double sk = standardize(-0.008, 0.033, 3);
  REQUIRE(sk == Catch::Approx(-1.3345090) .epsilon(1e-6));
  REQUIRE(std::abs(sk - (-1.310)) < 0.05);  // printed value, within rounding
  REQUIRE(standardize(0.0, 0.7, 3) == 0.0);
  double s2 = 0.031;
  REQUIRE(standardize(3.0 * (s2 * s2), s2, 4) == 3.0);  // Gaussian, exact
  REQUIRE_THROWS_AS(standardize(0.1, 0.0, 3), error);
  REQUIRE_THROWS_AS(standardize(0.1, -1.0, 4), error);
  REQUIRE_THROWS_AS(standardize(0.1, 0.5, 2), error);
}

namespace {

ResidualPanel toy_panel() {
  // household A: waves 2000 (dy=.1, dc=.2), 2002 (dy=-.3, dc=.1),
  //              2004 (dy=.2, dc missing)
  // household B: waves 2000 (dy=.4, dc=-.1), 2004 (dy=.1, dc=.3)
  ResidualPanel rp;
  rp.households.push_back({"A",
                           {{2000, 0.1, 0.2}, {2002, -0.3, 0.1}, {2004, 0.2, std::nullopt}}});
  rp.households.push_back({"B", {{2000, 0.4, -0.1}, {2004, 0.1, 0.3}}});
  rp.canonicalize();
  return rp;
}

}  // namespace

TEST_CASE("toy panel moments equal exhaustive hand enumeration") {
  ResidualPanel rp = toy_panel();
  auto check = [&](const char* key, double want, long want_n) {
    auto [v, n] = empirical_moment(rp, MomentKey::parse(key));
    CAPTURE(key);
    REQUIRE(n == want_n);
    REQUIRE(v == Catch::Approx(want).margin(1e-15));
  };
  // y^2: (.01+.09+.04 | .16+.01)/5
  check("y^2", 0.062, 5);
  // y*y-2: anchors A2002 (-.3*.1), A2004 (.2*-.3); B has no adjacent pair
  check("y*y-2", (-0.03 - 0.06) / 2, 2);
  // y*c: A2000 .02, A2002 -.03, B2000 -.04, B2004 .03 (A2004 dc missing)
  check("y*c", -0.005, 4);
  // c^2: (.04+.01+.01+.09)/4
  check("c^2", 0.0375, 4);
  // y*c-2: A2002 (-.3*.2), A2004 (.2*.1)
  check("y*c-2", (-0.06 + 0.02) / 2, 2);
  // y*y+2*c-2: only A2002 (y=-.3, y+2=.2, c-2=.2)
  check("y*y+2*c-2", -0.012, 1);
  // y^4: (.0001+.0081+.0016+.0256+.0001)/5
  check("y^4", 0.0071, 5);
  // no cell supports a key needing c at +2 and -2 around an anchor
  auto [v, n] = empirical_moment(rp, MomentKey::parse("c-2*c+2"));
  REQUIRE(n == 0);
  REQUIRE(std::isnan(v));
}

TEST_CASE("all-zero residuals give zero moments with full cell counts") {
  ResidualPanel rp;
  for (int h = 0; h < 4; ++h) {
    HouseholdResiduals hr;
    hr.household_id = "h" + std::to_string(h);
    for (int w = 2000; w <= 2008; w += 2) hr.cells.push_back({w, 0.0, 0.0});
    rp.households.push_back(hr);
  }
  rp.canonicalize();
  auto [v2, n2] = empirical_moment(rp, MomentKey::parse("y^2"));
  REQUIRE(v2 == 0.0);
  REQUIRE(n2 == 20);
  auto [vx, nx] = empirical_moment(rp, MomentKey::parse("y*y+2*c-2"));
  REQUIRE(vx == 0.0);
  REQUIRE(nx == 12);  // anchors with both neighbors: 3 per household
}

namespace {

ResidualPanel random_balanced_panel(std::uint64_t seed, int n_households, int n_waves) {
  Rng r(seed);
  ResidualPanel rp;
  for (int h = 0; h < n_households; ++h) {
    HouseholdResiduals hr;
    hr.household_id = "h" + std::to_string(1000 + h);
    for (int k = 0; k < n_waves; ++k)
      hr.cells.push_back({2000 + 2 * k, r.normal(), 0.5 * r.normal() + 0.1});
    rp.households.push_back(hr);
  }
  rp.canonicalize();
  return rp;
}

// independent reference: naive double loop, plain summation
std::pair<double, long> naive_moment(const ResidualPanel& rp, const MomentKey& key) {
  long double sum = 0;
  long n = 0;
  for (const auto& h : rp.households) {
    for (const auto& anchor : h.cells) {
      long double prod = 1;
      bool ok = true;
      for (const auto& t : key.terms) {
        const ResidualCell* cell = nullptr;
        for (const auto& c : h.cells)
          if (c.wave == anchor.wave + t.lead) cell = &c;
        const std::optional<double>* v =
            cell ? (t.series == 'y' ? &cell->dy : &cell->dc) : nullptr;
        if (!v || !v->has_value()) {
          ok = false;
          break;
        }
        for (int p = 0; p < t.power; ++p) prod *= **v;
      }
      if (ok) {
        sum += prod;
        ++n;
      }
    }
  }
  return {n ? static_cast<double>(sum / n) : nan_v, n};
}

}  // namespace

TEST_CASE("balanced panel: every target moment equals the brute-force average") {
  ResidualPanel rp = random_balanced_panel(11, 60, 6);
  std::vector<MomentKey> keys = target_set(Specification::income_4th);
  for (const auto& k : target_set(Specification::cons_linear_4th)) keys.push_back(k);
  for (const auto& k : target_set(Specification::cons_quadratic)) keys.push_back(k);
  for (const auto& k : keys) {
    auto [v, n] = empirical_moment(rp, k);
    auto [vn, nn] = naive_moment(rp, k);
    CAPTURE(k.str());
    REQUIRE(n == nn);
    REQUIRE(v == Catch::Approx(vn).epsilon(1e-12).margin(1e-14));
  }
}

TEST_CASE("household permutation leaves moments bit-identical") {
  ResidualPanel rp = random_balanced_panel(5, 40, 5);
  ResidualPanel shuffled = rp;
  std::reverse(shuffled.households.begin(), shuffled.households.end());
  std::swap(shuffled.households[0], shuffled.households[7]);
  shuffled.canonicalize();
  for (const auto& k : target_set(Specification::cons_linear_4th)) {
    auto [a, na] = empirical_moment(rp, k);
    auto [b, nb] = empirical_moment(shuffled, k);
    REQUIRE(na == nb);
    REQUIRE(a == b);  // bit-identical
  }
}

TEST_CASE("forward and backward lead keys agree on the same panel") {
  ResidualPanel rp = random_balanced_panel(17, 50, 7);
  // drop some cells to exercise the unbalanced path
  rp.households[3].cells.erase(rp.households[3].cells.begin() + 2);
  rp.households[8].cells.erase(rp.households[8].cells.begin());
  auto v1 = empirical_moment(rp, MomentKey::parse("y*y+2"));
  auto v2 = empirical_moment(rp, MomentKey::parse("y*y-2"));
  REQUIRE(v1.second == v2.second);
  REQUIRE(v1.first == v2.first);  // same products, same order
  auto w1 = empirical_moment(rp, MomentKey::parse("y^2*c-2"));
  auto w2 = empirical_moment(rp, MomentKey::parse("y+2^2*c"));
  REQUIRE(w1.second == w2.second);
  REQUIRE(w1.first == w2.first);
}

TEST_CASE("cell floor drops thin moments and keeps the rest") {
  ResidualPanel rp = random_balanced_panel(3, 35, 2);  // 2 waves: no +2/-2 pairs beyond one
  auto keys = target_set(Specification::income_2nd);
  auto mc = empirical_moments(rp, keys, 36);
  // y^2 has 70 cells; y*y-2 has 35 -> dropped by the 36 floor
  REQUIRE(mc.kept.entries.size() == 1);
  REQUIRE(mc.kept.entries[0].key.str() == "y^2");
  REQUIRE(mc.dropped.size() == 1);
  REQUIRE(mc.dropped[0].first.str() == "y*y-2");
  REQUIRE(mc.dropped[0].second == 35);
}

TEST_CASE("cluster s.e. matches direct computation on a small panel") {
  ResidualPanel rp = random_balanced_panel(23, 30, 4);
  MomentKey k = MomentKey::parse("y^2");
  MomentStat st = empirical_moment_stat(rp, k);
  REQUIRE(st.n_cells == 120);
  // direct: households are independent; se^2 = sum (s_i - m n_i)^2 / N^2
  double total = 0;
  long N = 0;
  std::vector<std::pair<double, long>> hh;
  for (const auto& h : rp.households) {
    double s = 0;
    long n = 0;
    for (const auto& c : h.cells) {
      s += *c.dy * *c.dy;
      ++n;
    }
    hh.push_back({s, n});
    total += s;
    N += n;
  }
  double m = total / N, dev2 = 0;
  for (auto [s, n] : hh) dev2 += (s - m * n) * (s - m * n);
  REQUIRE(st.value == Catch::Approx(m).epsilon(1e-13));
  REQUIRE(st.cluster_se == Catch::Approx(std::sqrt(dev2) / N).epsilon(1e-12));
}

TEST_CASE("moments CSV round-trips exactly") {
  ResidualPanel rp = random_balanced_panel(31, 25, 5);
  auto mc = empirical_moments(rp, target_set(Specification::income_4th), 1);
  std::stringstream ss;
  write_moments_csv(mc.kept, ss);
  MomentVector back = read_moments_csv(ss);
  REQUIRE(back.entries.size() == mc.kept.entries.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    REQUIRE(back.entries[i].key == mc.kept.entries[i].key);
    REQUIRE(back.entries[i].value == mc.kept.entries[i].value);  // 17 digits round-trip
    REQUIRE(back.entries[i].n_cells == mc.kept.entries[i].n_cells);
  }
  REQUIRE_THROWS_AS(back.at("c^4"), error);
  REQUIRE(back.at("y^2") == mc.kept.entries[0].value);
}
