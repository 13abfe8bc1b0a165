#include "orbitlab/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "orbitlab/algebra.hpp"
#include "orbitlab/flatgeo.hpp"
#include "orbitlab/orbit.hpp"
#include "orbitlab/warped.hpp"

namespace orbitlab {

namespace {

std::vector<Rational> rationals(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

std::string str(const Rational& r) { return to_string(r); }
std::string str(double r) { return nlohmann::json(r).dump(); }

// Z^2 orbit counts against a direct double loop over the square of side 2r.
void stage_orbit_counts(Report& rep, const SuiteOptions& opt) {
  const auto deck = bundled_deck("Z^2");
  const Point origin{{0, 0}};
  const long r_max = opt.quick ? 20 : 50;
  for (long r = 1; r <= r_max; ++r) {
    std::size_t brute = 0;
    for (long a = -r; a <= r; ++a)
      for (long b = -r; b <= r; ++b)
        if (a * a + b * b <= r * r) ++brute;
    const std::size_t count = orbit_ball_count(deck, origin, r);
    rep.check("orbit-count", "Z^2", std::to_string(r), "count", count, count == brute);
  }
}

void stage_milnor(Report& rep, const SuiteOptions& opt) {
  const int r = opt.quick ? 10 : 20;
  for (const char* name : {"Z^2", "Z^3", "moebius2", "klein2"}) {
    const auto deck = bundled_deck(name);
    const auto m = milnor_containment(deck.generated(), bundled_base_point(name), r);
    rep.check("milnor", name, std::to_string(r), "violations", m.violations.size(), m.holds);
    rep.add({"milnor", name, std::to_string(r), "checked", m.checked, std::nullopt, std::nullopt});
  }
}

void stage_verify_dual(Report& rep, const SuiteOptions& opt) {
  const auto radii = opt.quick ? rationals({1, 2, 4}) : rationals({1, 2, 4, 8, 16});
  for (const char* name : {"torus2", "cylinder2", "moebius2", "klein2", "moebiusxT"}) {
    const auto q = FlatQuotient::bundled(name);
    for (const auto& row : verify_dual(q, radii, opt.samples, opt.seed)) {
      rep.add({"verify-dual", name, str(row.radius), "volume", row.quotient_volume.value,
               row.quotient_volume.std_error, std::nullopt});
      rep.check("verify-dual", name, str(row.radius), "#D(2r)*Vol(B_r) >= Vol(cover B_r)", row.lhs_lower.value,
                row.lower_holds, row.lhs_lower.std_error);
      rep.check("verify-dual", name, str(row.radius), "#D(r)*Vol(B_r) <= Vol(cover B_2r)", row.lhs_upper.value,
                row.upper_holds, row.lhs_upper.std_error);
    }
  }
  const auto cyl = FlatQuotient::bundled("cylinder2");
  const Estimate v = ball_volume(cyl, cyl.base(), 1, VolumeMethod::MonteCarlo, opt.samples, opt.seed);
  const double exact = std::sqrt(3.0) / 2 + std::numbers::pi / 3;
  rep.check("verify-dual", "cylinder2", "1", "Vol(B_1) vs sqrt(3)/2+pi/3", v.value,
            std::abs(v.value - exact) <= kGuardSigmas * v.std_error, v.std_error);
}

void stage_index(Report& rep, const SuiteOptions&) {
  const auto radii = rationals({1, 2, 4, 8});
  for (const char* name : {"klein2", "moebius2"}) {
    const auto deck = bundled_deck(name);
    const auto cmp = lattice_index_comparison(deck, bundled_base_point(name), radii);
    for (const auto& row : cmp.rows) {
      rep.check("index-bound", name, str(row.radius), "#D^H(r) <= l*#D^K(r+r0)",
                nlohmann::json{{"big", row.count_big}, {"small", row.count_small}, {"index", cmp.index}},
                row.bound_holds);
    }
  }
}

void stage_thin_set(Report& rep, const SuiteOptions& opt) {
  const auto q = FlatQuotient::bundled("cylinder2");
  const Point p = q.base();
  const auto radii = opt.quick ? rationals({4, 8, 16}) : rationals({4, 8, 16, 32});
  std::vector<double> per_r;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const Estimate v = thin_set_volume(q, p, radii[i], 1, opt.samples, mix_seed(opt.seed, i));
    const double rd = radii[i].get_d();
    per_r.push_back(v.value / rd);
    rep.add({"thin-set", "cylinder2", str(radii[i]), "Vol(W_r^1)/r", v.value / rd, v.std_error / rd, std::nullopt});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < per_r.size(); ++i) decreasing = decreasing && per_r[i] < per_r[i - 1];
  rep.check("thin-set", "cylinder2", "", "Vol(W_r^1)/r strictly decreasing", per_r, decreasing);
  rep.check("thin-set", "cylinder2", "", "last < first/2", per_r.back() / per_r.front(),
            per_r.back() < per_r.front() / 2);

  // Extension bound on the unit-circumference cylinder: sqrt(t^2+s^2)(1/(2s)-1), 0 < s <= 1/2.
  std::mt19937_64 rng(mix_seed(opt.seed, 101));
  std::size_t agree = 0;
  const std::size_t trials = 100;
  for (std::size_t k = 0; k < trials; ++k) {
    const Rational t(static_cast<long>(rng() % 131) - 65, 13);
    const Rational s(static_cast<long>(rng() % 48) + 1, 97);
    const auto rep_x = extension_bound(q, p, Point{{t, s}});
    if (rep_x.bound.equals(1 / (2 * s) - 1, t * t + s * s)) ++agree;
  }
  rep.check("thin-set", "cylinder2", "", "extension closed form (exact)", agree, agree == trials);
}

void stage_growth(Report& rep, const SuiteOptions& opt) {
  const auto radii = opt.quick ? rationals({4, 8, 16}) : rationals({4, 8, 16, 32, 64});
  for (const char* name : {"cylinder2", "moebius2", "torus2", "moebiusxT"}) {
    const auto deck = bundled_deck(name);
    const auto series = orbit_growth(deck, bundled_base_point(name), radii);
    const auto soul = soul_dimension(deck);
    rep.check("growth", name, "", "exponent vs soul dimension " + std::to_string(soul), series.fit.exponent,
              std::abs(series.fit.exponent - static_cast<double>(soul)) <= 0.15);
  }
}

Isometry iso(std::vector<long> diag, std::vector<Rational> v) {
  Vec d;
  for (long x : diag) d.emplace_back(x);
  return Isometry(Matrix::diagonal(d), std::move(v));
}

Isometry conjugate_by_translation(const Isometry& g, const Vec& tau) {
  const auto t = Isometry::translation(tau);
  return t * g * inverse(t);
}

void stage_classify(Report& rep, const SuiteOptions& opt) {
  struct Case {
    std::string name;
    std::size_t n;
    std::vector<Isometry> gens;
    FlatKind expect;
  };
  const std::vector<Case> cases = {
      {"cylinder", 2, {Isometry::translation({0, 1})}, FlatKind::Product},
      {"moebius", 2, {iso({1, -1}, {1, 0})}, FlatKind::Moebius},
      {"two-reflection", 3, {iso({1, 1, -1}, {1, 0, 0}), iso({1, 1, -1}, {0, 1, 0})}, FlatKind::Moebius},
  };
  const auto verdict_ok = [](const Classification& c, FlatKind expect) {
    if (c.kind != expect) return false;
    std::size_t reflecting = 0;
    for (bool b : c.reflecting) reflecting += b ? 1 : 0;
    return expect == FlatKind::Product ? reflecting == 0 : reflecting == 1;
  };
  for (const auto& c : cases) {
    const auto cl = classify_flat(c.n, c.gens);
    rep.check("classify", c.name, "", "kind", to_string(cl.kind), verdict_ok(cl, c.expect));
  }
  std::mt19937_64 rng(mix_seed(opt.seed, 202));
  std::size_t ok = 0;
  const std::size_t trials = 20;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto& c = cases[k % cases.size()];
    auto gens = c.gens;
    std::shuffle(gens.begin(), gens.end(), rng);
    Vec tau;
    for (std::size_t i = 0; i < c.n; ++i) tau.emplace_back(static_cast<long>(rng() % 41) - 20, 7);
    for (auto& g : gens) g = conjugate_by_translation(g, tau);
    if (verdict_ok(classify_flat(c.n, gens), c.expect)) ++ok;
  }
  rep.check("classify", "", "", "randomized permutation/conjugation trials", ok, ok == trials);
}

void stage_warped(Report& rep, const SuiteOptions& opt) {
  warped::Options wopt;
  const std::vector<double> cs = opt.quick ? std::vector<double>{1, 2} : std::vector<double>{1, 2, 4};
  const double r_small = opt.quick ? 4 : 8;
  const double r_big = opt.quick ? 16 : 64;
  const auto rows = warped::counterexample_ratios(cs, {r_small, r_big}, wopt);
  for (const auto& row : rows) {
    rep.add({"warped", "N", str(row.r), "ratio c=" + str(row.c), row.ratio, std::nullopt, std::nullopt});
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double a = rows[2 * i].ratio;
    const double b = rows[2 * i + 1].ratio;
    rep.check("warped", "N", "", "ratio(c," + str(r_big) + ") < ratio(c," + str(r_small) + ")/2, c=" + str(cs[i]),
              b / a, b < a / 2);
  }
  const std::vector<double> dual_radii = opt.quick ? std::vector<double>{2, 4} : std::vector<double>{2, 4, 8, 16};
  for (const auto& row : warped::verify_dual(dual_radii, wopt)) {
    rep.check("warped", "N", str(row.radius), "#D(2r)*Vol(B_r) >= Vol(cover B_r)",
              static_cast<double>(row.count_2r) * row.volume_n.value, row.lower_holds);
    rep.check("warped", "N", str(row.radius), "#D(r)*Vol(B_r) <= Vol(cover B_2r)",
              static_cast<double>(row.count_r) * row.volume_n.value, row.upper_holds);
  }
  const double target = 4 * std::sqrt(std::numbers::pi);
  for (long k : opt.quick ? std::vector<long>{16} : std::vector<long>{16, 32}) {
    const auto d = warped::deck_orbit_distance(k, wopt);
    const double ratio = d.value / std::sqrt(static_cast<double>(k));
    rep.check("warped", "cover", "", "d(" + std::to_string(k) + ")/sqrt(k) within 10% of 4 sqrt(pi)", ratio,
              std::abs(ratio - target) <= 0.1 * target);
  }
}

void stage_algebra(Report& rep, const SuiteOptions& opt) {
  std::mt19937_64 rng(mix_seed(opt.seed, 303));
  const std::size_t trials = opt.quick ? 50 : 200;
  std::size_t ok = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const std::size_t rows = 1 + rng() % 8;
    const std::size_t cols = 1 + rng() % 8;
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rng() % 101) - 50;
    const auto s = smith_normal_form(m);
    bool good = s.u * m * s.v == s.d && s.d.is_diagonal() && abs(determinant(s.u)) == 1 &&
                abs(determinant(s.v)) == 1;
    const auto inv = s.invariants();
    for (std::size_t i = 0; i < inv.size(); ++i) {
      good = good && inv[i] > 0 && s.d(i, i) == inv[i];
      if (i + 1 < inv.size()) good = good && mpz_divisible_p(inv[i + 1].get_mpz_t(), inv[i].get_mpz_t());
    }
    good = good && inv.size() == rank_over_q(m);
    if (good) ++ok;
  }
  rep.check("algebra", "", "", "SNF identities on random matrices", ok, ok == trials);

  const auto heis = heisenberg_group();
  const HeisenbergElement x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
  const AbelianPresentation z2{2, IntegerMatrix(0, 2)};
  const int r_max = opt.quick ? 6 : 8;
  for (int r = 0; r <= r_max; ++r) {
    const auto h = hurewicz_ball_injection<HeisenbergElement>(heis, {x, y}, {{1, 0}, {0, 1}}, z2,
                                                              heisenberg_abelianization, r);
    const std::size_t bound = static_cast<std::size_t>(2 * r * r + 2 * r + 1);
    rep.check("algebra", "heisenberg", std::to_string(r), "#W(r) >= 2r^2+2r+1", h.group_ball,
              h.group_ball >= bound && h.injective && h.section_holds);
  }
  std::vector<Rational> radii;
  std::vector<double> counts;
  const int r_top = opt.quick ? 8 : 12;
  const auto ball = word_ball(heis, r_top);
  for (int r = 4; r <= r_top; r += 2) {
    radii.emplace_back(r);
    counts.push_back(static_cast<double>(ball.ball_count(r)));
  }
  const auto fit = growth_exponent(radii, counts).fit;
  rep.check("algebra", "heisenberg", "", "word growth exponent in [3.5, 4.5]", fit.exponent,
            fit.exponent >= 3.5 && fit.exponent <= 4.5);
  const auto poly = polycyclic_injection(HeisenbergElement{}, std::vector<HeisenbergElement>{x, y, z}, 3);
  rep.check("algebra", "heisenberg", "3", "polycyclic injection on [-3,3]^3", poly.points, poly.injective);
}

}  // namespace

Report paper_suite(const SuiteOptions& options) {
  SuiteOptions opt = options;
  if (opt.samples == 0) opt.samples = opt.quick ? 20'000 : 200'000;
  Report rep("paper-suite", {{"seed", opt.seed}, {"quick", opt.quick}, {"samples", opt.samples}});
  const std::vector<std::pair<const char*, std::function<void(Report&, const SuiteOptions&)>>> stages = {
      {"orbit-count", stage_orbit_counts}, {"milnor", stage_milnor},   {"verify-dual", stage_verify_dual},
      {"index-bound", stage_index},        {"thin-set", stage_thin_set}, {"growth", stage_growth},
      {"classify", stage_classify},        {"warped", stage_warped},   {"algebra", stage_algebra},
  };
  for (const auto& [name, run] : stages) {
    StageRecord rec;
    rec.name = name;
    const auto start = std::chrono::steady_clock::now();
    const std::size_t before = rep.rows().size();
    try {
      run(rep, opt);
      for (std::size_t i = before; i < rep.rows().size(); ++i)
        if (rep.rows()[i].verdict && !*rep.rows()[i].verdict) rec.status = "fail";
    } catch (const std::exception& e) {
      rec.status = "error";
      rec.error = e.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.add_stage(std::move(rec));
  }
  return rep;
}

}  // namespace orbitlab
