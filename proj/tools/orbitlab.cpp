#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "orbitlab/algebra.hpp"
#include "orbitlab/flatgeo.hpp"
#include "orbitlab/orbit.hpp"
#include "orbitlab/report.hpp"
#include "orbitlab/suite.hpp"
#include "orbitlab/warped.hpp"

using namespace orbitlab;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kVerdictFailure = 1, kUsage = 2, kResource = 3 };

struct Globals {
  std::string format = "json";
  std::string output;
  bool timings = false;
  std::size_t cap = kDefaultElementCap;
};

std::size_t cap_from_env() {
  if (const char* env = std::getenv("ORBITLAB_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ParseError(std::string("ORBITLAB_CAP is not a count: ") + env);
    }
  }
  return kDefaultElementCap;
}

std::vector<Rational> parse_radii(const std::vector<std::string>& items) {
  std::vector<Rational> out;
  for (const auto& s : items) out.push_back(parse_rational(s));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] <= 0) throw PreconditionError("radii must be positive");
    if (i > 0 && out[i] <= out[i - 1]) throw PreconditionError("radii must be strictly increasing");
  }
  if (out.empty()) throw PreconditionError("no radii given");
  return out;
}

std::vector<double> as_doubles(const std::vector<Rational>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(x.get_d());
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Point point_or_base(const std::string& text, std::string_view space) {
  if (text.empty()) return bundled_base_point(space);
  Point p = parse_point(text);
  if (p.dimension() != bundled_deck(space).dimension()) throw DimensionMismatch("point dimension does not match the space");
  return p;
}

warped::Grid parse_grid(const std::string& text) {
  const Point p = parse_point(text);
  if (p.dimension() != 2) throw ParseError("grid must be dr,ds");
  return {p.coords[0].get_d(), p.coords[1].get_d()};
}

warped::Coord parse_coord(const std::string& text) {
  const Point p = parse_point(text);
  if (p.dimension() != 2) throw ParseError("warped coordinates must be r,s");
  return {p.coords[0].get_d(), p.coords[1].get_d()};
}

std::string str(const Rational& q) { return to_string(q); }
std::string str(double x) { return json(x).dump(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitlab: orbit growth, covering volumes and rank computations on flat quotients"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  // thin-set takes --h, so help is long-form only
  app.set_help_flag("--help", "print this help message and exit");
  app.set_config("--config", "", "key=value defaults file");
  Globals g;
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "write the report here instead of stdout");
  app.add_flag("--timings", g.timings, "include wall-clock seconds per stage");
  std::optional<std::size_t> cap_flag;
  app.add_option("--cap", cap_flag, "element cap (default 10^7, or ORBITLAB_CAP)");

  std::function<Report()> run;
  std::function<std::string(const Report&)> csv_projection;

  // Shared option storage.
  std::string group = "Z^2", space = "torus2", point, matrix_path, presentation_path, elements_path, gens_path;
  std::vector<std::string> radii_text, cs_text;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 200'000;
  int radius = 4, dim = 2;
  long box = 3;
  std::string h_text = "1", grid_text = "0.1,0.1", from_text = "0,0", to_text, warped_space = "N", tol_text = "0";
  bool squared = false, quick = false;

  auto* orbit_count = app.add_subcommand("orbit-count", "#D(x, r) for a bundled deck group");
  orbit_count->add_option("--group", group)->required();
  orbit_count->add_option("--point", point, "comma-separated rationals; default: the space's base point");
  orbit_count->add_option("--radii", radii_text)->delimiter(',')->required();
  orbit_count->callback([&] {
    run = [&] {
      const auto deck = bundled_deck(group);
      const Point x = point_or_base(point, group);
      const auto radii = parse_radii(radii_text);
      Report rep("orbit-count", {{"group", group}, {"point", to_string(x)}, {"radii", radii_text}});
      std::vector<Rational> seen_r;
      std::vector<double> seen_c;
      json rows = json::array();
      for (const auto& r : radii) {
        const auto n = deck_enumerate_orbit(deck, x, Radius::exact(r), g.cap).size();
        rep.add({"", group, str(r), "count", n, std::nullopt, std::nullopt});
        seen_r.push_back(r);
        seen_c.push_back(static_cast<double>(n));
        if (seen_r.size() >= 3) {
          rep.add({"", group, str(r), "exponent-so-far", growth_exponent(seen_r, seen_c).fit.exponent, std::nullopt,
                   std::nullopt});
        }
      }
      return rep;
    };
    csv_projection = [](const Report& rep) {
      std::string out = "radius,count,exponent-so-far\n";
      const auto& rows = rep.rows();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].quantity != "count") continue;
        out += rows[i].radius + "," + rows[i].value.dump() + ",";
        if (i + 1 < rows.size() && rows[i + 1].quantity == "exponent-so-far") out += rows[i + 1].value.dump();
        out += "\n";
      }
      return out;
    };
  });

  auto* word = app.add_subcommand("word-ball", "word ball of a bundled group (isometry group or heisenberg)");
  word->add_option("--group", group)->required();
  word->add_option("--radius", radius)->required()->check(CLI::NonNegativeNumber);
  bool list_elements = false;
  word->add_flag("--elements", list_elements, "list the elements with their word lengths");
  word->callback([&] {
    run = [&] {
      Report rep("word-ball", {{"group", group}, {"radius", radius}});
      const auto emit = [&](const auto& ball) {
        for (int r = 0; r <= radius; ++r)
          rep.add({"", group, std::to_string(r), "sphere", ball.sphere_sizes[static_cast<std::size_t>(r)],
                   std::nullopt, std::nullopt});
        rep.add({"", group, std::to_string(radius), "ball", ball.size(), std::nullopt, std::nullopt});
        if (list_elements) rep.add({"", group, std::to_string(radius), "elements", word_ball_json(ball), {}, {}});
      };
      if (group == "heisenberg") {
        emit(word_ball(heisenberg_group(), radius, g.cap));
      } else {
        emit(word_ball(bundled_deck(group).generated(), radius, g.cap));
      }
      return rep;
    };
  });

  auto* growth = app.add_subcommand("growth-fit", "log-log growth exponent of orbit counts (or word balls for heisenberg)");
  growth->add_option("--group", group)->required();
  growth->add_option("--point", point);
  growth->add_option("--radii", radii_text)->delimiter(',')->required();
  growth->callback([&] {
    run = [&] {
      const auto radii = parse_radii(radii_text);
      Report rep("growth-fit", {{"group", group}, {"radii", radii_text}});
      GrowthSeries s;
      if (group == "heisenberg") {
        for (const auto& r : radii)
          if (r.get_den() != 1) throw PreconditionError("word radii must be integers");
        const auto ball = word_ball(heisenberg_group(), static_cast<int>(radii.back().get_num().get_si()), g.cap);
        std::vector<double> counts;
        for (const auto& r : radii) counts.push_back(static_cast<double>(ball.ball_count(static_cast<int>(r.get_num().get_si()))));
        s = growth_exponent(radii, counts);
      } else {
        s = orbit_growth(bundled_deck(group), point_or_base(point, group), radii);
      }
      for (std::size_t i = 0; i < s.radii.size(); ++i)
        rep.add({"", group, str(s.radii[i]), "count", s.counts[i], std::nullopt, std::nullopt});
      rep.add({"", group, "", "exponent", s.fit.exponent, std::nullopt, std::nullopt});
      rep.add({"", group, "", "r2", s.fit.r2, std::nullopt, std::nullopt});
      return rep;
    };
  });

  auto* milnor = app.add_subcommand("milnor-check", "word ball W(r) inside the orbit ball of radius h r");
  milnor->add_option("--group", group)->required();
  milnor->add_option("--point", point);
  milnor->add_option("--radius", radius)->required()->check(CLI::NonNegativeNumber);
  milnor->callback([&] {
    run = [&] {
      const auto deck = bundled_deck(group);
      const Point x = point_or_base(point, group);
      const auto m = milnor_containment(deck.generated(), x, radius, g.cap);
      Report rep("milnor-check", {{"group", group}, {"point", to_string(x)}, {"radius", radius}});
      rep.add({"", group, "", "h^2", str(m.h_sq), std::nullopt, std::nullopt});
      rep.add({"", group, std::to_string(radius), "checked", m.checked, std::nullopt, std::nullopt});
      json witnesses = json::array();
      for (const auto& v : m.violations) witnesses.push_back(to_json(v));
      rep.check("", group, std::to_string(radius), "d(x,gx) <= h r for |g| <= r", witnesses, m.holds);
      return rep;
    };
  });

  auto* index = app.add_subcommand("index-check", "#D^H(r) <= l #D^K(r + r0) for the lattice subgroup K");
  index->add_option("--group", group)->required();
  index->add_option("--point", point);
  index->add_option("--radii", radii_text)->delimiter(',')->required();
  index->callback([&] {
    run = [&] {
      const auto deck = bundled_deck(group);
      const Point x = point_or_base(point, group);
      const auto cmp = lattice_index_comparison(deck, x, parse_radii(radii_text));
      Report rep("index-check", {{"group", group}, {"point", to_string(x)}, {"radii", radii_text}});
      rep.add({"", group, "", "r0^2", str(cmp.r0_sq), std::nullopt, std::nullopt});
      rep.add({"", group, "", "index", cmp.index, std::nullopt, std::nullopt});
      for (const auto& row : cmp.rows)
        rep.check("", group, str(row.radius), "#D^H(r) <= l*#D^K(r+r0)",
                  json{{"big", row.count_big}, {"small", row.count_small}}, row.bound_holds);
      return rep;
    };
  });

  auto* dual = app.add_subcommand("verify-dual", "covering inequalities #D(2r)Vol(B_r) >= Vol(B~_r), #D(r)Vol(B_r) <= Vol(B~_2r)");
  dual->add_option("--space", space, "bundled flat space, or 'warped'")->required();
  dual->add_option("--radii", radii_text)->delimiter(',')->required();
  dual->add_option("--samples", samples)->check(CLI::PositiveNumber);
  dual->add_option("--seed", seed);
  dual->add_option("--grid", grid_text, "warped only: dr,ds");
  dual->add_flag("--squared", squared, "warped only: use phi^2 as the ds^2 coefficient");
  dual->callback([&] {
    run = [&] {
      const auto radii = parse_radii(radii_text);
      Report rep("verify-dual", {{"space", space}, {"radii", radii_text}, {"samples", samples}, {"seed", seed}});
      if (space == "warped") {
        warped::Options opt;
        opt.grid = parse_grid(grid_text);
        opt.squared = squared;
        for (const auto& row : warped::verify_dual(as_doubles(radii), opt)) {
          const std::string r = str(row.radius);
          rep.add({"", space, r, "volume", row.volume_n.value, row.volume_n.relative_change * row.volume_n.value, {}});
          rep.check("", space, r, "#D(2r)*Vol(B_r) >= Vol(cover B_r)", static_cast<double>(row.count_2r) * row.volume_n.value,
                    row.lower_holds);
          rep.check("", space, r, "#D(r)*Vol(B_r) <= Vol(cover B_2r)", static_cast<double>(row.count_r) * row.volume_n.value,
                    row.upper_holds);
        }
        return rep;
      }
      const auto q = FlatQuotient::bundled(space);
      for (const auto& row : verify_dual(q, radii, samples, seed)) {
        const std::string r = str(row.radius);
        rep.add({"", space, r, "volume", row.quotient_volume.value, row.quotient_volume.std_error, std::nullopt});
        rep.add({"", space, r, "#D(r)", row.count_r, std::nullopt, std::nullopt});
        rep.add({"", space, r, "#D(2r)", row.count_2r, std::nullopt, std::nullopt});
        rep.check("", space, r, "#D(2r)*Vol(B_r) >= Vol(cover B_r)", row.lhs_lower.value, row.lower_holds,
                  row.lhs_lower.std_error);
        rep.check("", space, r, "#D(r)*Vol(B_r) <= Vol(cover B_2r)", row.lhs_upper.value, row.upper_holds,
                  row.lhs_upper.std_error);
      }
      return rep;
    };
  });

  auto* thin = app.add_subcommand("thin-set", "Monte-Carlo Vol(W_r^h(p))");
  thin->add_option("--space", space)->required();
  thin->add_option("--point", point, "p; default: the space's base point");
  thin->add_option("--h", h_text);
  thin->add_option("--radii", radii_text)->delimiter(',')->required();
  thin->add_option("--samples", samples);
  thin->add_option("--seed", seed);
  thin->callback([&] {
    run = [&] {
      const auto q = FlatQuotient::bundled(space);
      const Point p = point_or_base(point, space);
      const Rational h = parse_rational(h_text);
      const auto radii = parse_radii(radii_text);
      Report rep("thin-set", {{"space", space}, {"point", to_string(p)}, {"h", h_text}, {"radii", radii_text},
                              {"samples", samples}, {"seed", seed}});
      for (std::size_t i = 0; i < radii.size(); ++i) {
        const Estimate v = thin_set_volume(q, p, radii[i], h, samples, mix_seed(seed, i));
        rep.add({"", space, str(radii[i]), "volume", v.value, v.std_error, std::nullopt});
        rep.add({"", space, str(radii[i]), "volume/r", v.value / radii[i].get_d(), v.std_error / radii[i].get_d(),
                 std::nullopt});
      }
      return rep;
    };
  });

  auto* dir = app.add_subcommand("dirichlet", "position of a point relative to the Dirichlet domain of the base point");
  dir->add_option("--space", space)->required();
  dir->add_option("--point", point)->required();
  dir->add_option("--tolerance", tol_text);
  dir->callback([&] {
    run = [&] {
      const auto q = FlatQuotient::bundled(space);
      const Point x = point_or_base(point, space);
      Report rep("dirichlet", {{"space", space}, {"point", to_string(x)}, {"tolerance", tol_text}});
      rep.add({"", space, "", "base", to_string(q.base()), std::nullopt, std::nullopt});
      rep.add({"", space, "", "membership", to_string(dirichlet_membership(q, x, parse_rational(tol_text))),
               std::nullopt, std::nullopt});
      return rep;
    };
  });

  auto* classify = app.add_subcommand("classify", "product versus Moebius for n-1 commuting generators");
  classify->add_option("--dim", dim)->required();
  classify->add_option("--generators", gens_path, "JSON array of {A, v}")->required();
  classify->callback([&] {
    run = [&] {
      const json j = read_json_file(gens_path);
      if (!j.is_array()) throw ParseError("generators must be a JSON array");
      std::vector<Isometry> gens;
      for (const auto& e : j) gens.push_back(isometry_from_json(e));
      const auto c = classify_flat(static_cast<std::size_t>(dim), gens);
      Report rep("classify", {{"dim", dim}, {"generators", j}});
      rep.add({"", "", "", "kind", to_string(c.kind), std::nullopt, std::nullopt});
      json out = json::array();
      for (std::size_t i = 0; i < c.generators.size(); ++i) {
        json e = to_json(c.generators[i]);
        e["reflecting"] = static_cast<bool>(c.reflecting[i]);
        out.push_back(std::move(e));
      }
      rep.add({"", "", "", "generators", out, std::nullopt, std::nullopt});
      json normal = json::array();
      for (const auto& x : c.normal) normal.push_back(to_string(x));
      rep.add({"", "", "", "normal", normal, std::nullopt, std::nullopt});
      return rep;
    };
  });

  auto* soul = app.add_subcommand("soul-dim", "soul dimension (translation lattice rank) of a bundled space");
  soul->add_option("--space", space)->required();
  soul->callback([&] {
    run = [&] {
      Report rep("soul-dim", {{"space", space}});
      rep.add({"", space, "", "soul-dimension", soul_dimension(bundled_deck(space)), std::nullopt, std::nullopt});
      return rep;
    };
  });

  auto* snf = app.add_subcommand("snf", "Smith normal form U M V = D");
  snf->add_option("--matrix", matrix_path, "JSON row-major integer array")->required();
  snf->callback([&] {
    run = [&] {
      const IntegerMatrix m = integer_matrix_from_json(read_json_file(matrix_path));
      const auto s = smith_normal_form(m);
      Report rep("snf", {{"matrix", to_json(m)}});
      rep.add({"", "", "", "U", to_json(s.u), std::nullopt, std::nullopt});
      rep.add({"", "", "", "D", to_json(s.d), std::nullopt, std::nullopt});
      rep.add({"", "", "", "V", to_json(s.v), std::nullopt, std::nullopt});
      json inv = json::array();
      for (const auto& d : s.invariants()) inv.push_back(d.get_str());
      rep.add({"", "", "", "invariants", inv, std::nullopt, std::nullopt});
      rep.check("", "", "", "U*M*V == D", true, s.u * m * s.v == s.d);
      rep.check("", "", "", "|det U| = |det V| = 1", true,
                abs(determinant(s.u)) == 1 && abs(determinant(s.v)) == 1);
      return rep;
    };
  });

  auto* rank = app.add_subcommand("rank", "rank of Z^m / <relations>");
  rank->add_option("--presentation", presentation_path, "{\"generators\": m, \"relations\": [[...]]}")->required();
  rank->add_option("--elements", elements_path, "optional JSON list of vectors to test for independence");
  rank->callback([&] {
    run = [&] {
      const json pj = read_json_file(presentation_path);
      const auto p = presentation_from_json(pj);
      Report rep("rank", {{"presentation", pj}});
      rep.add({"", "", "", "rank", abelian_rank(p), std::nullopt, std::nullopt});
      if (!elements_path.empty()) {
        const json ej = read_json_file(elements_path);
        const auto e = ej.get<std::vector<std::vector<long>>>();
        rep.add({"", "", "", "independent", independence_check(e, p), std::nullopt, std::nullopt});
      }
      return rep;
    };
  });

  auto* inj = app.add_subcommand("injection-check", "polycyclic injection on a box and the ball injection into the group");
  inj->add_option("--group", group)->required();
  inj->add_option("--box", box)->check(CLI::NonNegativeNumber);
  inj->add_option("--radius", radius, "word-ball radius for the ball injection")->check(CLI::NonNegativeNumber);
  inj->callback([&] {
    run = [&] {
      Report rep("injection-check", {{"group", group}, {"box", box}, {"radius", radius}});
      if (group == "heisenberg") {
        const HeisenbergElement x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
        const auto poly = polycyclic_injection(HeisenbergElement{}, std::vector<HeisenbergElement>{x, y, z}, box, g.cap);
        json col = json::array();
        for (const auto& [a, b] : poly.collisions) col.push_back({a, b});
        rep.check("", group, std::to_string(box), "polycyclic injection", json{{"points", poly.points}, {"collisions", col}},
                  poly.injective);
        const auto h = hurewicz_ball_injection<HeisenbergElement>(heisenberg_group(), {x, y}, {{1, 0}, {0, 1}},
                                                                  {2, IntegerMatrix(0, 2)}, heisenberg_abelianization,
                                                                  radius, g.cap);
        rep.add({"", group, std::to_string(radius), "#W_G(r)", h.group_ball, std::nullopt, std::nullopt});
        rep.add({"", group, std::to_string(radius), "#W_2(r)", h.image_ball, std::nullopt, std::nullopt});
        rep.check("", group, std::to_string(radius), "ball injection", h.injective, h.injective && h.section_holds);
        rep.check("", group, std::to_string(radius), "#W_G(r) >= #W_2(r)", h.group_ball, h.growth_holds);
        return rep;
      }
      // Translation lattices: the series is the lattice basis.
      const auto deck = bundled_deck(group);
      if (deck.index() != 1) throw PreconditionError("injection-check supports heisenberg and translation groups");
      std::vector<Isometry> series;
      for (const auto& b : deck.lattice().basis()) series.push_back(Isometry::translation(b));
      const auto poly = polycyclic_injection(Isometry::identity(deck.dimension()), series, box, g.cap);
      rep.check("", group, std::to_string(box), "polycyclic injection", json{{"points", poly.points}}, poly.injective);
      return rep;
    };
  });

  auto* wratio = app.add_subcommand("warped-ratio", "#U(cr) Vol(B_cr(x0)) / Vol(B_r(x0-bar)) on the warped cylinder");
  wratio->add_option("--c", cs_text)->delimiter(',')->required();
  wratio->add_option("--radii", radii_text)->delimiter(',')->required();
  wratio->add_option("--grid", grid_text, "dr,ds");
  wratio->add_flag("--squared", squared, "use phi^2 as the ds^2 coefficient");
  wratio->callback([&] {
    run = [&] {
      warped::Options opt;
      opt.grid = parse_grid(grid_text);
      opt.squared = squared;
      const auto radii = as_doubles(parse_radii(radii_text));
      const auto cs = as_doubles(parse_radii(cs_text));
      Report rep("warped-ratio", {{"c", cs_text}, {"radii", radii_text}, {"grid", grid_text}, {"squared", squared}});
      const auto rows = warped::counterexample_ratios(cs, radii, opt);
      for (const auto& row : rows) {
        const std::string r = str(row.r);
        const std::string c = "c=" + str(row.c);
        rep.add({"", "N", r, "#U(cr) " + c, row.word_count, std::nullopt, std::nullopt});
        rep.add({"", "N", r, "Vol(B_cr) " + c, row.volume_n.value, row.volume_n.relative_change * row.volume_n.value, {}});
        rep.add({"", "cover", r, "Vol(B_r)", row.volume_cover.value,
                 row.volume_cover.relative_change * row.volume_cover.value, std::nullopt});
        rep.add({"", "N", r, "ratio " + c, row.ratio, std::nullopt, std::nullopt});
      }
      for (std::size_t i = 0; i < cs.size(); ++i) {
        bool decreasing = true;
        for (std::size_t k = 1; k < radii.size(); ++k)
          decreasing = decreasing && rows[i * radii.size() + k].ratio < rows[i * radii.size() + k - 1].ratio;
        rep.check("", "N", "", "ratio decreasing in r, c=" + str(cs[i]), decreasing, decreasing);
      }
      return rep;
    };
  });

  auto* wdist = app.add_subcommand("warped-distance", "grid distance on the warped cylinder N or its cover");
  wdist->add_option("--from", from_text);
  wdist->add_option("--to", to_text)->required();
  wdist->add_option("--space", warped_space)->check(CLI::IsMember({"N", "cover"}));
  wdist->add_option("--grid", grid_text);
  wdist->add_flag("--squared", squared);
  wdist->callback([&] {
    run = [&] {
      warped::Options opt;
      opt.grid = parse_grid(grid_text);
      opt.squared = squared;
      const auto sp = warped_space == "N" ? warped::Space::N : warped::Space::Cover;
      const auto d = warped::graph_distance(sp, parse_coord(from_text), parse_coord(to_text), opt);
      Report rep("warped-distance",
                 {{"from", from_text}, {"to", to_text}, {"space", warped_space}, {"grid", grid_text}, {"squared", squared}});
      rep.add({"", warped_space, "", "distance", d.value, d.relative_change * d.value, std::nullopt});
      rep.add({"", warped_space, "", "coarse-grid distance", d.coarse, std::nullopt, std::nullopt});
      rep.add({"", warped_space, "", "certified grid", json{d.grid.dr, d.grid.ds}, std::nullopt, std::nullopt});
      return rep;
    };
  });

  auto* suite = app.add_subcommand("paper-suite", "run every verification pipeline on the bundled spaces");
  suite->add_option("--seed", seed);
  suite->add_flag("--quick", quick, "reduced radii and samples");
  std::size_t suite_samples = 0;
  suite->add_option("--samples", suite_samples, "Monte-Carlo samples per volume");
  suite->callback([&] {
    run = [&] { return paper_suite({seed, quick, suite_samples}); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    g.cap = cap_flag ? *cap_flag : cap_from_env();
    const Report rep = run();
    std::string text;
    if (g.format == "csv") {
      text = csv_projection ? csv_projection(rep) : rep.to_csv();
    } else {
      text = rep.to_json(g.timings).dump(2) + "\n";
    }
    if (g.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(g.output);
      if (!out) throw ParseError("cannot write " + g.output);
      out << text;
    }
    return rep.passed() ? kPass : kVerdictFailure;
  } catch (const CapExceeded& e) {
    std::cout << error_json("cap-exceeded", e.what()).dump(2) << "\n";
    return kResource;
  } catch (const TruncationError& e) {
    std::cout << error_json("truncation", e.what()).dump(2) << "\n";
    return kResource;
  } catch (const ConvergenceError& e) {
    std::cout << error_json("convergence", e.what()).dump(2) << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return kUsage;
  }
}
