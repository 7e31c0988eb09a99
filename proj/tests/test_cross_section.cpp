#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coord/cross_section.hpp"
#include "coord/priority.hpp"
#include "coord/verify.hpp"
#include "oracle_helpers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace coord;

namespace {

// orthogonal unit-speed lines through a common point, arcs zeroed there
PathGeometry horizontal_through_origin() { return PathGeometry::segment(0, {0, 0}, {40, 0}); }
PathGeometry vertical_through_origin() { return PathGeometry::segment(1, {0, 0}, {0, 40}); }

CrossSection unit_disc_section() {
  return build_cross_section(horizontal_through_origin(), vertical_through_origin(), 2.0, 0.1);
}

PathGeometry slanted_through_origin(double degrees) {
  const double rad = degrees * M_PI / 180.0;
  return PathGeometry::segment(1, {0, 0}, {40 * std::cos(rad), 40 * std::sin(rad)});
}

}  // namespace

TEST_CASE("orthogonal crossing yields the disc section") {
  const CrossSection s = unit_disc_section();
  REQUIRE(s.kind == SectionKind::Ellipse);
  CHECK(s.inf_u == doctest::Approx(-2.0));
  CHECK(s.sup_u == doctest::Approx(2.0));
  CHECK(s.inf_v == doctest::Approx(-2.0));
  CHECK(s.sup_v == doctest::Approx(2.0));
  CHECK(s.contains(0.0, 0.0));
  CHECK(s.contains(1.9, 0.0));
  CHECK_FALSE(s.contains(2.0, 0.0));
  CHECK_FALSE(s.contains(1.5, 1.5));
}

TEST_CASE("same lane yields the headway strip") {
  const auto path = horizontal_through_origin();
  const CrossSection s = build_cross_section(path, path, 2.0, 0.1);
  REQUIRE(s.kind == SectionKind::Strip);
  CHECK(s.offset == doctest::Approx(0.0));
  CHECK(s.half_width == doctest::Approx(2.0));
  CHECK(s.contains(5.0, 3.5));
  CHECK_FALSE(s.contains(5.0, 3.0));
}

TEST_CASE("separated parallel lanes never conflict") {
  const auto a = PathGeometry::segment(0, {0, 0}, {40, 0});
  const auto b = PathGeometry::segment(1, {0, 3}, {40, 3});
  CHECK(build_cross_section(a, b, 2.0, 0.1).empty());
}

TEST_CASE("overlapping same-direction parallel lanes yield an offset strip") {
  const auto a = PathGeometry::segment(0, {0, 0}, {40, 0});
  const auto b = PathGeometry::segment(1, {5, 1}, {45, 1});
  const CrossSection s = build_cross_section(a, b, 2.0, 0.1);
  REQUIRE(s.kind == SectionKind::Strip);
  CHECK(s.offset == doctest::Approx(5.0));
  CHECK(s.half_width == doctest::Approx(std::sqrt(3.0)));
  // robots level with each other in the plane collide
  CHECK(s.contains(12.0, 7.0));
}

TEST_CASE("head-on overlapping lanes fall back to a bounded grid") {
  const auto a = PathGeometry::segment(0, {0, 0}, {40, 0});
  const auto b = PathGeometry::segment(1, {40, 1}, {0, 1});
  const CrossSection s = build_cross_section(a, b, 2.0, 0.5);
  REQUIRE(s.kind == SectionKind::Grid);
  // meeting point: u + v = 40 (plus the conservative margin around it)
  CHECK(s.contains(20.0, 20.0));
  CHECK_FALSE(s.contains(5.0, 5.0));
}

TEST_CASE("polyline pairs get a conservative grid") {
  const auto bent = PathGeometry::polyline(0, {{-10, 0}, {0, 0}, {0, 10}});
  const auto straight = PathGeometry::segment(1, {-10, 5}, {10, 5});
  const CrossSection s = build_cross_section(bent, straight, 2.0, 0.1);
  REQUIRE(s.kind == SectionKind::Grid);
  // the vertical leg of the bent path crosses the straight one at (0, 5)
  CHECK(s.contains(15.0, 10.0));
  CHECK_FALSE(s.contains(2.0, 2.0));
}

TEST_CASE("shift bound of the disc") {
  const ShiftBound w{unit_disc_section()};
  REQUIRE(w.value(0.0));
  CHECK(*w.value(0.0) == doctest::Approx(2.0));
  REQUIRE(w.value(-1.0));
  CHECK(*w.value(-1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK_FALSE(w.value(-2.5));
  CHECK_FALSE(w.value(-2.0));
  REQUIRE(w.value(5.0));
  CHECK(*w.value(5.0) == doctest::Approx(2.0));
}

TEST_CASE("shift bound construction rejects empty sections") {
  const auto a = PathGeometry::segment(0, {0, 0}, {40, 0});
  const auto b = PathGeometry::segment(1, {0, 3}, {40, 3});
  const CrossSection s = build_cross_section(a, b, 2.0, 0.1);
  CHECK_THROWS_AS(ShiftBound{s}, std::invalid_argument);
}

TEST_CASE("shift bounds are nondecreasing") {
  std::mt19937_64 rng(41);
  std::vector<CrossSection> sections;
  sections.push_back(unit_disc_section());
  sections.push_back(build_cross_section(horizontal_through_origin(), slanted_through_origin(30),
                                         2.0, 0.1));
  {
    const auto path = horizontal_through_origin();
    sections.push_back(build_cross_section(path, path, 2.0, 0.1));
  }
  {
    const auto bent = PathGeometry::polyline(0, {{-10, 0}, {0, 0}, {0, 10}});
    const auto straight = PathGeometry::segment(1, {-10, 5}, {10, 5});
    sections.push_back(build_cross_section(bent, straight, 2.0, 0.1));
  }
  for (const CrossSection& s : sections) {
    const ShiftBound w{s};
    for (int k = 0; k < 2000; ++k) {
      double v1 = oracle::uniform(rng, -5.0, 25.0);
      double v2 = oracle::uniform(rng, -5.0, 25.0);
      if (v1 > v2) std::swap(v1, v2);
      const auto w1 = w.value(v1);
      const auto w2 = w.value(v2);
      if (w1) {
        REQUIRE(w2);
        CHECK(*w1 <= *w2 + 1e-12);
      }
    }
  }
}

TEST_CASE("in_shifted_obstacle on the disc") {
  const ShiftBound w{unit_disc_section()};
  CHECK(in_shifted_obstacle(0.0, -1.0, w));     // 0 < sqrt(3)
  CHECK_FALSE(in_shifted_obstacle(3.0, 5.0, w));  // 3 >= 2
  CHECK_FALSE(in_shifted_obstacle(0.0, -2.5, w)); // no bound yet
}

TEST_CASE("curve_intersects_shifted") {
  const ShiftBound w{unit_disc_section()};
  auto conf = [](double l, double f) {
    Configuration q(2);
    q << l, f;
    return q;
  };
  const DirectedPair pair{0, 1};

  std::vector<Configuration> all_before = {conf(-10, -9), conf(-9, -8), conf(-8, -7)};
  CHECK_FALSE(curve_intersects_shifted(all_before, pair, w));

  std::vector<Configuration> single = {conf(0, -1)};
  CHECK(curve_intersects_shifted(single, pair, w));

  std::vector<Configuration> past = {conf(2.5, -10), conf(2.5, 0), conf(3.0, 10)};
  CHECK_FALSE(curve_intersects_shifted(past, pair, w));

  std::vector<Configuration> backwards = {conf(5, 6), conf(4, 7)};
  CHECK_THROWS_AS(curve_intersects_shifted(backwards, pair, w), std::invalid_argument);
}

TEST_CASE("shifted membership agrees with the brute-force shift search") {
  std::mt19937_64 rng(43);
  struct Case {
    CrossSection section;
    double window;
  };
  std::vector<Case> cases;
  cases.push_back({unit_disc_section(), 0.0});
  cases.push_back({build_cross_section(horizontal_through_origin(), slanted_through_origin(30),
                                       2.0, 0.1),
                   0.0});
  {
    const auto path = horizontal_through_origin();
    cases.push_back({build_cross_section(path, path, 2.0, 0.1), 30.0});
  }
  const double grid_step = 0.05;
  for (const Case& c : cases) {
    const ShiftBound w{c.section};
    for (int k = 0; k < 2000; ++k) {
      const double xl = oracle::uniform(rng, -6.0, 8.0);
      const double xf = oracle::uniform(rng, -6.0, 8.0);
      // skip configurations within one search cell of the decision boundary
      const auto bound = w.value(xf);
      if (bound && std::abs(xl - *bound) < 2.0 * grid_step) continue;
      const bool fast = in_shifted_obstacle(xl, xf, w);
      const bool slow = brute_force_shifted_membership(xl, xf, c.section, grid_step, c.window);
      CHECK(fast == slow);
    }
  }
}

TEST_CASE("shifted regions are monotone (free stays free forward/backward)") {
  std::mt19937_64 rng(47);
  std::vector<CrossSection> sections;
  sections.push_back(unit_disc_section());
  sections.push_back(build_cross_section(horizontal_through_origin(), slanted_through_origin(30),
                                         2.0, 0.1));
  {
    const auto path = horizontal_through_origin();
    sections.push_back(build_cross_section(path, path, 2.0, 0.1));
  }
  {
    const auto bent = PathGeometry::polyline(0, {{-10, 0}, {0, 0}, {0, 10}});
    const auto straight = PathGeometry::segment(1, {-10, 5}, {10, 5});
    sections.push_back(build_cross_section(bent, straight, 2.0, 0.1));
  }
  for (const CrossSection& s : sections) {
    const ShiftBound w{s};
    for (int k = 0; k < 2000; ++k) {
      const double xl = oracle::uniform(rng, -6.0, 26.0);
      const double xf = oracle::uniform(rng, -6.0, 26.0);
      if (in_shifted_obstacle(xl, xf, w)) continue;
      const double xl2 = xl + oracle::uniform(rng, 0.0, 5.0);
      const double xf2 = xf - oracle::uniform(rng, 0.0, 5.0);
      CHECK_FALSE(in_shifted_obstacle(xl2, xf2, w));
    }
  }
}

TEST_CASE("analytic and grid sections agree up to one cell") {
  // a geometrically straight path written as a 3-point polyline forces the
  // grid representation of the same pair
  const auto straight_a = PathGeometry::segment(0, {-20, 0}, {20, 0});
  const auto straight_b = PathGeometry::segment(1, {0, -20}, {0, 20});
  const auto poly_a = PathGeometry::polyline(0, {{-20, 0}, {0, 0}, {20, 0}});
  const CrossSection analytic = build_cross_section(straight_a, straight_b, 2.0, 0.1);
  const CrossSection grid = build_cross_section(poly_a, straight_b, 2.0, 0.1);
  REQUIRE(analytic.kind == SectionKind::Ellipse);
  REQUIRE(grid.kind == SectionKind::Grid);

  std::mt19937_64 rng(53);
  const double cell = 0.1;
  for (int k = 0; k < 5000; ++k) {
    const double u = oracle::uniform(rng, 15.0, 25.0);
    const double v = oracle::uniform(rng, 15.0, 25.0);
    // distance of (u, v) to the disc boundary in the coordinate plane
    const double r = std::hypot(u - 20.0, v - 20.0);
    if (std::abs(r - 2.0) < 2.0 * cell) continue;
    CHECK(analytic.contains(u, v) == grid.contains(u, v));
  }
}

TEST_CASE("transposed sections mirror membership") {
  std::mt19937_64 rng(59);
  const CrossSection s = build_cross_section(horizontal_through_origin(),
                                             slanted_through_origin(25), 2.0, 0.1);
  const CrossSection t = s.transposed();
  for (int k = 0; k < 2000; ++k) {
    const double u = oracle::uniform(rng, -5.0, 5.0);
    const double v = oracle::uniform(rng, -5.0, 5.0);
    CHECK(s.contains(u, v) == t.contains(v, u));
  }
}

TEST_CASE("in_goal") {
  GoalRegion goal{{47.0, 47.0}};
  Configuration x(2);
  x << 47.0, 47.0;
  CHECK(in_goal(x, goal));
  x << 47.0, 46.9;
  CHECK_FALSE(in_goal(x, goal));
  CHECK(in_goal(Configuration(0), GoalRegion{}));
  CHECK_THROWS_AS(in_goal(x, GoalRegion{{1.0}}), std::invalid_argument);
}

TEST_CASE("priority graph bookkeeping") {
  PriorityGraph g;
  g.add_edge(1, 2);
  g.add_edge(3, 2);
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(2, 1));
  CHECK(g.has_pair(2, 1));
  CHECK(g.leaders_of(2).size() == 2);
  CHECK(g.leaders_of(1).empty());
  CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(2, 1), std::invalid_argument);
  g.remove_robot(1);
  CHECK_FALSE(g.has_pair(1, 2));
  CHECK(g.leaders_of(2).size() == 1);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("catalog over the crossroads layout") {
  const auto layout = make_crossroads_layout(1.0, 3.0, 30.0, 10.0, 10.0);
  const SectionCatalog catalog(layout, 1.0, 0.5, 0.1);
  // perpendicular pairs conflict, opposite parallels do not
  CHECK(catalog.conflicting(0, 2));
  CHECK(catalog.conflicting(0, 3));
  CHECK(catalog.conflicting(1, 2));
  CHECK(catalog.conflicting(1, 3));
  CHECK_FALSE(catalog.conflicting(0, 1));
  CHECK_FALSE(catalog.conflicting(2, 3));
  CHECK(catalog.section(0, 0)->kind == SectionKind::Strip);

  const CrossSection* en = catalog.section(0, 2);
  REQUIRE(en);
  CHECK(en->inf_u == doctest::Approx(30.0));
  CHECK(en->sup_u == doctest::Approx(34.0));
  CHECK(en->inf_v == doctest::Approx(30.0));
  CHECK(en->sup_v == doctest::Approx(34.0));

  // the inflated bound is wider than the exact one
  const ShiftBound* exact = catalog.bound(0, 2);
  const ShiftBound* inflated = catalog.inflated_bound(0, 2);
  REQUIRE(exact);
  REQUIRE(inflated);
  CHECK(*inflated->value(32.0) > *exact->value(32.0));

  CHECK_NOTHROW(validate_layout(layout, catalog, 1.0));
}

TEST_CASE("layout validation rejects conflicts outside (spawn, exit)") {
  auto layout = make_crossroads_layout(1.0, 3.0, 30.0, 10.0, 10.0);
  layout.exit[0] = 33.0;   // inside the eastbound lane's conflict zone
  const SectionCatalog catalog(layout, 1.0, 0.5, 0.1);
  CHECK_THROWS_AS(validate_layout(layout, catalog, 1.0), std::invalid_argument);
}

TEST_CASE("induced priority graph orients constrained pairs") {
  const auto layout = make_crossroads_layout(1.0, 3.0, 30.0, 10.0, 10.0);
  const SectionCatalog catalog(layout, 1.0, 0.5, 0.1);
  const RobotId ids[] = {7, 9};
  const int paths[] = {0, 2};   // eastbound and northbound, disc at (32, 32)
  auto conf = [](double a, double b) {
    Configuration q(2);
    q << a, b;
    return q;
  };

  SUBCASE("first robot passes first") {
    std::vector<Configuration> samples = {conf(10, 5), conf(33, 20), conf(45, 40)};
    const PriorityGraph g = induced_priority_graph(samples, ids, paths, catalog);
    CHECK(g.has_edge(7, 9));
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("mirrored case") {
    std::vector<Configuration> samples = {conf(5, 10), conf(20, 33), conf(40, 45)};
    const PriorityGraph g = induced_priority_graph(samples, ids, paths, catalog);
    CHECK(g.has_edge(9, 7));
  }
  SUBCASE("pair on conflict-free paths gets no edge") {
    const int free_paths[] = {0, 1};
    std::vector<Configuration> samples = {conf(10, 10), conf(40, 40)};
    CHECK(induced_priority_graph(samples, ids, free_paths, catalog).empty());
  }
  SUBCASE("unconstrained pair gets no edge") {
    std::vector<Configuration> samples = {conf(10, 5), conf(15, 8)};
    CHECK(induced_priority_graph(samples, ids, paths, catalog).empty());
  }
  SUBCASE("entering both shifted regions is inconsistent") {
    std::vector<Configuration> samples = {conf(20, 31), conf(31, 20)};
    CHECK_THROWS_AS(induced_priority_graph(samples, ids, paths, catalog), std::runtime_error);
  }
}
