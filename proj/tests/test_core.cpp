#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gnvort/core.hpp"

using namespace gnvort;

TEST_CASE("grid geometry") {
  const Grid g = Grid::line(16, 4.0);
  CHECK(g.dim() == 1);
  CHECK(g.nx() == 16);
  CHECK(g.ny() == 1);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.x(3) == doctest::Approx(0.75));
  CHECK(g.size() == 16);
  CHECK(g.cell_measure() == doctest::Approx(0.25));

  const Grid p = Grid::plane(8, 10, 2.0, 5.0);
  CHECK(p.dim() == 2);
  CHECK(p.size() == 80);
  CHECK(p.dy() == doctest::Approx(0.5));
  CHECK(p.cell_measure() == doctest::Approx(0.125));
  CHECK(p.min_spacing() == doctest::Approx(0.25));
  CHECK(p == Grid::plane(8, 10, 2.0, 5.0));
  CHECK_FALSE(p == Grid::plane(8, 10, 2.0, 4.0));
}

TEST_CASE("grid rejects too few points or bad lengths") {
  CHECK_THROWS_AS(Grid::line(7, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid::plane(8, 4, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid::line(16, 0.0), ValidationError);
  CHECK_THROWS_AS(Grid::plane(8, 8, 1.0, -1.0), ValidationError);
}

TEST_CASE("field arithmetic and reductions") {
  const Grid g = Grid::line(8, 8.0);
  Field a = sample(g, [](double x, double) { return x; });
  Field b(g, 2.0);
  CHECK((a + b)[3] == 5.0);
  CHECK((a - b)[3] == 1.0);
  CHECK((a * b)[3] == 6.0);
  CHECK((a / b)[3] == 1.5);
  CHECK((3.0 * a)[2] == 6.0);
  CHECK((1.0 + a)[2] == 3.0);
  CHECK((-a)[4] == -4.0);
  a.axpy(0.5, b);
  CHECK(a[0] == 1.0);
  CHECK(a.sum() == doctest::Approx(28.0 + 8.0));
  CHECK(a.min() == 1.0);
  CHECK(a.max() == 8.0);
  CHECK((-a).max_abs() == 8.0);
  CHECK(map(b, [](double v) { return v * v; })[5] == 4.0);
}

TEST_CASE("fields on different grids are rejected") {
  const Field a(Grid::line(8, 1.0));
  const Field b(Grid::line(16, 1.0));
  CHECK_THROWS_AS(a + b, GridMismatch);
  CHECK_THROWS_AS(require_same_grid(a, b, "test"), GridMismatch);
}

TEST_CASE("scale parameter validation and regime warnings") {
  ScaleParams s;
  s.mu = 0.04;
  CHECK_NOTHROW(s.validate());
  CHECK(s.regime_warnings().empty());
  s.beta = 0.5;  // > 2 sqrt(mu) = 0.4
  CHECK(s.regime_warnings().size() == 1);
  ScaleParams bad = s;
  bad.mu = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = s;
  bad.mu = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = s;
  bad.epsilon = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = s;
  bad.beta = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("derive_depth examples") {
  const Grid g = Grid::line(32, 2 * M_PI);
  ScaleParams sc;
  sc.mu = 0.1;

  SUBCASE("rest state gives unit depth") {
    const ModelState s = ModelState::zeros(Tier::SaintVenant, g);
    const Field h = derive_depth(s, Bathymetry::flat(g), sc);
    CHECK(h.min() == 1.0);
    CHECK(h.max() == 1.0);
  }
  SUBCASE("epsilon scales the surface, bottom ignored when beta = 0") {
    sc.epsilon = 0.1;
    sc.beta = 0.0;
    ModelState s = ModelState::zeros(Tier::SaintVenant, g);
    s.zeta = sample(g, [](double x, double) { return std::sin(x); });
    const Bathymetry b{sample(g, [](double x, double) { return 5.0 * std::cos(x); })};
    const Field h = derive_depth(s, b, sc);
    for (int i = 0; i < g.nx(); ++i) CHECK(h(i) == doctest::Approx(1.0 + 0.1 * std::sin(g.x(i))));
  }
  SUBCASE("dry state raises") {
    sc.epsilon = 1.0;
    sc.beta = 1.0;
    ModelState s = ModelState::zeros(Tier::SaintVenant, g);
    s.zeta = Field(g, -0.5);
    CHECK_THROWS_AS(derive_depth(s, {Field(g, 0.6)}, sc), PositivityError);
  }
}

TEST_CASE("derive_depth is affine in surface and bottom") {
  const Grid g = Grid::line(64, 10.0);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  ScaleParams sc;
  sc.epsilon = 0.3;
  sc.beta = 0.7;
  ModelState s1 = ModelState::zeros(Tier::SaintVenant, g), s2 = s1, s12 = s1;
  Bathymetry b1{Field(g)}, b2{Field(g)}, b12{Field(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    s1.zeta[k] = u(rng);
    s2.zeta[k] = u(rng);
    b1.b[k] = u(rng);
    b2.b[k] = u(rng);
    s12.zeta[k] = s1.zeta[k] + s2.zeta[k];
    b12.b[k] = b1.b[k] + b2.b[k];
  }
  const ModelState rest = ModelState::zeros(Tier::SaintVenant, g);
  const Field h1 = derive_depth(s1, b1, sc), h2 = derive_depth(s2, b2, sc);
  const Field h12 = derive_depth(s12, b12, sc), h0 = derive_depth(rest, Bathymetry::flat(g), sc);
  // h(a + b) = h(a) + h(b) - h(0)
  CHECK((h12 - (h1 + h2 - h0)).max_abs() <= 1e-15);
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(h1[k] == doctest::Approx(1.0 + 0.3 * s1.zeta[k] - 0.7 * b1.b[k]).epsilon(1e-15));
}

TEST_CASE("tier names round trip") {
  for (Tier t : {Tier::SaintVenant, Tier::GnIrrotational, Tier::GnConstVort1d, Tier::GnGeneral1d,
                 Tier::GnMedium1d, Tier::GnGeneral2d})
    CHECK(parse_tier(tier_name(t)) == t);
  CHECK(tier_name(Tier::GnConstVort1d) == "gn_const_vort_1d");
  CHECK_THROWS_AS(parse_tier("euler"), ValidationError);
}

TEST_CASE("state layouts per tier") {
  const Grid g1 = Grid::line(16, 1.0);
  const Grid g2 = Grid::plane(8, 8, 1.0, 1.0);
  const ModelState sv = ModelState::zeros(Tier::SaintVenant, g2);
  CHECK(sv.vbar.size() == 2);
  CHECK(sv.E.empty());
  const ModelState gen = ModelState::zeros(Tier::GnGeneral1d, g1);
  CHECK(gen.vsharp.size() == 1);
  CHECK(gen.E.size() == 1);
  CHECK(gen.F.size() == 1);
  const ModelState med = ModelState::zeros(Tier::GnMedium1d, g1);
  CHECK(med.E.size() == 1);
  CHECK(med.vsharp.empty());
  CHECK(med.F.empty());
  const ModelState two = ModelState::zeros(Tier::GnGeneral2d, g2);
  CHECK(two.E.size() == 3);
  CHECK(two.F.size() == 4);
  CHECK(two.vsharp.size() == 2);
  CHECK(e_components(2) == 3);
  CHECK(f_components(2) == 4);

  CHECK_THROWS_AS(ModelState::zeros(Tier::GnGeneral2d, g1), GridMismatch);
  CHECK_THROWS_AS(ModelState::zeros(Tier::GnConstVort1d, g2), GridMismatch);

  ModelState broken = gen;
  broken.E.push_back(Field(g1));
  CHECK_THROWS_AS(broken.check_layout(), GridMismatch);
  broken = gen;
  broken.zeta = Field(Grid::line(32, 1.0));
  CHECK_THROWS_AS(broken.check_layout(), GridMismatch);
}

TEST_CASE("realizability of E") {
  const Grid g = Grid::plane(8, 8, 1.0, 1.0);
  ModelState s = ModelState::zeros(Tier::GnGeneral2d, g);
  s.E[kE11] = Field(g, 1.0);
  s.E[kE22] = Field(g, 1.0);
  s.E[kE12] = Field(g, 0.9);
  CHECK(E_is_realizable(s));
  s.E[kE12] = Field(g, 1.1);  // determinant < 0
  CHECK_FALSE(E_is_realizable(s));

  ModelState s1 = ModelState::zeros(Tier::GnGeneral1d, Grid::line(8, 1.0));
  s1.E[0][3] = -1e-3;
  CHECK_FALSE(E_is_realizable(s1));
  CHECK(E_is_realizable(s1, 1e-2));
}
