#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gnvort/diagnostics.hpp"
#include "gnvort/stencil.hpp"
#include "gnvort/timestep.hpp"
#include "oracle.hpp"

using namespace gnvort;

namespace {

const double kTwoPi = 2 * M_PI;

ScaleParams scales(double eps, double beta, double mu) {
  ScaleParams s;
  s.epsilon = eps;
  s.beta = beta;
  s.mu = mu;
  return s;
}

ConservationSample sample_at(double t, double mass, double energy) {
  ConservationSample s;
  s.t = t;
  s.mass = mass;
  s.energy_total = energy;
  return s;
}

ModelState smooth_state(Tier tier, const Grid& g, const Field& h) {
  ModelState s = ModelState::zeros(tier, g, 0.8);
  const bool two = g.dim() == 2;
  s.zeta = sample(g, [](double x, double y) { return 0.3 * std::sin(x) + 0.1 * std::cos(y); });
  s.vbar[0] = sample(g, [](double x, double y) { return 0.4 * std::cos(x) + 0.1 * std::sin(y); });
  if (two) s.vbar[1] = sample(g, [](double x, double y) { return 0.2 * std::sin(x + y); });
  if (tier == Tier::GnGeneral1d) {
    s.vsharp[0] = 0.8 * h;
    s.E[0] = (0.64 / 12.0) * pow3(h);
    s.F[0] = sample(g, [](double x, double) { return 0.01 * std::cos(x); });
  }
  if (tier == Tier::GnGeneral2d) {
    s.vsharp = {0.8 * h, sample(g, [](double x, double) { return 0.3 * std::cos(x); })};
    s.E[kE11] = sample(g, [](double x, double y) { return 0.05 * (1.2 + std::sin(x) * std::cos(y)); });
    s.E[kE12] = sample(g, [](double x, double y) { return 0.01 * std::cos(x - y); });
    s.E[kE22] = Field(g, 0.04);
    s.F[kF111] = sample(g, [](double x, double) { return 0.01 * std::sin(x); });
    s.F[kF122] = sample(g, [](double, double y) { return 0.01 * std::cos(y); });
  }
  return s;
}

}  // namespace

TEST_CASE("rest has zero energy") {
  const Grid g = Grid::line(32, 1.0);
  for (Tier t : {Tier::SaintVenant, Tier::GnIrrotational, Tier::GnGeneral1d, Tier::GnMedium1d}) {
    const EnergyReport r = energy_report(ModelState::zeros(t, g), Bathymetry::flat(g), scales(0.3, 0, 0.1));
    CHECK(r.energy_total == 0.0);
    CHECK(r.mass == 0.0);
    CHECK_FALSE(r.dimensional);
  }
}

TEST_CASE("rotational energy of constant vorticity") {
  const Grid g = Grid::line(16, 4.0);
  ScaleParams sc = scales(1.0, 0.0, 1.0);
  sc.physical = PhysicalScales{1.0, 1.0, 1.0};
  ModelState s = ModelState::zeros(Tier::GnConstVort1d, g, 3.0);
  s.zeta = Field(g, 1.0);  // h = 2
  const EnergyReport r = energy_report(s, Bathymetry::flat(g), sc);
  CHECK(r.dimensional);
  CHECK(r.e_rot_density.min() == doctest::Approx(3.0));
  CHECK(r.e_rot_density.max() == doctest::Approx(3.0));
  CHECK(r.e_rot == doctest::Approx(12.0));
}

TEST_CASE("general E from linear shear matches the constant-vorticity formula") {
  const Grid g = Grid::line(64, kTwoPi);
  const ScaleParams sc = scales(0.3, 0.0, 0.04);
  const double w = 1.7;
  ModelState c = ModelState::zeros(Tier::GnConstVort1d, g, w);
  c.zeta = sample(g, [](double x, double) { return 0.5 * std::sin(x); });
  const Field h = derive_depth(c, Bathymetry::flat(g), sc);
  ModelState gen = ModelState::zeros(Tier::GnGeneral1d, g);
  gen.zeta = c.zeta;
  gen.E[0] = (w * w / 12.0) * pow3(h);
  const EnergyReport a = energy_report(c, Bathymetry::flat(g), sc);
  const EnergyReport b = energy_report(gen, Bathymetry::flat(g), sc);
  CHECK((a.e_rot_density - b.e_rot_density).max_abs() <= 1e-15);
  // E integrated from the shear profile approaches the same density
  gen.E[0] = init_cascade_from_shear(linear_shear_profile(h, w, 129), h, sc).E[0];
  const EnergyReport q = energy_report(gen, Bathymetry::flat(g), sc);
  CHECK((a.e_rot_density - q.e_rot_density).max_abs() <= 1e-3 * a.e_rot_density.max_abs());
}

TEST_CASE("report totals and physical scaling") {
  const Grid g = Grid::line(64, kTwoPi);
  ScaleParams sc = scales(0.2, 0.1, 0.04);
  const Bathymetry bathy{sample(g, [](double x, double) { return std::cos(x); })};
  const ModelState s = smooth_state(Tier::GnIrrotational, g, Field(g, 1.0));
  const EnergyReport r = energy_report(s, bathy, sc);
  CHECK(r.energy_total == doctest::Approx(r.e_p + r.e_k + r.e_rot));
  CHECK(r.e_p == doctest::Approx(0.5 * square(s.zeta).sum() * g.dx()));
  CHECK(r.mass == doctest::Approx(s.zeta.sum() * g.dx()).epsilon(1e-12));

  sc.physical = PhysicalScales{9.81, 2.0, 100.0};
  const EnergyReport d = energy_report(s, bathy, sc);
  const double energy_scale = 9.81 * 0.04 * 4.0 * 100.0;
  CHECK(d.energy_total == doctest::Approx(r.energy_total * energy_scale));
  CHECK(d.mass == doctest::Approx(r.mass * 0.2 * 2.0 * 100.0));
}

TEST_CASE("local energy balance: d_t e + div flux vanishes as the grid is refined") {
  const ScaleParams sc = scales(0.3, 0.2, 0.05);
  for (Tier tier : {Tier::SaintVenant, Tier::GnIrrotational, Tier::GnConstVort1d, Tier::GnGeneral1d,
                    Tier::GnGeneral2d}) {
    CAPTURE(tier_name(tier));
    const bool two = tier == Tier::GnGeneral2d;
    std::vector<double> errs, rates;
    for (int n : two ? std::vector<int>{32, 64, 128} : std::vector<int>{64, 128, 256}) {
      const Grid g = two ? Grid::plane(n, n, kTwoPi, kTwoPi) : Grid::line(n, kTwoPi);
      const Bathymetry bathy{sample(g, [](double x, double y) { return 0.5 * std::cos(x + y); })};
      ModelState s = smooth_state(tier, g, Field(g, 1.0));
      s = smooth_state(tier, g, derive_depth(s, bathy, sc));
      const Tendency t = compute_rhs(s, bathy, sc);
      const double d = 1e-5;
      const EnergyReport p = energy_report(advance(s, t, d), bathy, sc);
      const EnergyReport m = energy_report(advance(s, t, -d), bathy, sc);
      const Field dt_e = (1.0 / (2 * d)) * ((p.e_p_density + p.e_k_density + p.e_rot_density) -
                                            (m.e_p_density + m.e_k_density + m.e_rot_density));
      const Field residual = dt_e + div(energy_flux(s, bathy, sc, t));
      errs.push_back(residual.max_abs());
      rates.push_back(std::abs(energy_rate(s, bathy, sc, t)));
    }
    CHECK(oracle::min_order(errs) >= 1.8);
    CHECK(rates.back() < rates.front());
  }
}

TEST_CASE("conservation monitor") {
  SUBCASE("linear mass growth") {
    ConservationTrace tr;
    tr = conservation_monitor(tr, sample_at(0.0, 1.0, 2.0));
    tr = conservation_monitor(tr, sample_at(0.5, 1.5, 2.0));
    tr = conservation_monitor(tr, sample_at(1.0, 2.0, 2.0));
    CHECK(tr.mass_drift[0] == 0.0);
    CHECK(tr.mass_drift[2] == doctest::Approx(1.0));
    CHECK(tr.max_mass_drift() == doctest::Approx(1.0));
    CHECK(tr.max_energy_drift() == 0.0);
  }
  SUBCASE("zero reference uses the floor") {
    ConservationTrace tr;
    tr = conservation_monitor(tr, sample_at(0.0, 0.0, 1.0));
    tr = conservation_monitor(tr, sample_at(1.0, 1e-16, 1.0));
    CHECK(tr.mass_drift[1] == doctest::Approx(1e-2));
  }
  SUBCASE("time must increase") {
    ConservationTrace tr = conservation_monitor({}, sample_at(1.0, 1.0, 1.0));
    CHECK_THROWS_AS(conservation_monitor(tr, sample_at(1.0, 1.0, 1.0)), NonMonotoneTime);
    CHECK_THROWS_AS(conservation_monitor(tr, sample_at(0.5, 1.0, 1.0)), NonMonotoneTime);
  }
  SUBCASE("make_sample mirrors the report") {
    const Grid g = Grid::line(32, kTwoPi);
    ModelState s = smooth_state(Tier::GnIrrotational, g, Field(g, 1.0));
    s.t = 0.25;
    const ScaleParams sc = scales(0.2, 0, 0.04);
    const ConservationSample x = make_sample(s, Bathymetry::flat(g), sc);
    const EnergyReport r = energy_report(s, Bathymetry::flat(g), sc);
    CHECK(x.t == 0.25);
    CHECK(x.energy_total == r.energy_total);
    CHECK(x.max_surface == s.zeta.max_abs());
  }
}

TEST_CASE("mass drift over a run stays at round-off") {
  const Grid g = Grid::line(128, 20.0);
  const ScaleParams sc = scales(0.2, 0.1, 0.04);
  const Bathymetry bathy{sample(g, [](double x, double) { return std::sin(2 * M_PI * x / 20); })};
  ModelState s = ModelState::zeros(Tier::GnIrrotational, g);
  s.zeta = sample(g, [](double x, double) { return 0.5 * std::exp(-(x - 10) * (x - 10) / 2); });
  ConservationTrace tr = conservation_monitor({}, make_sample(s, bathy, sc));
  StepSettings st;
  st.t_end = 1.0;
  integrate(s, bathy, sc, st, make_rhs(bathy, sc),
            [&](const ModelState& x, long) { tr = conservation_monitor(tr, make_sample(x, bathy, sc)); });
  CHECK(tr.max_mass_drift() <= 1e-12);
  CHECK(tr.samples.size() > 10);
}
