#include <doctest.h>

#include <random>
#include <vector>

#include "geosched/energy_model.hpp"
#include "geosched/errors.hpp"
#include "support.hpp"

using namespace geosched;
using testing::rel_close;

namespace {

SiteSpec site_with(int nodes, double tdp = 400.0) {
  SiteSpec s;
  s.site_id = "s";
  s.node_count = nodes;
  s.node.tdp_w = tdp;
  return s;
}

}  // namespace

TEST_SUITE("energy-model") {

TEST_CASE("node energy per working state") {
  NodeSpec node;
  WorkingStateProfile profile;
  CHECK(rel_close(node_energy_kwh(WorkingState::On, EpochDuration(1.0), node, profile), 0.4, 1e-9));
  CHECK(node_energy_kwh(WorkingState::Off, EpochDuration(3.0), node, profile) == 0.0);
  CHECK(rel_close(node_energy_kwh(WorkingState::Idle, EpochDuration(0.5), node, profile), 0.06,
                  1e-9));
  CHECK_THROWS_AS(EpochDuration(0.0), DomainError);
}

TEST_CASE("site IT energy sums node energies") {
  SiteSpec site = site_with(3);
  EpochDuration hour(1.0);
  std::vector<WorkingState> all_on(3, WorkingState::On);
  std::vector<WorkingState> all_off(3, WorkingState::Off);
  std::vector<WorkingState> mixed = {WorkingState::On, WorkingState::Idle, WorkingState::Off};
  CHECK(rel_close(site_it_energy_kwh(all_on, hour, site), 1.2, 1e-9));
  CHECK(site_it_energy_kwh(all_off, hour, site) == 0.0);
  CHECK(rel_close(site_it_energy_kwh(mixed, hour, site), 0.52, 1e-9));
  CHECK(rel_close(site_it_energy_kwh(NodeStateCounts{1, 1, 1}, hour, site), 0.52, 1e-9));

  std::vector<WorkingState> two(2, WorkingState::On);
  CHECK_THROWS_AS(site_it_energy_kwh(two, hour, site), ContractError);
  CHECK_THROWS_AS(site_it_energy_kwh(NodeStateCounts{2, 2, 0}, hour, site), ContractError);
}

TEST_CASE("cooling energy") {
  auto hot = cooling_energy(10.0, 10.0);
  CHECK(rel_close(hot.crac_kwh, 1.0, 1e-9));
  CHECK(rel_close(hot.total_kwh, 3.0, 1e-9));
  auto zero = cooling_energy(0.0, 10.0);
  CHECK(zero.crac_kwh == 0.0);
  CHECK(zero.total_kwh == 0.0);
  auto cold = cooling_energy(10.0, 60.0);
  CHECK(rel_close(cold.crac_kwh, 10.0 / 60.0, 1e-9));
  CHECK(rel_close(cold.crac_kwh, 0.1666667, 1e-6));
  CHECK(rel_close(cold.total_kwh, 0.5, 1e-9));
  CHECK(cold.total_kwh == 3.0 * cold.crac_kwh);
  CHECK_THROWS_AS(cooling_energy(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(cooling_energy(1.0, -2.0), DomainError);
}

TEST_CASE("conditioning and total energy") {
  CHECK(rel_close(conditioning_energy(10.0), 1.3, 1e-9));
  CHECK(conditioning_energy(0.0) == 0.0);
  CHECK(rel_close(conditioning_energy(0.52), 0.0676, 1e-9));
  CHECK(rel_close(total_energy(10.0, 3.0, 1.3), 14.3, 1e-9));
  CHECK(total_energy(0.0, 0.0, 0.0) == 0.0);
  CHECK(rel_close(total_energy(10.0, 0.5, 1.3), 11.8, 1e-9));
}

TEST_CASE("energy cost") {
  auto one = site_energy("a", 0, 10.0, 10.0);
  CHECK(rel_close(one.e_total, 14.3, 1e-9));
  EnvironmentSample ea{"a", 0, 35.0, 0.30};
  std::vector<SiteEnergyBreakdown> b1 = {one};
  std::vector<EnvironmentSample> e1 = {ea};
  CHECK(rel_close(energy_cost(b1, e1), 4.29, 1e-9));

  auto two = site_energy("b", 0, 10.0, 60.0);
  CHECK(rel_close(two.e_total, 11.8, 1e-9));
  EnvironmentSample eb{"b", 0, -3.9, 0.10};
  std::vector<SiteEnergyBreakdown> b2 = {one, two};
  std::vector<EnvironmentSample> e2 = {eb, ea};  // matched by site, not position
  CHECK(rel_close(energy_cost(b2, e2), 5.47, 1e-9));

  CHECK(energy_cost({}, {}) == 0.0);
  std::vector<EnvironmentSample> wrong = {EnvironmentSample{"z", 0, 20.0, 0.3}};
  CHECK_THROWS_AS(energy_cost(b1, wrong), ContractError);
  CHECK_THROWS_AS(energy_cost(b2, e1), ContractError);
}

TEST_CASE("accounting identity over random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e_it(0.0, 5000.0), cop(0.5, 80.0);
  for (int k = 0; k < 1000; ++k) {
    double e = e_it(rng), c = cop(rng);
    auto b = site_energy("s", 0, e, c);
    CHECK(rel_close(b.e_total, e * (1.13 + 3.0 / c), 1e-9));
    CHECK(rel_close(b.e_total, b.e_it + b.e_cooling + b.e_conditioning, 1e-9));
    CHECK(b.e_cooling == 3.0 * b.e_crac);
  }
}

TEST_CASE("energy and cost scale with node TDP") {
  EpochDuration hour(1.0);
  NodeStateCounts counts{3, 2, 1};
  SiteSpec base = site_with(6, 400.0);
  SiteSpec scaled = site_with(6, 400.0 * 2.5);
  auto b0 = site_energy("s", 0, site_it_energy_kwh(counts, hour, base), 17.0);
  auto b1 = site_energy("s", 0, site_it_energy_kwh(counts, hour, scaled), 17.0);
  CHECK(rel_close(b1.e_it, 2.5 * b0.e_it, 1e-9));
  CHECK(rel_close(b1.e_crac, 2.5 * b0.e_crac, 1e-9));
  CHECK(rel_close(b1.e_cooling, 2.5 * b0.e_cooling, 1e-9));
  CHECK(rel_close(b1.e_conditioning, 2.5 * b0.e_conditioning, 1e-9));
  CHECK(rel_close(b1.e_total, 2.5 * b0.e_total, 1e-9));
  EnvironmentSample env{"s", 0, 20.0, 0.31};
  std::vector<SiteEnergyBreakdown> v0 = {b0}, v1 = {b1};
  std::vector<EnvironmentSample> ev = {env};
  CHECK(rel_close(energy_cost(v1, ev), 2.5 * energy_cost(v0, ev), 1e-9));
}

TEST_CASE("colder ambient never raises total energy") {
  CopCurve curve = CopCurve::standard();
  double prev = site_energy("s", 0, 100.0, cop_at(curve, 45.0)).e_total;
  for (double t = 45.0; t >= -15.0; t -= 0.25) {
    double e = site_energy("s", 0, 100.0, cop_at(curve, t)).e_total;
    CHECK(e <= prev);
    prev = e;
  }
}

}  // TEST_SUITE
