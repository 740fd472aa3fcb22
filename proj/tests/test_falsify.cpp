#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "planar/falsify.hpp"
#include "planar/parser.hpp"

using namespace planar;

namespace {

PlanarMap map_of(const std::string& name) { return PlanarMap::from_spec(fixture(name)); }

}  // namespace

TEST_CASE("exponential map has a period 2 pi collision") {
  const auto r = search_collision(map_of("exp_spiral"));
  REQUIRE(r.witness);
  const auto& w = *r.witness;
  CHECK(w.residual < 1e-8);
  CHECK(w.separation > 1.0);
  CHECK(std::fabs((w.q.x - w.p.x) - 2 * std::numbers::pi) < 1e-6);
  CHECK(std::fabs(w.q.y - w.p.y) < 1e-9);
  CHECK(r.evaluations <= 100000u);
  CHECK(validate_witness(map_of("exp_spiral"), w, 1e-2, 1e-8));
}

TEST_CASE("fold collides across the y axis") {
  const auto r = search_collision(map_of("fold"));
  REQUIRE(r.witness);
  CHECK(std::fabs(r.witness->p.x + r.witness->q.x) < 1e-6);
  CHECK(validate_witness(map_of("fold"), *r.witness, 1e-2, 1e-8));
}

TEST_CASE("injective maps yield no witness") {
  FalsifyOptions opts;
  opts.budget = 1'000'000;
  for (const char* name : {"identity", "square_trace", "shear"}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      opts.seed = seed;
      const auto r = search_collision(map_of(name), opts);
      INFO(name << " seed " << seed);
      CHECK_FALSE(r.witness);
      CHECK(r.evaluations <= opts.budget);
    }
  }
}

TEST_CASE("search is deterministic and thread independent") {
  FalsifyOptions one;
  one.seed = 4;
  FalsifyOptions eight = one;
  eight.threads = 8;
  for (const char* name : {"exp_spiral", "fold", "honesty"}) {
    const auto a = search_collision(map_of(name), one);
    const auto b = search_collision(map_of(name), one);
    const auto c = search_collision(map_of(name), eight);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.evaluations == c.evaluations);
    CHECK(a.starts == c.starts);
    REQUIRE(a.witness.has_value() == c.witness.has_value());
    if (a.witness) {
      CHECK(a.witness->p.x == c.witness->p.x);
      CHECK(a.witness->p.y == c.witness->p.y);
      CHECK(a.witness->q.x == c.witness->q.x);
      CHECK(a.witness->q.y == c.witness->q.y);
      CHECK(a.witness->start == c.witness->start);
    }
  }
}

TEST_CASE("budget is respected") {
  FalsifyOptions opts;
  opts.budget = 5000;
  const auto r = search_collision(map_of("honesty"), opts);
  CHECK(r.evaluations <= 5000u);
  CHECK(r.starts > 0);
}

TEST_CASE("validate_witness re-evaluates the map") {
  const auto exp = map_of("exp_spiral");
  CollisionWitness w;
  w.p = {0.0, 0.0};
  w.q = {2 * std::numbers::pi, 0.0};
  CHECK(validate_witness(exp, w, 1e-2, 1e-8));
  w.q = {3.0, 0.0};
  CHECK_FALSE(validate_witness(exp, w, 1e-2, 1e-8));
  w.q = {1e-3, 0.0};
  CHECK_FALSE(validate_witness(exp, w, 1e-2, 1e-8));
  CHECK_FALSE(validate_witness(map_of("identity"), {{0, 0}, {1, 1}}, 1e-2, 1e-8));
}
