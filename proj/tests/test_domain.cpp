#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "abplan/domain.hpp"
#include "helpers.hpp"

using namespace abplan;
using abplan::test::basic_level;

TEST_SUITE_BEGIN("domain");

namespace {

int count_events(const HybridProblem& p, const std::string& needle) {
  return static_cast<int>(std::count_if(p.events.begin(), p.events.end(), [&](const EventDef& e) {
    return e.name.find(needle) != std::string::npos;
  }));
}

}  // namespace

TEST_CASE("translate: one bird, one pig, no blocks") {
  Level level = basic_level(1, {{20, 0.3, 0.3, 1.0}});
  HybridProblem p = translate(level);

  CHECK(p.actions.size() == 1);
  CHECK(p.actions[0].name == "pa-twang_bird0");
  CHECK(p.processes.size() == 2);

  CHECK(count_events(p, "collision_bird0_pig0") == 1);
  CHECK(count_events(p, "platform") == 0);
  CHECK(count_events(p, "collision_ground") == 1);
  CHECK(count_events(p, "out_of_scene") == 1);
  CHECK(count_events(p, "expire_bounced") == 1);
  CHECK(count_events(p, "load_bird") == 0);
  CHECK(p.events.size() == 4);

  CHECK(p.goal.str() == "(>= pigs_killed 1)");
}

TEST_CASE("translate: birds start at the slingshot") {
  Level level = basic_level(3, {{20, 0.3, 0.3, 1.0}});
  level.slingshot = {2.5, 1.5};
  HybridProblem p = translate(level);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.initial.numeric(fluents::bird(i, "x")) == 2.5);
    CHECK(p.initial.numeric(fluents::bird(i, "y")) == 1.5);
    CHECK(p.initial.numeric(fluents::bird(i, "id")) == i);
  }
  CHECK(p.initial.numeric("active_bird") == 0.0);
  CHECK(p.initial.numeric("birds_remaining") == 3.0);
  CHECK(count_events(p, "load_bird") == 2);
}

TEST_CASE("translate: block fluents carry the material attributes") {
  Level level = basic_level(1, {{20, 0.3, 0.3, 1.0}}, {{10, 1.5, 2, 3, Material::Stone, false}});
  HybridProblem p = translate(level);
  CHECK(p.initial.numeric(fluents::block(0, "mass")) == doctest::Approx(24.0));
  CHECK(p.initial.numeric(fluents::block(0, "life")) == doctest::Approx(2400.0));
  CHECK(p.initial.numeric(fluents::block(0, "stability")) == doctest::Approx(960.0));
  CHECK_FALSE(p.initial.boolean(fluents::block(0, "dead")));
}

TEST_CASE("translate: one TNT crate grounds one explosion event per neighbor") {
  Level level = basic_level(1, {{20, 0.3, 0.3, 1.0}},
                            {{10, 0.5, 1, 1, Material::Wood, true},
                             {12, 0.5, 1, 1, Material::Wood, false}});
  HybridProblem p = translate(level);
  CHECK(count_events(p, "tnt_contact") == 1);  // one bird, one crate
  CHECK(count_events(p, "tnt_block0_kills_pig") == 1);
  CHECK(count_events(p, "tnt_block0_destroys_block") == 1);
  // the plain block keeps the collision pair plus separation; the crate none
  CHECK(count_events(p, "collision_stable_bird0_block1") == 1);
  CHECK(count_events(p, "collision_unstable_bird0_block1") == 1);
  CHECK(count_events(p, "collision_stable_bird0_block0") == 0);
  CHECK(count_events(p, "separation") == 1);
}

TEST_CASE("translate: empty bird list and out-of-range max_angle are rejected") {
  Level level = basic_level(1, {{20, 0.3, 0.3, 1.0}});
  level.birds.clear();
  CHECK_THROWS_AS(translate(level), InputError);
  Level steep = basic_level(1, {{20, 0.3, 0.3, 1.0}});
  steep.physics.max_angle = 81.0;
  CHECK_THROWS_AS(translate(steep), InputError);
}

TEST_CASE("elastic collision: equal-mass head-on transfer stops the bird") {
  Vec2 v = elastic_bird_velocity({10, 0}, {0, 0}, {0, 0}, {1, 0}, 1.0, 1.0);
  CHECK(std::abs(v.x) < 1e-12);
  CHECK(std::abs(v.y) < 1e-12);
}

TEST_CASE("elastic collision: massless pig leaves the bird velocity unchanged") {
  Vec2 v = elastic_bird_velocity({12.5, -3.25}, {0, 0}, {4, 2}, {4.5, 1.5}, 1.0, 0.0);
  CHECK(v.x == 12.5);
  CHECK(v.y == -3.25);
}

TEST_CASE("elastic collision: diagonal center line, hand-evaluated") {
  // vb=(10,0), equal masses, xb-xp=(1,1): v' = (10,0) - (10/2)*(1,1) = (5,-5)
  Vec2 v = elastic_bird_velocity({10, 0}, {0, 0}, {1, 1}, {0, 0}, 1.0, 1.0);
  CHECK(v.x == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(-5.0).epsilon(1e-15));
}

TEST_CASE("elastic collision: coincident centers are degenerate") {
  CHECK_THROWS_AS(elastic_bird_velocity({1, 0}, {0, 0}, {2, 2}, {2, 2}, 1.0, 1.0), DomainError);
}

TEST_CASE("block_attributes: material orderings and the height penalty") {
  MaterialTable table;
  BlockAttributes ice = block_attributes(2, 1, Material::Ice, 0, table);
  BlockAttributes wood = block_attributes(2, 1, Material::Wood, 0, table);
  BlockAttributes stone = block_attributes(2, 1, Material::Stone, 0, table);
  CHECK(ice.mass < wood.mass);
  CHECK(wood.mass < stone.mass);
  CHECK(ice.life < wood.life);
  CHECK(wood.life < stone.life);
  CHECK(ice.stability < wood.stability);
  CHECK(wood.stability < stone.stability);

  BlockAttributes low = block_attributes(2, 1, Material::Wood, 1, table);
  BlockAttributes high = block_attributes(2, 1, Material::Wood, 2, table);
  CHECK(high.stability < low.stability);
  CHECK(high.mass == low.mass);
  CHECK(high.life == low.life);

  CHECK_THROWS_AS(block_attributes(0, 1, Material::Ice, 0, table), DomainError);
}

TEST_CASE("single_shot: one action remains and the goal relaxes to one pig") {
  Level level = basic_level(3, {{20, 0.3, 0.3, 1.0}, {25, 0.3, 0.3, 1.0}});
  HybridProblem full = translate(level);
  CHECK(full.actions.size() == 3);
  CHECK(full.goal.str() == "(>= pigs_killed 2)");

  HybridProblem episode = single_shot(full);
  CHECK(episode.actions.size() == 1);
  CHECK(episode.actions[0].name == "pa-twang_bird0");
  CHECK(episode.goal.str() == "(>= pigs_killed 1)");
  CHECK(episode.events.size() == full.events.size());

  HybridProblem twice = single_shot(episode);
  CHECK(twice.actions.size() == 1);
  CHECK(twice.actions[0].name == episode.actions[0].name);
  CHECK(twice.goal.str() == episode.goal.str());
  CHECK(twice.schema->size() == episode.schema->size());
}

TEST_CASE("strip_blocks: blocks and their events vanish, the rest is untouched") {
  std::vector<BlockSpec> blocks;
  for (int i = 0; i < 10; ++i) {
    blocks.push_back({10.0 + i, 0.5, 1, 1, Material::Wood, i == 0});
  }
  Level level = basic_level(2, {{30, 0.3, 0.3, 1.0}}, blocks, {{15, 5, 3, 1}});
  HybridProblem full = translate(level);
  HybridProblem bare = strip_blocks(full);

  for (size_t i = 0; i < bare.schema->size(); ++i) {
    const std::string& name = bare.schema->decl(i).name;
    CHECK(name.rfind("block", 0) != 0);
    CHECK(name.find("_hit_block") == std::string::npos);
  }
  CHECK(count_events(bare, "tnt") == 0);
  CHECK(count_events(bare, "collision_stable") == 0);
  CHECK(count_events(bare, "collapse") == 0);
  CHECK(count_events(bare, "crush") == 0);
  CHECK(count_events(bare, "platform") == count_events(full, "platform"));
  CHECK(count_events(bare, "collision_ground") == 2);
  CHECK(count_events(bare, "load_bird") == 1);
  CHECK(bare.processes.size() == full.processes.size());
  CHECK(bare.goal.str() == full.goal.str());

  // nothing to strip: the problem comes back unchanged
  Level clean = basic_level(1, {{20, 0.3, 0.3, 1.0}});
  HybridProblem p = translate(clean);
  HybridProblem same = strip_blocks(p);
  CHECK(same.schema->size() == p.schema->size());
  CHECK(same.events.size() == p.events.size());
}

TEST_CASE("stable collision reflects the bird and opens a contact episode") {
  Level level = basic_level(1, {{30, 0.3, 0.3, 1.0}}, {{10, 1.5, 2, 3, Material::Stone, false}});
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 8.6);
  s.set(fluents::bird(0, "y"), 1.5);
  s.set(fluents::bird(0, "vx"), 10.0);

  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{"collision_stable_bird0_block0"});
  CHECK(r.state.numeric(fluents::bird(0, "vx")) == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(r.state.numeric(fluents::bird(0, "vy")) == 0.0);
  CHECK(r.state.numeric(fluents::bird(0, "bounce_count")) == 1.0);
  CHECK(r.state.boolean(fluents::hit_flag(0, 0)));
  CHECK(r.state.numeric(fluents::block(0, "life")) == doctest::Approx(2400.0));

  // once the bird drifts clear, the episode closes
  State away = r.state;
  away.set(fluents::bird(0, "x"), 5.0);
  EventResult r2 = fire_events(away, p.events);
  REQUIRE(r2.fired == std::vector<std::string>{"separation_bird0_block0"});
  CHECK_FALSE(r2.state.boolean(fluents::hit_flag(0, 0)));
}

TEST_CASE("unstable collision damages the block and damps the bird") {
  Level level = basic_level(1, {{30, 0.3, 0.3, 1.0}}, {{10, 0.45, 0.4, 0.9, Material::Ice, false}});
  HybridProblem p = translate(level);
  CHECK(p.initial.numeric(fluents::block(0, "life")) == doctest::Approx(18.0));
  CHECK(p.initial.numeric(fluents::block(0, "stability")) == doctest::Approx(0.72));

  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 9.4);
  s.set(fluents::bird(0, "y"), 0.5);
  s.set(fluents::bird(0, "vx"), 10.0);

  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{"collision_unstable_bird0_block0"});
  CHECK(r.state.numeric(fluents::block(0, "life")) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(r.state.numeric(fluents::bird(0, "vx")) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(r.state.numeric(fluents::bird(0, "bounce_count")) == 0.0);
  CHECK_FALSE(r.state.boolean(fluents::block(0, "dead")));
}

TEST_CASE("penetration kill chain: block death, collapse, crushed pig") {
  Level level = basic_level(1, {{10, 1.55, 0.25, 1.0}},
                            {{10, 0.45, 0.4, 0.9, Material::Ice, false},
                             {10, 1.1, 0.4, 0.4, Material::Ice, false}});
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 9.4);
  s.set(fluents::bird(0, "y"), 0.5);
  s.set(fluents::bird(0, "vx"), 20.0);

  // the collapsed upper block lands in the bird's path and is punched through
  // in the same cascade before it dies and crushes the pig
  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{
                         "collision_unstable_bird0_block0",
                         "block_death_block0",
                         "collapse_block1_after_block0",
                         "collision_unstable_bird0_block1",
                         "block_death_block1",
                         "crush_pig0_on_block1",
                     });
  CHECK(r.state.boolean(fluents::block(0, "dead")));
  CHECK(r.state.boolean(fluents::block(1, "dead")));
  CHECK(r.state.numeric(fluents::block(1, "stability")) == 0.0);
  CHECK(r.state.numeric(fluents::block(1, "y")) == doctest::Approx(0.2));
  // fall damage 8 - 20*(1.1 - 0.2) = -10, then the second punch-through: -20
  CHECK(r.state.numeric(fluents::block(1, "life")) == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(r.state.numeric(fluents::bird(0, "vx")) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_FALSE(r.state.boolean(fluents::pig(0, "alive")));
  CHECK(r.state.numeric("pigs_killed") == 1.0);
}

TEST_CASE("TNT chain: contact detonates, neighbors die, crates chain") {
  Level level = basic_level(1,
                            {{10.8, 0.3, 0.3, 1.0}, {30, 0.3, 0.3, 1.0}},
                            {{10, 0.5, 1, 1, Material::Wood, true},
                             {11.5, 0.5, 1, 1, Material::Wood, true},
                             {13, 0.5, 0.5, 1, Material::Wood, false}});
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 9.2);
  s.set(fluents::bird(0, "y"), 0.5);
  s.set(fluents::bird(0, "vx"), 10.0);

  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{
                         "tnt_contact_bird0_block0",
                         "tnt_block0_kills_pig0",
                         "tnt_block0_destroys_block1",
                         "tnt_block1_destroys_block2",
                     });
  CHECK(r.state.boolean(fluents::block(0, "dead")));
  CHECK(r.state.boolean(fluents::block(1, "dead")));
  CHECK(r.state.boolean(fluents::block(2, "dead")));
  CHECK_FALSE(r.state.boolean(fluents::pig(0, "alive")));
  CHECK(r.state.boolean(fluents::pig(1, "alive")));
  CHECK(r.state.numeric("pigs_killed") == 1.0);
}

TEST_CASE("platform contact nullifies the bird and expires it") {
  Level level = basic_level(1, {{30, 0.3, 0.3, 1.0}}, {}, {{10, 5, 4, 1}});
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 9.0);
  s.set(fluents::bird(0, "y"), 4.2);
  s.set(fluents::bird(0, "vx"), 5.0);
  s.set(fluents::bird(0, "vy"), 2.0);

  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{"collision_platform_bird0_platform0"});
  CHECK(r.state.numeric(fluents::bird(0, "vx")) == 0.0);
  CHECK(r.state.numeric(fluents::bird(0, "vy")) == 0.0);
  CHECK(r.state.boolean(fluents::bird(0, "expired")));
}

TEST_CASE("three bounces expire the bird and load the next one") {
  Level level = basic_level(2, {{30, 0.3, 0.3, 1.0}});
  level.slingshot = {1, 2};
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 12.0);
  s.set(fluents::bird(0, "y"), -0.1);
  s.set(fluents::bird(0, "vy"), -5.0);
  s.set(fluents::bird(0, "bounce_count"), 2.0);
  s.set("angle", 33.0);
  s.set("angle_adjusted", true);

  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{
                         "collision_ground_bird0",
                         "expire_bounced_bird0",
                         "load_bird1",
                     });
  CHECK(r.state.boolean(fluents::bird(0, "expired")));
  CHECK(r.state.numeric("active_bird") == 1.0);
  CHECK(r.state.numeric(fluents::bird(1, "x")) == 1.0);
  CHECK(r.state.numeric(fluents::bird(1, "y")) == 2.0);
  CHECK(r.state.numeric("angle") == 0.0);
  CHECK_FALSE(r.state.boolean("angle_adjusted"));
}

TEST_CASE("out-of-scene expiry") {
  Level level = basic_level(1, {{30, 0.3, 0.3, 1.0}});
  level.physics.scene_xmax = 100;
  HybridProblem p = translate(level);
  State s = p.initial;
  s.set(fluents::bird(0, "released"), true);
  s.set(fluents::bird(0, "x"), 100.5);
  s.set(fluents::bird(0, "y"), 3.0);
  EventResult r = fire_events(s, p.events);
  REQUIRE(r.fired == std::vector<std::string>{"out_of_scene_bird0"});
  CHECK(r.state.boolean(fluents::bird(0, "expired")));
}

TEST_CASE("events never increase the bird's kinetic energy") {
  std::mt19937_64 rng(7);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Level level = basic_level(
        1, {{uni(8, 14), 0.3, 0.3, uni(0.5, 2.0)}},
        {{uni(18, 24), uni(0.5, 2.0), uni(0.5, 2.0), uni(0.5, 2.0),
          trial % 2 ? Material::Ice : Material::Stone, false}},
        {{uni(28, 34), uni(2, 6), uni(1, 4), uni(0.5, 1.5)}});
    HybridProblem p = translate(level);
    State s = p.initial;
    s.set(fluents::bird(0, "released"), true);
    s.set(fluents::bird(0, "x"), uni(6, 34));
    s.set(fluents::bird(0, "y"), uni(-0.5, 6));
    s.set(fluents::bird(0, "vx"), uni(-25, 25));
    s.set(fluents::bird(0, "vy"), uni(-25, 25));

    const int x_i = p.schema->index_of(fluents::bird(0, "x"));
    const int vx_i = p.schema->index_of(fluents::bird(0, "vx"));
    const int vy_i = p.schema->index_of(fluents::bird(0, "vy"));
    REQUIRE(x_i >= 0);
    REQUIRE(vx_i >= 0);
    REQUIRE(vy_i >= 0);
    for (int step = 0; step < 10; ++step) {
      const double before = s.values[vx_i] * s.values[vx_i] + s.values[vy_i] * s.values[vy_i];
      EventResult r = fire_events(std::move(s), p.events);
      const double after =
          r.state.values[vx_i] * r.state.values[vx_i] + r.state.values[vy_i] * r.state.values[vy_i];
      CHECK(after <= before * (1.0 + 1e-12) + 1e-12);
      s = advance(std::move(r.state), p.processes, p.dt);
    }
  }
}

TEST_CASE("end state is independent of event declaration order") {
  // Objects are spaced in x and lifted off the ground so that no two
  // interactions are enabled at the same instant. Scenarios where
  // simultaneous enablement still occurs (e.g. a bounce landing exactly at a
  // block edge) are order ambiguities of the model; they are logged, never
  // silently accepted, and must stay rare.
  std::mt19937_64 rng(11);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  int ambiguous = 0;
  for (int scenario = 0; scenario < 100; ++scenario) {
    const double block_h = uni(0.6, 1.8);
    Level level = basic_level(
        1, {{uni(8, 12), uni(2, 4), 0.3, 1.0}},
        {{uni(17, 21), 1.2 + block_h / 2 + uni(0, 2), uni(0.6, 1.8), block_h,
          scenario % 2 ? Material::Ice : Material::Stone, false}},
        {{uni(27, 31), uni(4.5, 6), uni(1, 3), uni(0.5, 1.0)}});
    HybridProblem base = translate(level);
    const int release = static_cast<int>(uni(0, 100));

    auto replay = [&](const HybridProblem& p) {
      State s = p.initial;
      for (int t = 0; t < 260; ++t) {
        std::optional<std::string> decision;
        if (t == release) decision = "pa-twang_bird0";
        s = tick(std::move(s), p, decision).state;
      }
      return s;
    };
    const State reference = replay(base);

    bool differs = false;
    for (int perm = 0; perm < 3; ++perm) {
      HybridProblem shuffled = base;
      std::shuffle(shuffled.events.begin(), shuffled.events.end(), rng);
      if (!bit_equal(replay(shuffled), reference)) differs = true;
    }
    if (differs) {
      ++ambiguous;
      MESSAGE("model ambiguity: event order changed the outcome in scenario "
              << scenario << " (release tick " << release << ")");
    }
  }
  CHECK(ambiguous <= 5);
}

TEST_CASE("support relation: edge contact with x-overlap") {
  CHECK(rect_supports(0, 0.5, 2, 1, 0, 1.5, 1, 1, 0.1));          // directly atop
  CHECK(rect_supports(0, 0.5, 2, 1, 0.9, 1.5, 1, 1, 0.1));        // shifted but overlapping
  CHECK_FALSE(rect_supports(0, 0.5, 2, 1, 2.0, 1.5, 1, 1, 0.1));  // no x-overlap
  CHECK_FALSE(rect_supports(0, 0.5, 2, 1, 0, 2.5, 1, 1, 0.1));    // floating above
  CHECK(rect_supports(0, 0.5, 2, 1, 0, 1.55, 1, 1, 0.1));         // within tolerance
}

TEST_CASE("level validation rejects out-of-scope bird types") {
  Level level = basic_level(1, {{20, 0.3, 0.3, 1.0}});
  level.birds[0].type = "blue";
  CHECK_THROWS_AS(level.validate(), InputError);
}

TEST_SUITE_END();
