#include "abplan/domain.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace abplan {

Material material_from_string(std::string_view s) {
  if (s == "ice") return Material::Ice;
  if (s == "wood") return Material::Wood;
  if (s == "stone") return Material::Stone;
  throw InputError("unknown material '" + std::string(s) + "'");
}

std::string_view to_string(Material m) {
  switch (m) {
    case Material::Ice: return "ice";
    case Material::Wood: return "wood";
    case Material::Stone: return "stone";
  }
  return "?";
}

const MaterialProps& MaterialTable::props(Material m) const {
  switch (m) {
    case Material::Ice: return ice;
    case Material::Wood: return wood;
    case Material::Stone: return stone;
  }
  return wood;
}

void MaterialTable::validate() const {
  if (!(ice.life_per_area < wood.life_per_area && wood.life_per_area < stone.life_per_area)) {
    throw ModelError("material table: life must order ice < wood < stone");
  }
  if (!(ice.stability_coeff < wood.stability_coeff &&
        wood.stability_coeff < stone.stability_coeff)) {
    throw ModelError("material table: stability must order ice < wood < stone");
  }
  for (const MaterialProps* p : {&ice, &wood, &stone}) {
    if (!(p->density > 0) || !(p->life_per_area > 0) || !(p->stability_coeff > 0)) {
      throw ModelError("material table: nonpositive coefficient");
    }
    if (!(p->reflect_damper >= 0 && p->reflect_damper <= 1) ||
        !(p->penetration_damper >= 0 && p->penetration_damper <= 1)) {
      throw ModelError("material table: dampers must lie in [0, 1]");
    }
  }
  if (!(tnt_radius > 0) || !(bird_radius > 0) || !(support_tolerance > 0) ||
      !(fall_damage_per_meter >= 0) || !(ground_clearance >= 0)) {
    throw ModelError("material table: bad geometry constant");
  }
}

BlockAttributes block_attributes(double width, double height, Material material,
                                 double base_height, const MaterialTable& table) {
  if (!(width > 0) || !(height > 0)) {
    throw DomainError("block dimensions must be positive");
  }
  if (!(base_height >= 0)) throw DomainError("block base height must be nonnegative");
  const MaterialProps& p = table.props(material);
  BlockAttributes a;
  a.mass = p.density * width * height;
  a.life = p.life_per_area * width * height;
  a.stability = p.stability_coeff * a.mass * width / (1.0 + base_height);
  return a;
}

Vec2 elastic_bird_velocity(Vec2 vb, Vec2 vp, Vec2 xb, Vec2 xp, double mb, double mp) {
  const double dx = xb.x - xp.x;
  const double dy = xb.y - xp.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 == 0.0) throw DomainError("elastic collision with coincident centers");
  const double rel_dot = (vb.x - vp.x) * dx + (vb.y - vp.y) * dy;
  const double scale = (2.0 * mp / (mb + mp)) * (rel_dot / d2);
  return {vb.x - scale * dx, vb.y - scale * dy};
}

void Level::validate() const {
  if (birds.empty()) throw InputError("birds: list is empty");
  for (size_t i = 0; i < birds.size(); ++i) {
    if (birds[i].type != "red") {
      throw InputError("birds[" + std::to_string(i) + "].type: only 'red' is supported");
    }
    if (!(birds[i].mass > 0)) throw InputError("birds[" + std::to_string(i) + "].mass: must be positive");
  }
  for (size_t i = 0; i < pigs.size(); ++i) {
    const std::string at = "pigs[" + std::to_string(i) + "]";
    if (!(pigs[i].radius > 0)) throw InputError(at + ".radius: must be positive");
    if (!(pigs[i].mass > 0)) throw InputError(at + ".mass: must be positive");
    if (!(pigs[i].y >= 0)) throw InputError(at + ".y: below ground");
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string at = "blocks[" + std::to_string(i) + "]";
    if (!(blocks[i].width > 0) || !(blocks[i].height > 0)) {
      throw InputError(at + ": dimensions must be positive");
    }
    if (!(blocks[i].y >= 0)) throw InputError(at + ".y: below ground");
  }
  for (size_t i = 0; i < platforms.size(); ++i) {
    if (!(platforms[i].width > 0) || !(platforms[i].height > 0)) {
      throw InputError("platforms[" + std::to_string(i) + "]: dimensions must be positive");
    }
  }
  if (!(slingshot.y >= 0)) throw InputError("slingshot.y: below ground");
  if (!(physics.gravity > 0)) throw InputError("physics.gravity: must be positive");
  if (!(physics.launch_speed > 0)) throw InputError("physics.launch_speed: must be positive");
  if (!(physics.angle_rate > 0)) throw InputError("physics.angle_rate: must be positive");
  if (!(physics.max_angle > 0 && physics.max_angle <= 80.0)) {
    throw InputError("physics.max_angle: must lie in (0, 80] degrees");
  }
  if (!(physics.ground_damper >= 0 && physics.ground_damper <= 1)) {
    throw InputError("physics.ground_damper: must lie in [0, 1]");
  }
  if (!(physics.scene_xmax > slingshot.x)) {
    throw InputError("physics.scene_xmax: must lie beyond the slingshot");
  }
}

namespace fluents {
static std::string obj(const char* prefix, int i, std::string_view field) {
  std::string s = prefix;
  s += std::to_string(i);
  s += '_';
  s += field;
  return s;
}
std::string bird(int i, std::string_view field) { return obj("bird", i, field); }
std::string pig(int i, std::string_view field) { return obj("pig", i, field); }
std::string block(int i, std::string_view field) { return obj("block", i, field); }
std::string platform(int i, std::string_view field) { return obj("platform", i, field); }
std::string hit_flag(int bird, int block) {
  return "bird" + std::to_string(bird) + "_hit_block" + std::to_string(block);
}
}  // namespace fluents

std::string pa_twang_name(int bird) { return "pa-twang_bird" + std::to_string(bird); }

bool rect_supports(double ax, double ay, double aw, double ah, double bx, double by, double bw,
                   double bh, double tolerance) {
  const double a_top = ay + ah / 2;
  const double b_bottom = by - bh / 2;
  if (std::abs(b_bottom - a_top) > tolerance) return false;
  return bx - bw / 2 < ax + aw / 2 && ax - aw / 2 < bx + bw / 2;
}

namespace {

using fluents::bird;
using fluents::block;
using fluents::hit_flag;
using fluents::pig;
using fluents::platform;

Expr K(double v) { return Expr::num(v); }
Expr nf(std::string name) { return Expr::fluent(std::move(name)); }
Expr bf(std::string name) { return Expr::bool_fluent(std::move(name)); }

Expr conj_all(std::vector<Expr> parts) {
  Expr acc = std::move(parts.front());
  for (size_t i = 1; i < parts.size(); ++i) acc = Expr::conj(std::move(acc), std::move(parts[i]));
  return acc;
}

Expr disj_all(std::vector<Expr> parts) {
  Expr acc = std::move(parts.front());
  for (size_t i = 1; i < parts.size(); ++i) acc = Expr::disj(std::move(acc), std::move(parts[i]));
  return acc;
}

Expr sq(Expr e) { return Expr::mul(e, e); }

// squared distance between two points given as fluent-name pairs
Expr dist2(const std::string& x1, const std::string& y1, const std::string& x2,
           const std::string& y2) {
  return Expr::add(sq(Expr::sub(nf(x1), nf(x2))), sq(Expr::sub(nf(y1), nf(y2))));
}

// circle (bird) against circle (pig): contact when the center distance drops
// to the radius sum
Expr circle_overlap(int b, int p, double bird_radius) {
  return Expr::le(dist2(bird(b, "x"), bird(b, "y"), pig(p, "x"), pig(p, "y")),
                  sq(Expr::add(K(bird_radius), nf(pig(p, "radius")))));
}

struct RectFluents {
  std::string cx, cy, w, h;
};

Expr rect_left(const RectFluents& r) { return Expr::sub(nf(r.cx), Expr::mul(K(0.5), nf(r.w))); }
Expr rect_right(const RectFluents& r) { return Expr::add(nf(r.cx), Expr::mul(K(0.5), nf(r.w))); }
Expr rect_bottom(const RectFluents& r) { return Expr::sub(nf(r.cy), Expr::mul(K(0.5), nf(r.h))); }
Expr rect_top(const RectFluents& r) { return Expr::add(nf(r.cy), Expr::mul(K(0.5), nf(r.h))); }

// circle against axis-aligned rectangle, decomposed into interval comparisons:
// the x-expanded band, the y-expanded band, and the four corner circles
Expr circle_rect_overlap(int b, const RectFluents& r, double radius) {
  const std::string bx = bird(b, "x");
  const std::string by = bird(b, "y");
  Expr band_x = conj_all({
      Expr::ge(nf(bx), Expr::sub(rect_left(r), K(radius))),
      Expr::le(nf(bx), Expr::add(rect_right(r), K(radius))),
      Expr::ge(nf(by), rect_bottom(r)),
      Expr::le(nf(by), rect_top(r)),
  });
  Expr band_y = conj_all({
      Expr::ge(nf(bx), rect_left(r)),
      Expr::le(nf(bx), rect_right(r)),
      Expr::ge(nf(by), Expr::sub(rect_bottom(r), K(radius))),
      Expr::le(nf(by), Expr::add(rect_top(r), K(radius))),
  });
  auto corner = [&](Expr cx, Expr cy) {
    return Expr::le(Expr::add(sq(Expr::sub(nf(bx), std::move(cx))),
                              sq(Expr::sub(nf(by), std::move(cy)))),
                    K(radius * radius));
  };
  Expr corners = disj_all({
      corner(rect_left(r), rect_bottom(r)),
      corner(rect_right(r), rect_bottom(r)),
      corner(rect_left(r), rect_top(r)),
      corner(rect_right(r), rect_top(r)),
  });
  return disj_all({std::move(band_x), std::move(band_y), std::move(corners)});
}

// bird moving toward a target center (cx, cy)
Expr approaching(int b, Expr cx, Expr cy) {
  return Expr::gt(
      Expr::add(Expr::mul(nf(bird(b, "vx")), Expr::sub(std::move(cx), nf(bird(b, "x")))),
                Expr::mul(nf(bird(b, "vy")), Expr::sub(std::move(cy), nf(bird(b, "y"))))),
      K(0));
}

Expr active_is(int b) { return Expr::eq(nf("active_bird"), nf(bird(b, "id"))); }

Expr in_flight(int b) {
  return conj_all({active_is(b), bf(bird(b, "released")),
                   Expr::negation(bf(bird(b, "expired")))});
}

Expr speed2(int b) {
  return Expr::add(sq(nf(bird(b, "vx"))), sq(nf(bird(b, "vy"))));
}

}  // namespace

HybridProblem translate(const Level& level, const MaterialTable& table, double dt, int horizon) {
  level.validate();
  table.validate();
  if (level.birds.empty()) throw ModelError("translate: no birds");

  const int nb = static_cast<int>(level.birds.size());
  const int np = static_cast<int>(level.pigs.size());
  const int nk = static_cast<int>(level.blocks.size());
  const int npl = static_cast<int>(level.platforms.size());

  std::vector<FluentDecl> decls;
  std::vector<double> init;
  auto add_num = [&](std::string name, Unit unit, double v) {
    decls.push_back({std::move(name), ValueKind::Numeric, unit});
    init.push_back(v);
  };
  auto add_bool = [&](std::string name, bool v) {
    decls.push_back({std::move(name), ValueKind::Boolean, Unit::Dimensionless});
    init.push_back(v ? 1.0 : 0.0);
  };

  add_num("gravity", Unit::Dimensionless, level.physics.gravity);
  add_num("angle", Unit::Degrees, 0.0);
  add_num("angle_rate", Unit::Dimensionless, level.physics.angle_rate);
  add_num("max_angle", Unit::Degrees, level.physics.max_angle);
  add_num("ground_damper", Unit::Dimensionless, level.physics.ground_damper);
  add_num("scene_xmax", Unit::Meters, level.physics.scene_xmax);
  add_num("active_bird", Unit::Count, 0.0);
  add_bool("angle_adjusted", false);
  add_num("pigs_killed", Unit::Count, 0.0);
  add_num("birds_remaining", Unit::Count, static_cast<double>(nb));

  for (int i = 0; i < nb; ++i) {
    add_num(bird(i, "x"), Unit::Meters, level.slingshot.x);
    add_num(bird(i, "y"), Unit::Meters, level.slingshot.y);
    add_num(bird(i, "vx"), Unit::MetersPerSecond, 0.0);
    add_num(bird(i, "vy"), Unit::MetersPerSecond, 0.0);
    add_num(bird(i, "v"), Unit::MetersPerSecond, level.physics.launch_speed);
    add_num(bird(i, "mass"), Unit::Dimensionless, level.birds[i].mass);
    add_num(bird(i, "bounce_count"), Unit::Count, 0.0);
    add_num(bird(i, "id"), Unit::Count, static_cast<double>(i));
    add_bool(bird(i, "released"), false);
    add_bool(bird(i, "expired"), false);
  }
  for (int j = 0; j < np; ++j) {
    add_num(pig(j, "x"), Unit::Meters, level.pigs[j].x);
    add_num(pig(j, "y"), Unit::Meters, level.pigs[j].y);
    add_num(pig(j, "radius"), Unit::Meters, level.pigs[j].radius);
    add_num(pig(j, "mass"), Unit::Dimensionless, level.pigs[j].mass);
    add_bool(pig(j, "alive"), true);
  }
  for (int k = 0; k < nk; ++k) {
    const BlockSpec& b = level.blocks[k];
    const double base_height = b.y - b.height / 2;
    const BlockAttributes attrs =
        block_attributes(b.width, b.height, b.material, std::max(0.0, base_height), table);
    add_num(block(k, "x"), Unit::Meters, b.x);
    add_num(block(k, "y"), Unit::Meters, b.y);
    add_num(block(k, "width"), Unit::Meters, b.width);
    add_num(block(k, "height"), Unit::Meters, b.height);
    add_num(block(k, "mass"), Unit::Dimensionless, attrs.mass);
    add_num(block(k, "life"), Unit::Dimensionless, attrs.life);
    add_num(block(k, "stability"), Unit::Dimensionless, attrs.stability);
    add_bool(block(k, "explosive"), b.explosive);
    add_bool(block(k, "dead"), false);
  }
  for (int p = 0; p < npl; ++p) {
    add_num(platform(p, "x"), Unit::Meters, level.platforms[p].x);
    add_num(platform(p, "y"), Unit::Meters, level.platforms[p].y);
    add_num(platform(p, "width"), Unit::Meters, level.platforms[p].width);
    add_num(platform(p, "height"), Unit::Meters, level.platforms[p].height);
  }
  for (int i = 0; i < nb; ++i) {
    for (int k = 0; k < nk; ++k) {
      if (!level.blocks[k].explosive) add_bool(hit_flag(i, k), false);
    }
  }

  auto schema = std::make_shared<const FluentSchema>(std::move(decls));

  auto block_rect = [&](int k) {
    return RectFluents{block(k, "x"), block(k, "y"), block(k, "width"), block(k, "height")};
  };
  auto platform_rect = [&](int p) {
    return RectFluents{platform(p, "x"), platform(p, "y"), platform(p, "width"),
                       platform(p, "height")};
  };

  // actions: one launch per bird, velocity fixed at maximum
  std::vector<ActionDef> actions;
  for (int i = 0; i < nb; ++i) {
    ActionDef a;
    a.name = pa_twang_name(i);
    a.precondition = conj_all({active_is(i), Expr::negation(bf("angle_adjusted")),
                               Expr::negation(bf(bird(i, "released")))});
    a.effects.push_back(
        {bird(i, "vy"), -1, Expr::mul(nf(bird(i, "v")), Expr::approx_sin(nf("angle")))});
    a.effects.push_back(
        {bird(i, "vx"), -1,
         Expr::mul(nf(bird(i, "v")), Expr::approx_cos(Expr::mul(nf("angle"), K(kDeg2Rad))))});
    a.effects.push_back({bird(i, "released"), -1, Expr::boolean(true)});
    a.effects.push_back({"angle_adjusted", -1, Expr::boolean(true)});
    a.effects.push_back({"birds_remaining", -1, Expr::sub(nf("birds_remaining"), K(1))});
    actions.push_back(std::move(a));
  }

  // processes: angle sweep before launch, ballistic flight after
  std::vector<ProcessDef> processes;
  for (int i = 0; i < nb; ++i) {
    ProcessDef inc;
    inc.name = "increasing_angle_bird" + std::to_string(i);
    inc.condition = conj_all({Expr::negation(bf("angle_adjusted")), active_is(i),
                              Expr::negation(bf(bird(i, "released"))),
                              Expr::lt(nf("angle"), nf("max_angle")),
                              Expr::ge(nf("angle"), K(0))});
    inc.rates.push_back({"angle", -1, nf("angle_rate")});
    processes.push_back(std::move(inc));

    ProcessDef fly;
    fly.name = "flying_bird" + std::to_string(i);
    fly.condition = conj_all({bf(bird(i, "released")), active_is(i),
                              Expr::gt(nf(bird(i, "y")), K(0)),
                              Expr::negation(bf(bird(i, "expired")))});
    fly.rates.push_back({bird(i, "vy"), -1, Expr::neg(nf("gravity"))});
    fly.rates.push_back({bird(i, "y"), -1, nf(bird(i, "vy"))});
    fly.rates.push_back({bird(i, "x"), -1, nf(bird(i, "vx"))});
    processes.push_back(std::move(fly));
  }

  std::vector<EventDef> events;

  auto add_event = [&](std::string name, Expr pre, std::vector<Assignment> effects) {
    events.push_back({std::move(name), std::move(pre), std::move(effects)});
  };

  for (int i = 0; i < nb; ++i) {
    // (1) bird-pig collisions: pigs die on any contact, the bird deflects
    // elastically; coincident centers are excluded so the deflection formula
    // cannot divide by zero
    for (int j = 0; j < np; ++j) {
      Expr pre = conj_all({in_flight(i), bf(pig(j, "alive")),
                           circle_overlap(i, j, table.bird_radius),
                           Expr::gt(dist2(bird(i, "x"), bird(i, "y"), pig(j, "x"), pig(j, "y")),
                                    K(0))});
      auto dx = [&] { return Expr::sub(nf(bird(i, "x")), nf(pig(j, "x"))); };
      auto dy = [&] { return Expr::sub(nf(bird(i, "y")), nf(pig(j, "y"))); };
      auto scale = [&] {
        Expr k = Expr::div(Expr::mul(K(2), nf(pig(j, "mass"))),
                           Expr::add(nf(bird(i, "mass")), nf(pig(j, "mass"))));
        Expr dot = Expr::add(Expr::mul(nf(bird(i, "vx")), dx()),
                             Expr::mul(nf(bird(i, "vy")), dy()));
        Expr d2 = Expr::add(sq(dx()), sq(dy()));
        return Expr::mul(std::move(k), Expr::div(std::move(dot), std::move(d2)));
      };
      std::vector<Assignment> eff;
      eff.push_back({pig(j, "alive"), -1, Expr::boolean(false)});
      eff.push_back({"pigs_killed", -1, Expr::add(nf("pigs_killed"), K(1))});
      eff.push_back(
          {bird(i, "vx"), -1, Expr::sub(nf(bird(i, "vx")), Expr::mul(scale(), dx()))});
      eff.push_back(
          {bird(i, "vy"), -1, Expr::sub(nf(bird(i, "vy")), Expr::mul(scale(), dy()))});
      add_event("collision_bird" + std::to_string(i) + "_pig" + std::to_string(j),
                std::move(pre), std::move(eff));
    }

    // (2) bird-TNT contact: any impact sets the crate off
    for (int k = 0; k < nk; ++k) {
      if (!level.blocks[k].explosive) continue;
      Expr pre = conj_all({in_flight(i), bf(block(k, "explosive")),
                           Expr::negation(bf(block(k, "dead"))),
                           circle_rect_overlap(i, block_rect(k), table.bird_radius)});
      std::vector<Assignment> eff;
      eff.push_back({block(k, "dead"), -1, Expr::boolean(true)});
      add_event("tnt_contact_bird" + std::to_string(i) + "_block" + std::to_string(k),
                std::move(pre), std::move(eff));
    }

    if (i == 0) {
      // (2) the TNT explosion pair: destruction of nearby pigs and blocks
      for (int k = 0; k < nk; ++k) {
        if (!level.blocks[k].explosive) continue;
        for (int j = 0; j < np; ++j) {
          Expr pre = conj_all({bf(block(k, "explosive")), bf(block(k, "dead")),
                               bf(pig(j, "alive")),
                               Expr::le(dist2(block(k, "x"), block(k, "y"), pig(j, "x"),
                                              pig(j, "y")),
                                        K(table.tnt_radius * table.tnt_radius))});
          std::vector<Assignment> eff;
          eff.push_back({pig(j, "alive"), -1, Expr::boolean(false)});
          eff.push_back({"pigs_killed", -1, Expr::add(nf("pigs_killed"), K(1))});
          add_event("tnt_block" + std::to_string(k) + "_kills_pig" + std::to_string(j),
                    std::move(pre), std::move(eff));
        }
        for (int m = 0; m < nk; ++m) {
          if (m == k) continue;
          Expr pre = conj_all({bf(block(k, "explosive")), bf(block(k, "dead")),
                               Expr::negation(bf(block(m, "dead"))),
                               Expr::le(dist2(block(k, "x"), block(k, "y"), block(m, "x"),
                                              block(m, "y")),
                                        K(table.tnt_radius * table.tnt_radius))});
          std::vector<Assignment> eff;
          eff.push_back({block(m, "dead"), -1, Expr::boolean(true)});
          add_event("tnt_block" + std::to_string(k) + "_destroys_block" + std::to_string(m),
                    std::move(pre), std::move(eff));
        }
      }
    }

    // (3) bird-block collisions, stable and unstable variants; a per-pair
    // contact flag bounds each overlap episode to a single impact
    for (int k = 0; k < nk; ++k) {
      if (level.blocks[k].explosive) continue;
      const MaterialProps& mp = table.props(level.blocks[k].material);
      Expr common = conj_all({in_flight(i), Expr::negation(bf(block(k, "dead"))),
                              Expr::negation(bf(hit_flag(i, k))),
                              circle_rect_overlap(i, block_rect(k), table.bird_radius),
                              approaching(i, nf(block(k, "x")), nf(block(k, "y")))});
      Expr momentum2 = Expr::mul(sq(nf(bird(i, "mass"))), speed2(i));
      Expr stability2 = sq(nf(block(k, "stability")));

      // withstands the impact: reflect, damped
      {
        Expr pre = Expr::conj(common, Expr::le(momentum2, stability2));
        std::vector<Assignment> eff;
        eff.push_back(
            {bird(i, "vx"), -1, Expr::mul(K(-mp.reflect_damper), nf(bird(i, "vx")))});
        eff.push_back({bird(i, "vy"), -1, Expr::mul(K(mp.reflect_damper), nf(bird(i, "vy")))});
        eff.push_back(
            {bird(i, "bounce_count"), -1, Expr::add(nf(bird(i, "bounce_count")), K(1))});
        eff.push_back({hit_flag(i, k), -1, Expr::boolean(true)});
        add_event("collision_stable_bird" + std::to_string(i) + "_block" + std::to_string(k),
                  std::move(pre), std::move(eff));
      }
      // knocked through: the block absorbs the impact momentum, the bird
      // continues with diminished velocity
      {
        Expr pre = Expr::conj(common, Expr::gt(momentum2, stability2));
        std::vector<Assignment> eff;
        eff.push_back({block(k, "life"), -1,
                       Expr::sub(nf(block(k, "life")),
                                 Expr::mul(nf(bird(i, "mass")), Expr::sqrt(speed2(i))))});
        eff.push_back(
            {bird(i, "vx"), -1, Expr::mul(K(mp.penetration_damper), nf(bird(i, "vx")))});
        eff.push_back(
            {bird(i, "vy"), -1, Expr::mul(K(mp.penetration_damper), nf(bird(i, "vy")))});
        eff.push_back({hit_flag(i, k), -1, Expr::boolean(true)});
        add_event("collision_unstable_bird" + std::to_string(i) + "_block" + std::to_string(k),
                  std::move(pre), std::move(eff));
      }
      // contact episode ends once the overlap does
      {
        Expr pre = Expr::conj(
            bf(hit_flag(i, k)),
            Expr::negation(circle_rect_overlap(i, block_rect(k), table.bird_radius)));
        std::vector<Assignment> eff;
        eff.push_back({hit_flag(i, k), -1, Expr::boolean(false)});
        add_event("separation_bird" + std::to_string(i) + "_block" + std::to_string(k),
                  std::move(pre), std::move(eff));
      }
    }

    if (i == 0) {
      // (3b) a block whose life is exhausted dies
      for (int k = 0; k < nk; ++k) {
        Expr pre = Expr::conj(Expr::negation(bf(block(k, "dead"))),
                              Expr::le(nf(block(k, "life")), K(0)));
        std::vector<Assignment> eff;
        eff.push_back({block(k, "dead"), -1, Expr::boolean(true)});
        add_event("block_death_block" + std::to_string(k), std::move(pre), std::move(eff));
      }

      // (4) structure collapse: a supported block loses its supporter
      for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
          if (a == b) continue;
          const BlockSpec& A = level.blocks[a];
          const BlockSpec& B = level.blocks[b];
          if (!rect_supports(A.x, A.y, A.width, A.height, B.x, B.y, B.width, B.height,
                             table.support_tolerance)) {
            continue;
          }
          Expr pre = conj_all({Expr::negation(bf(block(b, "dead"))),
                               Expr::gt(nf(block(b, "stability")), K(0)),
                               Expr::disj(bf(block(a, "dead")),
                                          Expr::le(nf(block(a, "stability")), K(0)))});
          Expr drop = Expr::sub(nf(block(b, "y")), Expr::mul(K(0.5), nf(block(b, "height"))));
          std::vector<Assignment> eff;
          eff.push_back({block(b, "stability"), -1, K(0)});
          eff.push_back({block(b, "y"), -1, Expr::mul(K(0.5), nf(block(b, "height")))});
          eff.push_back({block(b, "life"), -1,
                         Expr::sub(nf(block(b, "life")),
                                   Expr::mul(K(table.fall_damage_per_meter), drop))});
          add_event("collapse_block" + std::to_string(b) + "_after_block" + std::to_string(a),
                    std::move(pre), std::move(eff));
        }
      }

      // (5) pigs sitting atop a collapsing or destroyed block are killed
      for (int k = 0; k < nk; ++k) {
        const BlockSpec& A = level.blocks[k];
        for (int j = 0; j < np; ++j) {
          const PigSpec& P = level.pigs[j];
          const double block_top = A.y + A.height / 2;
          const bool atop = std::abs((P.y - P.radius) - block_top) <= table.support_tolerance &&
                            std::abs(P.x - A.x) <= A.width / 2;
          if (!atop) continue;
          Expr pre = conj_all({bf(pig(j, "alive")),
                               Expr::disj(bf(block(k, "dead")),
                                          Expr::le(nf(block(k, "stability")), K(0)))});
          std::vector<Assignment> eff;
          eff.push_back({pig(j, "alive"), -1, Expr::boolean(false)});
          eff.push_back({"pigs_killed", -1, Expr::add(nf("pigs_killed"), K(1))});
          add_event("crush_pig" + std::to_string(j) + "_on_block" + std::to_string(k),
                    std::move(pre), std::move(eff));
        }
      }
    }

    // (6) platforms are indestructible: contact nullifies and expires the bird
    for (int p = 0; p < npl; ++p) {
      Expr pre = Expr::conj(in_flight(i),
                            circle_rect_overlap(i, platform_rect(p), table.bird_radius));
      std::vector<Assignment> eff;
      eff.push_back({bird(i, "vx"), -1, K(0)});
      eff.push_back({bird(i, "vy"), -1, K(0)});
      eff.push_back({bird(i, "expired"), -1, Expr::boolean(true)});
      add_event("collision_platform_bird" + std::to_string(i) + "_platform" + std::to_string(p),
                std::move(pre), std::move(eff));
    }

    // (7) ground bounce
    {
      Expr pre = Expr::conj(in_flight(i), Expr::le(nf(bird(i, "y")), K(0)));
      std::vector<Assignment> eff;
      eff.push_back({bird(i, "y"), -1, K(table.ground_clearance)});
      eff.push_back({bird(i, "vy"), -1,
                     Expr::mul(Expr::mul(nf(bird(i, "vy")), K(-1)), nf("ground_damper"))});
      eff.push_back({bird(i, "bounce_count"), -1, Expr::add(nf(bird(i, "bounce_count")), K(1))});
      add_event("collision_ground_bird" + std::to_string(i), std::move(pre), std::move(eff));
    }

    // (8) out of scene
    {
      Expr pre = Expr::conj(in_flight(i), Expr::gt(nf(bird(i, "x")), nf("scene_xmax")));
      std::vector<Assignment> eff;
      eff.push_back({bird(i, "expired"), -1, Expr::boolean(true)});
      add_event("out_of_scene_bird" + std::to_string(i), std::move(pre), std::move(eff));
    }

    // (9) three bounces exhaust a bird
    {
      Expr pre = Expr::conj(in_flight(i), Expr::ge(nf(bird(i, "bounce_count")), K(3)));
      std::vector<Assignment> eff;
      eff.push_back({bird(i, "expired"), -1, Expr::boolean(true)});
      add_event("expire_bounced_bird" + std::to_string(i), std::move(pre), std::move(eff));
    }

    // (10) the next bird is loaded onto the slingshot
    if (i + 1 < nb) {
      Expr pre = Expr::conj(active_is(i), bf(bird(i, "expired")));
      std::vector<Assignment> eff;
      eff.push_back({"active_bird", -1, K(static_cast<double>(i + 1))});
      eff.push_back({bird(i + 1, "x"), -1, K(level.slingshot.x)});
      eff.push_back({bird(i + 1, "y"), -1, K(level.slingshot.y)});
      eff.push_back({"angle", -1, K(0)});
      eff.push_back({"angle_adjusted", -1, Expr::boolean(false)});
      add_event("load_bird" + std::to_string(i + 1), std::move(pre), std::move(eff));
    }
  }

  Expr goal = Expr::ge(nf("pigs_killed"), K(static_cast<double>(np)));

  return HybridProblem::create(schema, std::move(init), std::move(actions), std::move(events),
                               std::move(processes), std::move(goal), dt, horizon);
}

HybridProblem single_shot(const HybridProblem& problem) {
  const int active = static_cast<int>(std::llround(problem.initial.numeric("active_bird")));
  const std::string keep = pa_twang_name(active);
  std::vector<ActionDef> actions;
  for (const ActionDef& a : problem.actions) {
    if (a.name == keep) actions.push_back(a);
  }
  Expr goal = Expr::ge(Expr::fluent("pigs_killed"), Expr::num(1));
  return HybridProblem::create(problem.schema, problem.initial.values, std::move(actions),
                               problem.events, problem.processes, std::move(goal), problem.dt,
                               problem.horizon);
}

namespace {

bool is_block_fluent(std::string_view name) {
  if (name.starts_with("block")) return true;
  return name.find("_hit_block") != std::string_view::npos;
}

bool mentions_block(const Expr& e) {
  std::vector<std::string> refs;
  e.collect_fluents(refs);
  return std::any_of(refs.begin(), refs.end(),
                     [](const std::string& n) { return is_block_fluent(n); });
}

bool mentions_block(const std::vector<Assignment>& effects) {
  return std::any_of(effects.begin(), effects.end(), [](const Assignment& a) {
    return is_block_fluent(a.fluent) || mentions_block(a.value);
  });
}

}  // namespace

HybridProblem strip_blocks(const HybridProblem& problem) {
  std::vector<FluentDecl> decls;
  std::vector<double> init;
  for (size_t i = 0; i < problem.schema->size(); ++i) {
    const FluentDecl& d = problem.schema->decl(i);
    if (is_block_fluent(d.name)) continue;
    decls.push_back(d);
    init.push_back(problem.initial.values[i]);
  }
  if (decls.size() == problem.schema->size()) return problem;  // nothing to strip

  auto schema = std::make_shared<const FluentSchema>(std::move(decls));

  std::vector<EventDef> events;
  for (const EventDef& e : problem.events) {
    if (mentions_block(e.precondition) || mentions_block(e.effects)) continue;
    events.push_back(e);
  }
  std::vector<ProcessDef> processes;
  for (const ProcessDef& p : problem.processes) {
    if (mentions_block(p.condition) || mentions_block(p.rates)) continue;
    processes.push_back(p);
  }
  return HybridProblem::create(schema, std::move(init), problem.actions, std::move(events),
                               std::move(processes), problem.goal, problem.dt, problem.horizon);
}

}  // namespace abplan
