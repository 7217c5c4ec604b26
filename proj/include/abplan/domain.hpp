#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "abplan/model.hpp"

namespace abplan {

inline constexpr double kDeg2Rad = std::numbers::pi / 180.0;

struct Vec2 {
  double x = 0, y = 0;
};

enum class Material : uint8_t { Ice, Wood, Stone };

Material material_from_string(std::string_view s);  // InputError on unknown
std::string_view to_string(Material m);

struct MaterialProps {
  double density;            // mass per unit area
  double life_per_area;
  double stability_coeff;
  double reflect_damper;     // velocity scale on a stable bounce
  double penetration_damper; // velocity scale when punching through
};

// Behavioral constants the source material never publishes; only the
// ice < wood < stone orderings are load-bearing.
struct MaterialTable {
  MaterialProps ice{1.0, 50.0, 5.0, 0.6, 0.5};
  MaterialProps wood{2.0, 150.0, 10.0, 0.6, 0.5};
  MaterialProps stone{4.0, 400.0, 20.0, 0.6, 0.5};
  double tnt_radius = 2.0;            // blast reach, center to center
  double fall_damage_per_meter = 20.0;
  double ground_clearance = 1.0;      // y assigned by a ground bounce
  double bird_radius = 0.5;
  double support_tolerance = 0.1;     // edge-contact tolerance for the support relation

  const MaterialProps& props(Material m) const;
  void validate() const;  // ModelError unless ice < wood < stone in life and stability
};

struct BlockAttributes {
  double mass, life, stability;
};

// mass = density*w*h, life = life_per_area*w*h,
// stability = coeff*mass*w / (1 + base_height).
BlockAttributes block_attributes(double width, double height, Material material,
                                 double base_height, const MaterialTable& table);

// Post-collision bird velocity for an elastic two-body impact (the pig side is
// discarded; pigs die on contact). DomainError on coincident centers.
Vec2 elastic_bird_velocity(Vec2 vb, Vec2 vp, Vec2 xb, Vec2 xp, double mb, double mp);

struct BirdSpec {
  std::string type = "red";
  double mass = 1.0;
};

struct PigSpec {
  double x = 0, y = 0;
  double radius = 0.3;
  double mass = 1.0;
};

struct BlockSpec {
  double x = 0, y = 0;          // center
  double width = 1, height = 1;
  Material material = Material::Wood;
  bool explosive = false;
};

struct PlatformSpec {
  double x = 0, y = 0;          // center
  double width = 1, height = 1;
};

struct Physics {
  double gravity = 9.8;        // m/s^2
  double launch_speed = 70.0;  // m/s, fixed at maximum for every shot
  double angle_rate = 10.0;    // deg/s
  double max_angle = 80.0;     // deg; must stay within the small-angle regime
  double ground_damper = 0.4;
  double scene_xmax = 1000.0;
};

// Declarative scene description. Bird launch order is list order (id = index).
struct Level {
  Vec2 slingshot{0, 1};
  std::vector<BirdSpec> birds;
  std::vector<PigSpec> pigs;
  std::vector<BlockSpec> blocks;
  std::vector<PlatformSpec> platforms;
  Physics physics;

  void validate() const;  // InputError on broken invariants
};

// Grounded fluent names, shared by the translator, the executor and tests.
namespace fluents {
std::string bird(int i, std::string_view field);
std::string pig(int i, std::string_view field);
std::string block(int i, std::string_view field);
std::string platform(int i, std::string_view field);
std::string hit_flag(int bird, int block);
}  // namespace fluents

std::string pa_twang_name(int bird);

// Ground a Level into the full hybrid problem: one pa-twang per bird, the
// angle and flight processes, and the complete event catalogue.
HybridProblem translate(const Level& level, const MaterialTable& table = {},
                        double dt = 0.05, int horizon = 1200);

// Single-bird episode: goal becomes pigs_killed >= 1 and only the active
// bird's launch action remains. Idempotent.
HybridProblem single_shot(const HybridProblem& problem);

// Drop every block fluent and every event/process touching one; platforms,
// pigs, ground and expiry mechanics are retained.
HybridProblem strip_blocks(const HybridProblem& problem);

// Static support relation used at translate time: B rests on A.
bool rect_supports(double ax, double ay, double aw, double ah,
                   double bx, double by, double bw, double bh, double tolerance);

}  // namespace abplan
