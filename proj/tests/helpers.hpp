#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "abplan/domain.hpp"
#include "abplan/model.hpp"

namespace abplan::test {

// schema/state pair for expression-level tests; every fluent dimensionless
inline State make_state(const std::vector<std::pair<std::string, double>>& numeric,
                        const std::vector<std::pair<std::string, bool>>& booleans = {}) {
  std::vector<FluentDecl> decls;
  std::vector<double> values;
  for (const auto& [name, v] : numeric) {
    decls.push_back({name, ValueKind::Numeric, Unit::Dimensionless});
    values.push_back(v);
  }
  for (const auto& [name, v] : booleans) {
    decls.push_back({name, ValueKind::Boolean, Unit::Dimensionless});
    values.push_back(v ? 1.0 : 0.0);
  }
  State s;
  s.schema = std::make_shared<const FluentSchema>(std::move(decls));
  s.values = std::move(values);
  return s;
}

inline Level basic_level(int birds, std::vector<PigSpec> pigs, std::vector<BlockSpec> blocks = {},
                         std::vector<PlatformSpec> platforms = {}, double launch_speed = 20.0) {
  Level level;
  level.slingshot = {0, 1};
  for (int i = 0; i < birds; ++i) level.birds.push_back({"red", 1.0});
  level.pigs = std::move(pigs);
  level.blocks = std::move(blocks);
  level.platforms = std::move(platforms);
  level.physics.launch_speed = launch_speed;
  return level;
}

}  // namespace abplan::test
