#include "abplan/level_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace abplan {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// strict object reader: every consumed key is recorded, leftovers are rejected
struct ObjectReader {
  const json& obj;
  std::string path;
  std::vector<std::string> seen;

  ObjectReader(const json& j, std::string p) : obj(j), path(std::move(p)) {
    if (!obj.is_object()) fail(path, "expected an object");
  }

  const json* find(const std::string& key) {
    seen.push_back(key);
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* j = find(key);
    if (!j) fail(path + "." + key, "missing required key");
    return *j;
  }

  double number(const std::string& key, double fallback) {
    const json* j = find(key);
    return j ? get_number(*j, path + "." + key) : fallback;
  }

  void finish() {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find(seen.begin(), seen.end(), it.key()) == seen.end()) {
        fail(path + "." + it.key(), "unknown key");
      }
    }
  }
};

}  // namespace

Level parse_level(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("level document is not valid JSON: ") + e.what());
  }

  Level level;
  ObjectReader root(doc, "level");

  if (const json* j = root.find("slingshot")) {
    ObjectReader r(*j, "slingshot");
    level.slingshot.x = get_number(r.require("x"), "slingshot.x");
    level.slingshot.y = get_number(r.require("y"), "slingshot.y");
    r.finish();
  }

  {
    const json& birds = root.require("birds");
    if (!birds.is_array()) fail("birds", "expected an array");
    for (size_t i = 0; i < birds.size(); ++i) {
      const std::string path = "birds[" + std::to_string(i) + "]";
      ObjectReader r(birds[i], path);
      BirdSpec b;
      if (const json* t = r.find("type")) b.type = get_string(*t, path + ".type");
      b.mass = r.number("mass", 1.0);
      r.finish();
      level.birds.push_back(std::move(b));
    }
  }

  if (const json* pigs = root.find("pigs")) {
    if (!pigs->is_array()) fail("pigs", "expected an array");
    for (size_t i = 0; i < pigs->size(); ++i) {
      const std::string path = "pigs[" + std::to_string(i) + "]";
      ObjectReader r((*pigs)[i], path);
      PigSpec p;
      p.x = get_number(r.require("x"), path + ".x");
      p.y = get_number(r.require("y"), path + ".y");
      p.radius = r.number("radius", 0.3);
      p.mass = r.number("mass", 1.0);
      r.finish();
      level.pigs.push_back(p);
    }
  }

  if (const json* blocks = root.find("blocks")) {
    if (!blocks->is_array()) fail("blocks", "expected an array");
    for (size_t i = 0; i < blocks->size(); ++i) {
      const std::string path = "blocks[" + std::to_string(i) + "]";
      ObjectReader r((*blocks)[i], path);
      BlockSpec b;
      b.x = get_number(r.require("x"), path + ".x");
      b.y = get_number(r.require("y"), path + ".y");
      b.width = get_number(r.require("width"), path + ".width");
      b.height = get_number(r.require("height"), path + ".height");
      try {
        b.material = material_from_string(get_string(r.require("material"), path + ".material"));
      } catch (const InputError&) {
        fail(path + ".material", "unknown material");
      }
      if (const json* e = r.find("explosive")) b.explosive = get_bool(*e, path + ".explosive");
      r.finish();
      level.blocks.push_back(b);
    }
  }

  if (const json* platforms = root.find("platforms")) {
    if (!platforms->is_array()) fail("platforms", "expected an array");
    for (size_t i = 0; i < platforms->size(); ++i) {
      const std::string path = "platforms[" + std::to_string(i) + "]";
      ObjectReader r((*platforms)[i], path);
      PlatformSpec p;
      p.x = get_number(r.require("x"), path + ".x");
      p.y = get_number(r.require("y"), path + ".y");
      p.width = get_number(r.require("width"), path + ".width");
      p.height = get_number(r.require("height"), path + ".height");
      r.finish();
      level.platforms.push_back(p);
    }
  }

  if (const json* phys = root.find("physics")) {
    ObjectReader r(*phys, "physics");
    Physics& p = level.physics;
    p.gravity = r.number("gravity", p.gravity);
    p.launch_speed = r.number("launch_speed", p.launch_speed);
    p.angle_rate = r.number("angle_rate", p.angle_rate);
    p.max_angle = r.number("max_angle", p.max_angle);
    p.ground_damper = r.number("ground_damper", p.ground_damper);
    p.scene_xmax = r.number("scene_xmax", p.scene_xmax);
    r.finish();
  }

  root.finish();
  level.validate();
  return level;
}

Level parse_level_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open level file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_level(ss.str());
}

std::string serialize_level(const Level& level) {
  ordered_json doc;
  doc["slingshot"] = {{"x", level.slingshot.x}, {"y", level.slingshot.y}};
  doc["birds"] = ordered_json::array();
  for (const BirdSpec& b : level.birds) {
    doc["birds"].push_back({{"type", b.type}, {"mass", b.mass}});
  }
  doc["pigs"] = ordered_json::array();
  for (const PigSpec& p : level.pigs) {
    doc["pigs"].push_back({{"x", p.x}, {"y", p.y}, {"radius", p.radius}, {"mass", p.mass}});
  }
  doc["blocks"] = ordered_json::array();
  for (const BlockSpec& b : level.blocks) {
    doc["blocks"].push_back({{"x", b.x},
                             {"y", b.y},
                             {"width", b.width},
                             {"height", b.height},
                             {"material", std::string(to_string(b.material))},
                             {"explosive", b.explosive}});
  }
  doc["platforms"] = ordered_json::array();
  for (const PlatformSpec& p : level.platforms) {
    doc["platforms"].push_back(
        {{"x", p.x}, {"y", p.y}, {"width", p.width}, {"height", p.height}});
  }
  const Physics& ph = level.physics;
  doc["physics"] = {{"gravity", ph.gravity},       {"launch_speed", ph.launch_speed},
                    {"angle_rate", ph.angle_rate}, {"max_angle", ph.max_angle},
                    {"ground_damper", ph.ground_damper}, {"scene_xmax", ph.scene_xmax}};
  return doc.dump(2) + "\n";
}

void write_level_file(const std::filesystem::path& path, const Level& level) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write level file " + path.string());
  out << serialize_level(level);
}

std::string serialize_plan(const ShotDecision& shot, double dt) {
  std::string out = "stage=";
  out += to_string(shot.stage);
  out += " dt=";
  out += format_number(dt);
  out += "\n";
  for (const PlanStep& s : shot.steps) {
    out += "tick=" + std::to_string(s.tick) + " action=" + s.action + "\n";
  }
  return out;
}

ShotDecision parse_plan(const std::string& text, double* dt_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("plan: empty document");

  ShotDecision shot;
  {
    std::istringstream hs(line);
    std::string stage_tok, dt_tok;
    if (!(hs >> stage_tok >> dt_tok) || stage_tok.rfind("stage=", 0) != 0 ||
        dt_tok.rfind("dt=", 0) != 0) {
      throw InputError("plan: malformed header '" + line + "'");
    }
    shot.stage = stage_from_string(stage_tok.substr(6));
    try {
      const double dt = std::stod(dt_tok.substr(3));
      if (dt_out) *dt_out = dt;
    } catch (const std::exception&) {
      throw InputError("plan: malformed dt in header");
    }
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tick_tok, action_tok;
    if (!(ls >> tick_tok >> action_tok) || tick_tok.rfind("tick=", 0) != 0 ||
        action_tok.rfind("action=", 0) != 0) {
      throw InputError("plan line " + std::to_string(line_no) + ": malformed step");
    }
    PlanStep step;
    try {
      step.tick = std::stoi(tick_tok.substr(5));
    } catch (const std::exception&) {
      throw InputError("plan line " + std::to_string(line_no) + ": malformed tick");
    }
    step.action = action_tok.substr(7);
    shot.steps.push_back(std::move(step));
  }
  return shot;
}

void write_plan_file(const std::filesystem::path& path, const ShotDecision& shot, double dt) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write plan file " + path.string());
  out << serialize_plan(shot, dt);
}

ShotDecision parse_plan_file(const std::filesystem::path& path, double* dt_out) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open plan file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str(), dt_out);
}

namespace {

// portable uniform doubles (std::uniform_real_distribution is
// implementation-defined; levels must be reproducible everywhere)
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * canonical(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

Material random_material(std::mt19937_64& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0: return Material::Ice;
    case 1: return Material::Wood;
    default: return Material::Stone;
  }
}

}  // namespace

Level generate_level(uint64_t seed, const GenParams& params) {
  if (params.n_pigs < 1 || params.n_pigs > 20) {
    throw GenerationError("n_pigs must lie in [1, 20]");
  }
  if (params.n_blocks < 0 || params.n_blocks > 60) {
    throw GenerationError("n_blocks must lie in [0, 60]");
  }
  if (params.n_platforms < 0 || params.n_platforms > 20) {
    throw GenerationError("n_platforms must lie in [0, 20]");
  }
  if (params.n_birds < 1 || params.n_birds > 10) {
    throw GenerationError("n_birds must lie in [1, 10]");
  }
  if (!(params.structure_probability >= 0 && params.structure_probability <= 1)) {
    throw GenerationError("structure_probability must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0xd1b54a32d192ed03ull);
  Level level;
  level.slingshot = {0, 1};

  for (int i = 0; i < params.n_birds; ++i) level.birds.push_back({"red", 1.0});

  // pig slots spread over the reachable band, structures around some of them
  const double x_lo = 30, x_hi = 400;
  const double spread = (x_hi - x_lo) / params.n_pigs;
  int blocks_left = params.n_blocks;

  struct PigPlan {
    double x;
    bool structured;
  };
  std::vector<PigPlan> plans;
  for (int i = 0; i < params.n_pigs; ++i) {
    const double x = x_lo + spread * i + uniform(rng, 0.2, 0.8) * spread;
    const bool structured =
        blocks_left > 0 && canonical(rng) < params.structure_probability;
    plans.push_back({x, structured});
  }

  const int structured_count =
      static_cast<int>(std::count_if(plans.begin(), plans.end(),
                                     [](const PigPlan& p) { return p.structured; }));
  for (const PigPlan& plan : plans) {
    PigSpec pig;
    pig.radius = uniform(rng, 0.25, 0.45);
    pig.mass = uniform(rng, 0.5, 1.5);
    pig.x = plan.x;
    if (!plan.structured) {
      pig.y = pig.radius;  // exposed, on the ground
      level.pigs.push_back(pig);
      continue;
    }
    int budget = std::max(1, blocks_left / std::max(1, structured_count));
    budget = std::min({budget, blocks_left, 3});
    blocks_left -= budget;
    if (canonical(rng) < 0.5) {
      // pig atop a stack
      double top = 0;
      for (int b = 0; b < budget; ++b) {
        BlockSpec blk;
        blk.width = uniform(rng, 1.2, 2.5);
        blk.height = uniform(rng, 0.8, 1.5);
        blk.material = random_material(rng);
        blk.x = plan.x;
        blk.y = top + blk.height / 2;
        top += blk.height;
        level.blocks.push_back(blk);
      }
      pig.y = top + pig.radius;
    } else {
      // pig on the ground behind a wall column
      pig.y = pig.radius;
      const double wall_x = plan.x - uniform(rng, 2.0, 3.0);
      double top = 0;
      for (int b = 0; b < budget; ++b) {
        BlockSpec blk;
        blk.width = uniform(rng, 0.6, 1.2);
        blk.height = uniform(rng, 1.0, 2.0);
        blk.material = random_material(rng);
        blk.x = wall_x;
        blk.y = top + blk.height / 2;
        top += blk.height;
        level.blocks.push_back(blk);
      }
    }
    level.pigs.push_back(pig);
  }

  // leftover blocks become free-standing stacks between the pig slots
  double free_x = x_lo - 12;
  double top = 0;
  int in_stack = 0;
  while (blocks_left > 0) {
    if (in_stack == 0) {
      free_x += uniform(rng, 6, 10);
      top = 0;
    }
    BlockSpec blk;
    blk.width = uniform(rng, 0.8, 2.0);
    blk.height = uniform(rng, 0.8, 1.5);
    blk.material = random_material(rng);
    blk.x = free_x;
    blk.y = top + blk.height / 2;
    top += blk.height;
    level.blocks.push_back(blk);
    --blocks_left;
    in_stack = (in_stack + 1) % 3;
  }

  for (int p = 0; p < params.n_platforms; ++p) {
    PlatformSpec plat;
    plat.width = uniform(rng, 2.0, 5.0);
    plat.height = uniform(rng, 0.4, 1.0);
    plat.x = uniform(rng, 60, 380);
    plat.y = uniform(rng, 6, 14);
    level.platforms.push_back(plat);
  }

  level.validate();
  return level;
}

namespace {

std::string join_tags(const std::vector<StageTag>& tags) {
  std::string out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i) out += ";";
    out += to_string(tags[i]);
  }
  return out;
}

std::string join_ms(const std::vector<double>& ms) {
  std::string out;
  for (size_t i = 0; i < ms.size(); ++i) {
    if (i) out += ";";
    out += std::to_string(static_cast<long long>(std::llround(ms[i])));
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

BenchmarkSummary summarize(const std::vector<BenchmarkRow>& rows) {
  BenchmarkSummary s;
  s.levels = static_cast<int>(rows.size());
  double score_sum = 0;
  for (const BenchmarkRow& r : rows) {
    if (r.solved) ++s.solved;
    score_sum += r.score;
    for (StageTag t : r.stage_tags) {
      switch (t) {
        case StageTag::Full: ++s.histogram.full; break;
        case StageTag::SingleShot: ++s.histogram.single_shot; break;
        case StageTag::SingleShotNoBlocks: ++s.histogram.single_shot_no_blocks; break;
        case StageTag::DefaultAction: ++s.histogram.default_action; break;
      }
    }
  }
  s.mean_score = rows.empty() ? 0 : score_sum / static_cast<double>(rows.size());
  return s;
}

BenchmarkResult run_benchmark(const std::vector<LevelEntry>& levels, const AgentConfig& config) {
  if (levels.empty()) throw InputError("benchmark: empty level set");
  BenchmarkResult res;
  for (const LevelEntry& entry : levels) {
    BenchmarkRow row;
    row.level_id = entry.id;
    try {
      AgentConfig cfg = config;
      cfg.record_trace = false;  // rows carry everything the harness needs
      AgentResult ar = agent_loop(entry.level, cfg);
      row.solved = ar.solved;
      row.score = ar.score.total;
      row.shots = static_cast<int>(ar.shots.size());
      for (const ShotRecord& s : ar.shots) {
        row.stage_tags.push_back(s.stage);
        row.plan_ms.push_back(s.plan_seconds * 1000.0);
        row.pigs_killed_per_shot.push_back(s.pigs_killed);
      }
    } catch (const Error& e) {
      row.error = e.what();
      row.solved = false;
      row.score = 0;
    }
    res.rows.push_back(std::move(row));
  }
  res.summary = summarize(res.rows);
  return res;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = kCsvHeader;
  out += "\n";
  for (const BenchmarkRow& r : rows) {
    out += r.level_id;
    out += ",";
    out += r.solved ? "true" : "false";
    out += ",";
    out += format_number(r.score);
    out += ",";
    out += std::to_string(r.shots);
    out += ",";
    out += join_tags(r.stage_tags);
    out += ",";
    out += join_ms(r.plan_ms);
    out += "\n";
  }
  return out;
}

std::vector<BenchmarkRow> parse_benchmark_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv: empty document");
  if (line != kCsvHeader) throw InputError("csv: unexpected header '" + line + "'");
  std::vector<BenchmarkRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 6) throw InputError("csv: expected 6 columns, got row '" + line + "'");
    BenchmarkRow r;
    r.level_id = cols[0];
    r.solved = cols[1] == "true";
    r.score = std::stod(cols[2]);
    r.shots = std::stoi(cols[3]);
    if (!cols[4].empty()) {
      for (const std::string& tag : split(cols[4], ';')) {
        r.stage_tags.push_back(stage_from_string(tag));
      }
    }
    if (!cols[5].empty()) {
      for (const std::string& ms : split(cols[5], ';')) r.plan_ms.push_back(std::stod(ms));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace abplan
