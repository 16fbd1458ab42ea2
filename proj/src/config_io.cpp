#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ogd/errors.hpp"
#include "ogd/harness.hpp"

namespace ogd {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_field(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

std::optional<double> optional_number(const json& j, const std::string& key,
                                      const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, path + "." + key);
}

std::uint64_t unsigned_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    fail(path + "." + key, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string string_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Wraps enum-name parsers so that their errors carry the field path.
template <class F>
auto named(const json& j, const std::string& key, const std::string& path, F parse) {
  const std::string name = string_field(j, key, path);
  try {
    return parse(name);
  } catch (const InvalidArgument& e) {
    fail(path + "." + key, e.what());
  }
}

json to_json(const VarianceSchedule& s) {
  json j{{"kind", variance_kind_name(s.kind)}, {"c", s.c}};
  if (s.kind == VarianceKind::power) j["q"] = s.q;
  return j;
}

VarianceSchedule variance_from_json(const json& j, const std::string& path) {
  VarianceSchedule s;
  s.kind = named(j, "kind", path, parse_variance_kind);
  s.c = number_field(j, "c", path);
  if (s.kind == VarianceKind::power) s.q = number_field(j, "q", path);
  return s;
}

json to_json(const CheckSpec& c) {
  if (!c.bound && !c.t_min && !c.t_max && !c.ratio) return c.id;
  json j{{"id", c.id}};
  if (c.bound) j["max"] = *c.bound;
  if (c.t_min || c.t_max) j["window"] = {c.t_min.value_or(0.0), c.t_max.value_or(0.0)};
  if (c.ratio) j["ratio"] = *c.ratio;
  return j;
}

CheckSpec check_from_json(const json& j, const std::string& path) {
  CheckSpec c;
  if (j.is_string()) {
    c.id = j.get<std::string>();
    return c;
  }
  c.id = string_field(j, "id", path);
  c.bound = optional_number(j, "max", path);
  c.ratio = optional_number(j, "ratio", path);
  if (const auto it = j.find("window"); it != j.end()) {
    const auto w = number_array(*it, path + ".window");
    if (w.size() != 2) fail(path + ".window", "expected [t_min, t_max]");
    if (w[0] > 0.0) c.t_min = w[0];
    if (w[1] > 0.0) c.t_max = w[1];
  }
  return c;
}

std::vector<std::string> split_path(std::string_view dotted) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const auto dot = dotted.find('.', start);
    const auto end = dot == std::string_view::npos ? dotted.size() : dot;
    parts.emplace_back(dotted.substr(start, end - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

json* resolve(json& doc, std::string_view dotted) {
  json* node = &doc;
  for (const auto& part : split_path(dotted)) {
    if (part.empty()) return nullptr;
    if (node->is_object()) {
      const auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else if (node->is_array()) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), idx);
      if (ec != std::errc() || ptr != part.data() + part.size() || idx >= node->size()) {
        return nullptr;
      }
      node = &(*node)[idx];
    } else {
      return nullptr;
    }
  }
  return node;
}

}  // namespace

const std::vector<std::string>& known_check_ids() {
  static const std::vector<std::string> ids{
      "lemma1",          "tail_product",       "beta_stabilized",
      "step_size_nonincreasing", "no_divergence", "last_iterate_slope",
      "time_average_slope", "max_final_distance"};
  return ids;
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("config: trials: must be at least 1");
  try {
    validate(config.dynamics);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: dynamics: ") + e.what());
  }
  const auto& ids = known_check_ids();
  for (const auto& c : config.checks) {
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) {
      throw ConfigError("config: checks: unknown check id '" + c.id + "'");
    }
    const bool needs_bound = c.id == "last_iterate_slope" || c.id == "time_average_slope" ||
                             c.id == "max_final_distance";
    if (needs_bound && !c.bound) {
      throw ConfigError("config: checks: '" + c.id + "' needs a 'max' bound");
    }
    if (c.id == "lemma1" &&
        (!std::holds_alternative<ConstantStep>(config.dynamics.schedule) ||
         config.dynamics.noise.kind != NoiseKind::none)) {
      throw ConfigError(
          "config: checks: 'lemma1' needs a constant schedule without noise");
    }
    if (c.id == "beta_stabilized" &&
        !std::holds_alternative<AdaptiveStep>(config.dynamics.schedule)) {
      throw ConfigError("config: checks: 'beta_stabilized' needs the adaptive schedule");
    }
  }
}

json to_json(const GameSpec& spec) {
  json j{{"kind", game_kind_name(spec.kind)}};
  switch (spec.kind) {
    case GameKind::quadratic:
      j["matrix"] = spec.quadratic.matrix;
      j["offset"] = spec.quadratic.offset;
      if (!spec.quadratic.blocks.empty()) j["blocks"] = spec.quadratic.blocks;
      break;
    case GameKind::piecewise_scalar:
      break;
    case GameKind::random_cocoercive:
      j["dimension"] = spec.random.dimension;
      j["seed"] = spec.random.seed;
      j["conditioning_bound"] = spec.random.conditioning_bound;
      break;
  }
  return j;
}

GameSpec game_spec_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (const auto it = j.find("builtin"); it != j.end()) {
    if (!it->is_string()) fail(path + ".builtin", "expected a string");
    try {
      return builtin_game_spec(it->get<std::string>());
    } catch (const InvalidArgument& e) {
      fail(path + ".builtin", e.what());
    }
  }
  GameSpec spec;
  spec.kind = named(j, "kind", path, parse_game_kind);
  switch (spec.kind) {
    case GameKind::quadratic: {
      const json& m = field(j, "matrix", path);
      if (!m.is_array()) fail(path + ".matrix", "expected nested arrays (row-major)");
      for (std::size_t r = 0; r < m.size(); ++r) {
        spec.quadratic.matrix.push_back(
            number_array(m[r], path + ".matrix[" + std::to_string(r) + "]"));
      }
      spec.quadratic.offset = number_array(field(j, "offset", path), path + ".offset");
      if (const auto it = j.find("blocks"); it != j.end()) {
        for (double b : number_array(*it, path + ".blocks")) {
          if (b < 1.0 || b != std::floor(b)) fail(path + ".blocks", "expected positive integers");
          spec.quadratic.blocks.push_back(static_cast<std::size_t>(b));
        }
      }
      break;
    }
    case GameKind::piecewise_scalar:
      break;
    case GameKind::random_cocoercive:
      spec.random.dimension = unsigned_field(j, "dimension", path);
      spec.random.seed = unsigned_field(j, "seed", path);
      spec.random.conditioning_bound = number_field(j, "conditioning_bound", path);
      break;
  }
  return spec;
}

json to_json(const DynamicsConfig& c) {
  json schedule = std::visit(
      overloaded{
          [](const ConstantStep& s) { return json{{"kind", "constant"}, {"eta", s.eta}}; },
          [](const PowerStep& s) { return json{{"kind", "power"}, {"c", s.c}, {"p", s.p}}; },
          [](const AdaptiveStep& s) {
            return json{{"kind", "adaptive"}, {"beta1", s.beta1}, {"r", s.r}};
          },
          [](const AdaptiveNoisyStep& s) {
            return json{{"kind", "adaptive_noisy"}, {"beta", s.beta}};
          },
      },
      c.schedule);
  json noise{{"kind", noise_kind_name(c.noise.kind)}};
  if (c.noise.kind != NoiseKind::none) {
    noise["shape"] = noise_shape_name(c.noise.shape);
    noise["schedule"] = to_json(c.noise.schedule);
  }
  json j{{"schedule", schedule},
         {"noise", noise},
         {"horizon", c.horizon},
         {"x0", c.x0},
         {"thinning", c.thinning}};
  j["blow_up_radius"] = c.blow_up_radius ? json(*c.blow_up_radius) : json(nullptr);
  return j;
}

DynamicsConfig dynamics_from_json(const json& j, const std::string& path) {
  DynamicsConfig c;
  const json& s = field(j, "schedule", path);
  const std::string sp = path + ".schedule";
  const std::string kind = string_field(s, "kind", sp);
  if (kind == "constant") {
    c.schedule = ConstantStep{number_field(s, "eta", sp)};
  } else if (kind == "power") {
    c.schedule = PowerStep{number_field(s, "c", sp), number_field(s, "p", sp)};
  } else if (kind == "adaptive") {
    c.schedule = AdaptiveStep{number_field(s, "beta1", sp), number_field(s, "r", sp)};
  } else if (kind == "adaptive_noisy") {
    c.schedule = AdaptiveNoisyStep{number_field(s, "beta", sp)};
  } else {
    fail(sp + ".kind", "unknown schedule '" + kind + "'");
  }

  if (const auto it = j.find("noise"); it != j.end()) {
    const std::string np = path + ".noise";
    c.noise.kind = named(*it, "kind", np, parse_noise_kind);
    if (c.noise.kind != NoiseKind::none) {
      if (it->contains("shape")) c.noise.shape = named(*it, "shape", np, parse_noise_shape);
      c.noise.schedule = variance_from_json(field(*it, "schedule", np), np + ".schedule");
    }
  }
  c.horizon = unsigned_field(j, "horizon", path);
  c.x0 = number_array(field(j, "x0", path), path + ".x0");
  c.blow_up_radius = optional_number(j, "blow_up_radius", path);
  if (j.contains("thinning")) c.thinning = unsigned_field(j, "thinning", path);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json checks = json::array();
  for (const auto& chk : c.checks) checks.push_back(to_json(chk));
  return json{{"name", c.name},
              {"game", to_json(c.game)},
              {"dynamics", to_json(c.dynamics)},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"outputs", {{"dir", c.outputs.dir}, {"trajectories", c.outputs.trajectories}}},
              {"checks", checks}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail("<root>", "expected an object");
  ExperimentConfig c;
  if (j.contains("name")) c.name = string_field(j, "name", "<root>");
  c.game = game_spec_from_json(field(j, "game", "<root>"), "game");
  c.dynamics = dynamics_from_json(field(j, "dynamics", "<root>"), "dynamics");
  if (j.contains("trials")) c.trials = unsigned_field(j, "trials", "<root>");
  if (j.contains("master_seed")) c.master_seed = unsigned_field(j, "master_seed", "<root>");
  if (const auto it = j.find("outputs"); it != j.end()) {
    if (it->contains("dir")) c.outputs.dir = string_field(*it, "dir", "outputs");
    if (it->contains("trajectories")) {
      const json& t = (*it)["trajectories"];
      if (!t.is_boolean()) fail("outputs.trajectories", "expected a boolean");
      c.outputs.trajectories = t.get<bool>();
    }
  }
  if (const auto it = j.find("checks"); it != j.end()) {
    if (!it->is_array()) fail("checks", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      c.checks.push_back(check_from_json((*it)[k], "checks[" + std::to_string(k) + "]"));
    }
  }
  validate(c);
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
}

bool has_path(const json& doc, std::string_view dotted_path) {
  return resolve(const_cast<json&>(doc), dotted_path) != nullptr;
}

void apply_override(json& doc, std::string_view dotted_path, const json& value) {
  json* node = resolve(doc, dotted_path);
  if (!node) {
    throw ConfigError("config: override path '" + std::string(dotted_path) +
                      "' does not exist");
  }
  *node = value;
}

void apply_override(json& doc, std::string_view dotted_path, std::string_view value) {
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = std::string(value);
  apply_override(doc, dotted_path, parsed);
}

}  // namespace ogd
