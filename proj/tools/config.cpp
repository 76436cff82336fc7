#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fairdiv/constraints.hpp"

namespace fairdiv::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"instance", {"n", "m", "T", "a", "b", "mu_star", "mu_star_seed", "noise_sigma", "seed"}},
      {"policy", {"kind", "warmup_scale", "etc_scale"}},
      {"constraints", {"kind"}},
      {"grid", {"spacing", "cap", "sample_seed"}},
      {"output", {"directory", "record_full_allocations"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("key '" + key + "': cannot parse '" + raw + "' as a number");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::string cleaned = raw;
  for (char& c : cleaned) {
    if (c == ',' || c == '[' || c == ']' || c == ';') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_number<double>(key, token));
  return out;
}

void require_known(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) {
      if (body.empty()) throw ConfigError("unknown key '" + section + "' outside any section");
      throw ConfigError("unknown section '[" + section + "]'");
    }
    for (const auto& [key, value] : body) {
      (void)value;
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
  }
}

std::string describe(const std::vector<Violation>& problems) {
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& v : problems) os << "\n  " << v.message;
  return os.str();
}

}  // namespace

void revalidate(RunConfig& config) {
  auto& spec = config.spec;
  if (config.mu_star_source == "random_normalized") {
    try {
      spec.mu_star = random_normalized_means(spec.n, spec.m, spec.a, spec.b, config.mu_star_seed);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("mu_star: ") + e.what());
    }
  }
  const auto problems = validate(spec);
  if (!problems.empty()) throw ConfigError(describe(problems));
  if (spec.constraint_kind == ConstraintKind::kEnvyFreeness && spec.n < 2) {
    throw ConfigError("constraints.kind = envy_freeness needs n >= 2");
  }
  if (!(config.policy.warmup_scale >= 0.0) || !(config.policy.etc_scale >= 0.0)) {
    throw ConfigError("policy scales must be nonnegative");
  }
  if (config.policy.grid_cap < 1) throw ConfigError("grid.cap must be >= 1");
  if (config.policy.grid_spacing < 0.0) throw ConfigError("grid.spacing must be positive or 'auto'");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  require_known(tree);

  RunConfig config;
  auto& spec = config.spec;
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    auto sec = tree.get_child_optional(section);
    if (!sec) return std::nullopt;
    auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  };
  auto require = [&](const std::string& section, const std::string& key) {
    auto v = get(section, key);
    if (!v) throw ConfigError("missing key '" + key + "' in section [" + section + "]");
    return *v;
  };

  spec.n = parse_number<std::size_t>("n", require("instance", "n"));
  spec.m = parse_number<std::size_t>("m", require("instance", "m"));
  spec.T = parse_number<std::size_t>("T", require("instance", "T"));
  spec.a = parse_number<double>("a", require("instance", "a"));
  spec.b = parse_number<double>("b", require("instance", "b"));
  if (auto v = get("instance", "noise_sigma")) spec.noise_sigma = parse_number<double>("noise_sigma", *v);
  if (auto v = get("instance", "seed")) spec.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("instance", "mu_star_seed")) config.mu_star_seed = parse_number<std::uint64_t>("mu_star_seed", *v);

  const std::string mu_raw = trim(require("instance", "mu_star"));
  if (mu_raw == "random_normalized") {
    config.mu_star_source = "random_normalized";
  } else {
    const auto values = parse_list("mu_star", mu_raw);
    if (values.size() != spec.n * spec.m) {
      throw ConfigError("mu_star: expected " + std::to_string(spec.n * spec.m) + " row-major values, got " +
                        std::to_string(values.size()));
    }
    spec.mu_star = ValueMatrix(spec.n, spec.m, values);
  }

  if (auto v = get("constraints", "kind")) {
    auto kind = parse_constraint_kind(trim(*v));
    if (!kind) throw ConfigError("constraints.kind: unknown family '" + *v + "'");
    spec.constraint_kind = *kind;
  }

  auto& policy = config.policy;
  if (auto v = get("policy", "kind")) {
    auto kind = parse_policy_kind(trim(*v));
    if (!kind) throw ConfigError("policy.kind: unknown policy '" + *v + "'");
    policy.kind = *kind;
  }
  if (auto v = get("policy", "warmup_scale")) policy.warmup_scale = parse_number<double>("warmup_scale", *v);
  if (auto v = get("policy", "etc_scale")) policy.etc_scale = parse_number<double>("etc_scale", *v);

  if (auto v = get("grid", "spacing"); v && trim(*v) != "auto") {
    policy.grid_spacing = parse_number<double>("spacing", *v);
    if (!(policy.grid_spacing > 0.0)) throw ConfigError("grid.spacing must be positive or 'auto'");
  }
  if (auto v = get("grid", "cap")) policy.grid_cap = parse_number<std::size_t>("cap", *v);
  if (auto v = get("grid", "sample_seed")) policy.grid_seed = parse_number<std::uint64_t>("sample_seed", *v);

  if (auto v = get("output", "directory")) config.output_dir = trim(*v);
  if (auto v = get("output", "record_full_allocations")) {
    config.record_full_allocations = parse_bool("record_full_allocations", *v);
  }

  revalidate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto config = parse_config(buf.str());
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) config.output_dir = dir;
  return config;
}

nlohmann::json config_echo(const RunConfig& config) {
  const auto& spec = config.spec;
  nlohmann::json mu = nlohmann::json::array();
  for (std::size_t i = 0; i < spec.n; ++i) {
    mu.push_back(std::vector<double>(spec.mu_star.row(i).begin(), spec.mu_star.row(i).end()));
  }
  nlohmann::json j;
  j["instance"] = {{"n", spec.n},
                   {"m", spec.m},
                   {"T", spec.T},
                   {"a", spec.a},
                   {"b", spec.b},
                   {"mu_star", mu},
                   {"mu_star_source", config.mu_star_source},
                   {"mu_star_seed", config.mu_star_seed},
                   {"noise_sigma", spec.noise_sigma},
                   {"seed", spec.seed}};
  j["policy"] = {{"kind", std::string(to_string(config.policy.kind))},
                 {"warmup_scale", config.policy.warmup_scale},
                 {"etc_scale", config.policy.etc_scale}};
  j["constraints"] = {{"kind", std::string(to_string(spec.constraint_kind))}};
  j["grid"] = {{"spacing", config.policy.grid_spacing > 0.0 ? nlohmann::json(config.policy.grid_spacing)
                                                            : nlohmann::json("auto")},
               {"cap", config.policy.grid_cap},
               {"sample_seed", config.policy.grid_seed}};
  j["output"] = {{"directory", config.output_dir.string()},
                 {"record_full_allocations", config.record_full_allocations}};
  return j;
}

}  // namespace fairdiv::cli
