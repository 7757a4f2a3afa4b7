#pragma once

// Experiment configuration files (YAML) and the built-in presets.
//
//   name: desk_grid
//   seed: 20200601
//   T: 2000
//   runs: 50
//   trace_stride: 0          # optional, 0 = ceil(T/200)
//   out: results/desk        # optional
//   env:
//     kind: linear_contextual  # or karmed
//     d: 10
//     K: [3, 10, 60]
//     sigma: [0.1, 1, 2]
//     posterior: gaussian      # or nig (with optional nig_prior: {precision, a0, b0})
//     means: [0.9, 0.1]        # K-armed only, optional fixed Bernoulli means
//   policies:
//     - TS
//     - {kind: TSUCB, m: 1}
//     - IDS(1000)
//
// `--set a.b=value` overrides a (possibly nested) key; the value is parsed
// as YAML, so lists work too (`--set env.K=[10]`).

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/harness.hpp"
#include "ratio_bandits/results_io.hpp"

namespace ratio_bandits {

inline constexpr std::string_view kPaperGridPreset = R"(name: paper_grid
seed: 20200601
T: 10000
runs: 200
env:
  kind: linear_contextual
  d: 10
  K: [3, 5, 10, 20, 60]
  sigma: [0.05, 0.1, 0.5, 1, 2]
  posterior: gaussian
policies:
  - TS
  - {kind: TSUCB, m: 1}
  - {kind: TSUCB, m: 100}
  - GREEDY
  - UCB
  - {kind: IDS, ids_samples: 1000}
)";

inline constexpr std::string_view kDeskGridPreset = R"(name: desk_grid
seed: 20200601
T: 2000
runs: 50
env:
  kind: linear_contextual
  d: 10
  K: [3, 10, 60]
  sigma: [0.1, 1, 2]
  posterior: gaussian
policies:
  - TS
  - {kind: TSUCB, m: 1}
  - {kind: TSUCB, m: 100}
  - GREEDY
  - UCB
  - {kind: IDS, ids_samples: 1000}
)";

inline std::optional<std::string_view> find_preset(std::string_view name) {
  if (name == "paper_grid") return kPaperGridPreset;
  if (name == "desk_grid") return kDeskGridPreset;
  return std::nullopt;
}

namespace detail {

inline int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

template <class T>
T scalar_as(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a scalar value", line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "cannot interpret '" + node.Scalar() + "'", line_of(node));
  }
}

inline YAML::Node require(const YAML::Node& parent, const std::string& key,
                          const std::string& field, int parent_line) {
  const YAML::Node node = parent[key];
  if (!node) throw ConfigError(field, "missing required field", parent_line);
  return node;
}

// Scalars and lists are both accepted for grid axes.
template <class T>
std::vector<T> list_as(const YAML::Node& node, const std::string& field) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar_as<T>(item, field));
  } else {
    out.push_back(scalar_as<T>(node, field));
  }
  if (out.empty()) throw ConfigError(field, "empty list", line_of(node));
  return out;
}

inline PolicyConfig parse_policy(const YAML::Node& node) {
  const int line = line_of(node);
  try {
    if (node.IsScalar()) return parse_policy_label(node.Scalar());
    if (!node.IsMap()) throw ConfigError("policies", "expected a label or a mapping", line);
    PolicyConfig p;
    p.kind = parse_policy_kind(scalar_as<std::string>(require(node, "kind", "policies.kind", line),
                                                      "policies.kind"));
    if (node["m"]) p.m = scalar_as<std::size_t>(node["m"], "policies.m");
    if (node["ids_samples"])
      p.ids_samples = scalar_as<std::size_t>(node["ids_samples"], "policies.ids_samples");
    p.validate();
    return p;
  } catch (const InvalidArgument& e) {
    throw ConfigError("policies", e.what(), line);
  }
}

// Walks/creates the dotted path and replaces the leaf with the parsed value.
inline void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key=value");
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError(path, std::string("cannot parse override value: ") + e.what());
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) keys.push_back(k);
  // yaml-cpp nodes are handles; rebuild the chain so assignment sticks.
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node child = chain.back()[keys[i]];
    if (!child || !child.IsMap()) {
      chain.back()[keys[i]] = YAML::Node(YAML::NodeType::Map);
      child = chain.back()[keys[i]];
    }
    chain.push_back(child);
  }
  chain.back()[keys.back()] = value;
}

}  // namespace detail

inline ExperimentConfig parse_experiment(const YAML::Node& root) {
  if (!root || !root.IsMap()) throw ConfigError("", "config must be a mapping", 1);
  const int top = detail::line_of(root);
  ExperimentConfig c;
  if (root["name"]) c.name = detail::scalar_as<std::string>(root["name"], "name");
  c.seed = detail::scalar_as<std::uint64_t>(detail::require(root, "seed", "seed", top), "seed");
  c.T = detail::scalar_as<std::uint64_t>(detail::require(root, "T", "T", top), "T");
  c.runs = detail::scalar_as<std::uint64_t>(detail::require(root, "runs", "runs", top), "runs");
  if (root["trace_stride"])
    c.trace_stride = detail::scalar_as<std::uint64_t>(root["trace_stride"], "trace_stride");
  if (root["out"]) c.out = detail::scalar_as<std::string>(root["out"], "out");

  const YAML::Node env = detail::require(root, "env", "env", top);
  if (!env.IsMap()) throw ConfigError("env", "expected a mapping", detail::line_of(env));
  const int env_line = detail::line_of(env);
  c.env.kind = parse_env_kind(
      detail::scalar_as<std::string>(detail::require(env, "kind", "env.kind", env_line), "env.kind"));
  c.K_values = detail::list_as<std::size_t>(detail::require(env, "K", "env.K", env_line), "env.K");
  if (c.env.kind == EnvKind::LinearContextual) {
    c.env.d = detail::scalar_as<std::size_t>(detail::require(env, "d", "env.d", env_line), "env.d");
    c.sigma_values =
        detail::list_as<double>(detail::require(env, "sigma", "env.sigma", env_line), "env.sigma");
    if (env["posterior"])
      c.env.posterior =
          parse_posterior_kind(detail::scalar_as<std::string>(env["posterior"], "env.posterior"));
    if (const YAML::Node prior = env["nig_prior"]) {
      if (prior["precision"])
        c.env.nig_prior.precision_scale =
            detail::scalar_as<double>(prior["precision"], "env.nig_prior.precision");
      if (prior["a0"]) c.env.nig_prior.shape = detail::scalar_as<double>(prior["a0"], "env.nig_prior.a0");
      if (prior["b0"]) c.env.nig_prior.scale = detail::scalar_as<double>(prior["b0"], "env.nig_prior.b0");
    }
  } else if (env["means"]) {
    c.env.fixed_means = detail::list_as<double>(env["means"], "env.means");
  }

  const YAML::Node policies = detail::require(root, "policies", "policies", top);
  if (!policies.IsSequence())
    throw ConfigError("policies", "expected a list", detail::line_of(policies));
  for (const auto& p : policies) c.policies.push_back(detail::parse_policy(p));

  c.validate();
  return c;
}

/// Loads a preset name or a YAML file, then applies `key=value` overrides.
inline ExperimentConfig load_experiment(const std::string& path_or_preset,
                                        const std::vector<std::string>& overrides = {}) {
  YAML::Node root;
  try {
    if (std::ifstream file{path_or_preset}) {
      root = YAML::Load(file);
    } else if (const auto preset = find_preset(path_or_preset)) {
      root = YAML::Load(std::string(*preset));
    } else {
      throw ConfigError("config", "no such file or preset '" + path_or_preset + "'");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError("", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ConfigError("", "config must be a mapping", 1);
  for (const auto& o : overrides) detail::apply_override(root, o);
  return parse_experiment(root);
}

/// Resolved configuration in the same format `load_experiment` reads.
inline std::string echo_experiment(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "T" << YAML::Value << c.T;
  out << YAML::Key << "runs" << YAML::Value << c.runs;
  out << YAML::Key << "trace_stride" << YAML::Value << c.trace_stride;
  if (!c.out.empty()) out << YAML::Key << "out" << YAML::Value << c.out;
  out << YAML::Key << "env" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(c.env.kind);
  out << YAML::Key << "K" << YAML::Value << YAML::Flow << c.K_values;
  if (c.env.kind == EnvKind::LinearContextual) {
    out << YAML::Key << "d" << YAML::Value << c.env.d;
    out << YAML::Key << "sigma" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double s : c.sigma_values) out << format_double(s);
    out << YAML::EndSeq;
    out << YAML::Key << "posterior" << YAML::Value << to_string(c.env.posterior);
    if (c.env.posterior == PosteriorKind::NIG) {
      out << YAML::Key << "nig_prior" << YAML::Value << YAML::Flow << YAML::BeginMap
          << YAML::Key << "precision" << YAML::Value << format_double(c.env.nig_prior.precision_scale)
          << YAML::Key << "a0" << YAML::Value << format_double(c.env.nig_prior.shape)
          << YAML::Key << "b0" << YAML::Value << format_double(c.env.nig_prior.scale)
          << YAML::EndMap;
    }
  } else if (!c.env.fixed_means.empty()) {
    out << YAML::Key << "means" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double m : c.env.fixed_means) out << format_double(m);
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : c.policies) out << p.label();
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace ratio_bandits
