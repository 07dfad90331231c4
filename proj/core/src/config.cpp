#include "disg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace disg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw DisgError(ErrorCode::ConfigError, where + ": " + message);
}

// Fail-closed: any key outside the allowed set is rejected.
void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) fail(where, "unknown field '" + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(where, "missing required field '" + key + "'");
  return obj.at(key);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

std::vector<double> as_double_vector(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, where));
  return out;
}

Matrix parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : v) rows.push_back(as_double_vector(row, where));
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) fail(where, "ragged rows");
  }
  return Matrix::from_rows(rows);
}

Matrix parse_channel(const json& v, const std::string& where, std::size_t num_states,
                     bool& is_bsc) {
  check_keys(v, where, {"type", "p", "rows"});
  const std::string type = require(v, where, "type").get<std::string>();
  if (type == "bsc") {
    if (num_states != 2) fail(where, "bsc channels require num_states = 2");
    const double p = as_number(require(v, where, "p"), where + ".p");
    if (p < 0.0 || p > 1.0) fail(where + ".p", "must lie in [0, 1]");
    if (v.contains("rows")) fail(where, "bsc channels take 'p', not 'rows'");
    is_bsc = true;
    return Matrix::from_rows({{p, 1.0 - p}, {1.0 - p, p}});
  }
  if (type == "matrix") {
    if (v.contains("p")) fail(where, "matrix channels take 'rows', not 'p'");
    is_bsc = false;
    return parse_matrix(require(v, where, "rows"), where + ".rows");
  }
  fail(where + ".type", "must be 'bsc' or 'matrix'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("config", e.what());
  }

  check_keys(root, "config",
             {"schema_version", "model", "params", "grid_resolution", "itra", "simulate", "bound",
              "sweep", "finite_check"});

  ExperimentConfig config;
  config.schema_version = as_int(require(root, "config", "schema_version"), "schema_version");
  if (config.schema_version != 1) fail("schema_version", "unsupported version");

  const json& model = require(root, "config", "model");
  check_keys(model, "model", {"num_states", "transition", "channels"});
  const int num_states = as_int(require(model, "model", "num_states"), "model.num_states");
  if (num_states < 2) fail("model.num_states", "must be at least 2");
  config.model.num_states = static_cast<std::size_t>(num_states);
  config.model.transition = parse_matrix(require(model, "model", "transition"), "model.transition");
  const json& channels = require(model, "model", "channels");
  if (!channels.is_array() || channels.size() != 2) fail("model.channels", "expected 2 channels");
  bool bsc0 = false, bsc1 = false;
  config.model.channels[0] =
      parse_channel(channels[0], "model.channels[0]", config.model.num_states, bsc0);
  config.model.channels[1] =
      parse_channel(channels[1], "model.channels[1]", config.model.num_states, bsc1);
  config.channels_are_bsc = bsc0 && bsc1;

  const json& params = require(root, "config", "params");
  check_keys(params, "params", {"delta", "costs", "vi_tolerance", "max_iterations"});
  config.params.delta = as_number(require(params, "params", "delta"), "params.delta");
  const auto costs = as_double_vector(require(params, "params", "costs"), "params.costs");
  if (costs.size() != 2) fail("params.costs", "expected [c1, c2]");
  config.params.cost = {costs[0], costs[1]};
  config.params.vi_tolerance =
      as_number(require(params, "params", "vi_tolerance"), "params.vi_tolerance");
  config.params.max_iterations =
      as_int(require(params, "params", "max_iterations"), "params.max_iterations");
  try {
    config.params.validate();
  } catch (const DisgError& e) {
    fail("params", e.what());
  }

  config.grid_resolution =
      as_int(require(root, "config", "grid_resolution"), "grid_resolution");
  if (config.grid_resolution < 1) fail("grid_resolution", "must be >= 1");

  if (root.contains("itra")) {
    check_keys(root["itra"], "itra", {"k"});
    config.itra.k = as_int(require(root["itra"], "itra", "k"), "itra.k");
    if (config.itra.k < 1) fail("itra.k", "must be >= 1");
  }

  if (root.contains("simulate")) {
    const json& sim = root["simulate"];
    check_keys(sim, "simulate", {"horizon", "rollouts", "seed", "prior"});
    ExperimentConfig::Simulate s;
    s.horizon = as_int(require(sim, "simulate", "horizon"), "simulate.horizon");
    if (s.horizon < 1) fail("simulate.horizon", "must be >= 1");
    if (sim.contains("rollouts")) s.rollouts = as_int(sim["rollouts"], "simulate.rollouts");
    if (sim.contains("seed")) {
      if (!sim["seed"].is_number_unsigned() && !sim["seed"].is_number_integer()) {
        fail("simulate.seed", "expected an integer");
      }
      s.seed = sim["seed"].get<std::uint64_t>();
    }
    s.prior = as_double_vector(require(sim, "simulate", "prior"), "simulate.prior");
    if (s.prior.size() != config.model.num_states) {
      fail("simulate.prior", "dimension != num_states");
    }
    config.simulate = std::move(s);
  }

  if (root.contains("bound")) {
    check_keys(root["bound"], "bound", {"epsilon_tilde"});
    ExperimentConfig::Bound b;
    b.epsilon_tilde =
        as_number(require(root["bound"], "bound", "epsilon_tilde"), "bound.epsilon_tilde");
    config.bound = b;
  }

  if (root.contains("sweep")) {
    const json& sweep = root["sweep"];
    check_keys(sweep, "sweep", {"entries"});
    const json& entries = require(sweep, "sweep", "entries");
    if (!entries.is_array() || entries.empty()) fail("sweep.entries", "expected a non-empty array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string where = "sweep.entries[" + std::to_string(i) + "]";
      const json& e = entries[i];
      check_keys(e, where, {"label", "cost", "p1", "p2"});
      ExperimentConfig::SweepEntry entry;
      entry.cost = as_number(require(e, where, "cost"), where + ".cost");
      if (e.contains("label")) entry.label = e["label"].get<std::string>();
      if (e.contains("p1")) entry.p1 = as_number(e["p1"], where + ".p1");
      if (e.contains("p2")) entry.p2 = as_number(e["p2"], where + ".p2");
      if ((entry.p1 || entry.p2) && !config.channels_are_bsc) {
        fail(where, "p1/p2 overrides need bsc channel specs");
      }
      config.sweep.push_back(std::move(entry));
    }
  }

  if (root.contains("finite_check")) {
    const json& fc = root["finite_check"];
    check_keys(fc, "finite_check", {"horizon", "prior"});
    ExperimentConfig::FiniteCheck f;
    f.horizon = as_int(require(fc, "finite_check", "horizon"), "finite_check.horizon");
    if (f.horizon < 1 || f.horizon > 3) fail("finite_check.horizon", "must be 1, 2 or 3");
    f.prior = as_double_vector(require(fc, "finite_check", "prior"), "finite_check.prior");
    if (f.prior.size() != config.model.num_states) {
      fail("finite_check.prior", "dimension != num_states");
    }
    config.finite_check = std::move(f);
  }

  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DisgError(ErrorCode::ConfigError, "cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace disg
