#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "disg/model.hpp"
#include "disg/reward.hpp"

namespace disg {

// Parsed experiment configuration. The JSON schema is fail-closed: unknown
// fields anywhere are rejected so a typo cannot silently change game
// parameters.
struct ExperimentConfig {
  int schema_version = 1;
  MarkovModel model;
  GameParams params;
  int grid_resolution = 200;

  struct Itra {
    int k = 100;
  } itra;

  struct Simulate {
    int horizon = 150;
    int rollouts = 1;
    std::uint64_t seed = 1;
    std::vector<double> prior;  // required when the simulate command runs
  };
  std::optional<Simulate> simulate;

  struct Bound {
    double epsilon_tilde = 0.9;
  };
  std::optional<Bound> bound;

  struct SweepEntry {
    std::string label;
    double cost = 0.0;
    std::optional<double> p1;  // BSC overrides; require a BSC channel spec
    std::optional<double> p2;
  };
  std::vector<SweepEntry> sweep;

  struct FiniteCheck {
    int horizon = 1;
    std::vector<double> prior;
  };
  std::optional<FiniteCheck> finite_check;

  // True when both channels were given as {"type": "bsc", ...}; sweep entries
  // with p overrides need this.
  bool channels_are_bsc = false;
};

// Throws DisgError(ConfigError) with a path-qualified message on any schema
// violation.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace disg
