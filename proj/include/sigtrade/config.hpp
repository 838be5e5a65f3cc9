#pragma once

// Scenario files are INI text:
//
//   mode = separate
//   outputs = out
//
//   [model]
//   sigma = 1
//   ...
//   [initial]  [grid]  [simulation]  [analysis]
//
// Keys match the field names of ModelParams, InitialDistribution, SimConfig;
// `grid.n_steps` sizes the ODE grid and `analysis.rho_values` is a comma list.

#include "sigtrade/model.hpp"
#include "sigtrade/simulator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sigtrade {

enum class Mode { single, shared, separate };

const char* to_string(Mode mode);

struct ScenarioConfig {
    ModelParams model;
    InitialDistribution initial;
    int n_steps = kDefaultSteps;
    SimConfig simulation;
    Mode mode = Mode::single;
    std::string outputs = ".";
    std::vector<double> rho_values{-1.0, -0.5, 0.0, 0.5, 1.0};

    TimeGrid grid() const { return TimeGrid(n_steps, model.horizon_T); }
};

/// Parse INI text, then apply `section.key=value` overrides. Malformed text,
/// unknown keys and non-numeric values raise ConfigError.
ScenarioConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});

/// Same, reading from a file path.
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Mode-aware admissibility messages (model, initial law, grid, simulation).
std::vector<std::string> validate(const ScenarioConfig& cfg);

}  // namespace sigtrade
