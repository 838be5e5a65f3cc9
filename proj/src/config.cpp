#include "sigtrade/config.hpp"

#include "sigtrade/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace sigtrade {

namespace pt = boost::property_tree;

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::single: return "single";
        case Mode::shared: return "shared";
        case Mode::separate: return "separate";
    }
    return "?";
}

namespace {

template <class T>
T as(const pt::ptree& node, const std::string& key) {
    try {
        return node.get_value<T>();
    } catch (const pt::ptree_error&) {
        throw ConfigError("bad value for " + key + ": '" + node.data() + "'");
    }
}

bool as_flag(const pt::ptree& node, const std::string& key) {
    const std::string& v = node.data();
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("bad value for " + key + ": '" + v + "'");
}

std::vector<double> as_list(const pt::ptree& node, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(node.data());
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ConfigError("bad value for " + key + ": '" + node.data() + "'");
        }
    }
    if (out.empty()) throw ConfigError(key + " is empty");
    return out;
}

Mode as_mode(const std::string& v) {
    if (v == "single") return Mode::single;
    if (v == "shared") return Mode::shared;
    if (v == "separate") return Mode::separate;
    throw ConfigError("mode must be single, shared or separate, got '" + v + "'");
}

void apply_override(pt::ptree& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + assignment);
    std::string key = assignment.substr(0, eq);
    if (key.find('.') == std::string::npos && key != "mode" && key != "outputs")
        throw ConfigError("override key must be section.key: " + key);
    tree.put(key, assignment.substr(eq + 1));
}

const std::map<std::string, double ModelParams::*> kModelKeys = {
    {"mu", &ModelParams::mu},         {"sigma", &ModelParams::sigma},
    {"eta", &ModelParams::eta},       {"beta", &ModelParams::beta},
    {"gamma", &ModelParams::gamma},   {"gamma_bar", &ModelParams::gamma_bar},
    {"rho", &ModelParams::rho},       {"b", &ModelParams::b},
    {"k", &ModelParams::k},           {"k_bar", &ModelParams::k_bar},
    {"alpha", &ModelParams::alpha},   {"horizon_T", &ModelParams::horizon_T},
};

const std::map<std::string, double InitialDistribution::*> kInitialKeys = {
    {"mean_Q0", &InitialDistribution::mean_Q0}, {"var_Q0", &InitialDistribution::var_Q0},
    {"mean_V0", &InitialDistribution::mean_V0}, {"var_V0", &InitialDistribution::var_V0},
    {"cov_Q0V0", &InitialDistribution::cov_Q0V0}, {"S0", &InitialDistribution::S0},
};

const std::map<std::string, int SimConfig::*> kSimulationInts = {
    {"n_agents", &SimConfig::n_agents},
    {"n_paths", &SimConfig::n_paths},
    {"threads", &SimConfig::threads},
    {"record_stride", &SimConfig::record_stride},
};

bool is_section(const std::string& name) {
    return name == "model" || name == "initial" || name == "grid" || name == "simulation" ||
           name == "analysis";
}

void set_field(ScenarioConfig& cfg, const std::string& section, const std::string& key,
               const pt::ptree& leaf) {
    const std::string dotted = section + "." + key;
    if (section == "model") {
        if (auto it = kModelKeys.find(key); it != kModelKeys.end())
            return void(cfg.model.*(it->second) = as<double>(leaf, dotted));
    } else if (section == "initial") {
        if (auto it = kInitialKeys.find(key); it != kInitialKeys.end())
            return void(cfg.initial.*(it->second) = as<double>(leaf, dotted));
    } else if (section == "grid") {
        if (key == "n_steps") return void(cfg.n_steps = as<int>(leaf, dotted));
    } else if (section == "simulation") {
        if (auto it = kSimulationInts.find(key); it != kSimulationInts.end())
            return void(cfg.simulation.*(it->second) = as<int>(leaf, dotted));
        if (key == "seed") return void(cfg.simulation.seed = as<std::uint64_t>(leaf, dotted));
        if (key == "dt") return void(cfg.simulation.dt = as<double>(leaf, dotted));
        if (key == "use_empirical_averages")
            return void(cfg.simulation.use_empirical_averages = as_flag(leaf, dotted));
    } else if (section == "analysis") {
        if (key == "rho_values") return void(cfg.rho_values = as_list(leaf, dotted));
    } else {
        throw ConfigError("unknown section [" + section + "]");
    }
    throw ConfigError("unknown key " + dotted);
}

ScenarioConfig from_tree(const pt::ptree& tree) {
    ScenarioConfig cfg;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            if (name == "mode")
                cfg.mode = as_mode(node.data());
            else if (name == "outputs")
                cfg.outputs = node.data();
            else if (!node.data().empty() || !is_section(name))
                throw ConfigError("unknown top-level key '" + name + "'");
            continue;
        }
        for (const auto& [key, leaf] : node) set_field(cfg, name, key, leaf);
    }

    if (cfg.mode != Mode::single) {
        const auto& model = tree.get_child_optional("model");
        if (!model || !model->get_child_optional("gamma_bar") || !model->get_child_optional("k_bar"))
            throw ParameterError(std::string("mode ") + to_string(cfg.mode) +
                                 " requires model.gamma_bar and model.k_bar");
    }
    return cfg;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("cannot parse scenario: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }
    for (const auto& o : overrides) apply_override(tree, o);
    return from_tree(tree);
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in, overrides);
}

std::vector<std::string> validate(const ScenarioConfig& cfg) {
    std::vector<std::string> report = validate(cfg.model);
    for (auto& msg : validate(cfg.initial)) report.push_back(std::move(msg));
    if (cfg.n_steps < 1) report.emplace_back("grid.n_steps must be at least 1");
    for (auto& msg : validate(cfg.simulation, cfg.model.horizon_T)) report.push_back(std::move(msg));
    if (cfg.mode == Mode::single && cfg.simulation.n_agents != 1)
        report.emplace_back("single mode simulates exactly one agent");
    for (double r : cfg.rho_values)
        if (!(r >= -1.0 && r <= 1.0)) report.emplace_back("analysis.rho_values must lie in [-1, 1]");
    return report;
}

}  // namespace sigtrade
