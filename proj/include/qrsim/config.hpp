#pragma once

// JSON experiment configuration: strict parsing (unknown keys rejected),
// defaults for every knob, and a serializer whose output round-trips to an
// identical run. The echo written next to every result set uses the same
// schema.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrsim/errors.hpp"
#include "qrsim/tasks.hpp"

namespace qrsim {

using ordered_json = nlohmann::ordered_json;

struct SystemConfig {
    int n_input_spins = kDefaultInputSpins;
    /// Either a seed for the stock coupling draw or explicit coupling tables.
    std::optional<std::uint64_t> coupling_seed;
    std::optional<std::vector<double>> couplings_ic_hz;
    std::optional<std::vector<double>> couplings_ij_hz;
};

struct ReadoutConfig {
    bool bias = false;
    std::optional<double> tolerance;  ///< unset = automatic cutoff
};

struct ExperimentConfig {
    SystemConfig system;
    double epsilon = 3e-5;
    double tau_seconds = 2e-6;
    int input_length = 4;        ///< L
    int samples_per_input = 11;  ///< M
    std::string rotation_axis = "Y";
    double probe_residual = kDefaultProbeResidual;
    std::string task = "input_recognition";
    std::string scheme = "A";
    NoiseSpec noise{10000, 1e-4, 7};
    ReadoutConfig readout;
    double grid_step = 0.125;
    std::uint64_t seed = 1;
    /// Sampling-point counts for the benchmark sweep; absent = the full M.
    std::optional<std::vector<int>> sweep_m;
    /// Optional explicit signed streams for `simulate` (overrides the task set).
    std::optional<std::vector<std::vector<double>>> streams;
    std::string out_dir = "out";
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& path,
                         const std::set<std::string>& known)
{
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key))
            throw ConfigError(path + key + ": unknown key");
    }
}

template <typename T>
T get_or(const nlohmann::json& obj, const std::string& path, const std::string& key,
         const T& fallback)
{
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + key + ": " + e.what());
    }
}

}  // namespace detail

/// Resolves the configured spin system: explicit couplings win, otherwise
/// they are drawn from coupling_seed (default seed when absent).
inline SpinSystem resolve_system(const SystemConfig& config)
{
    if (config.couplings_ic_hz.has_value() != config.couplings_ij_hz.has_value())
        throw ConfigError(
            "system: couplings_ic_hz and couplings_ij_hz must be given together");
    if (config.couplings_ic_hz) {
        if (config.coupling_seed)
            throw ConfigError("system: give either coupling_seed or explicit couplings, not both");
        SpinSystem system;
        system.n_input_spins = config.n_input_spins;
        system.couplings_ic_hz = *config.couplings_ic_hz;
        system.couplings_ij_hz = *config.couplings_ij_hz;
        try {
            system.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("system: ") + e.what());
        }
        return system;
    }
    return random_spin_system(config.n_input_spins,
                              config.coupling_seed.value_or(kDefaultCouplingSeed));
}

inline Axis parse_axis(const std::string& name)
{
    if (name == "X")
        return Axis::X;
    if (name == "Y")
        return Axis::Y;
    throw ConfigError("rotation_axis: must be \"X\" or \"Y\", got \"" + name + "\"");
}

inline Scheme parse_scheme(const std::string& name)
{
    if (name == "A")
        return Scheme::A;
    if (name == "B")
        return Scheme::B;
    if (name == "C")
        return Scheme::C;
    throw ConfigError("scheme: must be \"A\", \"B\" or \"C\", got \"" + name + "\"");
}

inline void validate_config(const ExperimentConfig& config)
{
    if (config.system.n_input_spins < 1)
        throw ConfigError("system.n_input_spins: must be >= 1");
    if (!(std::abs(config.probe_residual) < 1.0))
        throw ConfigError("probe_residual: magnitude must be < 1");
    const double bound = 1.0 / static_cast<double>(config.system.n_input_spins);
    if (!(std::abs(config.epsilon) < bound)) {
        std::ostringstream msg;
        msg << "epsilon: |" << config.epsilon << "| violates the positivity bound "
            << "1/n_input_spins = " << bound;
        throw ConfigError(msg.str());
    }
    if (!(config.tau_seconds > 0.0))
        throw ConfigError("tau_seconds: must be > 0");
    if (config.input_length < 1)
        throw ConfigError("input_length: must be >= 1");
    if (config.samples_per_input < 1)
        throw ConfigError("samples_per_input: must be >= 1");
    if (!(config.grid_step > 0.0) || config.grid_step >= 1.0)
        throw ConfigError("grid_step: must be in (0, 1)");
    const double grid_points = 1.0 / config.grid_step;
    if (std::abs(grid_points - std::round(grid_points)) > 1e-9)
        throw ConfigError(
            "grid_step: must divide 1 evenly (e.g. 0.125, 0.25) so sign-multiplexed "
            "inputs stay on the injection grid");
    if (config.noise.copies < 1)
        throw ConfigError("noise.copies: must be >= 1");
    if (!(config.noise.relative_std >= 0.0))
        throw ConfigError("noise.relative_std: must be >= 0");
    if (config.readout.tolerance && !(*config.readout.tolerance >= 0.0))
        throw ConfigError("readout.tolerance: must be >= 0");
    parse_axis(config.rotation_axis);
    parse_scheme(config.scheme);
    try {
        expand_task_name(config.task, config.input_length);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("task: ") + e.what());
    }
    if (config.sweep_m) {
        if (config.sweep_m->empty())
            throw ConfigError("sweep_m: must not be empty");
        for (const int m : *config.sweep_m)
            if (m < 1 || m > config.samples_per_input)
                throw ConfigError("sweep_m: value " + std::to_string(m) + " outside [1, " +
                                  std::to_string(config.samples_per_input) + "]");
    }
    if (config.streams) {
        for (const auto& stream : *config.streams) {
            if (static_cast<int>(stream.size()) != config.input_length)
                throw ConfigError("streams: every stream must have input_length entries");
            for (const double s : stream)
                if (!(s >= -1.0 && s <= 1.0))
                    throw ConfigError("streams: entries must lie in [-1, 1]");
        }
    }
}

inline ExperimentConfig config_from_json(const nlohmann::json& root)
{
    if (!root.is_object())
        throw ConfigError("config root must be a JSON object");
    detail::require_keys(root, "",
                         {"system", "epsilon", "tau_seconds", "input_length",
                          "samples_per_input", "rotation_axis", "probe_residual", "task",
                          "scheme", "noise", "readout", "grid_step", "seed", "sweep_m",
                          "streams", "out_dir"});

    ExperimentConfig config;
    if (root.contains("system")) {
        const auto& sys = root.at("system");
        if (!sys.is_object())
            throw ConfigError("system: must be an object");
        detail::require_keys(sys, "system.",
                             {"n_input_spins", "coupling_seed", "couplings_ic_hz",
                              "couplings_ij_hz"});
        config.system.n_input_spins =
            detail::get_or(sys, "system.", "n_input_spins", kDefaultInputSpins);
        if (sys.contains("coupling_seed"))
            config.system.coupling_seed =
                detail::get_or<std::uint64_t>(sys, "system.", "coupling_seed", 0);
        if (sys.contains("couplings_ic_hz"))
            config.system.couplings_ic_hz = detail::get_or<std::vector<double>>(
                sys, "system.", "couplings_ic_hz", {});
        if (sys.contains("couplings_ij_hz"))
            config.system.couplings_ij_hz = detail::get_or<std::vector<double>>(
                sys, "system.", "couplings_ij_hz", {});
    }
    config.epsilon = detail::get_or(root, "", "epsilon", config.epsilon);
    config.tau_seconds = detail::get_or(root, "", "tau_seconds", config.tau_seconds);
    config.input_length = detail::get_or(root, "", "input_length", config.input_length);
    config.samples_per_input =
        detail::get_or(root, "", "samples_per_input", config.samples_per_input);
    config.rotation_axis = detail::get_or(root, "", "rotation_axis", config.rotation_axis);
    config.probe_residual = detail::get_or(root, "", "probe_residual", config.probe_residual);
    config.task = detail::get_or(root, "", "task", config.task);
    config.scheme = detail::get_or(root, "", "scheme", config.scheme);
    if (root.contains("noise")) {
        const auto& noise = root.at("noise");
        if (!noise.is_object())
            throw ConfigError("noise: must be an object");
        detail::require_keys(noise, "noise.", {"copies", "relative_std", "seed"});
        config.noise.copies = detail::get_or(noise, "noise.", "copies", config.noise.copies);
        config.noise.relative_std =
            detail::get_or(noise, "noise.", "relative_std", config.noise.relative_std);
        config.noise.seed = detail::get_or(noise, "noise.", "seed", config.noise.seed);
    }
    if (root.contains("readout")) {
        const auto& readout = root.at("readout");
        if (!readout.is_object())
            throw ConfigError("readout: must be an object");
        detail::require_keys(readout, "readout.", {"bias", "tolerance"});
        config.readout.bias = detail::get_or(readout, "readout.", "bias", false);
        if (readout.contains("tolerance") && !readout.at("tolerance").is_string())
            config.readout.tolerance =
                detail::get_or(readout, "readout.", "tolerance", 0.0);
        else if (readout.contains("tolerance") &&
                 readout.at("tolerance").get<std::string>() != "auto")
            throw ConfigError("readout.tolerance: must be a number or \"auto\"");
    }
    config.grid_step = detail::get_or(root, "", "grid_step", config.grid_step);
    config.seed = detail::get_or(root, "", "seed", config.seed);
    if (root.contains("sweep_m"))
        config.sweep_m = detail::get_or<std::vector<int>>(root, "", "sweep_m", {});
    if (root.contains("streams"))
        config.streams = detail::get_or<std::vector<std::vector<double>>>(
            root, "", "streams", {});
    config.out_dir = detail::get_or(root, "", "out_dir", config.out_dir);

    validate_config(config);
    return config;
}

/// Loads and validates a config file; an empty JSON object yields the stock
/// experiment (default couplings, input recognition, scheme A).
inline ExperimentConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(root);
}

inline ordered_json config_to_json(const ExperimentConfig& config)
{
    ordered_json root;
    ordered_json sys;
    sys["n_input_spins"] = config.system.n_input_spins;
    if (config.system.couplings_ic_hz) {
        sys["couplings_ic_hz"] = *config.system.couplings_ic_hz;
        sys["couplings_ij_hz"] = *config.system.couplings_ij_hz;
    } else {
        sys["coupling_seed"] = config.system.coupling_seed.value_or(kDefaultCouplingSeed);
    }
    root["system"] = sys;
    root["epsilon"] = config.epsilon;
    root["tau_seconds"] = config.tau_seconds;
    root["input_length"] = config.input_length;
    root["samples_per_input"] = config.samples_per_input;
    root["rotation_axis"] = config.rotation_axis;
    root["probe_residual"] = config.probe_residual;
    root["task"] = config.task;
    root["scheme"] = config.scheme;
    root["noise"] = {{"copies", config.noise.copies},
                     {"relative_std", config.noise.relative_std},
                     {"seed", config.noise.seed}};
    if (config.readout.tolerance)
        root["readout"] = {{"bias", config.readout.bias},
                           {"tolerance", *config.readout.tolerance}};
    else
        root["readout"] = {{"bias", config.readout.bias}, {"tolerance", "auto"}};
    root["grid_step"] = config.grid_step;
    root["seed"] = config.seed;
    if (config.sweep_m)
        root["sweep_m"] = *config.sweep_m;
    if (config.streams)
        root["streams"] = *config.streams;
    root["out_dir"] = config.out_dir;
    return root;
}

/// Harness view of a config (couplings resolved, enums parsed).
inline HarnessConfig make_harness_config(const ExperimentConfig& config)
{
    HarnessConfig harness;
    harness.system = resolve_system(config.system);
    harness.epsilon = config.epsilon;
    harness.tau_seconds = config.tau_seconds;
    harness.input_length = config.input_length;
    harness.samples_per_input = config.samples_per_input;
    harness.rotation_axis = parse_axis(config.rotation_axis);
    harness.probe_residual = config.probe_residual;
    harness.grid_step = config.grid_step;
    harness.readout.bias = config.readout.bias;
    harness.readout.tolerance = config.readout.tolerance;
    return harness;
}

}  // namespace qrsim
