#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "spikewatt/error.hpp"
#include "spikewatt/event_counts.hpp"
#include "spikewatt/format.hpp"
#include "spikewatt/grid.hpp"
#include "spikewatt/neuron.hpp"
#include "spikewatt/spike_train.hpp"
#include "spikewatt/spiking_conv.hpp"

namespace spikewatt {

/// Per-operation energy costs of a hardware target.
///
/// Defaults are common 45 nm CMOS figures: 4.6 pJ for a 32-bit multiply-
/// accumulate and 0.9 pJ for a 32-bit add, the cost of delivering a binary
/// spike across one synapse.
struct EnergyProfile {
    double joules_per_mac = 4.6e-12;
    double joules_per_synaptic_event = 0.9e-12;
    double static_joules_per_step = 0.0;

    void validate() const {
        if (!(joules_per_mac > 0.0)) throw ConfigError("joules_per_mac > 0 violated");
        if (!(joules_per_synaptic_event > 0.0)) throw ConfigError("joules_per_synaptic_event > 0 violated");
        if (!(static_joules_per_step >= 0.0)) throw ConfigError("static_joules_per_step >= 0 violated");
    }
};

/// Profile file: JSON object with keys joules_per_mac,
/// joules_per_synaptic_event and (optional, default 0)
/// static_joules_per_step.
inline EnergyProfile energy_profile_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("energy profile must be a JSON object");
    EnergyProfile p;
    auto number = [&](const char* key, bool required, double fallback) {
        if (!j.contains(key)) {
            if (required) throw ConfigError(std::string("energy profile missing '") + key + "'");
            return fallback;
        }
        if (!j.at(key).is_number()) throw ConfigError(std::string("energy profile '") + key + "' must be a number");
        return j.at(key).get<double>();
    };
    for (const auto& [key, _] : j.items()) {
        if (key != "joules_per_mac" && key != "joules_per_synaptic_event" && key != "static_joules_per_step" &&
            key != "name")
            throw ConfigError("unknown key '" + key + "' in energy profile");
    }
    p.joules_per_mac = number("joules_per_mac", true, 0.0);
    p.joules_per_synaptic_event = number("joules_per_synaptic_event", true, 0.0);
    p.static_joules_per_step = number("static_joules_per_step", false, 0.0);
    p.validate();
    return p;
}

/// Dense work of a convolution layer.
struct MacCount {
    std::uint64_t macs = 0;
    std::uint64_t steps = 0;
};

/// MACs of a dense valid convolution evaluated at every step: every tap at
/// every output site.
inline std::uint64_t count_macs_dense_conv(std::size_t input_h, std::size_t input_w, std::size_t kernel_radius,
                                           std::size_t steps) {
    if (kernel_radius < 1) throw InvalidArgumentError("kernel radius must be >= 1");
    if (input_h <= 2 * kernel_radius || input_w <= 2 * kernel_radius)
        throw InvalidArgumentError("input " + std::to_string(input_h) + "x" + std::to_string(input_w) +
                                   " degenerate for kernel radius " + std::to_string(kernel_radius));
    const std::uint64_t side = 2 * kernel_radius + 1;
    return static_cast<std::uint64_t>(input_h - 2 * kernel_radius) * (input_w - 2 * kernel_radius) * side * side * steps;
}

/// Number of valid output positions along one axis whose window covers
/// input index x.
inline std::uint64_t covering_outputs(std::size_t x, std::size_t extent, std::size_t radius) {
    const std::size_t out = extent - 2 * radius;
    const std::size_t lo = x >= 2 * radius ? x - 2 * radius : 0;
    const std::size_t hi = std::min(x, out - 1);
    return hi >= lo ? hi - lo + 1 : 0;
}

/// Synaptic events of an event-driven spiking convolution: each input
/// spike is delivered once to every valid output site whose receptive
/// field contains it.
inline std::uint64_t count_synaptic_events(const SpikeTrainGrid& inputs, std::size_t kernel_radius) {
    if (kernel_radius < 1) throw InvalidArgumentError("kernel radius must be >= 1");
    valid_extent(inputs.height(), kernel_radius);
    valid_extent(inputs.width(), kernel_radius);

    // Per-site fan-out is fixed, so weight each site's spike total by it.
    std::uint64_t events = 0;
    for (std::size_t row = 0; row < inputs.height(); ++row) {
        const auto rows = covering_outputs(row, inputs.height(), kernel_radius);
        for (std::size_t col = 0; col < inputs.width(); ++col) {
            const auto fanout = rows * covering_outputs(col, inputs.width(), kernel_radius);
            std::uint64_t spikes = 0;
            for (std::size_t t = 0; t < inputs.steps(); ++t) spikes += inputs.at(t, row, col);
            events += spikes * fanout;
        }
    }
    return events;
}

/// SNN energy: synaptic events plus static power over the steps.
inline double estimate_energy(const EventCounts& counts, const EnergyProfile& profile) {
    profile.validate();
    return profile.joules_per_synaptic_event * static_cast<double>(counts.synaptic_events) +
           profile.static_joules_per_step * static_cast<double>(counts.steps);
}

/// Dense (ANN) energy: MACs plus static power over the steps.
inline double estimate_energy(const MacCount& count, const EnergyProfile& profile) {
    profile.validate();
    return profile.joules_per_mac * static_cast<double>(count.macs) +
           profile.static_joules_per_step * static_cast<double>(count.steps);
}

/// How many times less energy the spiking run needs than the dense one.
inline double efficiency_ratio(double ann_joules, double snn_joules) {
    if (!(ann_joules > 0.0)) throw DomainError("efficiency_ratio: ann_joules must be > 0");
    if (!(snn_joules > 0.0)) throw DomainError("efficiency_ratio: snn_joules must be > 0");
    return ann_joules / snn_joules;
}

/// A rate-coded convolution workload: an input_h x input_w image of uniform
/// intensity spike_rate, presented for `steps` steps.
struct ConvWorkload {
    std::string name = "workload";
    std::size_t input_h = 28;
    std::size_t input_w = 28;
    std::size_t kernel_radius = 2;
    std::size_t steps = 100;
    double spike_rate = 0.1;
    std::uint64_t seed = 1;

    void validate() const {
        if (kernel_radius < 1) throw ConfigError("kernel_radius >= 1 violated");
        if (input_h <= 2 * kernel_radius || input_w <= 2 * kernel_radius)
            throw ConfigError("input_h, input_w > 2 * kernel_radius violated");
        if (steps < 1) throw ConfigError("steps >= 1 violated");
        if (!(spike_rate >= 0.0 && spike_rate <= 1.0)) throw ConfigError("spike_rate ∈ [0,1] violated");
    }
};

/// Workload file entry: JSON object with keys name (optional), input_h,
/// input_w, kernel_radius, steps, spike_rate and seed (optional, taken from
/// `default_seed` when absent).
inline ConvWorkload conv_workload_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
    if (!j.is_object()) throw ConfigError("workload must be a JSON object");
    ConvWorkload w;
    auto count = [&](const char* key) -> std::size_t {
        if (!j.contains(key)) throw ConfigError(std::string("workload missing '") + key + "'");
        const auto& v = j.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError(std::string("workload '") + key + "' must be a nonnegative integer");
        return v.get<std::size_t>();
    };
    for (const auto& [key, _] : j.items()) {
        static const char* known[] = {"name", "input_h", "input_w", "kernel_radius", "steps", "spike_rate", "seed"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
            throw ConfigError("unknown key '" + key + "' in workload");
    }
    if (j.contains("name")) w.name = j.at("name").get<std::string>();
    w.input_h = count("input_h");
    w.input_w = count("input_w");
    w.kernel_radius = count("kernel_radius");
    w.steps = count("steps");
    if (!j.contains("spike_rate") || !j.at("spike_rate").is_number()) throw ConfigError("workload needs numeric 'spike_rate'");
    w.spike_rate = j.at("spike_rate").get<double>();
    w.seed = j.contains("seed") ? count("seed") : default_seed;
    w.validate();
    return w;
}

struct EnergyComparison {
    std::string workload;
    std::uint64_t macs = 0;
    std::uint64_t events = 0;
    double ann_joules = 0.0;
    double snn_joules = 0.0;
    /// Empty when the spiking run costs nothing.
    std::optional<double> ratio;
};

inline EnergyComparison compare_energy(const ConvWorkload& workload, const EnergyProfile& profile) {
    workload.validate();
    profile.validate();
    const Grid<double> intensity(workload.input_h, workload.input_w, workload.spike_rate);
    const auto spikes = rate_encode(intensity, workload.steps, 1.0, workload.seed);

    EnergyComparison c;
    c.workload = workload.name;
    c.macs = count_macs_dense_conv(workload.input_h, workload.input_w, workload.kernel_radius, workload.steps);
    c.events = count_synaptic_events(spikes, workload.kernel_radius);
    c.ann_joules = estimate_energy(MacCount{c.macs, workload.steps}, profile);
    c.snn_joules = estimate_energy(EventCounts{c.events, 0, workload.steps}, profile);
    if (c.snn_joules > 0.0) c.ratio = efficiency_ratio(c.ann_joules, c.snn_joules);
    return c;
}

} // namespace spikewatt
