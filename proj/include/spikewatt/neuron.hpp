#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spikewatt/error.hpp"
#include "spikewatt/event_counts.hpp"
#include "spikewatt/format.hpp"
#include "spikewatt/grid.hpp"
#include "spikewatt/rng.hpp"
#include "spikewatt/spike_train.hpp"

namespace spikewatt {

/// Synaptic weights of one neuron, each confined to [0, 1].
class SynapseVector {
public:
    explicit SynapseVector(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) throw InvalidArgumentError("synapse vector must have at least one weight");
        for (std::size_t i = 0; i < weights_.size(); ++i) check(i, weights_[i]);
    }

    SynapseVector(std::initializer_list<double> weights) : SynapseVector(std::vector<double>(weights)) {}
    SynapseVector(std::size_t n, double w) : SynapseVector(std::vector<double>(n, w)) {}

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

    void set(std::size_t i, double w) {
        check(i, w);
        weights_.at(i) = w;
    }

    std::span<const double> values() const noexcept { return weights_; }

    double sum() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    friend bool operator==(const SynapseVector&, const SynapseVector&) = default;

private:
    static void check(std::size_t i, double w) {
        if (!(w >= 0.0 && w <= 1.0))
            throw DomainError("weight " + std::to_string(i) + " = " + format_double(w) + " outside [0,1]");
    }

    std::vector<double> weights_;
};

struct NeuronParams {
    double threshold = 1.0;
    /// Fraction of the potential retained per step. 0 gives instantaneous
    /// summation, 1 gives perfect integration.
    double leak = 0.0;
    std::uint32_t refractory_steps = 0;

    void validate() const {
        if (!(threshold > 0.0)) throw ConfigError("neuron threshold > 0 violated");
        if (!(leak >= 0.0 && leak <= 1.0)) throw ConfigError("neuron leak ∈ [0,1] violated");
    }
};

struct NeuronState {
    double potential = 0.0;
    std::optional<std::size_t> last_spike_step;
    std::uint32_t refractory_remaining = 0;

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

struct NeuronStep {
    NeuronState state;
    bool spiked = false;
};

/// Bernoulli rate coding: site (r, c) spikes at each step independently with
/// probability values(r, c) * max_rate. Draws are consumed step-major then
/// row-major, one per site per step, so output depends only on the arguments.
inline SpikeTrainGrid rate_encode(const Grid<double>& values, std::size_t steps, double max_rate, std::uint64_t seed) {
    if (steps == 0) throw InvalidArgumentError("rate_encode: steps must be >= 1");
    if (values.height() == 0 || values.width() == 0) throw InvalidArgumentError("rate_encode: empty value grid");
    if (!(max_rate >= 0.0 && max_rate <= 1.0)) throw DomainError("rate_encode: max_rate outside [0,1]");
    for (double v : values.data()) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("rate_encode: value " + format_double(v) + " outside [0,1]");
    }

    SpikeTrainGrid out(values.height(), values.width(), steps);
    Rng rng(seed);
    const auto& probs = values.data();
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t s = 0; s < probs.size(); ++s) {
            if (rng.bernoulli(probs[s] * max_rate)) out.set_site(t, s);
        }
    }
    return out;
}

/// Weighted sum of the active inputs, accumulated in index order.
inline double postsynaptic_potential(const SynapseVector& weights, std::span<const std::uint8_t> spikes) {
    if (spikes.size() != weights.size()) {
        throw ShapeError("postsynaptic_potential: " + std::to_string(spikes.size()) + " inputs for " +
                         std::to_string(weights.size()) + " weights");
    }
    double v = 0.0;
    for (std::size_t i = 0; i < spikes.size(); ++i) {
        if (spikes[i]) v += weights[i];
    }
    return v;
}

/// Advances one neuron by one step. A refractory neuron ignores its input.
/// Reaching the threshold (>=) fires and resets the potential to 0.
inline NeuronStep step_neuron(NeuronState state, const NeuronParams& params, double input_potential, std::size_t step) {
    if (state.refractory_remaining > 0) {
        --state.refractory_remaining;
        state.potential *= params.leak;
        return {state, false};
    }
    state.potential = params.leak * state.potential + input_potential;
    if (state.potential >= params.threshold) {
        state.potential = 0.0;
        state.last_spike_step = step;
        state.refractory_remaining = params.refractory_steps;
        return {state, true};
    }
    return {state, false};
}

struct PopulationRun {
    SpikeTrainGrid output;
    EventCounts counts;
};

/// Drives a single neuron with every step of `inputs`; input site i feeds
/// synapse i.
inline PopulationRun run_population(const SpikeTrainGrid& inputs, const SynapseVector& weights,
                                    const NeuronParams& params) {
    if (inputs.sites() != weights.size()) {
        throw ShapeError("run_population: " + std::to_string(inputs.sites()) + " input sites for " +
                         std::to_string(weights.size()) + " weights");
    }
    params.validate();

    PopulationRun run{SpikeTrainGrid::population(1, inputs.steps()), {}};
    NeuronState state;
    for (std::size_t t = 0; t < inputs.steps(); ++t) {
        const auto frame = inputs.frame(t).bits;
        for (auto bit : frame) run.counts.synaptic_events += bit;
        auto next = step_neuron(state, params, postsynaptic_potential(weights, frame), t);
        state = next.state;
        if (next.spiked) {
            run.output.set_site(t, 0);
            ++run.counts.output_spikes;
        }
    }
    run.counts.steps = inputs.steps();
    return run;
}

} // namespace spikewatt
