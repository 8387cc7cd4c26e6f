#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikewatt/error.hpp"
#include "spikewatt/event_counts.hpp"
#include "spikewatt/neuron.hpp"
#include "spikewatt/rng.hpp"
#include "spikewatt/spike_train.hpp"
#include "spikewatt/stdp.hpp"

namespace spikewatt {

/// Pattern-detection experiment. The input stream is a sequence of
/// presentations, each a background window of pure Bernoulli noise followed
/// by a pattern window in which the fixed pattern is overlaid on the noise.
/// Training presentations apply STDP at every output spike; the evaluation
/// presentations that follow use frozen weights and fresh noise.
struct PatternExperimentConfig {
    std::size_t n_afferents = 100;
    /// n_afferents x 1 sites, one step per pattern step.
    SpikeTrainGrid pattern = SpikeTrainGrid::population(100, 10);
    double background_rate = 0.01;
    std::size_t background_steps = 40;
    std::size_t presentations = 200;
    std::size_t eval_presentations = 50;
    std::uint64_t seed = 1;
    double initial_weight_min = 0.3;
    double initial_weight_max = 0.7;
    NeuronParams neuron{6.0, 0.8, 5};
    StdpParams stdp{};

    void validate() const {
        if (n_afferents < 1) throw ConfigError("n_afferents >= 1 violated");
        if (pattern.sites() != n_afferents)
            throw ConfigError("pattern sites == n_afferents violated (" + std::to_string(pattern.sites()) + " vs " +
                              std::to_string(n_afferents) + ")");
        if (!(background_rate >= 0.0 && background_rate <= 1.0)) throw ConfigError("background_rate ∈ [0,1] violated");
        if (presentations < 1) throw ConfigError("presentations >= 1 violated");
        if (background_steps < 1) throw ConfigError("background_steps >= 1 violated");
        if (!(initial_weight_min >= 0.0 && initial_weight_min <= initial_weight_max && initial_weight_max <= 1.0))
            throw ConfigError("0 <= initial_weight_min <= initial_weight_max <= 1 violated");
        neuron.validate();
        stdp.validate();
        if (pattern.steps() > stdp.window_steps) throw ConfigError("pattern steps <= window_steps violated");
    }
};

/// Pattern in which each afferent takes part with probability `density`
/// and, if it does, spikes once at a uniformly drawn step.
inline SpikeTrainGrid make_random_pattern(std::size_t n_afferents, std::size_t steps, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) throw ConfigError("pattern density ∈ [0,1] violated");
    SpikeTrainGrid pattern = SpikeTrainGrid::population(n_afferents, steps);
    Rng rng(seed);
    for (std::size_t i = 0; i < n_afferents; ++i) {
        const bool member = rng.bernoulli(density);
        const auto when = static_cast<std::size_t>(rng.below(steps));
        if (member) pattern.set_site(when, i);
    }
    return pattern;
}

struct DetectionReport {
    /// Fraction of evaluation presentations with at least one output spike
    /// inside the pattern window.
    double hit_rate = 0.0;
    /// Fraction of evaluation background windows with at least one output
    /// spike.
    double false_alarm_rate = 0.0;
    double training_hit_rate = 0.0;
    double training_false_alarm_rate = 0.0;
    /// Whole run, training and evaluation.
    EventCounts counts;

    friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

struct PatternTraining {
    SynapseVector weights;
    DetectionReport report;
};

/// Called after each training presentation with its index and the weights.
using PresentationObserver = std::function<void(std::size_t, const SynapseVector&)>;

inline PatternTraining train_pattern_detector(const PatternExperimentConfig& config,
                                              const PresentationObserver& observer = {}) {
    config.validate();
    const std::size_t n = config.n_afferents;

    Rng weight_rng(stream_seed(config.seed, 0));
    std::vector<double> initial(n);
    for (auto& w : initial) w = weight_rng.uniform(config.initial_weight_min, config.initial_weight_max);
    SynapseVector weights(std::move(initial));

    Rng noise(stream_seed(config.seed, 1));
    NeuronState state;
    std::vector<std::optional<std::size_t>> last_input(n);
    std::vector<std::uint8_t> frame(n);
    EventCounts counts;
    std::size_t t = 0;

    // Runs one window and returns the number of output spikes in it.
    auto run_window = [&](std::size_t length, const SpikeTrainGrid* overlay, bool plastic) {
        std::size_t fired = 0;
        for (std::size_t k = 0; k < length; ++k, ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                const bool spike = noise.bernoulli(config.background_rate) || (overlay && overlay->at_site(k, i));
                frame[i] = spike ? 1 : 0;
                if (spike) {
                    last_input[i] = t;
                    ++counts.synaptic_events;
                }
            }
            auto next = step_neuron(state, config.neuron, postsynaptic_potential(weights, frame), t);
            state = next.state;
            if (next.spiked) {
                ++fired;
                ++counts.output_spikes;
                if (plastic) weights = apply_stdp_on_output_spike(std::move(weights), last_input, t, config.stdp);
            }
        }
        return fired;
    };

    struct Tally {
        std::size_t hits = 0;
        std::size_t alarms = 0;
    };
    auto present = [&](std::size_t count, bool plastic, bool observe) {
        Tally tally;
        for (std::size_t p = 0; p < count; ++p) {
            if (run_window(config.background_steps, nullptr, plastic) > 0) ++tally.alarms;
            if (run_window(config.pattern.steps(), &config.pattern, plastic) > 0) ++tally.hits;
            if (observe && observer) observer(p, weights);
        }
        return tally;
    };

    const auto train = present(config.presentations, true, true);
    const auto eval = present(config.eval_presentations, false, false);
    counts.steps = t;

    auto rate = [](std::size_t k, std::size_t total) {
        return total == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(total);
    };
    DetectionReport report;
    report.training_hit_rate = rate(train.hits, config.presentations);
    report.training_false_alarm_rate = rate(train.alarms, config.presentations);
    report.hit_rate = rate(eval.hits, config.eval_presentations);
    report.false_alarm_rate = rate(eval.alarms, config.eval_presentations);
    report.counts = counts;
    return {std::move(weights), report};
}

// Config file: a JSON object. Every key is optional and falls back to the
// PatternExperimentConfig default; unknown keys are rejected.
//
//   n_afferents, presentations, eval_presentations, background_steps,
//   seed                                   integers
//   background_rate                        real in [0,1]
//   initial_weights: [min, max]            reals in [0,1]
//   pattern: { steps, density, seed }      random pattern (seed defaults
//                                          to the experiment seed)
//   pattern: { steps, events: [[afferent, step], ...] }
//   neuron: { threshold, leak, refractory_steps }
//   stdp:   { a_plus, a_minus, window_steps }

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad type for '") + key + "'");
    }
}

inline std::size_t get_count(const nlohmann::json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(std::string(key) + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

} // namespace detail

inline PatternExperimentConfig pattern_config_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j,
                           {"n_afferents", "presentations", "eval_presentations", "background_steps", "background_rate",
                            "seed", "initial_weights", "pattern", "neuron", "stdp"},
                           "experiment config");
    PatternExperimentConfig c;
    c.n_afferents = detail::get_count(j, "n_afferents", c.n_afferents);
    c.presentations = detail::get_count(j, "presentations", c.presentations);
    c.eval_presentations = detail::get_count(j, "eval_presentations", c.eval_presentations);
    c.background_steps = detail::get_count(j, "background_steps", c.background_steps);
    c.background_rate = detail::get_or(j, "background_rate", c.background_rate);
    c.seed = detail::get_count(j, "seed", c.seed);

    if (j.contains("initial_weights")) {
        const auto& iw = j.at("initial_weights");
        if (!iw.is_array() || iw.size() != 2 || !iw[0].is_number() || !iw[1].is_number())
            throw ConfigError("initial_weights must be [min, max]");
        c.initial_weight_min = iw[0].get<double>();
        c.initial_weight_max = iw[1].get<double>();
    }

    if (j.contains("neuron")) {
        const auto& nj = j.at("neuron");
        detail::reject_unknown(nj, {"threshold", "leak", "refractory_steps"}, "neuron");
        c.neuron.threshold = detail::get_or(nj, "threshold", c.neuron.threshold);
        c.neuron.leak = detail::get_or(nj, "leak", c.neuron.leak);
        c.neuron.refractory_steps =
            static_cast<std::uint32_t>(detail::get_count(nj, "refractory_steps", c.neuron.refractory_steps));
    }
    if (j.contains("stdp")) {
        const auto& sj = j.at("stdp");
        detail::reject_unknown(sj, {"a_plus", "a_minus", "window_steps"}, "stdp");
        c.stdp.a_plus = detail::get_or(sj, "a_plus", c.stdp.a_plus);
        // a_minus keeps its 0.75 * a_plus ratio unless given explicitly.
        c.stdp.a_minus = detail::get_or(sj, "a_minus", 0.75 * c.stdp.a_plus);
        c.stdp.window_steps = static_cast<std::uint32_t>(detail::get_count(sj, "window_steps", c.stdp.window_steps));
    }

    std::size_t pattern_steps = 10;
    double density = 0.5;
    std::uint64_t pattern_seed = c.seed;
    std::optional<nlohmann::json> events;
    if (j.contains("pattern")) {
        const auto& pj = j.at("pattern");
        detail::reject_unknown(pj, {"steps", "density", "seed", "events"}, "pattern");
        pattern_steps = detail::get_count(pj, "steps", pattern_steps);
        density = detail::get_or(pj, "density", density);
        pattern_seed = detail::get_count(pj, "seed", pattern_seed);
        if (pj.contains("events")) events = pj.at("events");
    }
    if (pattern_steps < 1) throw ConfigError("pattern steps >= 1 violated");
    if (c.n_afferents < 1) throw ConfigError("n_afferents >= 1 violated");

    if (events) {
        if (!events->is_array()) throw ConfigError("pattern events must be an array of [afferent, step]");
        c.pattern = SpikeTrainGrid::population(c.n_afferents, pattern_steps);
        for (const auto& e : *events) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
                throw ConfigError("pattern events must be an array of [afferent, step]");
            const auto site = e[0].get<std::size_t>();
            const auto step = e[1].get<std::size_t>();
            if (site >= c.n_afferents || step >= pattern_steps)
                throw ConfigError("pattern event [" + std::to_string(site) + "," + std::to_string(step) +
                                  "] outside n_afferents x steps");
            c.pattern.set_site(step, site);
        }
    } else {
        c.pattern = make_random_pattern(c.n_afferents, pattern_steps, density, stream_seed(pattern_seed, 2));
    }
    c.validate();
    return c;
}

} // namespace spikewatt

namespace spikewatt {

/// Default desk-scale experiment (random pattern) for the given seed.
inline PatternExperimentConfig default_pattern_experiment(std::uint64_t seed) {
    return pattern_config_from_json(nlohmann::json{{"seed", seed}});
}

} // namespace spikewatt
