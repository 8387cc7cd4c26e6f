#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "spikewatt/error.hpp"
#include "spikewatt/format.hpp"
#include "spikewatt/neuron.hpp"

namespace spikewatt {

struct StdpParams {
    static constexpr double default_a_plus = 0.03125;

    double a_plus = default_a_plus;
    double a_minus = 0.75 * default_a_plus;
    /// An input spike at most this many steps before the output spike
    /// (inclusive) counts as causal.
    std::uint32_t window_steps = 20;

    void validate() const {
        if (!(a_plus >= 0.0 && a_plus <= 1.0)) throw ConfigError("a_plus ∈ [0,1] violated (a_plus = " + format_double(a_plus) + ")");
        if (!(a_minus >= 0.0 && a_minus <= 1.0))
            throw ConfigError("a_minus ∈ [0,1] violated (a_minus = " + format_double(a_minus) + ")");
        if (window_steps < 1) throw ConfigError("window_steps >= 1 violated");
    }
};

/// Soft-bounded weight change for one (input, output) spike pair, with
/// dt = t_out - t_in. dt >= 0 potentiates by a_plus * w * (1 - w); dt < 0
/// depresses by a_minus * w * (1 - w). Both bounds 0 and 1 are fixed points.
inline double stdp_delta(double w, long long dt, const StdpParams& params) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("stdp_delta: weight " + format_double(w) + " outside [0,1]");
    const double soft = w * (1.0 - w);
    return dt >= 0 ? params.a_plus * soft : -params.a_minus * soft;
}

/// Updates every synapse once for an output spike at `t_out`.
///
/// A synapse whose most recent input spike lies in [t_out - window, t_out]
/// is potentiated; any other synapse is depressed. The result is clamped
/// to [0, 1] against rounding at the bounds.
inline SynapseVector apply_stdp_on_output_spike(SynapseVector weights,
                                                std::span<const std::optional<std::size_t>> last_input_spike,
                                                std::size_t t_out, const StdpParams& params) {
    if (last_input_spike.size() != weights.size()) {
        throw ShapeError("apply_stdp_on_output_spike: " + std::to_string(last_input_spike.size()) +
                         " spike records for " + std::to_string(weights.size()) + " weights");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto& last = last_input_spike[i];
        const bool causal = last && *last <= t_out && t_out - *last <= params.window_steps;
        const long long dt = causal ? static_cast<long long>(t_out - *last) : -1;
        const double w = weights[i];
        weights.set(i, std::clamp(w + stdp_delta(w, dt, params), 0.0, 1.0));
    }
    return weights;
}

} // namespace spikewatt
