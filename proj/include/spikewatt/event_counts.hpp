#pragma once

#include <cstdint>

namespace spikewatt {

/// Work done by a spiking run. Counts over disjoint time spans add.
struct EventCounts {
    std::uint64_t synaptic_events = 0;
    std::uint64_t output_spikes = 0;
    std::uint64_t steps = 0;

    EventCounts& operator+=(const EventCounts& o) {
        synaptic_events += o.synaptic_events;
        output_spikes += o.output_spikes;
        steps += o.steps;
        return *this;
    }
    friend EventCounts operator+(EventCounts a, const EventCounts& b) { return a += b; }
    friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

} // namespace spikewatt
