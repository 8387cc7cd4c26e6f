#pragma once

#if __cplusplus < 202002L
#error spikewatt requires C++20 or newer.
#endif

#include "spikewatt/error.hpp"
#include "spikewatt/format.hpp"
#include "spikewatt/rng.hpp"
#include "spikewatt/grid.hpp"
#include "spikewatt/spike_train.hpp"
#include "spikewatt/event_counts.hpp"
#include "spikewatt/neuron.hpp"
#include "spikewatt/stdp.hpp"
#include "spikewatt/pattern_experiment.hpp"
#include "spikewatt/spiking_conv.hpp"
#include "spikewatt/energy.hpp"
#include "spikewatt/nature.hpp"
#include "spikewatt/artifacts.hpp"
