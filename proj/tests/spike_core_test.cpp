#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "spikewatt/neuron.hpp"
#include "spikewatt/spike_train.hpp"

using namespace spikewatt;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

} // namespace

TEST(RateEncode, ZeroValuesGiveNoSpikes) {
    const auto grid = rate_encode(Grid<double>(3, 4, 0.0), 50, 1.0, 7);
    EXPECT_EQ(grid.spike_count(), 0u);
    EXPECT_EQ(grid.steps(), 50u);
}

TEST(RateEncode, SaturatedValuesSpikeEveryStep) {
    const auto grid = rate_encode(Grid<double>(1, 10, 1.0), 10, 1.0, 3);
    EXPECT_EQ(grid.spike_count(), 100u);
}

TEST(RateEncode, HalfRateMatchesBinomial) {
    const auto m = oracle::binomial(10000, 0.5);
    const auto grid = rate_encode(Grid<double>(1, 1, 0.5), 10000, 1.0, 11);
    EXPECT_NEAR(static_cast<double>(grid.spike_count()), m.mean, 3 * m.sd);
}

TEST(RateEncode, MaxRateScalesProbability) {
    const auto m = oracle::binomial(40000, 0.8 * 0.25);
    const auto grid = rate_encode(Grid<double>(4, 1, 0.8), 10000, 0.25, 5);
    EXPECT_NEAR(static_cast<double>(grid.spike_count()), m.mean, 3 * m.sd);
}

TEST(RateEncode, SameSeedSameOutput) {
    Grid<double> values(5, 5, 0.3);
    values(2, 2) = 0.9;
    EXPECT_EQ(rate_encode(values, 40, 0.7, 99), rate_encode(values, 40, 0.7, 99));
    EXPECT_NE(rate_encode(values, 40, 0.7, 99), rate_encode(values, 40, 0.7, 100));
}

TEST(RateEncode, RejectsBadInput) {
    EXPECT_THROW(rate_encode(Grid<double>(2, 2, 1.5), 5, 1.0, 1), DomainError);
    EXPECT_THROW(rate_encode(Grid<double>(2, 2, -0.1), 5, 1.0, 1), DomainError);
    EXPECT_THROW(rate_encode(Grid<double>(2, 2, 0.5), 0, 1.0, 1), InvalidArgumentError);
}

TEST(SpikeTrainGrid, RejectsEmptyShapes) {
    EXPECT_THROW(SpikeTrainGrid(0, 1, 1), InvalidArgumentError);
    EXPECT_THROW(SpikeTrainGrid(1, 1, 0), InvalidArgumentError);
    SpikeTrainGrid g(2, 2, 2);
    EXPECT_THROW(g.set(2, 0, 0), BoundsError);
}

TEST(PostsynapticPotential, Examples) {
    EXPECT_EQ(postsynaptic_potential(SynapseVector({0.2, 0.5, 0.9}), bits({0, 0, 0})), 0.0);
    EXPECT_EQ(postsynaptic_potential(SynapseVector(7, 1.0), bits({1, 1, 1, 1, 1, 1, 1})), 7.0);
    EXPECT_DOUBLE_EQ(postsynaptic_potential(SynapseVector({0.2, 0.5, 0.9}), bits({1, 0, 1})), 1.1);
    EXPECT_THROW(postsynaptic_potential(SynapseVector({0.2, 0.5}), bits({1, 0, 1})), ShapeError);
}

TEST(SynapseVector, EnforcesBounds) {
    EXPECT_THROW(SynapseVector({0.5, 1.01}), DomainError);
    EXPECT_THROW(SynapseVector(std::vector<double>{}), InvalidArgumentError);
    SynapseVector w(3, 0.5);
    EXPECT_THROW(w.set(0, -0.01), DomainError);
}

TEST(StepNeuron, ZeroDynamics) {
    const auto out = step_neuron({}, {1.0, 0.5, 0}, 0.0, 0);
    EXPECT_FALSE(out.spiked);
    EXPECT_EQ(out.state.potential, 0.0);
}

TEST(StepNeuron, InstantaneousModeFiresAndResets) {
    const auto out = step_neuron({}, {1.0, 0.0, 0}, 1.1, 4);
    EXPECT_TRUE(out.spiked);
    EXPECT_EQ(out.state.potential, 0.0);
    EXPECT_EQ(out.state.last_spike_step, 4u);
}

TEST(StepNeuron, PerfectIntegrationFiresOnThirdInput) {
    const NeuronParams p{2.0, 1.0, 0};
    auto a = step_neuron({}, p, 0.9, 0);
    auto b = step_neuron(a.state, p, 0.9, 1);
    auto c = step_neuron(b.state, p, 0.9, 2);
    EXPECT_FALSE(a.spiked);
    EXPECT_FALSE(b.spiked);
    EXPECT_TRUE(c.spiked);
}

TEST(StepNeuron, ThresholdTieFires) {
    EXPECT_TRUE(step_neuron({}, {0.75, 0.0, 0}, 0.75, 0).spiked);
}

TEST(StepNeuron, RefractoryIgnoresInput) {
    const NeuronParams p{1.0, 0.0, 2};
    auto s = step_neuron({}, p, 5.0, 0);
    ASSERT_TRUE(s.spiked);
    EXPECT_EQ(s.state.refractory_remaining, 2u);
    s = step_neuron(s.state, p, 5.0, 1);
    EXPECT_FALSE(s.spiked);
    s = step_neuron(s.state, p, 5.0, 2);
    EXPECT_FALSE(s.spiked);
    EXPECT_EQ(s.state.refractory_remaining, 0u);
    EXPECT_TRUE(step_neuron(s.state, p, 5.0, 3).spiked);
}

TEST(StepNeuron, InstantaneousPotentialEqualsPsp) {
    Rng rng(17);
    const NeuronParams p{1e9, 0.0, 0};
    std::vector<double> w(20);
    for (auto& x : w) x = rng.uniform();
    const SynapseVector weights(w);
    NeuronState state;
    for (std::size_t t = 0; t < 200; ++t) {
        std::vector<std::uint8_t> frame(20);
        for (auto& b : frame) b = rng.bernoulli(0.3);
        const double psp = postsynaptic_potential(weights, frame);
        state = step_neuron(state, p, psp, t).state;
        ASSERT_EQ(state.potential, psp);
    }
}

TEST(RunPopulation, Examples) {
    const NeuronParams p{0.5, 0.0, 0};
    const auto silent = run_population(SpikeTrainGrid::population(3, 5), SynapseVector(3, 0.5), p);
    EXPECT_EQ(silent.output.spike_count(), 0u);
    EXPECT_EQ(silent.counts.synaptic_events, 0u);

    auto dense = SpikeTrainGrid::population(3, 5);
    for (std::size_t t = 0; t < 5; ++t)
        for (std::size_t i = 0; i < 3; ++i) dense.set_site(t, i);
    EXPECT_EQ(run_population(dense, SynapseVector(3, 0.1), p).counts.synaptic_events, 15u);

    auto single = SpikeTrainGrid::population(1, 6);
    single.set_site(2, 0);
    const auto run = run_population(single, SynapseVector(1, 1.0), p);
    EXPECT_EQ(run.output.spike_count(), 1u);
    EXPECT_TRUE(run.output.at_site(2, 0));

    EXPECT_THROW(run_population(dense, SynapseVector(2, 0.1), p), ShapeError);
}

TEST(RunPopulation, EventCountBounds) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const std::size_t n = 1 + rng.below(30);
        const std::size_t steps = 1 + rng.below(60);
        const auto inputs = rate_encode(Grid<double>(n, 1, rng.uniform()), steps, 1.0, seed);
        std::vector<double> w(n);
        for (auto& x : w) x = rng.uniform();
        const SynapseVector weights(w);
        const double leak = rng.uniform();

        for (double threshold : {0.1, 1.0, 8.0}) {
            const auto run = run_population(inputs, weights, {threshold, leak, 0});
            EXPECT_LE(run.counts.synaptic_events, n * steps);
            EXPECT_EQ(run.counts.synaptic_events, inputs.spike_count());
            EXPECT_EQ(run.output.steps(), steps);
        }
    }
}

TEST(RunPopulation, ThresholdMonotone) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const auto inputs = rate_encode(Grid<double>(25, 1, 0.4), 80, 1.0, seed);
        const SynapseVector weights(25, 0.3);
        const double leak = seed % 4 == 0 ? 0.0 : rng.uniform();
        std::size_t previous = SIZE_MAX;
        for (double threshold : {0.3, 0.9, 1.5, 2.4, 3.3, 6.0}) {
            const auto n = run_population(inputs, weights, {threshold, leak, 0}).output.spike_count();
            EXPECT_LE(n, previous);
            previous = n;
        }
    }
}

TEST(SpikeIo, BinaryAndCsvRoundTrip) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto grid = rate_encode(Grid<double>(1 + rng.below(9), 1 + rng.below(9), 0.3), 1 + rng.below(13), 1.0, seed);
        std::stringstream bin, csv;
        write_spikes_binary(bin, grid);
        write_spikes_csv(csv, grid);
        EXPECT_EQ(read_spikes_binary(bin), grid);
        EXPECT_EQ(read_spikes_csv(csv), grid);
    }
}

TEST(SpikeIo, BinaryLayoutIsExact) {
    SpikeTrainGrid g(1, 3, 3);
    g.set_site(0, 0);
    g.set_site(2, 2);
    std::stringstream out;
    write_spikes_binary(out, g);
    const std::string bytes = out.str();
    ASSERT_EQ(bytes.size(), 22u);
    EXPECT_EQ(bytes.substr(0, 4), "SPKT");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(bytes[8], 1);
    EXPECT_EQ(bytes[12], 3);
    EXPECT_EQ(bytes[16], 3);
    // Events at bit 0 and bit 8.
    EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 0x01);
    EXPECT_EQ(static_cast<unsigned char>(bytes[21]), 0x01);
}

TEST(SpikeIo, CsvRejectsMalformed) {
    std::stringstream dup("# height=1 width=2 steps=2\nsite,step\n1,0\n1,0\n");
    EXPECT_THROW(read_spikes_csv(dup), ParseError);
    std::stringstream outside("# height=1 width=2 steps=2\nsite,step\n2,0\n");
    EXPECT_THROW(read_spikes_csv(outside), ParseError);
    std::stringstream noshape("site,step\n0,0\n");
    EXPECT_THROW(read_spikes_csv(noshape), ParseError);
    std::stringstream bad("SPKX");
    EXPECT_THROW(read_spikes_binary(bad), ParseError);
}
