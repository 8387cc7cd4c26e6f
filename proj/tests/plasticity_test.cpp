#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spikewatt/pattern_experiment.hpp"
#include "spikewatt/stdp.hpp"

using namespace spikewatt;

TEST(StdpDelta, FixedPointsAtBounds) {
    const StdpParams p{0.7, 0.9, 20};
    for (long long dt : {-5LL, -1LL, 0LL, 1LL, 40LL}) {
        EXPECT_EQ(stdp_delta(0.0, dt, p), 0.0);
        EXPECT_EQ(stdp_delta(1.0, dt, p), 0.0);
    }
}

TEST(StdpDelta, Examples) {
    EXPECT_DOUBLE_EQ(stdp_delta(0.5, 3, {0.1, 0.0, 20}), 0.025);
    EXPECT_DOUBLE_EQ(stdp_delta(0.5, -1, {0.0, 0.2, 20}), -0.05);
}

TEST(StdpDelta, ZeroLagPotentiates) { EXPECT_GT(stdp_delta(0.3, 0, {0.1, 0.1, 20}), 0.0); }

TEST(StdpDelta, RejectsOutOfRangeWeight) {
    EXPECT_THROW(stdp_delta(1.2, 0, {}), DomainError);
    EXPECT_THROW(stdp_delta(-0.2, 0, {}), DomainError);
}

TEST(StdpDelta, SignMagnitudeAndLinearity) {
    Rng rng(2024);
    for (int k = 0; k < 20000; ++k) {
        const double w = rng.uniform();
        if (w == 0.0) continue;
        const StdpParams p{rng.uniform(0.0, 0.5), rng.uniform(), 20};
        const long long dt = static_cast<long long>(rng.below(41)) - 20;
        const double d = stdp_delta(w, dt, p);
        EXPECT_EQ(d >= 0.0, dt >= 0);
        EXPECT_LE(std::abs(d), std::max(p.a_plus, p.a_minus) / 4.0);
        if (dt >= 0) {
            EXPECT_EQ(stdp_delta(w, dt, {2 * p.a_plus, p.a_minus, 20}), 2 * d);
        }
    }
}

TEST(StdpDelta, RandomSequencesStayConfined) {
    Rng rng(5);
    for (int seq = 0; seq < 2000; ++seq) {
        double w = rng.uniform();
        const StdpParams p{rng.uniform(), rng.uniform(), 20};
        for (int k = 0; k < 50; ++k) {
            w += stdp_delta(w, rng.bernoulli(0.5) ? 1 : -1, p);
            ASSERT_GE(w, 0.0);
            ASSERT_LE(w, 1.0);
        }
    }
}

TEST(ApplyStdp, AllCausalPotentiates) {
    const std::vector<std::optional<std::size_t>> last(3, std::size_t{10});
    const auto w = apply_stdp_on_output_spike(SynapseVector({0.0, 1.0, 0.5}), last, 10, {0.1, 0.075, 20});
    EXPECT_EQ(w[0], 0.0);
    EXPECT_EQ(w[1], 1.0);
    EXPECT_DOUBLE_EQ(w[2], 0.525);
}

TEST(ApplyStdp, NothingInWindowDepresses) {
    const StdpParams p{0.1, 0.2, 5};
    const std::vector<std::optional<std::size_t>> last = {std::nullopt, std::size_t{2}, std::size_t{30}, std::size_t{100}};
    const SynapseVector before({0.4, 0.6, 0.01, 0.99});
    // Spikes at 2 (too old), 30 (too old) and 100 (after t_out) are all non-causal.
    const auto after = apply_stdp_on_output_spike(before, last, 50, p);
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_LT(after[i], before[i]);
        EXPECT_GE(after[i], 0.0);
        EXPECT_DOUBLE_EQ(after[i], before[i] + stdp_delta(before[i], -1, p));
    }
}

TEST(ApplyStdp, WindowEdgesAreInclusive) {
    const StdpParams p{0.1, 0.1, 5};
    const std::vector<std::optional<std::size_t>> last = {std::size_t{45}, std::size_t{44}, std::size_t{50}};
    const auto after = apply_stdp_on_output_spike(SynapseVector(3, 0.5), last, 50, p);
    EXPECT_GT(after[0], 0.5);
    EXPECT_LT(after[1], 0.5);
    EXPECT_GT(after[2], 0.5);
}

TEST(ApplyStdp, ShapeMismatch) {
    const std::vector<std::optional<std::size_t>> last(2);
    EXPECT_THROW(apply_stdp_on_output_spike(SynapseVector(3, 0.5), last, 0, {}), ShapeError);
}

namespace {

PatternExperimentConfig synchronous_pattern_config() {
    PatternExperimentConfig c = default_pattern_experiment(3);
    c.n_afferents = 20;
    c.pattern = SpikeTrainGrid::population(20, 1);
    for (std::size_t i = 0; i < 20; ++i) c.pattern.set_site(0, i);
    c.background_rate = 0.0;
    c.background_steps = 5;
    c.presentations = 120;
    c.eval_presentations = 5;
    c.neuron = {1.0, 0.0, 0};
    c.stdp = {0.05, 0.0375, 20};
    return c;
}

} // namespace

TEST(TrainPatternDetector, SynchronousPatternSaturatesAlongClosedForm) {
    const auto config = synchronous_pattern_config();
    std::vector<std::vector<double>> history;
    const auto result = train_pattern_detector(config, [&](std::size_t, const SynapseVector& w) {
        history.emplace_back(w.values().begin(), w.values().end());
    });
    ASSERT_EQ(history.size(), config.presentations);

    // One output spike per presentation, each a zero-lag potentiation.
    Rng init(stream_seed(config.seed, 0));
    for (std::size_t i = 0; i < config.n_afferents; ++i) {
        const long double w0 = init.uniform(0.3, 0.7);
        double previous = static_cast<double>(w0);
        for (std::size_t k = 0; k < history.size(); ++k) {
            const double w = history[k][i];
            EXPECT_NEAR(w, static_cast<double>(oracle::potentiate(w0, 0.05L, static_cast<int>(k + 1))), 1e-12);
            if (previous < 1.0) {
                EXPECT_GT(w, previous);
            }
            previous = w;
        }
        EXPECT_GT(result.weights[i], 0.99);
    }
    EXPECT_EQ(result.report.hit_rate, 1.0);
    EXPECT_EQ(result.report.false_alarm_rate, 0.0);
    EXPECT_EQ(result.report.counts.output_spikes, config.presentations + config.eval_presentations);
}

TEST(TrainPatternDetector, ZeroLearningLeavesWeights) {
    auto config = default_pattern_experiment(9);
    config.stdp = {0.0, 0.0, 20};
    config.presentations = 30;
    std::vector<double> first;
    const auto result = train_pattern_detector(config, [&](std::size_t k, const SynapseVector& w) {
        if (k == 0) first.assign(w.values().begin(), w.values().end());
    });
    EXPECT_EQ(std::vector<double>(result.weights.values().begin(), result.weights.values().end()), first);
    for (double w : result.weights.values()) {
        EXPECT_GE(w, 0.3);
        EXPECT_LE(w, 0.7);
    }
    EXPECT_GE(result.report.hit_rate, 0.0);
    EXPECT_LE(result.report.hit_rate, 1.0);
    EXPECT_GE(result.report.false_alarm_rate, 0.0);
    EXPECT_LE(result.report.false_alarm_rate, 1.0);
    EXPECT_GT(result.report.counts.synaptic_events, 0u);
}

TEST(TrainPatternDetector, DeterministicUnderSeed) {
    const auto a = train_pattern_detector(default_pattern_experiment(4));
    const auto b = train_pattern_detector(default_pattern_experiment(4));
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.report, b.report);
    EXPECT_NE(train_pattern_detector(default_pattern_experiment(5)).weights, a.weights);
}

TEST(TrainPatternDetector, DeskScaleRunDetectsPattern) {
    const auto r = train_pattern_detector(default_pattern_experiment(1)).report;
    EXPECT_GE(r.hit_rate, 0.9);
    EXPECT_LE(r.false_alarm_rate, 0.1);
}

TEST(PatternConfig, RejectsInvariantViolations) {
    try {
        pattern_config_from_json({{"stdp", {{"a_plus", 2.0}}}});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("a_plus ∈ [0,1]"), std::string::npos);
    }
    EXPECT_THROW(pattern_config_from_json({{"presentations", 0}}), ConfigError);
    EXPECT_THROW(pattern_config_from_json({{"pattern", {{"steps", 30}}}}), ConfigError);
    EXPECT_THROW(pattern_config_from_json({{"bogus", 1}}), ConfigError);
    EXPECT_THROW(pattern_config_from_json({{"neuron", {{"leak", 1.5}}}}), ConfigError);
    EXPECT_THROW(pattern_config_from_json({{"pattern", {{"steps", 2}, {"events", {{0, 5}}}}}}), ConfigError);
}

TEST(PatternConfig, ExplicitEvents) {
    const auto c = pattern_config_from_json(nlohmann::json::parse(
        R"({"n_afferents": 4, "pattern": {"steps": 3, "events": [[0, 0], [3, 2]]}})"));
    EXPECT_EQ(c.pattern.spike_count(), 2u);
    EXPECT_TRUE(c.pattern.at_site(2, 3));
}

TEST(PatternConfig, DefaultsMatchShippedConstants) {
    const auto c = default_pattern_experiment(1);
    EXPECT_EQ(c.stdp.a_plus, 0.03125);
    EXPECT_EQ(c.stdp.a_minus, 0.75 * 0.03125);
    EXPECT_EQ(c.stdp.window_steps, 20u);
    EXPECT_EQ(c.n_afferents, 100u);
    EXPECT_EQ(c.presentations, 200u);
}
