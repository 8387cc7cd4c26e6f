#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "spikewatt/error.hpp"
#include "spikewatt/event_counts.hpp"
#include "spikewatt/format.hpp"
#include "spikewatt/grid.hpp"
#include "spikewatt/spike_train.hpp"

namespace spikewatt {

/// Square (2r+1) x (2r+1) kernel. tap(i, j) with i, j in [-r, r] weights the
/// input at (u + i, v + j) for output site (u, v); i runs along rows.
/// This is a correlation: the kernel is not flipped.
class Kernel {
public:
    explicit Kernel(Grid<double> taps) : taps_(std::move(taps)) {
        if (taps_.height() != taps_.width() || taps_.height() % 2 == 0 || taps_.height() < 3)
            throw InvalidArgumentError("kernel must be odd square with radius >= 1, got " + std::to_string(taps_.height()) +
                                       "x" + std::to_string(taps_.width()));
        for (double w : taps_.data()) {
            if (!std::isfinite(w)) throw DomainError("kernel taps must be finite");
        }
    }

    static Kernel filled(std::size_t radius, double value) {
        return Kernel(Grid<double>(2 * radius + 1, 2 * radius + 1, value));
    }

    std::size_t radius() const noexcept { return taps_.height() / 2; }
    std::size_t side() const noexcept { return taps_.height(); }

    double tap(long i, long j) const {
        const auto r = static_cast<long>(radius());
        return taps_.at(static_cast<std::size_t>(i + r), static_cast<std::size_t>(j + r));
    }

    const Grid<double>& taps() const noexcept { return taps_; }

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    Grid<double> taps_;
};

/// Reads a real matrix from text: one row per line, values separated by
/// whitespace or commas. Blank lines and lines starting with '#' are skipped.
inline Grid<double> read_matrix_text(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        std::string cleaned(text);
        for (char& c : cleaned) {
            if (c == ',' || c == '\t') c = ' ';
        }
        std::vector<double> row;
        for (auto tok : split(cleaned, ' ')) {
            if (trim(tok).empty()) continue;
            const auto v = parse_double(tok);
            if (!v) throw ParseError("bad matrix value '" + std::string(trim(tok)) + "'", lineno);
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged matrix row", lineno);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix file has no rows");
    Grid<double> grid(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) grid(r, c) = rows[r][c];
    }
    return grid;
}

inline Kernel read_kernel_text(std::istream& in) {
    try {
        return Kernel(read_matrix_text(in));
    } catch (const InvalidArgumentError& e) {
        throw ParseError(e.what());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

inline void write_kernel_text(std::ostream& out, const Kernel& kernel) {
    const auto& taps = kernel.taps();
    for (std::size_t r = 0; r < taps.height(); ++r) {
        for (std::size_t c = 0; c < taps.width(); ++c) out << (c ? " " : "") << format_double(taps(r, c));
        out << '\n';
    }
}

/// Output grid size under "valid" borders: no padding, so a side of n
/// inputs gives n - 2r outputs.
inline std::size_t valid_extent(std::size_t input, std::size_t radius) {
    if (input <= 2 * radius)
        throw ShapeError("input extent " + std::to_string(input) + " too small for kernel radius " + std::to_string(radius));
    return input - 2 * radius;
}

/// Membrane potential of output site (u, v) accumulated over steps 0..t.
///
/// Summation order is fixed: steps outermost, kernel offset j (columns)
/// in the middle, offset i (rows) innermost; each step's partial sum is
/// added to the running total. step_conv_layer uses the same order, so
/// the two agree bit for bit.
inline double conv_membrane_potential(const SpikeTrainGrid& inputs, const Kernel& kernel, std::size_t u, std::size_t v,
                                      std::size_t t) {
    const std::size_t r = kernel.radius();
    const std::size_t out_h = valid_extent(inputs.height(), r);
    const std::size_t out_w = valid_extent(inputs.width(), r);
    if (u >= out_h || v >= out_w)
        throw BoundsError("output site (" + std::to_string(u) + "," + std::to_string(v) + ") outside " +
                          std::to_string(out_h) + "x" + std::to_string(out_w));
    if (t >= inputs.steps()) throw BoundsError("step " + std::to_string(t) + " >= " + std::to_string(inputs.steps()));

    const long rr = static_cast<long>(r);
    double total = 0.0;
    for (std::size_t tau = 0; tau <= t; ++tau) {
        double frame_sum = 0.0;
        for (long j = -rr; j <= rr; ++j) {
            for (long i = -rr; i <= rr; ++i) {
                if (inputs.at(tau, u + r + i, v + r + j)) frame_sum += kernel.tap(i, j);
            }
        }
        total += frame_sum;
    }
    return total;
}

struct ConvParams {
    /// Firing threshold; +infinity disables firing.
    double gamma = 1.0;
    /// Latch each site after its first spike instead of resetting it.
    bool fire_once = false;

    void validate() const {
        if (!(gamma > 0.0)) throw ConfigError("gamma > 0 violated");
    }
};

struct ConvLayerState {
    Grid<double> potentials;
    /// 1 where the site has fired at least once.
    Grid<std::uint8_t> fired;

    /// Zero state for an input of the given size.
    static ConvLayerState for_input(std::size_t input_h, std::size_t input_w, const Kernel& kernel) {
        const auto h = valid_extent(input_h, kernel.radius());
        const auto w = valid_extent(input_w, kernel.radius());
        return {Grid<double>(h, w, 0.0), Grid<std::uint8_t>(h, w, 0)};
    }

    friend bool operator==(const ConvLayerState&, const ConvLayerState&) = default;
};

struct ConvStep {
    ConvLayerState state;
    Grid<std::uint8_t> spikes;
    EventCounts delta;
};

/// Integrates one input frame. Each output site adds the kernel-weighted
/// sum of the spikes in its receptive field; sites at or above gamma emit a
/// spike and reset to 0. One synaptic event is counted per (input spike,
/// output site covering it).
inline ConvStep step_conv_layer(ConvLayerState state, const FrameView& frame, const Kernel& kernel,
                                const ConvParams& params) {
    params.validate();
    const std::size_t r = kernel.radius();
    const bool state_consistent = state.potentials.height() == state.fired.height() &&
                                  state.potentials.width() == state.fired.width();
    if (!state_consistent || frame.height != state.potentials.height() + 2 * r ||
        frame.width != state.potentials.width() + 2 * r) {
        throw ShapeError("input frame " + std::to_string(frame.height) + "x" + std::to_string(frame.width) +
                         " does not match layer state " + std::to_string(state.potentials.height()) + "x" +
                         std::to_string(state.potentials.width()) + " with kernel radius " + std::to_string(r));
    }

    const std::size_t out_h = state.potentials.height();
    const std::size_t out_w = state.potentials.width();
    ConvStep step{std::move(state), Grid<std::uint8_t>(out_h, out_w, 0), {0, 0, 1}};
    auto& st = step.state;

    bool any = false;
    for (auto b : frame.bits) any = any || b;
    if (!any) return step;

    const long rr = static_cast<long>(r);
    for (std::size_t u = 0; u < out_h; ++u) {
        for (std::size_t v = 0; v < out_w; ++v) {
            double frame_sum = 0.0;
            for (long j = -rr; j <= rr; ++j) {
                for (long i = -rr; i <= rr; ++i) {
                    if (frame.at(u + r + i, v + r + j)) {
                        frame_sum += kernel.tap(i, j);
                        ++step.delta.synaptic_events;
                    }
                }
            }
            if (params.fire_once && st.fired(u, v)) continue;
            double& vm = st.potentials(u, v);
            vm += frame_sum;
            if (vm >= params.gamma) {
                vm = 0.0;
                st.fired(u, v) = 1;
                step.spikes(u, v) = 1;
                ++step.delta.output_spikes;
            }
        }
    }
    return step;
}

struct ConvRun {
    ConvLayerState state;
    /// Output spikes, (H - 2r) x (W - 2r) sites over the input's steps.
    SpikeTrainGrid output;
    EventCounts counts;
};

inline ConvRun run_conv_layer(const SpikeTrainGrid& inputs, const Kernel& kernel, const ConvParams& params) {
    auto state = ConvLayerState::for_input(inputs.height(), inputs.width(), kernel);
    ConvRun run{state, SpikeTrainGrid(state.potentials.height(), state.potentials.width(), inputs.steps()), {}};
    for (std::size_t t = 0; t < inputs.steps(); ++t) {
        auto step = step_conv_layer(std::move(run.state), inputs.frame(t), kernel, params);
        run.state = std::move(step.state);
        run.counts += step.delta;
        const auto& spikes = step.spikes.data();
        for (std::size_t s = 0; s < spikes.size(); ++s) {
            if (spikes[s]) run.output.set_site(t, s);
        }
    }
    return run;
}

inline constexpr double no_firing = std::numeric_limits<double>::infinity();

} // namespace spikewatt
