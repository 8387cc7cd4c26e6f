#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "spikewatt/error.hpp"
#include "spikewatt/format.hpp"

namespace spikewatt {

/// Read-only view of one time step of a spike grid, row-major.
struct FrameView {
    std::span<const std::uint8_t> bits;
    std::size_t height = 0;
    std::size_t width = 0;

    bool at(std::size_t row, std::size_t col) const { return bits[row * width + col] != 0; }
};

/// Binary spike events on a height x width grid over discrete steps.
///
/// A 1-D afferent population is a grid of width 1 (one site per row).
/// Each (site, step) holds at most one spike; storage is one byte per
/// event slot, step-major then row-major.
class SpikeTrainGrid {
public:
    SpikeTrainGrid(std::size_t height, std::size_t width, std::size_t steps)
        : height_(height), width_(width), steps_(steps) {
        if (height == 0 || width == 0) throw InvalidArgumentError("spike grid shape dimensions must be >= 1");
        if (steps == 0) throw InvalidArgumentError("spike grid steps must be >= 1");
        events_.assign(height * width * steps, 0);
    }

    /// Population of `n` afferents (width 1).
    static SpikeTrainGrid population(std::size_t n, std::size_t steps) { return {n, 1, steps}; }

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t sites() const noexcept { return height_ * width_; }
    std::size_t steps() const noexcept { return steps_; }

    bool at(std::size_t step, std::size_t row, std::size_t col) const {
        return events_[index(step, row * width_ + col)] != 0;
    }
    void set(std::size_t step, std::size_t row, std::size_t col, bool spike = true) {
        events_[index(step, row * width_ + col)] = spike ? 1 : 0;
    }

    bool at_site(std::size_t step, std::size_t site) const { return events_[index(step, site)] != 0; }
    void set_site(std::size_t step, std::size_t site, bool spike = true) { events_[index(step, site)] = spike ? 1 : 0; }

    FrameView frame(std::size_t step) const {
        if (step >= steps_) throw BoundsError("step " + std::to_string(step) + " out of range");
        return {std::span<const std::uint8_t>(events_).subspan(step * sites(), sites()), height_, width_};
    }

    std::size_t spike_count() const {
        std::size_t n = 0;
        for (auto e : events_) n += e;
        return n;
    }

    std::size_t spike_count(std::size_t step) const {
        std::size_t n = 0;
        for (auto e : frame(step).bits) n += e;
        return n;
    }

    friend bool operator==(const SpikeTrainGrid&, const SpikeTrainGrid&) = default;

private:
    std::size_t index(std::size_t step, std::size_t site) const {
        if (step >= steps_ || site >= sites()) {
            throw BoundsError("spike grid index (site " + std::to_string(site) + ", step " + std::to_string(step) +
                              ") out of range");
        }
        return step * sites() + site;
    }

    std::size_t height_;
    std::size_t width_;
    std::size_t steps_;
    std::vector<std::uint8_t> events_;
};

// Binary layout, all integers little-endian:
//   bytes 0..3   magic "SPKT"
//   byte  4      format version (1)
//   bytes 5..7   reserved, zero
//   bytes 8..11  height (uint32)
//   bytes 12..15 width (uint32)
//   bytes 16..19 steps (uint32)
//   bytes 20..   events bit-packed in step-major, row-major order; bit k of
//                the body is byte k/8, bit k%8 (LSB first). Trailing pad
//                bits are zero.

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b.data(), 4);
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

} // namespace detail

inline void write_spikes_binary(std::ostream& out, const SpikeTrainGrid& grid) {
    out.write("SPKT", 4);
    const char version[4] = {1, 0, 0, 0};
    out.write(version, 4);
    detail::put_u32(out, static_cast<std::uint32_t>(grid.height()));
    detail::put_u32(out, static_cast<std::uint32_t>(grid.width()));
    detail::put_u32(out, static_cast<std::uint32_t>(grid.steps()));

    std::vector<char> body((grid.sites() * grid.steps() + 7) / 8, 0);
    std::size_t k = 0;
    for (std::size_t t = 0; t < grid.steps(); ++t) {
        for (auto bit : grid.frame(t).bits) {
            if (bit) body[k / 8] = static_cast<char>(body[k / 8] | (1 << (k % 8)));
            ++k;
        }
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("failed writing binary spike train");
}

inline SpikeTrainGrid read_spikes_binary(std::istream& in) {
    unsigned char header[20];
    if (!in.read(reinterpret_cast<char*>(header), sizeof header)) throw ParseError("binary spike train: truncated header");
    if (header[0] != 'S' || header[1] != 'P' || header[2] != 'K' || header[3] != 'T')
        throw ParseError("binary spike train: bad magic");
    if (header[4] != 1) throw ParseError("binary spike train: unsupported version " + std::to_string(header[4]));
    const auto height = detail::get_u32(header + 8);
    const auto width = detail::get_u32(header + 12);
    const auto steps = detail::get_u32(header + 16);
    if (height == 0 || width == 0 || steps == 0) throw ParseError("binary spike train: zero dimension in header");

    SpikeTrainGrid grid(height, width, steps);
    const std::size_t nbits = grid.sites() * grid.steps();
    std::vector<unsigned char> body((nbits + 7) / 8);
    if (!in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size())))
        throw ParseError("binary spike train: truncated body");
    for (std::size_t k = 0; k < nbits; ++k) {
        if (body[k / 8] & (1u << (k % 8))) grid.set_site(k / grid.sites(), k % grid.sites());
    }
    if (nbits % 8 != 0 && (body.back() >> (nbits % 8)) != 0) throw ParseError("binary spike train: nonzero pad bits");
    return grid;
}

// CSV layout:
//   # spikewatt spike train v1
//   # height=H width=W steps=T
//   site,step
//   <site>,<step>        one line per spike, ordered by step then site
// where site = row * W + col.

inline void write_spikes_csv(std::ostream& out, const SpikeTrainGrid& grid) {
    out << "# spikewatt spike train v1\n";
    out << "# height=" << grid.height() << " width=" << grid.width() << " steps=" << grid.steps() << '\n';
    out << "site,step\n";
    for (std::size_t t = 0; t < grid.steps(); ++t) {
        const auto bits = grid.frame(t).bits;
        for (std::size_t s = 0; s < bits.size(); ++s) {
            if (bits[s]) out << s << ',' << t << '\n';
        }
    }
    if (!out) throw IoError("failed writing spike CSV");
}

inline SpikeTrainGrid read_spikes_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    long long height = -1, width = -1, steps = -1;
    bool header_seen = false;
    std::vector<std::pair<std::size_t, std::size_t>> events;

    while (std::getline(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            for (auto tok : split(text.substr(1), ' ')) {
                tok = trim(tok);
                const auto eq = tok.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = tok.substr(0, eq);
                const auto val = parse_integer(tok.substr(eq + 1));
                if (!val) throw ParseError("bad value for '" + std::string(key) + "'", lineno);
                if (key == "height") height = *val;
                else if (key == "width") width = *val;
                else if (key == "steps") steps = *val;
            }
            continue;
        }
        if (!header_seen) {
            if (text != "site,step") throw ParseError("expected header 'site,step'", lineno);
            header_seen = true;
            continue;
        }
        const auto cols = split(text, ',');
        if (cols.size() != 2) throw ParseError("expected 2 columns", lineno);
        const auto site = parse_integer(cols[0]);
        const auto step = parse_integer(cols[1]);
        if (!site || !step || *site < 0 || *step < 0) throw ParseError("site and step must be nonnegative integers", lineno);
        events.emplace_back(static_cast<std::size_t>(*site), static_cast<std::size_t>(*step));
    }
    if (height < 1 || width < 1 || steps < 1) throw ParseError("missing or invalid '# height= width= steps=' line");
    if (!header_seen) throw ParseError("missing 'site,step' header");

    SpikeTrainGrid grid(static_cast<std::size_t>(height), static_cast<std::size_t>(width), static_cast<std::size_t>(steps));
    for (const auto& [site, step] : events) {
        if (site >= grid.sites() || step >= grid.steps())
            throw ParseError("event (" + std::to_string(site) + "," + std::to_string(step) + ") outside declared shape");
        if (grid.at_site(step, site))
            throw ParseError("duplicate event (" + std::to_string(site) + "," + std::to_string(step) + ")");
        grid.set_site(step, site);
    }
    return grid;
}

} // namespace spikewatt
