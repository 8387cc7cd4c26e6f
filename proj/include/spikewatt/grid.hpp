#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spikewatt/error.hpp"

namespace spikewatt {

/// Dense row-major 2-D array.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t height, std::size_t width, T fill = T{})
        : height_(height), width_(width), data_(height * width, fill) {}

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

    T& at(std::size_t row, std::size_t col) {
        check(row, col);
        return (*this)(row, col);
    }
    const T& at(std::size_t row, std::size_t col) const {
        check(row, col);
        return (*this)(row, col);
    }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    bool same_shape(const Grid& other) const { return height_ == other.height_ && width_ == other.width_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    void check(std::size_t row, std::size_t col) const {
        if (row >= height_ || col >= width_)
            throw BoundsError("grid index (" + std::to_string(row) + "," + std::to_string(col) + ") out of range");
    }

    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<T> data_;
};

} // namespace spikewatt
