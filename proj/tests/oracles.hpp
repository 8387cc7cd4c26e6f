#pragma once

// Reference computations that share no code path with the library. Tests
// freeze or compare against these.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

/// Binary input volume indexed [t][row][col].
using Volume = std::vector<std::vector<std::vector<int>>>;

/// V_m(u, v, t) as a direct triple sum over the step, the kernel rows and
/// the kernel columns, scattered from absolute input coordinates in long
/// double. Output site (u, v) is centered on input (u + r, v + r).
inline double conv_potential(const Volume& s, const std::vector<std::vector<double>>& kernel, int u, int v, int t) {
    const int side = static_cast<int>(kernel.size());
    long double acc = 0.0L;
    for (int tau = 0; tau <= t; ++tau) {
        for (int y = u; y < u + side; ++y) {
            for (int x = v; x < v + side; ++x) {
                if (s[tau][y][x]) acc += kernel[y - u][x - v];
            }
        }
    }
    return static_cast<double>(acc);
}

/// Synaptic events by enumeration: every (step, output site, tap) whose
/// input is spiking.
inline std::uint64_t enumerate_events(const Volume& s, int radius) {
    const int steps = static_cast<int>(s.size());
    const int h = static_cast<int>(s[0].size());
    const int w = static_cast<int>(s[0][0].size());
    const int side = 2 * radius + 1;
    std::uint64_t n = 0;
    for (int t = 0; t < steps; ++t)
        for (int u = 0; u + side <= h; ++u)
            for (int v = 0; v + side <= w; ++v)
                for (int a = 0; a < side; ++a)
                    for (int b = 0; b < side; ++b) n += s[t][u + a][v + b] != 0;
    return n;
}

/// NATURE evaluated straight from its definition with T converted to hours.
inline double nature(double n_exp, double a, double t_seconds, double u, double r, double e, double epochs) {
    const long double hours = static_cast<long double>(t_seconds) / 3600.0L;
    return static_cast<double>(n_exp * (a + hours * (static_cast<long double>(u) + r + e) * epochs));
}

/// Closed-form weight after k potentiation-only updates, iterated in long
/// double: w <- w + a w (1 - w).
inline long double potentiate(long double w, long double a, int k) {
    for (int i = 0; i < k; ++i) w += a * w * (1.0L - w);
    return w;
}

/// Binomial(n, p) mean and standard deviation.
struct Moments {
    double mean;
    double sd;
};
inline Moments binomial(double n, double p) { return {n * p, std::sqrt(n * p * (1.0 - p))}; }

} // namespace oracle
