#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mixobs {

/// splitmix64 step; used to whiten seeds and to derive independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives a stream seed from (master, a, b) so that adding budgets or
/// trials never perturbs the streams of existing ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// Seeded generator wrapping std::mt19937_64 with hand-rolled output
/// distributions, so every draw is reproducible bit-for-bit from the seed.
/// Counts normal draws; the simulation harness is audited on that counter.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Uniform in [0,1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via Box-Muller (one variate per call).
    double normal();

    /// mean + stddev * standard normal.
    double normal(double mean, double stddev);

    /// First r entries of a seeded partial Fisher-Yates shuffle of {0..n-1};
    /// a uniform draw of r distinct indices.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t r);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    /// Number of normal() calls made so far.
    std::uint64_t normal_draws() const { return normal_draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t normal_draws_ = 0;
};

} // namespace mixobs
