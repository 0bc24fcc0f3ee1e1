#pragma once

// Counter-based random streams. A draw is a pure function of
// (seed, trial, step, component, draw index), so results do not depend on
// which thread runs which trial or in what order.

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace mixcert {

/// Anything that yields uniforms on [0, 1).
template <class G>
concept UniformSource = requires(G& g) {
    { g.uniform() } -> std::convertible_to<double>;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Block apply(Block ctr, Key key) noexcept {
        ctr = round(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += kW0;
            key[1] += kW1;
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53U;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57U;
    static constexpr std::uint32_t kW0 = 0x9E3779B9U;
    static constexpr std::uint32_t kW1 = 0xBB67AE85U;

    static constexpr Block round(const Block& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// 53-bit uniform on [0, 1).
constexpr double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential uniforms for one (seed, trial, step, component) key. Each
/// Philox block gives two doubles; up to 2^24 blocks per stream.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t step,
                  std::uint8_t component) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trial_(trial), step_(step), component_(component) {}

    double uniform() noexcept {
        if (half_ == 0) {
            const Philox4x32::Block ctr{static_cast<std::uint32_t>(trial_),
                                        static_cast<std::uint32_t>(trial_ >> 32), step_,
                                        static_cast<std::uint32_t>(component_) | (block_ << 8)};
            buffer_ = Philox4x32::apply(ctr, key_);
            ++block_;
        }
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(buffer_[2 * half_]) << 32) | buffer_[2 * half_ + 1];
        half_ ^= 1U;
        return to_unit_double(bits);
    }

private:
    Philox4x32::Key key_;
    std::uint64_t trial_;
    std::uint32_t step_;
    std::uint8_t component_;
    std::uint32_t block_ = 0;
    unsigned half_ = 0;
    Philox4x32::Block buffer_{};
};

/// Hands out one independent stream per component of a single step.
class StepStreams {
public:
    StepStreams(std::uint64_t seed, std::uint64_t trial, std::uint32_t step) noexcept
        : seed_(seed), trial_(trial), step_(step) {}

    CounterStream component(std::uint8_t c) const noexcept {
        return CounterStream(seed_, trial_, step_, c);
    }

private:
    std::uint64_t seed_;
    std::uint64_t trial_;
    std::uint32_t step_;
};

/// Inverse-CDF draw over the fixed state order from nonnegative weights with
/// the given total. Zero-weight states are never returned.
inline std::size_t sample_index(const Eigen::VectorXd& weights, double total, double u) {
    const double target = u * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0)) continue;
        cumulative += weights[i];
        last_positive = static_cast<std::size_t>(i);
        if (target < cumulative) return last_positive;
    }
    return last_positive;  // u * total rounded past the final partial sum
}

}  // namespace mixcert
