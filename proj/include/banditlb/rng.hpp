#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace banditlb {

// Counter-based Philox4x32-10 block function. Counter-based generation is what
// makes streams splittable: a stream is fully identified by (key, stream id)
// and produces the same output regardless of how many other streams exist or
// in which order they run.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// SplitMix64 finalizer, used to derive stream identifiers from seed material.
std::uint64_t mix64(std::uint64_t z);

// 64-bit FNV-1a, used for stable cell identifiers over canonical spec strings.
std::uint64_t fnv1a64(std::string_view text);

// Inverse standard-normal CDF (Wichura's AS241, double precision).
// Input must lie in (0,1).
double normal_icdf(double p);

// One random stream, identified by (key, stream). All sampling is implemented
// on top of the Philox block function only, so output is bit-identical across
// platforms and standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t key, std::uint64_t stream);

    // Stream keyed by (master_seed, cell, replication). Distinct tuples give
    // statistically independent streams.
    static RngStream derive(std::uint64_t master_seed, std::uint64_t cell,
                            std::uint64_t replication);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double next_double();
    // Uniform on (0,1), never exactly 0 or 1; safe as a CDF argument.
    double next_open_double();

    double next_gaussian(double mean, double stddev);

    bool next_bernoulli(double p) { return next_double() < p; }

    // Uniform integer in {0, ..., n-1}, unbiased via rejection.
    std::uint64_t next_uniform_int(std::uint64_t n);

    // Samples an index from a probability vector (entries >= 0, sum ~ 1).
    // Never returns an index with zero probability.
    int next_categorical(std::span<const double> probabilities);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int position_ = 4;

    void refill();
};

} // namespace banditlb
