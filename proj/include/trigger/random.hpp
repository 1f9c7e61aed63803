#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace trigger {

/*! Counter-based random stream (Philox4x32-10).

    A stream is identified by (seed, stream id). Streams with distinct ids are
    statistically independent, and the output of one stream never depends on how
    many other streams exist or in which order they are consumed. Monte Carlo
    drivers give every path its own stream keyed by the path index.
*/
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    //! Uniform on the open interval (0, 1).
    double uniform();
    //! Exponential with the given rate; +inf when rate is zero.
    double exponential(double rate);

    //! Raw Philox4x32-10 block function, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    unsigned used_ = 4;
};

} // namespace trigger
