#ifndef WVSIM_PHILOX_H
#define WVSIM_PHILOX_H

#include <array>
#include <cstdint>
#include <limits>

namespace wvsim {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"), usable as a UniformRandomBitGenerator.
///
/// A stream is identified by (seed, stream index): the seed is the 64-bit key
/// and the stream index occupies the upper two counter words, so distinct
/// streams never share a counter block. The lower 64 counter bits walk
/// through the stream.
class Philox4x32 {
   public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// The raw ten-round bijection.
    static Block encrypt(Block counter, Key key);

   private:
    Key key_;
    Block counter_;
    Block buffer_{};
    int used_ = 4;
};

}  // namespace wvsim

#endif
