#pragma once

#include <array>
#include <cstdint>

namespace turan
{
//---------------------------------------------------------------------------//
/*!
 * Counter-based random numbers.
 *
 * Every random draw in the simulator is a pure function of a (key, counter)
 * pair, so replaying a read sequence or splitting a sweep across workers
 * reproduces the same bits without any shared generator state.
 */
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

//! Philox4x64 with 10 rounds.
PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key) noexcept;

//! SplitMix64 finalizer, used to derive child keys.
std::uint64_t mix64(std::uint64_t x) noexcept;

//! Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

//! Uniform double in (0, 1].
inline double to_unit_nonzero(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

//---------------------------------------------------------------------------//
/*!
 * A keyed, positioned source of randomness.
 *
 * Consumers call \c advance() once per logical event (one row read) and
 * expand the returned position into as many Philox blocks as they need.
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t key, std::uint64_t position = 0)
        : key_{key}, position_{position}
    {
    }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return position_; }

    //! Claim the current position and move past it.
    std::uint64_t advance() noexcept { return position_++; }

    //! Independent stream for a numbered sub-task.
    RandomStream substream(std::uint64_t index) const noexcept
    {
        return RandomStream{mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL))};
    }

    //! Sequential 64-bit draws (four per Philox block).
    std::uint64_t next_u64() noexcept;
    double next_unit() noexcept { return to_unit(this->next_u64()); }

  private:
    std::uint64_t key_;
    std::uint64_t position_;
    PhiloxCounter buffer_{};
    unsigned buffered_ = 0;
};

}  // namespace turan
