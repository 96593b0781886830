#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace turan
{
//---------------------------------------------------------------------------//
// Random number generation inside a drowsy-style cache
//---------------------------------------------------------------------------//

struct CacheTrngConfig
{
    double cpu_freq_hz = 3.6e9;
    std::uint64_t cycles_per_line_read = 4;
    std::uint64_t line_bits = 512;
    double line_entropy = 128;
    std::uint64_t buffer_bits = 1024; //!< raw bits held before hashing
    double sha_bps = 27.984e9;
    double entropy_target = 256;
    bool overlap = false; //!< hash concurrently with line reads

    void validate() const;
    //! CPU cycles for one 256-bit hash.
    std::uint64_t sha_cycles() const;
};

struct IdleInterval
{
    std::uint64_t start = 0;
    std::uint64_t length = 0;

    std::uint64_t end() const noexcept { return start + length; }
    friend bool operator==(IdleInterval const&, IdleInterval const&) = default;
};

struct IdleTrace
{
    std::uint64_t total_cycles = 0;
    std::vector<IdleInterval> intervals;

    //! Sorted, non-overlapping, non-empty intervals inside [0, total_cycles).
    void validate() const;
    std::uint64_t idle_cycles() const noexcept;
};

struct CacheSimReport
{
    std::uint64_t total_cycles = 0;
    std::uint64_t bits_generated = 0;
    double achieved_bps = 0;
    std::uint64_t line_reads = 0;
    std::uint64_t sha_invocations = 0;
    std::uint64_t interference_events = 0;
    double entropy_deposited = 0;
};

/*!
 * Place whole line-read sequences greedily into idle intervals.
 *
 * In the serialized model a hash occupies the next sha_cycles() idle cycles
 * and line reads wait for it. With \c overlap the hash runs on the CPU in
 * parallel, one at a time, and takes the buffer contents when it starts.
 * Either way an output is counted when its hash is charged.
 */
CacheSimReport schedule(IdleTrace const& trace, CacheTrngConfig const& cfg);

//! 256 * cpu_freq / (line-read cycles + hash cycles) for an always-idle cache.
double fully_idle_bound(CacheTrngConfig const& cfg);

/*!
 * Random idle intervals covering round(idle_fraction * S) of the S slots of
 * width \p min_interval (the last slot absorbs the remainder). Slots are
 * picked by a seeded permutation, so a larger fraction always contains the
 * intervals of a smaller one.
 */
IdleTrace synth_trace(std::uint64_t total_cycles, double idle_fraction,
                      std::uint64_t min_interval, std::uint64_t seed);

//! CSV with header "start_cycle,length_cycles". An optional leading
//! "# total_cycles=N" line sets the trace length; otherwise the last end.
IdleTrace parse_trace_csv(std::string_view text,
                          std::string const& origin = "<memory>");
IdleTrace read_trace_csv(std::string const& path);
std::string format_trace_csv(IdleTrace const& trace);

}  // namespace turan
