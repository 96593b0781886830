#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "config.hpp"

namespace turan
{
//! Independent noise streams drawn from one run seed.
enum class StreamPurpose : std::uint64_t
{
    characterize = 1,
    generate = 2,
    direct = 3,
};

RandomStream noise_stream(std::uint64_t seed, StreamPurpose purpose);

std::vector<SramBlock> build_blocks(RunConfig const& cfg);

CharacterizationReport run_characterization(RunConfig const& cfg,
                                            unsigned threads = 0);

//! The configured source, or the best one from a fresh characterization.
EntropySource resolve_source(RunConfig const& cfg, unsigned threads = 0);

RandomBitstream run_generate(RunConfig const& cfg, std::size_t n_bits,
                             unsigned threads = 0);

//! Unconditioned bits from cells that qualify at the configured threshold.
//! Throws NoEntropySource when no cell qualifies.
RandomBitstream run_direct(RunConfig const& cfg, std::size_t n_bits,
                           unsigned threads = 0);

/*!
 * Cut a bitstream into suite sequences. Streams shorter than one sequence
 * are analysed whole.
 */
SuiteReport run_sts(Bits const& bits, StsConfig const& cfg, unsigned threads = 0);

nlohmann::json to_json(CharacterizationReport const& report);
nlohmann::json to_json(SuiteReport const& report);
nlohmann::json to_json(CacheSimReport const& report);

//! voltage_mv,freq_mhz,temp_c,pattern,max_block32_entropy,avg_block32_entropy
std::string characterization_csv(CharacterizationReport const& report);
//! test,p_value,pass; one block of rows per sequence
std::string sts_csv(SuiteReport const& report);
//! freq_mhz,n_read,avg_throughput_bps,energy_per_bit_nj,latency_us
std::string perf_csv(std::vector<PerfInputs> const& rows);

//! Shortest round-trip decimal form, identical across runs.
std::string format_number(double value);

}  // namespace turan
