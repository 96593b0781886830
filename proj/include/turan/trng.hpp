#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bitstream.hpp"
#include "characterize.hpp"
#include "fault_model.hpp"

namespace turan
{
struct TrngConfig
{
    double entropy_target = 256.0;
    EntropySource source;
    double direct_cell_threshold = 0.9999;

    void validate() const;
};

//! Reads needed to collect \p entropy_target bits at \p per_read bits each.
std::size_t n_reads_required(double entropy_target, double per_read);

using Sha256Digest = std::array<std::uint8_t, 32>;
Sha256Digest sha256(std::span<std::uint8_t const> message);

/*!
 * Write 0xFFFF to the source rows and read them n_reads_required times.
 * Raw bits are the sensed rows in read order.
 */
RandomBitstream accumulate_raw(SramBlock& block, TrngConfig const& cfg,
                               RandomStream& stream);

/*!
 * Conditioned output: each 256-bit digest hashes one accumulate_raw
 * bitstream (packed LSB-first). Digests are concatenated and truncated to
 * \p n_bits.
 */
RandomBitstream generate(SramBlock& block, TrngConfig const& cfg,
                         std::size_t n_bits, RandomStream& stream);

struct CellIndex
{
    std::size_t row = 0;
    std::size_t col = 0;

    friend auto operator<=>(CellIndex const&, CellIndex const&) = default;
};

/*!
 * Cells whose measured entropy under all-ones reaches \p threshold.
 *
 * Every cell is screened with 1000 reads; cells above a loose screen are
 * re-measured with \p reads reads. Overwrites the block contents.
 */
std::vector<CellIndex> find_direct_cells(SramBlock& block,
                                         OperatingPoint const& op,
                                         std::size_t reads, double threshold,
                                         RandomStream& stream);

/*!
 * Unconditioned stream from direct cells, round-robin in (row, col) order.
 * Each row is rewritten with ones before every read.
 */
RandomBitstream direct_stream(SramBlock& block,
                              std::vector<CellIndex> const& cells,
                              OperatingPoint const& op, std::size_t n_bits,
                              RandomStream& stream);

}  // namespace turan
