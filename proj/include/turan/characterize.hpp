#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fault_model.hpp"

namespace turan
{
//---------------------------------------------------------------------------//
// Randomness characterization of undervolted rows
//---------------------------------------------------------------------------//

enum class PatternKind
{
    F,
    A,
    Five,
    Zero,
    Three,
    C,
    A5,
    C3
};

//! Data written before reading. A5 and C3 alternate words on adjacent rows.
struct DataPattern
{
    PatternKind kind = PatternKind::F;

    std::uint16_t word_for_row(std::size_t row) const noexcept;
    std::string label() const;
    static DataPattern parse(std::string_view label);
    static std::array<DataPattern, 8> all() noexcept;

    friend bool operator==(DataPattern, DataPattern) = default;
};

//! Binary Shannon entropy in bits; 0 log 0 = 0.
double shannon_entropy(double p1);

//! A group of vertically adjacent rows scored as one "32-bit block".
struct EntropyWindow
{
    std::size_t first_row = 0;
    std::size_t row_count = 2;
};

//! Rows (2k, 2k+1) within each physical block; an odd last row stands alone.
std::vector<EntropyWindow> entropy_windows(SramGeometry const& geometry);

struct EntropyRecord
{
    SramGeometry geometry;
    std::size_t reads = 0;
    std::vector<std::uint32_t> ones_count; //!< per cell, row-major
    std::vector<double> cell_entropy;
    std::vector<double> row_entropy;
    std::vector<EntropyWindow> windows;
    std::vector<double> block32_entropy; //!< parallel to windows

    double max_block32() const noexcept;
    double avg_block32() const noexcept;
    //! Lowest-index window attaining the maximum.
    std::size_t best_window() const noexcept;
};

/*!
 * Write \p pattern to every row, read each row \p reads times, and estimate
 * per-cell entropy from the observed fraction of ones.
 */
EntropyRecord characterize_rows(SramBlock& block, OperatingPoint const& op,
                                DataPattern pattern, std::size_t reads,
                                RandomStream& stream);

/*!
 * Entropy record from the model's exact per-read probabilities.
 *
 * Ignores destructive write-back and sampling noise; used for calibration.
 */
EntropyRecord expected_entropy(SramBlock const& block, OperatingPoint const& op,
                               DataPattern pattern);

//! Per-cell-position summary used by the report.
EntropyRecord summarize(SramGeometry const& geometry, std::size_t reads,
                        std::vector<double> cell_entropy);

//---------------------------------------------------------------------------//
struct SweepConfig
{
    std::vector<double> voltages;
    std::vector<double> frequencies;
    std::vector<double> temperatures;
    std::vector<DataPattern> patterns;
    std::size_t reads_per_row = 1000;
    double voltage_step = 5.0;

    //! 535..580 mV in 5 mV steps at 200 MHz, 45 C, pattern F.
    static SweepConfig defaults();
    //! Inclusive voltage range with the configured step.
    static std::vector<double> voltage_range(double lo, double hi, double step);
    void validate() const;
};

struct SweepPoint
{
    OperatingPoint op;
    DataPattern pattern;
    double max_block32 = 0;
    double avg_block32 = 0;
    std::size_t best_block = 0;
    EntropyWindow best_window;
};

struct CharacterizationReport
{
    std::uint64_t seed = 0;
    std::size_t reads_per_row = 0;
    std::vector<SweepPoint> points; //!< in sweep-index order
    std::size_t best_point = 0;
    std::size_t best_block = 0;
    EntropyWindow best_window;
    OperatingPoint best_op;
    double max_block32_entropy = 0;
    double avg_block32_entropy = 0; //!< at best_op
};

/*!
 * Characterize every (voltage, frequency, temperature, pattern) combination
 * over all blocks. Work is fanned out per (point, block) on block copies
 * with independent substreams, so results do not depend on thread count.
 */
CharacterizationReport sweep(std::vector<SramBlock> const& blocks,
                             SweepConfig const& cfg, RandomStream const& stream,
                             unsigned threads = 0);

//! Same sweep using \c expected_entropy instead of sampled reads.
CharacterizationReport expected_sweep(std::vector<SramBlock> const& blocks,
                                      SweepConfig const& cfg,
                                      unsigned threads = 0);

//! Where to harvest entropy from.
struct EntropySource
{
    std::size_t block = 0;
    std::size_t first_row = 0;
    std::size_t row_count = 1;
    OperatingPoint op;
    double entropy_per_read = 0; //!< bits per read of all source rows
};

/*!
 * The window and operating point with the highest 32-bit block entropy among
 * all-ones points. Ties go to the lowest (block, row, voltage).
 */
EntropySource select_entropy_source(CharacterizationReport const& report);

}  // namespace turan
