#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rng.hpp"

namespace turan
{
//---------------------------------------------------------------------------//
// Behavioral model of an undervolted SRAM array
//---------------------------------------------------------------------------//

inline constexpr double kNominalVoltageMv = 1000.0;
inline constexpr double kMinOperatingVoltageMv = 535.0;

//! Array shape. Rows are numbered globally across stacked blocks.
struct SramGeometry
{
    std::size_t rows = 1024;
    std::size_t cols = 16;
    std::size_t blocks = 1;

    std::size_t total_rows() const noexcept { return rows * blocks; }
    std::size_t cell_count() const noexcept { return rows * cols * blocks; }
    void validate() const;
};

struct OperatingPoint
{
    double voltage_mv = kNominalVoltageMv;
    double frequency_mhz = 200.0;
    double temperature_c = 45.0;

    void validate() const;
};

/*!
 * Calibration knobs for the failure model.
 *
 * The defaults here are the output of \c calibrate() for seed 1 on a single
 * 1024x16 block and are mirrored in config/default.json.
 *
 * Setting \c sense_balance_mv = \c v50_mv and \c sense_coupling = 1 makes each
 * cell's metastable balance point coincide with its access midpoint.
 */
struct FaultModelConfig
{
    double v50_mv = 550.0;           //!< population mean of v_meta
    double sigma_frac = 0.20;        //!< v_meta sigma as a fraction of v50
    double a_slope_mv = 2.0;         //!< access-event logistic width
    double q_gamma_per_mv = 0.22;    //!< metastable-outcome bias slope
    double sense_balance_mv = 546.0; //!< population balance voltage
    double sense_coupling = 0.12;    //!< d(v_balance)/d(v_meta)
    double kappa_f_mv = 20.0;        //!< shift per octave below f_ref
    double kappa_t_mv = 0.75;        //!< shift per degree above t_ref
    double rho0 = 0.05;              //!< stored-0 event asymmetry
    double f_ref_mhz = 200.0;
    double t_ref_c = 45.0;
    double d_max = 0.04;             //!< upper bound of per-cell d_prob
    double fragile_fraction = 0.10;  //!< cells with nonzero d_prob
    double nominal_mv = kNominalVoltageMv;

    void validate() const;
};

struct CellParams
{
    double v_meta_mv = 0;    //!< access-event midpoint
    double v_balance_mv = 0; //!< voltage where a failed access is 50/50
    double a_slope_mv = 1;
    double d_prob = 0; //!< chance a wrong resolution is written back
};

//! Per-read failure probabilities of one cell.
struct AccessProbability
{
    double event = 0;    //!< a: access failure occurs
    double one_bias = 0; //!< q: sensed value is 1 given a failure
};

//! Supply voltage after frequency and temperature shifts.
double effective_voltage(OperatingPoint const& op,
                         FaultModelConfig const& config) noexcept;

AccessProbability flip_probability(CellParams const& cell, bool stored,
                                   OperatingPoint const& op,
                                   FaultModelConfig const& config) noexcept;

//! Same, with the effective voltage already computed.
AccessProbability flip_probability_at(CellParams const& cell, bool stored,
                                      double v_eff,
                                      FaultModelConfig const& config) noexcept;

//! Probability that a read of this cell senses 1.
double sensed_one_probability(CellParams const& cell, bool stored,
                              OperatingPoint const& op,
                              FaultModelConfig const& config) noexcept;

using BitRow = std::vector<std::uint8_t>;

//---------------------------------------------------------------------------//
/*!
 * A seeded array of cells with frozen process variation.
 *
 * Cell parameters depend only on (seed, block, row, col). Stored bits change
 * through \c write_row and through destructive read failures. A block is
 * single-writer; copy it to sweep in parallel.
 */
class SramBlock
{
  public:
    SramBlock(std::uint64_t seed, SramGeometry geometry,
              FaultModelConfig config);

    //! Block with explicit cell parameters (row-major, total_rows x cols).
    static SramBlock from_cells(SramGeometry geometry, FaultModelConfig config,
                                std::vector<CellParams> cells,
                                std::uint64_t seed = 0);

    SramGeometry const& geometry() const noexcept { return geometry_; }
    FaultModelConfig const& config() const noexcept { return config_; }
    std::uint64_t seed() const noexcept { return seed_; }

    CellParams const& cell(std::size_t row, std::size_t col) const;
    bool stored(std::size_t row, std::size_t col) const;
    std::span<std::uint8_t const> stored_row(std::size_t row) const;

    void write_row(std::size_t row, std::span<std::uint8_t const> pattern);

    /*!
     * Sense one row at the given operating point.
     *
     * Each cell fails with probability a; a failed access senses
     * Bernoulli(q). Events with a < 2^-53 are below the resolution of the
     * uniform draw and are skipped. A wrong resolution is written back into the cell with
     * probability d_prob.
     */
    BitRow read_row(std::size_t row, OperatingPoint const& op,
                    RandomStream& stream);

  private:
    SramBlock() = default;
    void check_row(std::size_t row) const;

    SramGeometry geometry_;
    FaultModelConfig config_;
    std::uint64_t seed_ = 0;
    std::vector<CellParams> cells_;
    std::vector<std::uint8_t> stored_;
};

inline SramBlock build_block(std::uint64_t seed, SramGeometry geometry,
                             FaultModelConfig config)
{
    return SramBlock{seed, geometry, config};
}

//! Bits of a 16-bit word laid across \p cols columns, MSB in column 0.
BitRow pattern_bits(std::uint16_t word, std::size_t cols);

struct FailureClassReport
{
    double access_failure_fraction = 0;
    double read_failure_fraction = 0;
    std::size_t trials = 0;
    double voltage_mv = 0;
};

/*!
 * Separate access failures from read failures.
 *
 * Per trial and cell: write 1 at nominal voltage, read at \p op, return to
 * nominal and read again. An error only at the undervolted read is an access
 * failure; an error that survives to the nominal read is a read failure.
 * Operates on a copy of \p block.
 */
FailureClassReport classify_failures(SramBlock block, OperatingPoint const& op,
                                     std::size_t trials, RandomStream& stream);

}  // namespace turan
