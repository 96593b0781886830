#pragma once

#include <cstdint>
#include <vector>

#include "characterize.hpp"
#include "fault_model.hpp"

namespace turan
{
//! Analytic shape metrics of one fault-model configuration.
struct ShapeMetrics
{
    double peak_voltage_mv = 0;   //!< 200 MHz, 45 C, pattern F
    double peak_max_block32 = 0;
    bool unique_peak = false;
    double peak_max_block32_20mhz = 0;
    std::vector<double> temperature_peaks_mv; //!< at 25, 35, 45, 55, 65 C
    double access_fraction_500mv = 0;
    double read_fraction_500mv = 0;

    //! True when every qualitative target holds on the expected curves.
    bool feasible() const noexcept;
};

/*!
 * Expected (noise-free) sweep metrics for the block built from \p seed.
 *
 * Voltage axis is 535..580 mV in 5 mV steps.
 */
ShapeMetrics shape_metrics(std::uint64_t seed, SramGeometry const& geometry,
                           FaultModelConfig const& config, unsigned threads = 0);

struct CalibrationResult
{
    FaultModelConfig config;
    ShapeMetrics metrics;
    double score = 0; //!< lower is better
    std::size_t candidates = 0;
    std::size_t feasible_candidates = 0;
};

/*!
 * Grid search over the sensing coefficients (q_gamma, sense_balance,
 * sense_coupling). Candidates meeting every qualitative target are ranked by
 * the distance of their expected peak block entropy from \p peak_target.
 */
CalibrationResult calibrate(std::uint64_t seed, SramGeometry const& geometry,
                            FaultModelConfig const& base,
                            double peak_target = 8.25, unsigned threads = 0);

}  // namespace turan
