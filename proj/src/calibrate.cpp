#include "turan/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "turan/parallel.hpp"

namespace turan
{
namespace
{
constexpr double kTemperatures[] = {25, 35, 45, 55, 65};

struct Curve
{
    std::vector<double> maxima;
    double peak_voltage = 0;
    double peak = 0;
    bool unique = false;
};

Curve curve(SramBlock const& block, std::vector<double> const& voltages,
            double freq, double temp)
{
    Curve c;
    for (double v : voltages)
    {
        auto rec = expected_entropy(block, {v, freq, temp},
                                    DataPattern{PatternKind::F});
        c.maxima.push_back(rec.max_block32());
    }
    auto it = std::max_element(c.maxima.begin(), c.maxima.end());
    c.peak = *it;
    c.peak_voltage = voltages[static_cast<std::size_t>(it - c.maxima.begin())];
    c.unique = std::count(c.maxima.begin(), c.maxima.end(), c.peak) == 1;
    return c;
}
}  // namespace

bool ShapeMetrics::feasible() const noexcept
{
    bool temp_ok = std::is_sorted(temperature_peaks_mv.rbegin(),
                                  temperature_peaks_mv.rend());
    return unique_peak && peak_voltage_mv > kMinOperatingVoltageMv
           && peak_max_block32 >= 7.0 && peak_max_block32 <= 9.5
           && peak_max_block32 >= peak_max_block32_20mhz && temp_ok
           && std::abs(access_fraction_500mv - 0.6917) <= 0.05
           && read_fraction_500mv < 0.04
           && read_fraction_500mv <= access_fraction_500mv;
}

ShapeMetrics shape_metrics(std::uint64_t seed, SramGeometry const& geometry,
                           FaultModelConfig const& config, unsigned threads)
{
    SramBlock const block{seed, geometry, config};
    auto const voltages = SweepConfig::defaults().voltages;

    // curve 0: 200 MHz at t_ref; 1: 20 MHz; 2..6: temperatures
    std::vector<Curve> curves(2 + std::size(kTemperatures));
    parallel_for(curves.size(), resolve_threads(threads), [&](std::size_t i) {
        if (i == 0)
            curves[i] = curve(block, voltages, 200, 45);
        else if (i == 1)
            curves[i] = curve(block, voltages, 20, 45);
        else
            curves[i] = curve(block, voltages, 200, kTemperatures[i - 2]);
    });

    ShapeMetrics m;
    m.peak_voltage_mv = curves[0].peak_voltage;
    m.peak_max_block32 = curves[0].peak;
    m.unique_peak = curves[0].unique;
    m.peak_max_block32_20mhz = curves[1].peak;
    for (std::size_t i = 2; i < curves.size(); ++i)
        m.temperature_peaks_mv.push_back(curves[i].peak_voltage);

    OperatingPoint const half{config.nominal_mv / 2, 200, 45};
    double access = 0;
    double destroyed = 0;
    for (std::size_t row = 0; row < geometry.total_rows(); ++row)
    {
        for (std::size_t col = 0; col < geometry.cols; ++col)
        {
            auto const& cell = block.cell(row, col);
            auto const [a, q] = flip_probability(cell, true, half, config);
            double const wrong = a * (1 - q);
            destroyed += wrong * cell.d_prob;
            access += wrong * (1 - cell.d_prob);
        }
    }
    auto const n = static_cast<double>(geometry.cell_count());
    m.access_fraction_500mv = access / n;
    m.read_fraction_500mv = destroyed / n;
    return m;
}

CalibrationResult calibrate(std::uint64_t seed, SramGeometry const& geometry,
                            FaultModelConfig const& base, double peak_target,
                            unsigned threads)
{
    std::vector<FaultModelConfig> grid;
    for (double gamma : {0.14, 0.18, 0.22, 0.26, 0.30})
    {
        for (double balance : {544.0, 546.0, 548.0, 550.0, 552.0})
        {
            for (double coupling : {0.0, 0.06, 0.12, 0.18, 0.24})
            {
                FaultModelConfig cfg = base;
                cfg.q_gamma_per_mv = gamma;
                cfg.sense_balance_mv = balance;
                cfg.sense_coupling = coupling;
                grid.push_back(cfg);
            }
        }
    }

    std::vector<ShapeMetrics> metrics(grid.size());
    parallel_for(grid.size(), resolve_threads(threads), [&](std::size_t i) {
        metrics[i] = shape_metrics(seed, geometry, grid[i], 1);
    });

    CalibrationResult result;
    result.candidates = grid.size();
    result.score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (!metrics[i].feasible())
            continue;
        ++result.feasible_candidates;
        double const score = std::abs(metrics[i].peak_max_block32 - peak_target);
        // strict comparison keeps the first grid point on ties
        if (score < result.score)
        {
            result.score = score;
            result.config = grid[i];
            result.metrics = metrics[i];
        }
    }
    if (!result.feasible_candidates)
    {
        result.config = base;
        result.metrics = shape_metrics(seed, geometry, base, threads);
    }
    return result;
}

}  // namespace turan
