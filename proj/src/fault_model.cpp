#include "turan/fault_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace turan
{
namespace
{
constexpr std::uint64_t kCellParamTag = 0xce11;
constexpr std::uint64_t kReadTag = 0x7ead;

bool finite_all(std::initializer_list<double> values)
{
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return std::isfinite(v); });
}

double logistic(double x) noexcept
{
    return 1.0 / (1.0 + std::exp(-x));
}
}  // namespace

void SramGeometry::validate() const
{
    if (rows == 0 || cols == 0 || blocks == 0)
    {
        throw std::invalid_argument("SRAM geometry must be at least 1x1x1");
    }
}

void OperatingPoint::validate() const
{
    if (!(voltage_mv > 0) || !(frequency_mhz > 0)
        || !std::isfinite(temperature_c) || !std::isfinite(voltage_mv)
        || !std::isfinite(frequency_mhz))
    {
        throw std::invalid_argument(
            "operating point needs positive voltage and frequency");
    }
}

void FaultModelConfig::validate() const
{
    if (!finite_all({v50_mv, sigma_frac, a_slope_mv, q_gamma_per_mv,
                     sense_balance_mv, sense_coupling, kappa_f_mv, kappa_t_mv,
                     rho0, f_ref_mhz, t_ref_c, d_max, fragile_fraction,
                     nominal_mv}))
    {
        throw std::invalid_argument("fault model coefficients must be finite");
    }
    if (!(sigma_frac > 0 && sigma_frac < 1))
        throw std::invalid_argument("sigma_frac must lie in (0, 1)");
    if (!(rho0 >= 0 && rho0 <= 1))
        throw std::invalid_argument("rho0 must lie in [0, 1]");
    if (!(a_slope_mv > 0))
        throw std::invalid_argument("a_slope_mv must be positive");
    if (!(d_max >= 0 && d_max <= 0.04))
        throw std::invalid_argument("d_max must lie in [0, 0.04]");
    if (!(fragile_fraction >= 0 && fragile_fraction <= 1))
        throw std::invalid_argument("fragile_fraction must lie in [0, 1]");
    if (!(f_ref_mhz > 0) || !(nominal_mv > 0))
        throw std::invalid_argument("f_ref and nominal voltage must be positive");
}

double effective_voltage(OperatingPoint const& op,
                         FaultModelConfig const& config) noexcept
{
    return op.voltage_mv
           + config.kappa_f_mv * std::log2(config.f_ref_mhz / op.frequency_mhz)
           + config.kappa_t_mv * (op.temperature_c - config.t_ref_c);
}

AccessProbability flip_probability_at(CellParams const& cell, bool stored,
                                      double v_eff,
                                      FaultModelConfig const& config) noexcept
{
    double a = logistic((cell.v_meta_mv - v_eff) / cell.a_slope_mv);
    if (!stored)
    {
        a *= config.rho0;
    }
    double const q = std::clamp(
        0.5 + config.q_gamma_per_mv * (v_eff - cell.v_balance_mv), 0.0, 1.0);
    return {a, q};
}

AccessProbability flip_probability(CellParams const& cell, bool stored,
                                   OperatingPoint const& op,
                                   FaultModelConfig const& config) noexcept
{
    return flip_probability_at(cell, stored, effective_voltage(op, config), config);
}

double sensed_one_probability(CellParams const& cell, bool stored,
                              OperatingPoint const& op,
                              FaultModelConfig const& config) noexcept
{
    auto const [a, q] = flip_probability(cell, stored, op, config);
    return stored ? (1 - a) + a * q : a * q;
}

//---------------------------------------------------------------------------//
SramBlock::SramBlock(std::uint64_t seed, SramGeometry geometry,
                     FaultModelConfig config)
    : geometry_{geometry}, config_{config}, seed_{seed}
{
    geometry_.validate();
    config_.validate();

    double const sigma = config_.sigma_frac * config_.v50_mv;
    cells_.resize(geometry_.cell_count());
    stored_.assign(geometry_.cell_count(), 0);

    for (std::size_t b = 0; b < geometry_.blocks; ++b)
    {
        for (std::size_t r = 0; r < geometry_.rows; ++r)
        {
            for (std::size_t c = 0; c < geometry_.cols; ++c)
            {
                auto const u = philox4x64({b, r, c, kCellParamTag},
                                          {seed_, 0x5eed5eedULL});
                // Box-Muller on the first two words
                double const radius = std::sqrt(-2.0 * std::log(to_unit_nonzero(u[0])));
                double const z = radius * std::cos(2 * std::numbers::pi * to_unit(u[1]));

                CellParams& cell = cells_[(b * geometry_.rows + r) * geometry_.cols + c];
                cell.v_meta_mv = config_.v50_mv + sigma * z;
                cell.v_balance_mv = config_.sense_balance_mv
                                    + config_.sense_coupling
                                          * (cell.v_meta_mv - config_.v50_mv);
                cell.a_slope_mv = config_.a_slope_mv;
                cell.d_prob = to_unit(u[2]) < config_.fragile_fraction
                                  ? config_.d_max * to_unit(u[3])
                                  : 0.0;
            }
        }
    }
}

SramBlock SramBlock::from_cells(SramGeometry geometry, FaultModelConfig config,
                                std::vector<CellParams> cells,
                                std::uint64_t seed)
{
    geometry.validate();
    config.validate();
    if (cells.size() != geometry.cell_count())
    {
        throw std::invalid_argument("cell list does not match geometry");
    }
    for (auto const& cell : cells)
    {
        if (!(cell.a_slope_mv > 0) || !(cell.d_prob >= 0 && cell.d_prob <= 0.04))
        {
            throw std::invalid_argument("cell parameters out of range");
        }
    }
    SramBlock block;
    block.geometry_ = geometry;
    block.config_ = config;
    block.seed_ = seed;
    block.cells_ = std::move(cells);
    block.stored_.assign(geometry.cell_count(), 0);
    return block;
}

void SramBlock::check_row(std::size_t row) const
{
    if (row >= geometry_.total_rows())
    {
        throw std::out_of_range("row " + std::to_string(row)
                                + " outside array of "
                                + std::to_string(geometry_.total_rows())
                                + " rows");
    }
}

CellParams const& SramBlock::cell(std::size_t row, std::size_t col) const
{
    this->check_row(row);
    if (col >= geometry_.cols)
        throw std::out_of_range("column out of range");
    return cells_[row * geometry_.cols + col];
}

bool SramBlock::stored(std::size_t row, std::size_t col) const
{
    this->check_row(row);
    if (col >= geometry_.cols)
        throw std::out_of_range("column out of range");
    return stored_[row * geometry_.cols + col] != 0;
}

std::span<std::uint8_t const> SramBlock::stored_row(std::size_t row) const
{
    this->check_row(row);
    return {stored_.data() + row * geometry_.cols, geometry_.cols};
}

void SramBlock::write_row(std::size_t row, std::span<std::uint8_t const> pattern)
{
    this->check_row(row);
    if (pattern.size() != geometry_.cols)
    {
        throw std::invalid_argument("pattern width "
                                    + std::to_string(pattern.size())
                                    + " does not match "
                                    + std::to_string(geometry_.cols)
                                    + " columns");
    }
    auto* dst = stored_.data() + row * geometry_.cols;
    for (std::size_t c = 0; c < pattern.size(); ++c)
    {
        dst[c] = pattern[c] ? 1 : 0;
    }
}

BitRow SramBlock::read_row(std::size_t row, OperatingPoint const& op,
                           RandomStream& stream)
{
    this->check_row(row);
    std::uint64_t const position = stream.advance();
    PhiloxKey const key{stream.key(), seed_};

    double const v_eff = effective_voltage(op, config_);
    BitRow sensed(geometry_.cols);
    std::size_t const base = row * geometry_.cols;
    for (std::size_t c = 0; c < geometry_.cols; ++c)
    {
        std::uint8_t& cell_bit = stored_[base + c];
        auto const [a, q] = flip_probability_at(cells_[base + c], cell_bit != 0,
                                                v_eff, config_);
        // below 2^-53 the event can only fire on an all-zero draw; skip it
        if (a < 0x1p-53)
        {
            sensed[c] = cell_bit;
            continue;
        }
        auto const u = philox4x64({position, base + c, 0, kReadTag}, key);
        if (to_unit(u[0]) >= a)
        {
            sensed[c] = cell_bit;
            continue;
        }
        std::uint8_t const resolved = to_unit(u[1]) < q ? 1 : 0;
        if (resolved != cell_bit && to_unit(u[2]) < cells_[base + c].d_prob)
        {
            cell_bit = resolved;
        }
        sensed[c] = resolved;
    }
    return sensed;
}

BitRow pattern_bits(std::uint16_t word, std::size_t cols)
{
    BitRow bits(cols);
    for (std::size_t c = 0; c < cols; ++c)
    {
        bits[c] = (word >> (15 - c % 16)) & 1u;
    }
    return bits;
}

//---------------------------------------------------------------------------//
FailureClassReport classify_failures(SramBlock block, OperatingPoint const& op,
                                     std::size_t trials, RandomStream& stream)
{
    if (trials == 0)
        throw std::invalid_argument("classify_failures needs at least one trial");
    op.validate();

    OperatingPoint nominal = op;
    nominal.voltage_mv = block.config().nominal_mv;

    auto const& geo = block.geometry();
    BitRow const ones(geo.cols, 1);
    std::size_t access = 0;
    std::size_t destroyed = 0;
    for (std::size_t t = 0; t < trials; ++t)
    {
        for (std::size_t row = 0; row < geo.total_rows(); ++row)
        {
            block.write_row(row, ones);
            BitRow const under = block.read_row(row, op, stream);
            BitRow const after = block.read_row(row, nominal, stream);
            for (std::size_t c = 0; c < geo.cols; ++c)
            {
                bool const err_under = under[c] != 1;
                bool const err_after = after[c] != 1;
                if (err_after)
                    ++destroyed;
                else if (err_under)
                    ++access;
            }
        }
    }
    double const total = static_cast<double>(trials * geo.cell_count());
    return {access / total, destroyed / total, trials, op.voltage_mv};
}

}  // namespace turan
