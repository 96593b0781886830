#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace turan
{
//---------------------------------------------------------------------------//
// Closed-form throughput, energy and latency of the FPGA deployment
//---------------------------------------------------------------------------//

struct PerfInputs
{
    std::size_t n_read = 32;
    double freq_mhz = 200;
    double p_dd_w = 0.01;          //!< SRAM rail power while reading
    double p_sha_w = 0.1;          //!< per SHA-256 unit
    double sha_throughput_bps = 917e6; //!< per SHA-256 unit
    std::optional<std::size_t> sha_units; //!< unset: default_sha_units(freq)
    double t_pmbus_setup_s = 228.3e-6;
    double t_undervolt_cmd_s = 49.7e-6;
    std::optional<double> t_access_s; //!< unset: n_read / freq
    double t_sha_s = 142.2e-9;

    void validate() const;
    std::size_t resolved_sha_units() const;
    double resolved_t_access() const;
};

struct PerfEstimate
{
    double throughput_bps = 0;
    double energy_per_bit_j = 0;
    double latency_s = 0;
    double e_read_j = 0; //!< per 256-bit output
    double e_sha_j = 0;  //!< per 256-bit output
    std::size_t sha_units = 0;
};

double throughput(std::size_t n_read, double freq_mhz);

//! Two hash units at 160 MHz and above, one below.
std::size_t default_sha_units(double freq_mhz);

//! n_read / freq in seconds.
double estimate_access_time(std::size_t n_read, double freq_mhz);

//! Energy of one 256-bit output; hashing 256 bits takes 256 / (units * rate).
PerfEstimate energy(PerfInputs const& in);

double latency(PerfInputs const& in);

//! Throughput, energy and latency together.
PerfEstimate estimate(PerfInputs const& in);

//! Lowest per-bit energy any unit count can reach: p_sha / sha_throughput.
double sha_energy_floor(PerfInputs const& in);

struct ComparisonRow
{
    std::string name;
    double throughput_bps = 0;
    std::optional<double> energy_nj_per_bit;
    double latency_s = 0;
    bool continuous = false;
};

struct ComparisonTable
{
    std::vector<ComparisonRow> rows; //!< Zhang+, PUFKEY, TuRaN
    double throughput_ratio = 0;     //!< TuRaN over PUFKEY
    double energy_ratio = 0;         //!< Zhang+ over TuRaN
    double latency_ratio = 0;        //!< Zhang+ over TuRaN
};

ComparisonTable comparison_table();

struct PerfRow
{
    double freq_mhz;
    std::size_t n_read;
};

//! Read counts measured at each evaluated frequency.
std::vector<PerfRow> reference_read_counts();

}  // namespace turan
