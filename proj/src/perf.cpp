#include "turan/perf.hpp"

#include <cmath>
#include <stdexcept>

namespace turan
{
namespace
{
void require_positive(double v, char const* what)
{
    if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument(std::string{what} + " must be positive");
}
}  // namespace

void PerfInputs::validate() const
{
    if (n_read == 0)
        throw std::invalid_argument("n_read must be at least 1");
    require_positive(freq_mhz, "freq_mhz");
    require_positive(p_sha_w, "p_sha_w");
    require_positive(sha_throughput_bps, "sha_throughput_bps");
    if (!(p_dd_w >= 0) || !(t_pmbus_setup_s >= 0) || !(t_undervolt_cmd_s >= 0)
        || !(t_sha_s >= 0) || (t_access_s && !(*t_access_s >= 0)))
    {
        throw std::invalid_argument("power and stage times must be non-negative");
    }
    if (sha_units && *sha_units == 0)
        throw std::invalid_argument("sha_units must be at least 1");
}

std::size_t PerfInputs::resolved_sha_units() const
{
    return sha_units.value_or(default_sha_units(freq_mhz));
}

double PerfInputs::resolved_t_access() const
{
    return t_access_s.value_or(estimate_access_time(n_read, freq_mhz));
}

double throughput(std::size_t n_read, double freq_mhz)
{
    if (n_read == 0)
        throw std::invalid_argument("n_read must be at least 1");
    require_positive(freq_mhz, "frequency");
    return 256.0 * freq_mhz * 1e6 / static_cast<double>(n_read);
}

std::size_t default_sha_units(double freq_mhz)
{
    return freq_mhz >= 160 ? 2 : 1;
}

double estimate_access_time(std::size_t n_read, double freq_mhz)
{
    require_positive(freq_mhz, "frequency");
    return static_cast<double>(n_read) / (freq_mhz * 1e6);
}

PerfEstimate energy(PerfInputs const& in)
{
    in.validate();
    PerfEstimate est;
    est.sha_units = in.resolved_sha_units();
    auto const units = static_cast<double>(est.sha_units);
    est.e_read_j = static_cast<double>(in.n_read) / (in.freq_mhz * 1e6) * in.p_dd_w;
    double const t_hash = 256.0 / (units * in.sha_throughput_bps);
    est.e_sha_j = in.p_sha_w * units * t_hash;
    est.energy_per_bit_j = (est.e_read_j + est.e_sha_j) / 256.0;
    return est;
}

double latency(PerfInputs const& in)
{
    in.validate();
    return in.t_pmbus_setup_s + in.t_undervolt_cmd_s + in.resolved_t_access()
           + in.t_sha_s;
}

PerfEstimate estimate(PerfInputs const& in)
{
    PerfEstimate est = energy(in);
    est.throughput_bps = throughput(in.n_read, in.freq_mhz);
    est.latency_s = latency(in);
    return est;
}

double sha_energy_floor(PerfInputs const& in)
{
    return in.p_sha_w / in.sha_throughput_bps;
}

ComparisonTable comparison_table()
{
    ComparisonTable t;
    t.rows = {
        {"Zhang+", 178e6, 0.56, 1.501e-3, false},
        {"PUFKEY", 803e6, std::nullopt, 5.35, false},
        {"TuRaN", 1.812e9, 0.11, 278.46e-6, true},
    };
    auto const& zhang = t.rows[0];
    auto const& pufkey = t.rows[1];
    auto const& turan = t.rows[2];
    t.throughput_ratio = turan.throughput_bps / pufkey.throughput_bps;
    t.energy_ratio = *zhang.energy_nj_per_bit / *turan.energy_nj_per_bit;
    t.latency_ratio = zhang.latency_s / turan.latency_s;
    return t;
}

std::vector<PerfRow> reference_read_counts()
{
    return {{20, 85}, {60, 79}, {100, 66}, {160, 50}, {200, 32}};
}

}  // namespace turan
