#include "turan/sts.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "turan/parallel.hpp"

namespace turan
{
namespace
{
TestResult make(std::string name, double p, double alpha)
{
    TestResult r;
    r.test_name = std::move(name);
    r.p_value = std::clamp(p, 0.0, 1.0);
    return r.judge(alpha);
}

TestResult not_applicable(std::string name)
{
    TestResult r;
    r.test_name = std::move(name);
    r.applicable = false;
    return r;
}

void require_bits(BitSpan bits)
{
    if (bits.empty())
        throw std::invalid_argument("empty bit sequence");
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

std::size_t floor_log2(std::size_t n)
{
    std::size_t k = 0;
    while (n >>= 1)
        ++k;
    return k;
}

//! Counts of every cyclic m-bit window, indexed by value (first bit is MSB).
std::vector<std::size_t> cyclic_counts(BitSpan bits, std::size_t m)
{
    std::vector<std::size_t> counts(std::size_t{1} << m, 0);
    std::size_t const n = bits.size();
    std::size_t const mask = (std::size_t{1} << m) - 1;
    std::size_t value = 0;
    for (std::size_t i = 0; i + 1 < m; ++i)
        value = (value << 1) | bits[i % n];
    for (std::size_t i = 0; i < n; ++i)
    {
        value = ((value << 1) | bits[(i + m - 1) % n]) & mask;
        ++counts[value];
    }
    return counts;
}

double psi_squared(BitSpan bits, std::size_t m)
{
    if (m == 0)
        return 0.0;
    auto const counts = cyclic_counts(bits, m);
    double const n = static_cast<double>(bits.size());
    double sum = 0;
    for (auto c : counts)
        sum += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(sum, static_cast<int>(m)) / n - n;
}

double apen_phi(BitSpan bits, std::size_t m)
{
    if (m == 0)
        return 0.0;
    auto const counts = cyclic_counts(bits, m);
    double const n = static_cast<double>(bits.size());
    double sum = 0;
    for (auto c : counts)
    {
        if (c)
        {
            double const pi = static_cast<double>(c) / n;
            sum += pi * std::log(pi);
        }
    }
    return sum;
}
}  // namespace

void StsConfig::validate() const
{
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    if (sequence_bits < 100)
        throw std::invalid_argument("sequence_bits must be at least 100");
    if (n_sequences == 0)
        throw std::invalid_argument("n_sequences must be at least 1");
    if (block_m < 2 || serial_m < 2 || apen_m < 1)
        throw std::invalid_argument("block/template lengths too small");
    if (serial_m > 24 || apen_m > 24)
        throw std::invalid_argument("template lengths above 24 are not supported");
}

TestResult& TestResult::judge(double alpha)
{
    pass = applicable && p_value >= alpha;
    return *this;
}

double erfc(double x)
{
    return std::erfc(x);
}

double igamc(double a, double x)
{
    if (!(a > 0))
        throw std::invalid_argument("igamc needs a > 0");
    if (!(x > 0))
        return 1.0;
    return boost::math::gamma_q(a, x);
}

//---------------------------------------------------------------------------//
TestResult monobit(BitSpan bits, double alpha)
{
    require_bits(bits);
    double s = 0;
    for (auto b : bits)
        s += b ? 1 : -1;
    double const n = static_cast<double>(bits.size());
    return make("frequency", erfc(std::abs(s) / std::sqrt(2 * n)), alpha);
}

TestResult block_frequency(BitSpan bits, std::size_t m, double alpha,
                           LengthPolicy policy)
{
    require_bits(bits);
    if (m < 2)
        throw std::invalid_argument("block length must be at least 2");
    if (m > bits.size())
        throw std::invalid_argument("block length exceeds sequence length");
    if (policy == LengthPolicy::Recommended && (bits.size() < 100 || m < 20))
        return not_applicable("block_frequency");

    std::size_t const blocks = bits.size() / m;
    double chi2 = 0;
    for (std::size_t i = 0; i < blocks; ++i)
    {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < m; ++j)
            ones += bits[i * m + j];
        double const d = static_cast<double>(ones) / static_cast<double>(m) - 0.5;
        chi2 += d * d;
    }
    chi2 *= 4.0 * static_cast<double>(m);
    return make("block_frequency",
                igamc(static_cast<double>(blocks) / 2, chi2 / 2), alpha);
}

TestResult runs(BitSpan bits, double alpha)
{
    require_bits(bits);
    double const n = static_cast<double>(bits.size());
    std::size_t ones = 0;
    for (auto b : bits)
        ones += b;
    double const pi = static_cast<double>(ones) / n;
    if (std::abs(pi - 0.5) >= 2 / std::sqrt(n))
        return not_applicable("runs");

    std::size_t v = 1;
    for (std::size_t k = 0; k + 1 < bits.size(); ++k)
        v += bits[k] != bits[k + 1];
    double const spread = pi * (1 - pi);
    double const p = erfc(std::abs(static_cast<double>(v) - 2 * n * spread)
                          / (2 * std::sqrt(2 * n) * spread));
    return make("runs", p, alpha);
}

TestResult longest_run(BitSpan bits, double alpha)
{
    require_bits(bits);
    std::size_t const n = bits.size();

    std::size_t m;
    std::vector<std::size_t> edges; // category upper bounds; last is open
    std::vector<double> pi;
    if (n < 128)
        return not_applicable("longest_run");
    if (n < 6272)
    {
        m = 8;
        edges = {1, 2, 3};
        pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    }
    else if (n < 750000)
    {
        m = 128;
        edges = {4, 5, 6, 7, 8};
        pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071,
              0.112398847};
    }
    else
    {
        m = 10000;
        edges = {10, 11, 12, 13, 14, 15};
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }

    std::size_t const blocks = n / m;
    std::vector<std::size_t> v(pi.size(), 0);
    for (std::size_t i = 0; i < blocks; ++i)
    {
        std::size_t longest = 0;
        std::size_t run = 0;
        for (std::size_t j = 0; j < m; ++j)
        {
            run = bits[i * m + j] ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        auto it = std::lower_bound(edges.begin(), edges.end(), longest);
        ++v[static_cast<std::size_t>(it - edges.begin())];
    }

    double chi2 = 0;
    double const nb = static_cast<double>(blocks);
    for (std::size_t i = 0; i < pi.size(); ++i)
    {
        double const expected = nb * pi[i];
        double const d = static_cast<double>(v[i]) - expected;
        chi2 += d * d / expected;
    }
    double const k = static_cast<double>(pi.size() - 1);
    return make("longest_run", igamc(k / 2, chi2 / 2), alpha);
}

TestResult cumulative_sums(BitSpan bits, bool forward, double alpha)
{
    require_bits(bits);
    long long const n = static_cast<long long>(bits.size());
    long long s = 0;
    long long z = 0;
    for (long long i = 0; i < n; ++i)
    {
        auto const idx = static_cast<std::size_t>(forward ? i : n - 1 - i);
        s += bits[idx] ? 1 : -1;
        z = std::max(z, std::abs(s));
    }
    char const* name = forward ? "cumulative_sums_forward"
                               : "cumulative_sums_backward";

    // loop bounds use C integer division, as in the reference implementation
    double const zd = static_cast<double>(z);
    double const root_n = std::sqrt(static_cast<double>(n));
    double sum1 = 0;
    for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k)
    {
        auto const kd = static_cast<double>(k);
        sum1 += normal_cdf((4 * kd + 1) * zd / root_n)
                - normal_cdf((4 * kd - 1) * zd / root_n);
    }
    double sum2 = 0;
    for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k)
    {
        auto const kd = static_cast<double>(k);
        sum2 += normal_cdf((4 * kd + 3) * zd / root_n)
                - normal_cdf((4 * kd + 1) * zd / root_n);
    }
    return make(name, 1.0 - sum1 + sum2, alpha);
}

std::pair<TestResult, TestResult>
serial(BitSpan bits, std::size_t m, double alpha, LengthPolicy policy)
{
    require_bits(bits);
    std::size_t const n = bits.size();
    bool const ok = m >= 2 && m <= 24 && m <= n
                    && (policy == LengthPolicy::Minimal
                        || m + 2 < floor_log2(n));
    if (!ok)
        return {not_applicable("serial_1"), not_applicable("serial_2")};

    double const psi_m = psi_squared(bits, m);
    double const psi_m1 = psi_squared(bits, m - 1);
    double const psi_m2 = psi_squared(bits, m - 2);
    double const del1 = psi_m - psi_m1;
    double const del2 = psi_m - 2 * psi_m1 + psi_m2;
    return {make("serial_1", igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2),
                 alpha),
            make("serial_2", igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2),
                 alpha)};
}

TestResult approximate_entropy(BitSpan bits, std::size_t m, double alpha,
                               LengthPolicy policy)
{
    require_bits(bits);
    std::size_t const n = bits.size();
    bool const ok = m >= 1 && m <= 24 && m + 1 <= n
                    && (policy == LengthPolicy::Minimal
                        || m + 5 < floor_log2(n));
    if (!ok)
        return not_applicable("approximate_entropy");

    double const apen = apen_phi(bits, m) - apen_phi(bits, m + 1);
    double const chi2 = 2.0 * static_cast<double>(n) * (std::numbers::ln2 - apen);
    return make("approximate_entropy",
                igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2), alpha);
}

//---------------------------------------------------------------------------//
std::vector<std::string> const& suite_test_names()
{
    static std::vector<std::string> const names{
        "frequency",
        "block_frequency",
        "runs",
        "longest_run",
        "cumulative_sums_forward",
        "cumulative_sums_backward",
        "serial_1",
        "serial_2",
        "approximate_entropy",
    };
    return names;
}

std::vector<TestResult> run_all(BitSpan bits, StsConfig const& cfg)
{
    double const a = cfg.alpha;
    std::vector<TestResult> results;
    results.push_back(monobit(bits, a));
    if (cfg.block_m <= bits.size())
        results.push_back(block_frequency(bits, cfg.block_m, a, cfg.policy));
    else
        results.push_back(not_applicable("block_frequency"));
    results.push_back(runs(bits, a));
    results.push_back(longest_run(bits, a));
    results.push_back(cumulative_sums(bits, true, a));
    results.push_back(cumulative_sums(bits, false, a));
    auto [s1, s2] = serial(bits, cfg.serial_m, a, cfg.policy);
    results.push_back(std::move(s1));
    results.push_back(std::move(s2));
    results.push_back(approximate_entropy(bits, cfg.apen_m, a, cfg.policy));
    return results;
}

double proportion_bound(double alpha, std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("proportion bound needs k >= 1");
    return (1 - alpha) - 3 * std::sqrt(alpha * (1 - alpha) / static_cast<double>(k));
}

SuiteReport run_suite(std::vector<Bits> const& streams, StsConfig const& cfg,
                      unsigned threads)
{
    if (!(cfg.alpha > 0 && cfg.alpha < 1))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    if (streams.empty())
        throw std::invalid_argument("suite needs at least one sequence");
    for (auto const& s : streams)
    {
        if (s.size() != streams.front().size())
            throw std::invalid_argument("sequences differ in length");
    }
    require_bits(streams.front());

    SuiteReport report;
    report.alpha = cfg.alpha;
    report.n_sequences = streams.size();
    report.sequence_bits = streams.front().size();
    report.bound = proportion_bound(cfg.alpha, streams.size());
    report.sequences.resize(streams.size());
    parallel_for(streams.size(), resolve_threads(threads), [&](std::size_t i) {
        report.sequences[i] = run_all(streams[i], cfg);
    });

    auto const& names = suite_test_names();
    report.verdict = true;
    for (std::size_t t = 0; t < names.size(); ++t)
    {
        TestProportion prop;
        prop.test_name = names[t];
        for (auto const& seq : report.sequences)
            prop.passed += seq[t].pass;
        prop.proportion = static_cast<double>(prop.passed)
                          / static_cast<double>(streams.size());
        prop.pass = prop.proportion >= report.bound;
        report.verdict = report.verdict && prop.pass;
        report.tests.push_back(prop);
    }
    return report;
}

std::vector<Bits> split_sequences(Bits const& bits, std::size_t sequence_bits,
                                  std::size_t max_sequences)
{
    if (bits.empty())
        throw std::invalid_argument("empty bitstream");
    if (sequence_bits == 0)
        throw std::invalid_argument("sequence_bits must be positive");
    std::vector<Bits> out;
    if (bits.size() < sequence_bits)
    {
        out.push_back(bits);
        return out;
    }
    std::size_t const count = std::min(bits.size() / sequence_bits, max_sequences);
    for (std::size_t i = 0; i < count; ++i)
    {
        auto first = bits.begin() + static_cast<std::ptrdiff_t>(i * sequence_bits);
        out.emplace_back(first, first + static_cast<std::ptrdiff_t>(sequence_bits));
    }
    return out;
}

}  // namespace turan
