#include "turan/cache_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "turan/errors.hpp"
#include "turan/rng.hpp"

namespace turan
{
void CacheTrngConfig::validate() const
{
    if (!(cpu_freq_hz > 0) || !(sha_bps > 0) || !(entropy_target > 0))
        throw std::invalid_argument("frequencies and entropy target must be positive");
    if (cycles_per_line_read == 0 || line_bits == 0)
        throw std::invalid_argument("line read needs cycles and bits");
    if (!(line_entropy > 0) || line_entropy > static_cast<double>(line_bits))
        throw std::invalid_argument("line_entropy must lie in (0, line_bits]");
    if (static_cast<double>(buffer_bits) < 2 * entropy_target)
        throw std::invalid_argument("buffer_bits must hold twice the entropy target");
    if (buffer_bits < line_bits)
        throw std::invalid_argument("buffer_bits must hold one line");
}

std::uint64_t CacheTrngConfig::sha_cycles() const
{
    // guard against 32.9999999 rounding up to 34
    double const exact = entropy_target / sha_bps * cpu_freq_hz;
    return static_cast<std::uint64_t>(std::ceil(exact * (1 - 1e-12)));
}

void IdleTrace::validate() const
{
    std::uint64_t prev_end = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i)
    {
        auto const& iv = intervals[i];
        if (iv.length == 0)
            throw std::invalid_argument("idle interval " + std::to_string(i) + " is empty");
        if (i > 0 && iv.start < prev_end)
            throw std::invalid_argument("idle intervals overlap or are unsorted at index "
                                        + std::to_string(i));
        if (iv.end() > total_cycles || iv.end() < iv.start)
            throw std::invalid_argument("idle interval " + std::to_string(i)
                                        + " extends past the trace");
        prev_end = iv.end();
    }
}

std::uint64_t IdleTrace::idle_cycles() const noexcept
{
    std::uint64_t sum = 0;
    for (auto const& iv : intervals)
        sum += iv.length;
    return sum;
}

//---------------------------------------------------------------------------//
CacheSimReport schedule(IdleTrace const& trace, CacheTrngConfig const& cfg)
{
    trace.validate();
    cfg.validate();

    std::uint64_t const read_cycles = cfg.cycles_per_line_read;
    std::uint64_t const sha_cycles = cfg.sha_cycles();
    double const raw_per_output = cfg.entropy_target * static_cast<double>(cfg.line_bits)
                                  / cfg.line_entropy;
    auto const buffer = static_cast<double>(cfg.buffer_bits);
    auto const line = static_cast<double>(cfg.line_bits);

    CacheSimReport rep;
    rep.total_cycles = trace.total_cycles;
    double entropy = 0;
    double raw = 0;
    std::uint64_t sha_pending = 0; // serialized: idle cycles still owed to a hash
    std::uint64_t sha_free_at = 0; // overlap: cycle the hash unit frees up

    auto charge = [&] {
        ++rep.sha_invocations;
        entropy -= cfg.entropy_target;
        raw = std::max(0.0, raw - raw_per_output);
    };

    for (auto const& iv : trace.intervals)
    {
        std::uint64_t t = iv.start;
        std::uint64_t const end = iv.end();
        while (t < end)
        {
            if (!cfg.overlap)
            {
                if (sha_pending)
                {
                    std::uint64_t const use = std::min(sha_pending, end - t);
                    sha_pending -= use;
                    t += use;
                    continue;
                }
                if (entropy >= cfg.entropy_target)
                {
                    charge();
                    sha_pending = sha_cycles;
                    continue;
                }
            }
            else if (entropy >= cfg.entropy_target && t >= sha_free_at)
            {
                charge();
                sha_free_at = t + sha_cycles;
                continue;
            }

            if (raw + line > buffer)
            {
                // buffer full: only an overlapped hash can drain it
                if (cfg.overlap && sha_free_at < end)
                {
                    t = std::max(t, sha_free_at);
                    continue;
                }
                break;
            }
            if (end - t < read_cycles)
                break;
            ++rep.line_reads;
            entropy += cfg.line_entropy;
            raw += line;
            t += read_cycles;
        }
    }

    // filled buffers still get hashed once the hardware is free
    if (!cfg.overlap)
    {
        if (entropy >= cfg.entropy_target)
            charge();
    }
    else
    {
        while (entropy >= cfg.entropy_target && sha_free_at < trace.total_cycles)
        {
            charge();
            sha_free_at += sha_cycles;
        }
    }

    rep.entropy_deposited = static_cast<double>(rep.line_reads) * cfg.line_entropy;
    rep.bits_generated = 256 * rep.sha_invocations;
    rep.achieved_bps = trace.total_cycles
                           ? static_cast<double>(rep.bits_generated) * cfg.cpu_freq_hz
                                 / static_cast<double>(trace.total_cycles)
                           : 0.0;
    return rep;
}

double fully_idle_bound(CacheTrngConfig const& cfg)
{
    cfg.validate();
    auto const reads = static_cast<std::uint64_t>(
        std::ceil(cfg.entropy_target / cfg.line_entropy));
    double const cycles = static_cast<double>(reads * cfg.cycles_per_line_read)
                          + cfg.entropy_target / cfg.sha_bps * cfg.cpu_freq_hz;
    return 256.0 * cfg.cpu_freq_hz / cycles;
}

//---------------------------------------------------------------------------//
IdleTrace synth_trace(std::uint64_t total_cycles, double idle_fraction,
                      std::uint64_t min_interval, std::uint64_t seed)
{
    if (!(idle_fraction >= 0 && idle_fraction <= 1))
        throw std::invalid_argument("idle_fraction must lie in [0, 1]");
    if (min_interval == 0)
        throw std::invalid_argument("min_interval must be positive");

    IdleTrace trace;
    trace.total_cycles = total_cycles;
    if (idle_fraction == 0)
        return trace;
    if (total_cycles < min_interval)
        throw std::invalid_argument("trace shorter than one idle interval");

    std::uint64_t const slots = total_cycles / min_interval;
    std::vector<std::uint64_t> order(slots);
    for (std::uint64_t i = 0; i < slots; ++i)
        order[i] = i;
    RandomStream rng{mix64(seed ^ 0x7ace7ace7aceULL)};
    for (std::uint64_t i = slots - 1; i > 0; --i)
    {
        // rejection keeps the draw unbiased
        std::uint64_t const bound = i + 1;
        std::uint64_t const limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do
        {
            x = rng.next_u64();
        } while (x >= limit);
        std::swap(order[i], order[x % bound]);
    }

    auto const take = static_cast<std::uint64_t>(
        std::llround(idle_fraction * static_cast<double>(slots)));
    std::vector<std::uint64_t> chosen(order.begin(),
                                      order.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(chosen.begin(), chosen.end());
    for (std::uint64_t s : chosen)
    {
        std::uint64_t const start = s * min_interval;
        std::uint64_t const len = s + 1 == slots ? total_cycles - start : min_interval;
        if (!trace.intervals.empty() && trace.intervals.back().end() == start)
            trace.intervals.back().length += len;
        else
            trace.intervals.push_back({start, len});
    }
    return trace;
}

//---------------------------------------------------------------------------//
namespace
{
std::uint64_t parse_u64(std::string_view field, std::string const& origin,
                        std::size_t offset)
{
    std::uint64_t value = 0;
    auto const* first = field.data();
    auto const* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty())
    {
        throw FormatError(origin, "expected unsigned integer, got '"
                                      + std::string{field} + "'", offset);
    }
    return value;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
        s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    return s;
}
}  // namespace

IdleTrace parse_trace_csv(std::string_view text, std::string const& origin)
{
    IdleTrace trace;
    bool have_total = false;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        std::size_t const eol = std::min(text.find('\n', pos), text.size());
        std::string_view const line = trim(text.substr(pos, eol - pos));
        std::size_t const line_start = pos;
        pos = eol + 1;
        if (line.empty())
            continue;
        if (!have_header)
        {
            constexpr std::string_view total_key = "# total_cycles=";
            if (line.starts_with(total_key) && !have_total)
            {
                trace.total_cycles = parse_u64(line.substr(total_key.size()), origin,
                                               line_start + total_key.size());
                have_total = true;
                continue;
            }
            if (line != "start_cycle,length_cycles")
            {
                throw FormatError(origin,
                                  "expected header 'start_cycle,length_cycles'",
                                  line_start);
            }
            have_header = true;
            continue;
        }
        std::size_t const comma = line.find(',');
        if (comma == std::string_view::npos)
            throw FormatError(origin, "expected two comma-separated fields", line_start);
        IdleInterval iv;
        iv.start = parse_u64(trim(line.substr(0, comma)), origin, line_start);
        iv.length = parse_u64(trim(line.substr(comma + 1)), origin,
                              line_start + comma + 1);
        trace.intervals.push_back(iv);
    }
    if (!have_header)
        throw FormatError(origin, "missing CSV header", 0);
    if (!have_total)
    {
        for (auto const& iv : trace.intervals)
            trace.total_cycles = std::max(trace.total_cycles, iv.end());
    }
    try
    {
        trace.validate();
    }
    catch (std::invalid_argument const& e)
    {
        throw FormatError(origin, e.what());
    }
    return trace;
}

IdleTrace read_trace_csv(std::string const& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw FormatError(path, "cannot open for reading");
    std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    return parse_trace_csv(text, path);
}

std::string format_trace_csv(IdleTrace const& trace)
{
    std::ostringstream os;
    os << "# total_cycles=" << trace.total_cycles << '\n'
       << "start_cycle,length_cycles\n";
    for (auto const& iv : trace.intervals)
        os << iv.start << ',' << iv.length << '\n';
    return os.str();
}

}  // namespace turan
