#include "turan/characterize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "turan/errors.hpp"
#include "turan/parallel.hpp"

namespace turan
{
namespace
{
struct PatternInfo
{
    PatternKind kind;
    char const* label;
    std::uint16_t even;
    std::uint16_t odd;
};

constexpr PatternInfo kPatterns[] = {
    {PatternKind::F, "F", 0xFFFF, 0xFFFF},
    {PatternKind::A, "A", 0xAAAA, 0xAAAA},
    {PatternKind::Five, "5", 0x5555, 0x5555},
    {PatternKind::Zero, "0", 0x0000, 0x0000},
    {PatternKind::Three, "3", 0x3333, 0x3333},
    {PatternKind::C, "C", 0xCCCC, 0xCCCC},
    {PatternKind::A5, "A5", 0xAAAA, 0x5555},
    {PatternKind::C3, "C3", 0xCCCC, 0x3333},
};

PatternInfo const& info(PatternKind kind)
{
    return kPatterns[static_cast<std::size_t>(kind)];
}

void write_pattern(SramBlock& block, DataPattern pattern)
{
    auto const& geo = block.geometry();
    BitRow const even = pattern_bits(info(pattern.kind).even, geo.cols);
    BitRow const odd = pattern_bits(info(pattern.kind).odd, geo.cols);
    for (std::size_t row = 0; row < geo.total_rows(); ++row)
    {
        block.write_row(row, row % 2 ? odd : even);
    }
}
}  // namespace

std::uint16_t DataPattern::word_for_row(std::size_t row) const noexcept
{
    auto const& p = info(kind);
    return row % 2 ? p.odd : p.even;
}

std::string DataPattern::label() const
{
    return info(kind).label;
}

DataPattern DataPattern::parse(std::string_view text)
{
    std::string upper;
    for (char ch : text)
        upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    // accept the 16-bit word spelling of single patterns too
    if (upper.size() == 6 && upper.starts_with("0X")
        && upper.find_first_not_of(upper[2], 2) == std::string::npos)
    {
        upper = upper.substr(2, 1);
    }
    for (auto const& p : kPatterns)
    {
        if (upper == p.label)
            return DataPattern{p.kind};
    }
    throw std::invalid_argument("unknown data pattern '" + std::string{text} + "'");
}

std::array<DataPattern, 8> DataPattern::all() noexcept
{
    std::array<DataPattern, 8> result;
    for (std::size_t i = 0; i < result.size(); ++i)
        result[i] = DataPattern{kPatterns[i].kind};
    return result;
}

double shannon_entropy(double p1)
{
    if (!(p1 >= 0 && p1 <= 1))
    {
        throw std::invalid_argument("probability outside [0, 1]");
    }
    double const p0 = 1 - p1;
    double h = 0;
    if (p0 > 0)
        h -= p0 * std::log2(p0);
    if (p1 > 0)
        h -= p1 * std::log2(p1);
    return h;
}

std::vector<EntropyWindow> entropy_windows(SramGeometry const& geometry)
{
    std::vector<EntropyWindow> windows;
    windows.reserve(geometry.blocks * ((geometry.rows + 1) / 2));
    for (std::size_t b = 0; b < geometry.blocks; ++b)
    {
        std::size_t const base = b * geometry.rows;
        for (std::size_t r = 0; r < geometry.rows; r += 2)
        {
            windows.push_back({base + r, std::min<std::size_t>(2, geometry.rows - r)});
        }
    }
    return windows;
}

//---------------------------------------------------------------------------//
double EntropyRecord::max_block32() const noexcept
{
    return block32_entropy.empty()
               ? 0.0
               : *std::max_element(block32_entropy.begin(), block32_entropy.end());
}

double EntropyRecord::avg_block32() const noexcept
{
    if (block32_entropy.empty())
        return 0.0;
    double sum = 0;
    for (double h : block32_entropy)
        sum += h;
    return sum / static_cast<double>(block32_entropy.size());
}

std::size_t EntropyRecord::best_window() const noexcept
{
    // max_element returns the first maximum
    return static_cast<std::size_t>(
        std::max_element(block32_entropy.begin(), block32_entropy.end())
        - block32_entropy.begin());
}

EntropyRecord summarize(SramGeometry const& geometry, std::size_t reads,
                        std::vector<double> cell_entropy)
{
    EntropyRecord rec;
    rec.geometry = geometry;
    rec.reads = reads;
    rec.cell_entropy = std::move(cell_entropy);
    rec.row_entropy.assign(geometry.total_rows(), 0.0);
    for (std::size_t row = 0; row < geometry.total_rows(); ++row)
    {
        double sum = 0;
        for (std::size_t c = 0; c < geometry.cols; ++c)
            sum += rec.cell_entropy[row * geometry.cols + c];
        rec.row_entropy[row] = sum;
    }
    rec.windows = entropy_windows(geometry);
    rec.block32_entropy.reserve(rec.windows.size());
    for (auto const& w : rec.windows)
    {
        double sum = 0;
        for (std::size_t r = 0; r < w.row_count; ++r)
            sum += rec.row_entropy[w.first_row + r];
        rec.block32_entropy.push_back(sum);
    }
    return rec;
}

EntropyRecord characterize_rows(SramBlock& block, OperatingPoint const& op,
                                DataPattern pattern, std::size_t reads,
                                RandomStream& stream)
{
    if (reads == 0)
        throw std::invalid_argument("characterization needs at least one read");
    op.validate();

    auto const& geo = block.geometry();
    write_pattern(block, pattern);

    std::vector<std::uint32_t> ones(geo.cell_count(), 0);
    for (std::size_t row = 0; row < geo.total_rows(); ++row)
    {
        std::uint32_t* counts = ones.data() + row * geo.cols;
        for (std::size_t i = 0; i < reads; ++i)
        {
            BitRow const bits = block.read_row(row, op, stream);
            for (std::size_t c = 0; c < geo.cols; ++c)
                counts[c] += bits[c];
        }
    }

    std::vector<double> entropy(geo.cell_count());
    for (std::size_t i = 0; i < entropy.size(); ++i)
    {
        entropy[i] = shannon_entropy(static_cast<double>(ones[i])
                                     / static_cast<double>(reads));
    }
    EntropyRecord rec = summarize(geo, reads, std::move(entropy));
    rec.ones_count = std::move(ones);
    return rec;
}

EntropyRecord expected_entropy(SramBlock const& block, OperatingPoint const& op,
                               DataPattern pattern)
{
    op.validate();
    auto const& geo = block.geometry();
    std::vector<double> entropy(geo.cell_count());
    for (std::size_t row = 0; row < geo.total_rows(); ++row)
    {
        std::uint16_t const word = pattern.word_for_row(row);
        for (std::size_t c = 0; c < geo.cols; ++c)
        {
            bool const bit = (word >> (15 - c % 16)) & 1u;
            double const p1 = sensed_one_probability(block.cell(row, c), bit, op,
                                                     block.config());
            entropy[row * geo.cols + c] = shannon_entropy(std::clamp(p1, 0.0, 1.0));
        }
    }
    return summarize(geo, 0, std::move(entropy));
}

//---------------------------------------------------------------------------//
SweepConfig SweepConfig::defaults()
{
    SweepConfig cfg;
    cfg.voltages = voltage_range(kMinOperatingVoltageMv, 580.0, cfg.voltage_step);
    cfg.frequencies = {200.0};
    cfg.temperatures = {45.0};
    cfg.patterns = {DataPattern{PatternKind::F}};
    return cfg;
}

std::vector<double> SweepConfig::voltage_range(double lo, double hi, double step)
{
    if (!(step > 0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    {
        throw std::invalid_argument("voltage range needs lo <= hi and step > 0");
    }
    std::vector<double> values;
    // index-based to avoid drift over long ranges
    for (std::size_t i = 0;; ++i)
    {
        double const v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9 * step)
            break;
        values.push_back(v);
    }
    return values;
}

void SweepConfig::validate() const
{
    if (voltages.empty() || frequencies.empty() || temperatures.empty()
        || patterns.empty())
    {
        throw std::invalid_argument("sweep axes must be non-empty");
    }
    if (reads_per_row == 0)
        throw std::invalid_argument("reads_per_row must be at least 1");
    if (!(voltage_step > 0))
        throw std::invalid_argument("voltage_step must be positive");
}

namespace
{
struct PointSpec
{
    OperatingPoint op;
    DataPattern pattern;
};

std::vector<PointSpec> expand(SweepConfig const& cfg)
{
    std::vector<PointSpec> points;
    for (auto pattern : cfg.patterns)
        for (double f : cfg.frequencies)
            for (double t : cfg.temperatures)
                for (double v : cfg.voltages)
                    points.push_back({OperatingPoint{v, f, t}, pattern});
    for (auto const& p : points)
        p.op.validate();
    return points;
}

template<class Evaluate>
CharacterizationReport run_sweep(std::vector<SramBlock> const& blocks,
                                 SweepConfig const& cfg, unsigned threads,
                                 Evaluate&& evaluate)
{
    if (blocks.empty())
        throw std::invalid_argument("sweep needs at least one block");
    cfg.validate();
    auto const specs = expand(cfg);

    std::size_t const n_tasks = specs.size() * blocks.size();
    std::vector<EntropyRecord> records(n_tasks);
    parallel_for(n_tasks, resolve_threads(threads), [&](std::size_t task) {
        auto const& spec = specs[task / blocks.size()];
        records[task] = evaluate(task, blocks[task % blocks.size()], spec.op,
                                 spec.pattern);
    });

    CharacterizationReport report;
    report.reads_per_row = cfg.reads_per_row;
    report.points.reserve(specs.size());
    for (std::size_t p = 0; p < specs.size(); ++p)
    {
        SweepPoint point;
        point.op = specs[p].op;
        point.pattern = specs[p].pattern;
        double sum = 0;
        std::size_t windows = 0;
        bool first = true;
        for (std::size_t b = 0; b < blocks.size(); ++b)
        {
            auto const& rec = records[p * blocks.size() + b];
            double const mx = rec.max_block32();
            if (first || mx > point.max_block32)
            {
                point.max_block32 = mx;
                point.best_block = b;
                point.best_window = rec.windows[rec.best_window()];
                first = false;
            }
            for (double h : rec.block32_entropy)
                sum += h;
            windows += rec.block32_entropy.size();
        }
        point.avg_block32 = windows ? sum / static_cast<double>(windows) : 0.0;
        report.points.push_back(point);

        if (p == 0 || point.max_block32 > report.max_block32_entropy)
        {
            report.best_point = p;
            report.max_block32_entropy = point.max_block32;
            report.avg_block32_entropy = point.avg_block32;
            report.best_block = point.best_block;
            report.best_window = point.best_window;
            report.best_op = point.op;
        }
    }
    return report;
}
}  // namespace

CharacterizationReport sweep(std::vector<SramBlock> const& blocks,
                             SweepConfig const& cfg, RandomStream const& stream,
                             unsigned threads)
{
    auto report = run_sweep(
        blocks, cfg, threads,
        [&](std::size_t task, SramBlock const& block, OperatingPoint const& op,
            DataPattern pattern) {
            SramBlock copy = block;
            RandomStream sub = stream.substream(task);
            return characterize_rows(copy, op, pattern, cfg.reads_per_row, sub);
        });
    report.seed = blocks.front().seed();
    return report;
}

CharacterizationReport expected_sweep(std::vector<SramBlock> const& blocks,
                                      SweepConfig const& cfg, unsigned threads)
{
    auto report = run_sweep(blocks, cfg, threads,
                            [](std::size_t, SramBlock const& block,
                               OperatingPoint const& op, DataPattern pattern) {
                                return expected_entropy(block, op, pattern);
                            });
    report.seed = blocks.front().seed();
    report.reads_per_row = 0;
    return report;
}

EntropySource select_entropy_source(CharacterizationReport const& report)
{
    if (report.points.empty())
        throw std::invalid_argument("empty characterization report");

    SweepPoint const* best = nullptr;
    auto key = [](SweepPoint const& p) {
        return std::tuple{p.best_block, p.best_window.first_row, p.op.voltage_mv};
    };
    for (auto const& point : report.points)
    {
        // generation always writes all-ones, so only those points qualify
        if (point.pattern.kind != PatternKind::F)
            continue;
        if (!best || point.max_block32 > best->max_block32
            || (point.max_block32 == best->max_block32 && key(point) < key(*best)))
        {
            best = &point;
        }
    }
    if (!best)
        throw std::invalid_argument("report holds no all-ones (F) points");
    if (!(best->max_block32 > 0))
        throw NoEntropySource("no cell showed any entropy in the characterization");

    EntropySource src;
    src.block = best->best_block;
    src.first_row = best->best_window.first_row;
    src.row_count = best->best_window.row_count;
    src.op = best->op;
    src.entropy_per_read = best->max_block32;
    return src;
}

}  // namespace turan
