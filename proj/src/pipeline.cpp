#include "turan/pipeline.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "turan/errors.hpp"

namespace turan
{
using nlohmann::json;

RandomStream noise_stream(std::uint64_t seed, StreamPurpose purpose)
{
    return RandomStream{mix64(seed)}.substream(static_cast<std::uint64_t>(purpose));
}

std::vector<SramBlock> build_blocks(RunConfig const& cfg)
{
    return {SramBlock{cfg.seed, cfg.geometry, cfg.fault_model}};
}

CharacterizationReport run_characterization(RunConfig const& cfg, unsigned threads)
{
    return sweep(build_blocks(cfg), cfg.sweep,
                 noise_stream(cfg.seed, StreamPurpose::characterize), threads);
}

EntropySource resolve_source(RunConfig const& cfg, unsigned threads)
{
    if (cfg.trng.source)
        return *cfg.trng.source;
    return select_entropy_source(run_characterization(cfg, threads));
}

RandomBitstream run_generate(RunConfig const& cfg, std::size_t n_bits,
                             unsigned threads)
{
    TrngConfig tc;
    tc.entropy_target = cfg.trng.entropy_target;
    tc.direct_cell_threshold = cfg.trng.direct_cell_threshold;
    tc.source = resolve_source(cfg, threads);

    auto blocks = build_blocks(cfg);
    if (tc.source.block >= blocks.size())
        throw std::invalid_argument("entropy source block out of range");
    auto stream = noise_stream(cfg.seed, StreamPurpose::generate);
    return generate(blocks[tc.source.block], tc, n_bits, stream);
}

RandomBitstream run_direct(RunConfig const& cfg, std::size_t n_bits,
                           unsigned threads)
{
    auto const src = resolve_source(cfg, threads);
    auto blocks = build_blocks(cfg);
    if (src.block >= blocks.size())
        throw std::invalid_argument("entropy source block out of range");
    auto& block = blocks[src.block];
    auto stream = noise_stream(cfg.seed, StreamPurpose::direct);
    auto cells = find_direct_cells(block, src.op, cfg.trng.direct_reads,
                                   cfg.trng.direct_cell_threshold, stream);
    if (cells.empty())
        throw NoEntropySource("no cell reaches the direct-mode entropy threshold");
    return direct_stream(block, cells, src.op, n_bits, stream);
}

SuiteReport run_sts(Bits const& bits, StsConfig const& cfg, unsigned threads)
{
    if (bits.empty())
        throw std::invalid_argument("empty bitstream");
    std::vector<Bits> sequences;
    if (bits.size() < cfg.sequence_bits)
        sequences.push_back(bits);
    else
        sequences = split_sequences(bits, cfg.sequence_bits, cfg.n_sequences);

    StsConfig run = cfg;
    run.sequence_bits = sequences.front().size();
    return run_suite(sequences, run, threads);
}

json to_json(CharacterizationReport const& report)
{
    json points = json::array();
    for (auto const& p : report.points)
    {
        points.push_back({{"op", to_json(p.op)},
                          {"pattern", p.pattern.label()},
                          {"max_block32_entropy", p.max_block32},
                          {"avg_block32_entropy", p.avg_block32},
                          {"best_block", p.best_block},
                          {"best_first_row", p.best_window.first_row},
                          {"best_row_count", p.best_window.row_count}});
    }
    json source = nullptr;
    try
    {
        source = to_json(select_entropy_source(report));
    }
    catch (NoEntropySource const&)
    {
    }
    return {{"seed", report.seed},
            {"reads_per_row", report.reads_per_row},
            {"best",
             {{"block", report.best_block},
              {"first_row", report.best_window.first_row},
              {"row_count", report.best_window.row_count},
              {"op", to_json(report.best_op)},
              {"pattern", report.points.empty()
                              ? std::string{}
                              : report.points[report.best_point].pattern.label()},
              {"max_block32_entropy", report.max_block32_entropy},
              {"avg_block32_entropy", report.avg_block32_entropy}}},
            {"entropy_source", source},
            {"points", points}};
}

json to_json(SuiteReport const& report)
{
    json tests = json::array();
    for (auto const& t : report.tests)
    {
        tests.push_back({{"test", t.test_name},
                         {"passed", t.passed},
                         {"proportion", t.proportion},
                         {"pass", t.pass}});
    }
    return {{"alpha", report.alpha},
            {"n_sequences", report.n_sequences},
            {"sequence_bits", report.sequence_bits},
            {"bound", report.bound},
            {"verdict", report.verdict ? "pass" : "fail"},
            {"tests", tests}};
}

json to_json(CacheSimReport const& report)
{
    return {{"total_cycles", report.total_cycles},
            {"bits_generated", report.bits_generated},
            {"achieved_bps", report.achieved_bps},
            {"line_reads", report.line_reads},
            {"sha_invocations", report.sha_invocations},
            {"interference_events", report.interference_events},
            {"entropy_deposited", report.entropy_deposited}};
}

std::string format_number(double value)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{})
        throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

std::string characterization_csv(CharacterizationReport const& report)
{
    std::ostringstream os;
    os << "voltage_mv,freq_mhz,temp_c,pattern,max_block32_entropy,avg_block32_entropy\n";
    for (auto const& p : report.points)
    {
        os << format_number(p.op.voltage_mv) << ',' << format_number(p.op.frequency_mhz)
           << ',' << format_number(p.op.temperature_c) << ',' << p.pattern.label() << ','
           << format_number(p.max_block32) << ',' << format_number(p.avg_block32) << '\n';
    }
    return os.str();
}

std::string sts_csv(SuiteReport const& report)
{
    std::ostringstream os;
    os << "test,p_value,pass\n";
    for (auto const& seq : report.sequences)
    {
        for (auto const& r : seq)
        {
            os << r.test_name << ',' << (r.applicable ? format_number(r.p_value) : "")
               << ',' << (r.pass ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string perf_csv(std::vector<PerfInputs> const& rows)
{
    std::ostringstream os;
    os << "freq_mhz,n_read,avg_throughput_bps,energy_per_bit_nj,latency_us\n";
    for (auto const& in : rows)
    {
        auto const est = estimate(in);
        os << format_number(in.freq_mhz) << ',' << in.n_read << ','
           << format_number(est.throughput_bps) << ','
           << format_number(est.energy_per_bit_j * 1e9) << ','
           << format_number(est.latency_s * 1e6) << '\n';
    }
    return os.str();
}

}  // namespace turan
