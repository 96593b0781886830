// Command-line front end for the undervolting TRNG simulator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "turan/calibrate.hpp"
#include "turan/errors.hpp"
#include "turan/parallel.hpp"
#include "turan/pipeline.hpp"

using namespace turan;
namespace fs = std::filesystem;

namespace
{
struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

RunConfig load(Common const& common)
{
    RunConfig cfg = common.config_path.empty() ? RunConfig{}
                                               : load_run_config(common.config_path);
    if (common.seed)
        cfg.seed = *common.seed;
    return cfg;
}

std::string out_path(Common const& common, RunConfig const& cfg,
                     std::string const& fallback)
{
    if (!common.out.empty())
        return common.out;
    return (fs::path{cfg.output_dir} / fallback).string();
}

void write_text(std::string const& path, std::string const& text)
{
    auto parent = fs::path{path}.parent_path();
    if (!parent.empty())
        fs::create_directories(parent);
    std::ofstream os{path, std::ios::binary};
    os << text;
    os.close();
    if (!os)
        throw std::runtime_error(path + ": cannot write");
}

//! Sibling file with another extension: "a/report.json" -> "a/report.csv".
std::string sibling(std::string const& path, char const* ext)
{
    return fs::path{path}.replace_extension(ext).string();
}

std::vector<double> axis_defaults(std::string const& axis)
{
    if (axis == "frequency")
        return {20, 60, 100, 160, 200};
    if (axis == "temperature")
        return {25, 35, 45, 55, 65};
    return {};
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SRAM undervolting TRNG simulator"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON run configuration")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", common.seed, "override the config seed");
        sub->add_option("--out", common.out, "output file");
    };

    auto* characterize = app.add_subcommand("characterize", "sweep and report entropy");
    add_common(characterize);
    std::optional<std::size_t> reads;
    characterize->add_option("--reads", reads, "reads per row")->check(CLI::PositiveNumber);

    auto* sweep_cmd = app.add_subcommand("sweep", "entropy along one axis as CSV");
    add_common(sweep_cmd);
    std::string axis;
    std::vector<std::string> values;
    sweep_cmd->add_option("--axis", axis, "voltage, frequency, temperature or pattern")
        ->required()
        ->check(CLI::IsMember({"voltage", "frequency", "temperature", "pattern"}));
    sweep_cmd->add_option("--values", values, "axis values (default: a standard set)")
        ->delimiter(',');
    sweep_cmd->add_option("--reads", reads, "reads per row")->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("generate", "write random bits to a TRNB file");
    add_common(gen);
    std::size_t n_bits = 256;
    bool direct = false;
    gen->add_option("--bits", n_bits, "number of output bits")->check(CLI::PositiveNumber);
    gen->add_flag("--direct", direct, "unconditioned bits from direct cells");

    auto* sts_cmd = app.add_subcommand("sts", "statistical tests on a TRNB file");
    add_common(sts_cmd);
    std::string in_path;
    std::optional<double> alpha;
    std::optional<std::size_t> seq_bits;
    std::optional<std::size_t> max_seq;
    sts_cmd->add_option("--in", in_path, "input TRNB file")->required();
    sts_cmd->add_option("--alpha", alpha, "significance level");
    sts_cmd->add_option("--sequence-bits", seq_bits, "bits per sequence");
    sts_cmd->add_option("--sequences", max_seq, "maximum number of sequences");

    auto* perf_cmd = app.add_subcommand("perf", "throughput, energy and latency CSV");
    add_common(perf_cmd);
    std::optional<double> freq;
    std::optional<std::size_t> nread;
    perf_cmd->add_option("--freq", freq, "SRAM frequency in MHz")->check(CLI::PositiveNumber);
    perf_cmd->add_option("--nread", nread, "reads per 256-bit output")->check(CLI::PositiveNumber);

    auto* cache_cmd = app.add_subcommand("cachesim", "schedule generation into cache idle time");
    add_common(cache_cmd);
    std::string trace_path;
    double idle_fraction = 0.4;
    std::uint64_t total_cycles = 1000000;
    std::uint64_t min_interval = 8;
    bool overlap = false;
    cache_cmd->add_option("--trace", trace_path, "idle-interval CSV");
    cache_cmd->add_option("--idle-fraction", idle_fraction, "synthetic trace idle share")
        ->check(CLI::Range(0.0, 1.0));
    cache_cmd->add_option("--total-cycles", total_cycles, "synthetic trace length");
    cache_cmd->add_option("--min-interval", min_interval, "synthetic interval granularity");
    cache_cmd->add_flag("--overlap", overlap, "hash concurrently with line reads");

    auto* calib = app.add_subcommand("calibrate", "fit sensing coefficients, write a config");
    add_common(calib);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        RunConfig cfg = load(common);
        unsigned const threads = resolve_threads(0);

        if (*characterize || *sweep_cmd)
        {
            if (reads)
                cfg.sweep.reads_per_row = *reads;
        }

        if (*characterize)
        {
            auto report = run_characterization(cfg, threads);
            auto path = out_path(common, cfg, "characterization.json");
            write_text(path, dump(to_json(report)));
            write_text(sibling(path, ".csv"), characterization_csv(report));
            std::cout << path << '\n';
        }
        else if (*sweep_cmd)
        {
            if (axis == "pattern")
            {
                cfg.sweep.patterns.clear();
                if (values.empty())
                {
                    auto const all = DataPattern::all();
                    cfg.sweep.patterns.assign(all.begin(), all.end());
                }
                for (auto const& v : values)
                    cfg.sweep.patterns.push_back(DataPattern::parse(v));
            }
            else
            {
                std::vector<double> nums = axis_defaults(axis);
                if (!values.empty())
                    nums.clear();
                for (auto const& v : values)
                {
                    std::size_t used = 0;
                    double x = std::stod(v, &used);
                    if (used != v.size())
                        throw std::invalid_argument("bad axis value '" + v + "'");
                    nums.push_back(x);
                }
                if (axis == "voltage" && !nums.empty())
                    cfg.sweep.voltages = nums;
                else if (axis == "frequency")
                    cfg.sweep.frequencies = nums;
                else if (axis == "temperature")
                    cfg.sweep.temperatures = nums;
            }
            auto report = run_characterization(cfg, threads);
            auto path = out_path(common, cfg, "sweep_" + axis + ".csv");
            write_text(path, characterization_csv(report));
            std::cout << path << '\n';
        }
        else if (*gen)
        {
            auto stream = direct ? run_direct(cfg, n_bits, threads)
                                 : run_generate(cfg, n_bits, threads);
            auto path = out_path(common, cfg, "random.trnb");
            auto parent = fs::path{path}.parent_path();
            if (!parent.empty())
                fs::create_directories(parent);
            write_trnb(path, stream.bits, stream.conditioned);
            std::cout << path << '\n';
        }
        else if (*sts_cmd)
        {
            if (alpha)
                cfg.sts.alpha = *alpha;
            if (seq_bits)
                cfg.sts.sequence_bits = *seq_bits;
            if (max_seq)
                cfg.sts.n_sequences = *max_seq;
            cfg.sts.validate();
            auto input = read_trnb(in_path);
            auto report = run_sts(input.bits, cfg.sts, threads);
            auto path = out_path(common, cfg, "sts.json");
            write_text(path, dump(to_json(report)));
            write_text(sibling(path, ".csv"), sts_csv(report));
            std::cout << "verdict " << (report.verdict ? "pass" : "fail") << '\n';
        }
        else if (*perf_cmd)
        {
            std::vector<PerfInputs> rows;
            if (freq || nread)
            {
                PerfInputs in = cfg.perf;
                if (freq)
                    in.freq_mhz = *freq;
                if (nread)
                    in.n_read = *nread;
                rows.push_back(in);
            }
            else
            {
                for (auto const& r : reference_read_counts())
                {
                    PerfInputs in = cfg.perf;
                    in.freq_mhz = r.freq_mhz;
                    in.n_read = r.n_read;
                    rows.push_back(in);
                }
            }
            auto path = out_path(common, cfg, "perf.csv");
            write_text(path, perf_csv(rows));
            std::cout << path << '\n';
        }
        else if (*cache_cmd)
        {
            if (overlap)
                cfg.cache.overlap = true;
            IdleTrace trace = trace_path.empty()
                                  ? synth_trace(total_cycles, idle_fraction,
                                                min_interval, cfg.seed)
                                  : read_trace_csv(trace_path);
            auto report = schedule(trace, cfg.cache);
            nlohmann::json doc = to_json(report);
            doc["seed"] = cfg.seed;
            doc["trace"] = trace_path.empty() ? nlohmann::json(nullptr)
                                              : nlohmann::json(trace_path);
            doc["idle_cycles"] = trace.idle_cycles();
            doc["overlap"] = cfg.cache.overlap;
            doc["fully_idle_bound_bps"] = fully_idle_bound(cfg.cache);
            auto path = out_path(common, cfg, "cachesim.json");
            write_text(path, dump(doc));
            std::cout << path << '\n';
        }
        else if (*calib)
        {
            auto result = calibrate(cfg.seed, cfg.geometry, cfg.fault_model, 8.25, threads);
            if (!result.feasible_candidates)
                throw std::runtime_error("no calibration candidate meets the targets");
            cfg.fault_model = result.config;
            auto path = out_path(common, cfg, "calibrated.json");
            write_text(path, dump(to_json(cfg)));
            std::cout << path << " feasible " << result.feasible_candidates << '/'
                      << result.candidates << " peak "
                      << format_number(result.metrics.peak_max_block32) << " at "
                      << format_number(result.metrics.peak_voltage_mv) << " mV\n";
        }
        return 0;
    }
    catch (std::exception const& e)
    {
        std::cerr << "turan: " << e.what() << '\n';
        return 1;
    }
}
