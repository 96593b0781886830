#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cache_sim.hpp"
#include "characterize.hpp"
#include "fault_model.hpp"
#include "perf.hpp"
#include "sts.hpp"
#include "trng.hpp"

namespace turan
{
//! Generation settings as they appear in a config file.
struct TrngSettings
{
    double entropy_target = 256.0;
    double direct_cell_threshold = 0.9999;
    std::size_t direct_reads = 100000;
    //! Fixed source; when absent it comes from a characterization sweep.
    std::optional<EntropySource> source;
};

struct RunConfig
{
    std::uint64_t seed = 1;
    SramGeometry geometry;
    FaultModelConfig fault_model;
    SweepConfig sweep = SweepConfig::defaults();
    TrngSettings trng;
    StsConfig sts;
    PerfInputs perf;
    CacheTrngConfig cache;
    std::string output_dir = ".";
};

//! Parse a full config document. Unknown keys raise FormatError.
RunConfig parse_run_config(std::string const& text,
                           std::string const& origin = "<memory>");
RunConfig load_run_config(std::string const& path);

nlohmann::json to_json(RunConfig const& cfg);
nlohmann::json to_json(FaultModelConfig const& cfg);
nlohmann::json to_json(OperatingPoint const& op);
nlohmann::json to_json(EntropySource const& src);

//! Stable text form: two-space indent and a trailing newline.
std::string dump(nlohmann::json const& doc);

}  // namespace turan
