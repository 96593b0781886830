#include "turan/config.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <stdexcept>

#include "turan/errors.hpp"

namespace turan
{
using nlohmann::json;

namespace
{
//! Pulls known keys out of one JSON object and rejects the rest.
class Section
{
  public:
    Section(json const& obj, std::string where, std::string const& origin)
        : obj_{obj}, where_{std::move(where)}, origin_{origin}
    {
        if (!obj_.is_object())
            this->fail("expected an object");
    }

    template<class T>
    void get(char const* key, T& out)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        try
        {
            out = it->template get<T>();
        }
        catch (json::exception const&)
        {
            this->fail(std::string{"bad value for '"} + key + "'");
        }
    }

    template<class T>
    void get_optional(char const* key, std::optional<T>& out)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null())
            return;
        T value{};
        try
        {
            value = it->template get<T>();
        }
        catch (json::exception const&)
        {
            this->fail(std::string{"bad value for '"} + key + "'");
        }
        out = value;
    }

    json const* child(char const* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
        {
            if (!seen_.count(it.key()))
                this->fail("unknown key '" + it.key() + "'");
        }
    }

    [[noreturn]] void fail(std::string const& what) const
    {
        throw FormatError(origin_, where_ + ": " + what);
    }

    std::string const& where() const { return where_; }

  private:
    json const& obj_;
    std::string where_;
    std::string const& origin_;
    std::set<std::string> seen_;
};

OperatingPoint parse_op(json const& j, std::string const& where,
                        std::string const& origin)
{
    OperatingPoint op;
    Section s{j, where, origin};
    s.get("voltage_mv", op.voltage_mv);
    s.get("frequency_mhz", op.frequency_mhz);
    s.get("temperature_c", op.temperature_c);
    s.finish();
    return op;
}

template<class F>
void validated(Section const& s, F&& check)
{
    try
    {
        check();
    }
    catch (std::invalid_argument const& e)
    {
        s.fail(e.what());
    }
}
}  // namespace

RunConfig parse_run_config(std::string const& text, std::string const& origin)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw FormatError(origin, "malformed JSON", e.byte ? e.byte - 1 : 0);
    }

    RunConfig cfg;
    Section root{doc, "config", origin};
    root.get("seed", cfg.seed);
    root.get("output_dir", cfg.output_dir);

    if (auto const* j = root.child("geometry"))
    {
        Section s{*j, "geometry", origin};
        s.get("rows", cfg.geometry.rows);
        s.get("cols", cfg.geometry.cols);
        s.get("blocks", cfg.geometry.blocks);
        s.finish();
        validated(s, [&] { cfg.geometry.validate(); });
    }
    if (auto const* j = root.child("fault_model"))
    {
        auto& f = cfg.fault_model;
        Section s{*j, "fault_model", origin};
        s.get("v50_mv", f.v50_mv);
        s.get("sigma_frac", f.sigma_frac);
        s.get("a_slope_mv", f.a_slope_mv);
        s.get("q_gamma_per_mv", f.q_gamma_per_mv);
        s.get("sense_balance_mv", f.sense_balance_mv);
        s.get("sense_coupling", f.sense_coupling);
        s.get("kappa_f_mv", f.kappa_f_mv);
        s.get("kappa_t_mv", f.kappa_t_mv);
        s.get("rho0", f.rho0);
        s.get("f_ref_mhz", f.f_ref_mhz);
        s.get("t_ref_c", f.t_ref_c);
        s.get("d_max", f.d_max);
        s.get("fragile_fraction", f.fragile_fraction);
        s.get("nominal_mv", f.nominal_mv);
        s.finish();
        validated(s, [&] { f.validate(); });
    }
    if (auto const* j = root.child("sweep"))
    {
        auto& w = cfg.sweep;
        Section s{*j, "sweep", origin};
        s.get("voltages_mv", w.voltages);
        s.get("frequencies_mhz", w.frequencies);
        s.get("temperatures_c", w.temperatures);
        s.get("reads_per_row", w.reads_per_row);
        s.get("voltage_step_mv", w.voltage_step);
        std::vector<std::string> labels;
        s.get("patterns", labels);
        if (!labels.empty())
        {
            w.patterns.clear();
            for (auto const& l : labels)
            {
                validated(s, [&] { w.patterns.push_back(DataPattern::parse(l)); });
            }
        }
        s.finish();
        validated(s, [&] { w.validate(); });
    }
    if (auto const* j = root.child("trng"))
    {
        auto& t = cfg.trng;
        Section s{*j, "trng", origin};
        s.get("entropy_target", t.entropy_target);
        s.get("direct_cell_threshold", t.direct_cell_threshold);
        s.get("direct_reads", t.direct_reads);
        if (auto const* src = s.child("source"); src && !src->is_null())
        {
            EntropySource e;
            Section ss{*src, "trng.source", origin};
            ss.get("block", e.block);
            ss.get("first_row", e.first_row);
            ss.get("row_count", e.row_count);
            ss.get("entropy_per_read", e.entropy_per_read);
            if (auto const* op = ss.child("op"))
                e.op = parse_op(*op, "trng.source.op", origin);
            ss.finish();
            t.source = e;
        }
        s.finish();
        validated(s, [&] {
            TrngConfig probe;
            probe.entropy_target = t.entropy_target;
            probe.direct_cell_threshold = t.direct_cell_threshold;
            probe.source = t.source.value_or(EntropySource{0, 0, 1, {}, 1.0});
            probe.validate();
            if (t.direct_reads < 1000)
                throw std::invalid_argument("direct_reads must be at least 1000");
        });
    }
    if (auto const* j = root.child("sts"))
    {
        auto& c = cfg.sts;
        Section s{*j, "sts", origin};
        s.get("alpha", c.alpha);
        s.get("sequence_bits", c.sequence_bits);
        s.get("n_sequences", c.n_sequences);
        s.get("block_m", c.block_m);
        s.get("serial_m", c.serial_m);
        s.get("apen_m", c.apen_m);
        std::string policy = "recommended";
        s.get("length_policy", policy);
        if (policy == "recommended")
            c.policy = LengthPolicy::Recommended;
        else if (policy == "minimal")
            c.policy = LengthPolicy::Minimal;
        else
            s.fail("length_policy must be 'recommended' or 'minimal'");
        s.finish();
        validated(s, [&] { c.validate(); });
    }
    if (auto const* j = root.child("perf"))
    {
        auto& p = cfg.perf;
        Section s{*j, "perf", origin};
        s.get("n_read", p.n_read);
        s.get("freq_mhz", p.freq_mhz);
        s.get("p_dd_w", p.p_dd_w);
        s.get("p_sha_w", p.p_sha_w);
        s.get("sha_throughput_bps", p.sha_throughput_bps);
        s.get_optional("sha_units", p.sha_units);
        s.get("t_pmbus_setup_s", p.t_pmbus_setup_s);
        s.get("t_undervolt_cmd_s", p.t_undervolt_cmd_s);
        s.get_optional("t_access_s", p.t_access_s);
        s.get("t_sha_s", p.t_sha_s);
        s.finish();
        validated(s, [&] { p.validate(); });
    }
    if (auto const* j = root.child("cache"))
    {
        auto& c = cfg.cache;
        Section s{*j, "cache", origin};
        s.get("cpu_freq_hz", c.cpu_freq_hz);
        s.get("cycles_per_line_read", c.cycles_per_line_read);
        s.get("line_bits", c.line_bits);
        s.get("line_entropy", c.line_entropy);
        s.get("buffer_bits", c.buffer_bits);
        s.get("sha_bps", c.sha_bps);
        s.get("entropy_target", c.entropy_target);
        s.get("overlap", c.overlap);
        s.finish();
        validated(s, [&] { c.validate(); });
    }
    root.finish();
    return cfg;
}

RunConfig load_run_config(std::string const& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw FormatError(path, "cannot open for reading");
    std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    return parse_run_config(text, path);
}

//---------------------------------------------------------------------------//
json to_json(OperatingPoint const& op)
{
    return {{"voltage_mv", op.voltage_mv},
            {"frequency_mhz", op.frequency_mhz},
            {"temperature_c", op.temperature_c}};
}

json to_json(EntropySource const& src)
{
    return {{"block", src.block},
            {"first_row", src.first_row},
            {"row_count", src.row_count},
            {"entropy_per_read", src.entropy_per_read},
            {"op", to_json(src.op)}};
}

json to_json(FaultModelConfig const& f)
{
    return {{"v50_mv", f.v50_mv},
            {"sigma_frac", f.sigma_frac},
            {"a_slope_mv", f.a_slope_mv},
            {"q_gamma_per_mv", f.q_gamma_per_mv},
            {"sense_balance_mv", f.sense_balance_mv},
            {"sense_coupling", f.sense_coupling},
            {"kappa_f_mv", f.kappa_f_mv},
            {"kappa_t_mv", f.kappa_t_mv},
            {"rho0", f.rho0},
            {"f_ref_mhz", f.f_ref_mhz},
            {"t_ref_c", f.t_ref_c},
            {"d_max", f.d_max},
            {"fragile_fraction", f.fragile_fraction},
            {"nominal_mv", f.nominal_mv}};
}

json to_json(RunConfig const& cfg)
{
    json patterns = json::array();
    for (auto p : cfg.sweep.patterns)
        patterns.push_back(p.label());

    json perf = {{"n_read", cfg.perf.n_read},
                 {"freq_mhz", cfg.perf.freq_mhz},
                 {"p_dd_w", cfg.perf.p_dd_w},
                 {"p_sha_w", cfg.perf.p_sha_w},
                 {"sha_throughput_bps", cfg.perf.sha_throughput_bps},
                 {"sha_units", nullptr},
                 {"t_pmbus_setup_s", cfg.perf.t_pmbus_setup_s},
                 {"t_undervolt_cmd_s", cfg.perf.t_undervolt_cmd_s},
                 {"t_access_s", nullptr},
                 {"t_sha_s", cfg.perf.t_sha_s}};
    if (cfg.perf.sha_units)
        perf["sha_units"] = *cfg.perf.sha_units;
    if (cfg.perf.t_access_s)
        perf["t_access_s"] = *cfg.perf.t_access_s;

    return {
        {"seed", cfg.seed},
        {"output_dir", cfg.output_dir},
        {"geometry",
         {{"rows", cfg.geometry.rows},
          {"cols", cfg.geometry.cols},
          {"blocks", cfg.geometry.blocks}}},
        {"fault_model", to_json(cfg.fault_model)},
        {"sweep",
         {{"voltages_mv", cfg.sweep.voltages},
          {"frequencies_mhz", cfg.sweep.frequencies},
          {"temperatures_c", cfg.sweep.temperatures},
          {"patterns", patterns},
          {"reads_per_row", cfg.sweep.reads_per_row},
          {"voltage_step_mv", cfg.sweep.voltage_step}}},
        {"trng",
         {{"entropy_target", cfg.trng.entropy_target},
          {"direct_cell_threshold", cfg.trng.direct_cell_threshold},
          {"direct_reads", cfg.trng.direct_reads},
          {"source", cfg.trng.source ? to_json(*cfg.trng.source) : json(nullptr)}}},
        {"sts",
         {{"alpha", cfg.sts.alpha},
          {"sequence_bits", cfg.sts.sequence_bits},
          {"n_sequences", cfg.sts.n_sequences},
          {"block_m", cfg.sts.block_m},
          {"serial_m", cfg.sts.serial_m},
          {"apen_m", cfg.sts.apen_m},
          {"length_policy", cfg.sts.policy == LengthPolicy::Recommended
                                ? "recommended"
                                : "minimal"}}},
        {"perf", perf},
        {"cache",
         {{"cpu_freq_hz", cfg.cache.cpu_freq_hz},
          {"cycles_per_line_read", cfg.cache.cycles_per_line_read},
          {"line_bits", cfg.cache.line_bits},
          {"line_entropy", cfg.cache.line_entropy},
          {"buffer_bits", cfg.cache.buffer_bits},
          {"sha_bps", cfg.cache.sha_bps},
          {"entropy_target", cfg.cache.entropy_target},
          {"overlap", cfg.cache.overlap}}},
    };
}

std::string dump(json const& doc)
{
    return doc.dump(2) + "\n";
}

}  // namespace turan
