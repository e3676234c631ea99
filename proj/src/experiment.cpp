// SPDX-License-Identifier: Apache-2.0
//
// cranlab: C-RAN capacity and fronthaul engineering toolkit
// Copyright (C) 2026 The cranlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cranlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "cranlab/dimensioning.hpp"
#include "cranlab/downlink.hpp"
#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"
#include "cranlab/quantizer_design.hpp"
#include "cranlab/rrm.hpp"
#include "cranlab/scenario_io.hpp"
#include "cranlab/uplink.hpp"

namespace cranlab
{

namespace
{

using json = nlohmann::json;
using Row = std::vector<std::string>;

enum class ParamType
{
    number,
    integer,
    boolean,
    choice,
};

struct ParamSpec
{
    ParamType type;
    std::vector<std::string> choices;
};

using ParamTable = std::map<std::string, ParamSpec>;

const ParamTable &param_table(ExperimentKind kind)
{
    static const ParamTable scenario_params{
        {"cap", {ParamType::number, {}}},
        {"noise_var", {ParamType::number, {}}},
        {"duplex", {ParamType::choice, {"tdd_reciprocal", "independent"}}},
    };
    auto with_scenario = [](ParamTable extra) {
        extra.insert(scenario_params.begin(), scenario_params.end());
        return extra;
    };
    static const std::map<ExperimentKind, ParamTable> tables{
        {ExperimentKind::ul_rates, with_scenario({
                                       {"compression", {ParamType::choice, {"independent", "wyner_ziv"}}},
                                       {"receiver", {ParamType::choice, {"linear", "sic"}}},
                                   })},
        {ExperimentKind::dl_rates, with_scenario({
                                       {"compression", {ParamType::choice, {"independent", "multivariate"}}},
                                       {"noise_mode", {ParamType::choice, {"once", "per_user_literal"}}},
                                   })},
        {ExperimentKind::quantizer_fit,
         with_scenario({{"link", {ParamType::choice, {"ul_indep", "ul_wz", "dl_indep"}}}})},
        {ExperimentKind::iq_codec,
         {
             {"frame_len", {ParamType::integer, {}}},
             {"sample_rate", {ParamType::number, {}}},
             {"half_bandwidth", {ParamType::number, {}}},
             {"resample_num", {ParamType::integer, {}}},
             {"resample_den", {ParamType::integer, {}}},
             {"block_len", {ParamType::integer, {}}},
             {"quantizer", {ParamType::choice, {"uniform", "lloyd_max"}}},
             {"bits_per_component", {ParamType::integer, {}}},
             {"noise_shaping", {ParamType::boolean, {}}},
             {"entropy_stage", {ParamType::boolean, {}}},
         }},
        {ExperimentKind::dimensioning,
         {
             {"sample_rate", {ParamType::number, {}}},
             {"bits_per_component", {ParamType::integer, {}}},
             {"antennas", {ParamType::integer, {}}},
             {"one_way_ms", {ParamType::number, {}}},
             {"processing_ms", {ParamType::number, {}}},
             {"round_trip_ms", {ParamType::number, {}}},
             {"split_b_ms", {ParamType::number, {}}},
             {"user_plane_peak_bps", {ParamType::number, {}}},
         }},
        {ExperimentKind::rrm, with_scenario({
                                  {"v", {ParamType::number, {}}},
                                  {"horizon", {ParamType::integer, {}}},
                                  {"load", {ParamType::number, {}}},
                                  {"frame_bits", {ParamType::number, {}}},
                                  {"p_static", {ParamType::number, {}}},
                                  {"link", {ParamType::choice, {"uplink", "downlink"}}},
                                  {"receiver", {ParamType::choice, {"linear", "sic"}}},
                                  {"write_trace", {ParamType::boolean, {}}},
                              })},
    };
    return tables.at(kind);
}

bool needs_scenario(ExperimentKind kind)
{
    return kind != ExperimentKind::iq_codec && kind != ExperimentKind::dimensioning;
}

void check_value(ExperimentKind kind, const std::string &key, const json &v)
{
    const auto &table = param_table(kind);
    const auto it = table.find(key);
    if (it == table.end())
        fail(ErrorCode::SchemaError, "parameter '" + key + "' is not valid for kind " + to_string(kind));
    const auto &ps = it->second;
    switch (ps.type)
    {
    case ParamType::number:
        if (!v.is_number())
            fail(ErrorCode::SchemaError, "parameter '" + key + "' must be a number");
        return;
    case ParamType::integer:
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(ErrorCode::SchemaError, "parameter '" + key + "' must be a non-negative integer");
        return;
    case ParamType::boolean:
        if (!v.is_boolean())
            fail(ErrorCode::SchemaError, "parameter '" + key + "' must be a boolean");
        return;
    case ParamType::choice:
        if (!v.is_string() || std::find(ps.choices.begin(), ps.choices.end(), v.get<std::string>()) == ps.choices.end())
            fail(ErrorCode::SchemaError, "parameter '" + key + "' has an unsupported value");
        return;
    }
}

class Params
{
public:
    explicit Params(json j) : j_(std::move(j)) {}
    double num(const char *key, double def) const { return j_.contains(key) ? j_.at(key).get<double>() : def; }
    std::size_t count(const char *key, std::size_t def) const
    {
        return j_.contains(key) ? j_.at(key).get<std::size_t>() : def;
    }
    bool flag(const char *key, bool def) const { return j_.contains(key) ? j_.at(key).get<bool>() : def; }
    std::string str(const char *key, const char *def) const
    {
        return j_.contains(key) ? j_.at(key).get<std::string>() : std::string(def);
    }
    bool has(const char *key) const { return j_.contains(key); }

private:
    json j_;
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_json(const json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

struct Cell
{
    std::size_t index = 0;
    std::vector<json> axis_values;
    std::uint64_t seed = 0;
    json params;
};

std::vector<Cell> enumerate_cells(const ExperimentSpec &spec)
{
    std::size_t combos = 1;
    for (const auto &a : spec.sweep)
        combos *= a.values.size();
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < combos; ++c)
    {
        // Mixed-radix decode with the first axis most significant.
        std::vector<json> vals(spec.sweep.size());
        std::size_t rem = c;
        for (std::size_t k = spec.sweep.size(); k-- > 0;)
        {
            vals[k] = spec.sweep[k].values[rem % spec.sweep[k].values.size()];
            rem /= spec.sweep[k].values.size();
        }
        for (auto seed : spec.seeds)
        {
            Cell cell;
            cell.index = cells.size();
            cell.axis_values = vals;
            cell.seed = seed;
            cell.params = spec.params;
            for (std::size_t k = 0; k < spec.sweep.size(); ++k)
                cell.params[spec.sweep[k].param] = vals[k];
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string describe(const ExperimentSpec &spec, const Cell &cell)
{
    std::string s = "cell " + std::to_string(cell.index) + " (";
    for (std::size_t k = 0; k < spec.sweep.size(); ++k)
        s += spec.sweep[k].param + "=" + fmt_json(cell.axis_values[k]) + ", ";
    return s + "seed=" + std::to_string(cell.seed) + ")";
}

struct Setup
{
    ClusterConfig cfg;
    DuplexMode duplex = DuplexMode::tdd_reciprocal;
    ChannelRealization ch;
};

Setup make_setup(const Scenario &scn, const Params &p, std::uint64_t seed)
{
    Setup s{scn.cfg, scn.duplex, {}};
    if (p.has("cap"))
        s.cfg.fronthaul_caps.assign(s.cfg.n_ru, p.num("cap", 1.0));
    if (p.has("noise_var"))
        s.cfg.noise_var_ul = s.cfg.noise_var_dl = p.num("noise_var", 1.0);
    if (p.has("duplex"))
        s.duplex = duplex_from_string(p.str("duplex", "tdd_reciprocal"));
    s.cfg.validate();
    s.ch = generate_channel(s.cfg, seed, s.duplex);
    return s;
}

double total(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<std::string> kind_columns(ExperimentKind kind, const Scenario *scn)
{
    switch (kind)
    {
    case ExperimentKind::ul_rates:
    case ExperimentKind::dl_rates:
        return {"sum_rate_linear", kind == ExperimentKind::ul_rates ? "sum_rate_sic" : "sum_rate_dpc",
                "total_fronthaul", "feasible"};
    case ExperimentKind::quantizer_fit:
        return {"mean_alpha", "max_residual", "converged", "total_fronthaul"};
    case ExperimentKind::iq_codec:
        return {"compression_ratio", "evm", "sqnr_db", "bits_per_sample", "index_entropy", "encoded_bytes"};
    case ExperimentKind::dimensioning:
        return {"line_rate_bps", "l2_a", "l2_b", "l2_c", "l2_d", "l2_a_remaining_ms", "split_c_bandwidth_bps"};
    case ExperimentKind::rrm:
    {
        std::vector<std::string> cols{"frames", "mean_queue", "max_queue", "mean_cost"};
        for (std::size_t i = 1; i <= scn->cfg.n_ue; ++i)
            cols.push_back("mean_rate_" + std::to_string(i));
        return cols;
    }
    }
    return {};
}

Row ul_rates_cell(const Scenario &scn, const Params &p, std::uint64_t seed)
{
    const auto s = make_setup(scn, p, seed);
    const bool wz = p.str("compression", "independent") == "wyner_ziv";
    const auto fit = fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, wz ? FronthaulLink::ul_wz : FronthaulLink::ul_indep);
    UplinkStrategy st;
    st.compression = wz ? UplinkCompression::wyner_ziv : UplinkCompression::independent;
    const auto lin = evaluate_uplink(s.cfg, s.ch, fit.q, st);
    st.receiver = Receiver::sic;
    const auto sic = evaluate_uplink(s.cfg, s.ch, fit.q, st);
    return {fmt(lin.sum_rate()), fmt(sic.sum_rate()), fmt(sic.total_fronthaul()), sic.feasible ? "1" : "0"};
}

struct DlDesign
{
    DlSignalPlan plan;
    QuantizationConfig q;
};

DlDesign dl_design(const Setup &s, bool multivariate)
{
    DlDesign d{zero_forcing_plan(s.cfg, s.ch), {}};
    if (multivariate)
        d.q = design_multivariate_q(s.cfg, s.ch, d.plan, s.cfg.fronthaul_caps, {}).q;
    else
        d.q = fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::dl_indep, {}, &d.plan).q;
    return d;
}

Row dl_rates_cell(const Scenario &scn, const Params &p, std::uint64_t seed)
{
    const auto s = make_setup(scn, p, seed);
    const bool multi = p.str("compression", "independent") == "multivariate";
    const auto d = dl_design(s, multi);
    DownlinkStrategy st;
    st.compression = multi ? DownlinkCompression::multivariate : DownlinkCompression::independent;
    st.noise_mode = p.str("noise_mode", "once") == "once" ? QuantNoiseMode::once : QuantNoiseMode::per_user_literal;
    const auto lin = evaluate_downlink(s.cfg, s.ch, d.plan, d.q, st);
    st.precoding = Precoding::dpc;
    const auto dpc = evaluate_downlink(s.cfg, s.ch, d.plan, d.q, st);
    return {fmt(lin.sum_rate()), fmt(dpc.sum_rate()), fmt(dpc.total_fronthaul()), dpc.feasible ? "1" : "0"};
}

Row quantizer_fit_cell(const Scenario &scn, const Params &p, std::uint64_t seed)
{
    const auto s = make_setup(scn, p, seed);
    const auto link = p.str("link", "ul_indep");
    FittedQuantization fit;
    double fronthaul = 0.0;
    if (link == "dl_indep")
    {
        const auto plan = zero_forcing_plan(s.cfg, s.ch);
        fit = fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::dl_indep, {}, &plan);
        fronthaul = total(dl_fronthaul_indep(plan, fit.q));
    }
    else if (link == "ul_wz")
    {
        fit = fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::ul_wz);
        fronthaul = total(ul_fronthaul_wyner_ziv(s.cfg, s.ch, fit.q, default_decompression_order(s.cfg, s.ch)));
    }
    else
    {
        fit = fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::ul_indep);
        fronthaul = total(ul_fronthaul_indep(s.cfg, s.ch, fit.q));
    }
    double alpha = 0.0, residual = 0.0;
    std::size_t converged = 0;
    for (const auto &f : fit.fits)
    {
        alpha += f.alpha;
        residual = std::max(residual, f.residual);
        converged += f.converged;
    }
    return {fmt(alpha / static_cast<double>(fit.fits.size())), fmt(residual), std::to_string(converged), fmt(fronthaul)};
}

CodecConfig codec_from_params(const Params &p)
{
    CodecConfig c;
    c.resample_ratio = {static_cast<std::uint32_t>(p.count("resample_num", 3)),
                        static_cast<std::uint32_t>(p.count("resample_den", 4))};
    c.block_len = p.count("block_len", 32);
    c.quantizer = p.str("quantizer", "lloyd_max") == "uniform" ? QuantizerKind::uniform : QuantizerKind::lloyd_max;
    c.bits_per_component = static_cast<unsigned>(p.count("bits_per_component", 7));
    c.noise_shaping = p.flag("noise_shaping", false);
    c.entropy_stage = p.flag("entropy_stage", true);
    c.validate();
    return c;
}

Row iq_codec_cell(const Params &p, std::uint64_t seed)
{
    const auto cfg = codec_from_params(p);
    const auto frame = synthetic_gaussian_frame(p.count("frame_len", 15360), p.num("sample_rate", 15.36e6),
                                                p.num("half_bandwidth", 4.5e6), seed);
    const auto r = run_codec(frame, cfg);
    return {fmt(r.compression_ratio), fmt(r.evm),          fmt(r.sqnr_db),
            fmt(r.bits_per_sample),   fmt(r.index_entropy), std::to_string(r.encoded_bytes)};
}

Row dimensioning_cell(const Params &p)
{
    CpriProfile prof;
    prof.sample_rate = p.num("sample_rate", 30.72e6);
    prof.bits_per_component = static_cast<unsigned>(p.count("bits_per_component", 15));
    prof.antennas = static_cast<unsigned>(p.count("antennas", 2));
    HarqBudget budget;
    budget.round_trip_ms = p.num("round_trip_ms", 3.0);
    budget.split_b_one_way_ms = p.num("split_b_ms", 0.1);
    const auto splits = harq_budget_check(p.num("one_way_ms", 0.5), p.num("processing_ms", 1.0), budget);
    Row row{fmt(cpri_line_rate(prof))};
    for (const auto &f : splits)
        row.push_back(f.feasible ? "1" : "0");
    row.push_back(fmt(splits[0].remaining_ms));
    row.push_back(p.has("user_plane_peak_bps") ? fmt(split_c_bandwidth(p.num("user_plane_peak_bps", 0.0))) : "");
    return row;
}

Row rrm_cell(const Scenario &scn, const Params &p, const Cell &cell, const std::filesystem::path &out_dir,
             bool write)
{
    auto s = make_setup(scn, p, cell.seed);
    RrmPolicyConfig pol;
    pol.v = p.num("v", 1.0);
    pol.horizon = p.count("horizon", 1000);
    pol.frame_bits = p.num("frame_bits", 100.0);
    pol.p_static = p.num("p_static", 1.0);
    pol.link = p.str("link", "uplink") == "downlink" ? RrmLink::downlink : RrmLink::uplink;
    pol.receiver = p.str("receiver", "linear") == "sic" ? Receiver::sic : Receiver::linear;
    pol.arrival_bits = calibrate_arrivals(s.cfg, s.duplex, pol, cell.seed, p.num("load", 0.7), 100);
    const auto trace = run_rrm(s.cfg, s.duplex, pol, cell.seed);
    if (write && p.flag("write_trace", false))
    {
        std::filesystem::create_directories(out_dir / "traces");
        std::ofstream f(out_dir / "traces" / ("cell_" + std::to_string(cell.index) + ".csv"));
        write_trace_csv(f, trace);
        if (!f)
            fail(ErrorCode::IoError, "cannot write trace for cell " + std::to_string(cell.index));
    }
    Row row{std::to_string(trace.summary.frames), fmt(trace.summary.mean_queue), fmt(trace.summary.max_queue),
            fmt(trace.summary.mean_cost)};
    for (double r : trace.summary.mean_rates)
        row.push_back(fmt(r));
    return row;
}

Row compare_cell(ExperimentKind kind, const Scenario &scn, const Params &p, std::uint64_t seed)
{
    const auto s = make_setup(scn, p, seed);
    double base = 0.0, alt = 0.0;
    if (kind == ExperimentKind::ul_rates)
    {
        const bool sic = p.str("receiver", "sic") == "sic";
        auto sum_rate = [&](const QuantizationConfig &q) {
            return total(sic ? ul_rate_sic(s.cfg, s.ch, q, default_decoding_order(s.cfg, s.ch))
                             : ul_rate_linear(s.cfg, s.ch, q));
        };
        base = sum_rate(fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::ul_indep).q);
        alt = sum_rate(fit_all_to_caps(s.cfg, s.ch, s.cfg.fronthaul_caps, FronthaulLink::ul_wz).q);
    }
    else
    {
        const auto indep = dl_design(s, false);
        const auto multi = dl_design(s, true);
        base = total(dl_rate_linear(s.cfg, s.ch, indep.plan, indep.q));
        alt = total(dl_rate_linear(s.cfg, s.ch, multi.plan, multi.q));
    }
    return {fmt(base), fmt(alt), fmt(alt / base)};
}

// Bounded worker pool; the calling thread is the single ordered writer.
void run_pool(std::size_t n, std::size_t workers, const std::function<Row(std::size_t)> &compute,
              const std::function<void(std::size_t, Row &&)> &sink)
{
    std::vector<std::optional<Row>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<char> done(n, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::size_t running = 0;
    std::mutex m;
    std::condition_variable cv;

    auto work = [&] {
        for (;;)
        {
            const std::size_t k = next.fetch_add(1);
            if (k >= n || stop.load())
            {
                const std::lock_guard lock(m);
                --running;
                cv.notify_all();
                return;
            }
            std::optional<Row> row;
            std::exception_ptr err;
            try
            {
                row = compute(k);
            }
            catch (...)
            {
                err = std::current_exception();
                stop.store(true);
            }
            {
                const std::lock_guard lock(m);
                slots[k] = std::move(row);
                errors[k] = err;
                done[k] = 1;
            }
            cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    const std::size_t w = std::max<std::size_t>(1, std::min(workers, n));
    running = w;
    for (std::size_t t = 0; t < w; ++t)
        pool.emplace_back(work);

    std::exception_ptr failure;
    for (std::size_t k = 0; k < n && !failure; ++k)
    {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return done[k] || running == 0; });
        if (!done[k])
        {
            // A worker failed and the queue was abandoned before cell k ran.
            for (std::size_t j = 0; j < n; ++j)
                if (done[j] && errors[j])
                {
                    failure = errors[j];
                    break;
                }
            break;
        }
        if (errors[k])
        {
            failure = errors[k];
            break;
        }
        Row row = std::move(*slots[k]);
        lock.unlock();
        sink(k, std::move(row));
    }
    stop.store(true);
    for (auto &t : pool)
        t.join();
    if (!failure)
        for (std::size_t j = 0; j < n; ++j)
            if (errors[j])
            {
                failure = errors[j];
                break;
            }
    if (failure)
        std::rethrow_exception(failure);
}

std::string write_atomic(const std::filesystem::path &path, const std::string &content)
{
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(ErrorCode::IoError, "cannot write " + tmp);
        out << content;
        if (!out)
            fail(ErrorCode::IoError, "write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
    return path.string();
}

std::optional<Scenario> maybe_load_scenario(const ExperimentSpec &spec)
{
    if (!needs_scenario(spec.kind))
        return std::nullopt;
    return load_scenario(spec.scenario);
}

ResultTable execute(const ExperimentSpec &spec, const RunOptions &options, bool compare)
{
    validate_experiment(spec);
    const auto started = std::chrono::steady_clock::now();
    const auto scn = maybe_load_scenario(spec);
    const auto cells = enumerate_cells(spec);

    ResultTable table;
    table.columns.push_back("cell");
    for (const auto &a : spec.sweep)
        table.columns.push_back(a.param);
    table.columns.push_back("seed");
    const auto extra = compare ? std::vector<std::string>{"sum_rate_indep",
                                                          spec.kind == ExperimentKind::ul_rates ? "sum_rate_wz"
                                                                                                : "sum_rate_multivariate",
                                                          "ratio"}
                               : kind_columns(spec.kind, scn ? &*scn : nullptr);
    table.columns.insert(table.columns.end(), extra.begin(), extra.end());

    if (options.write_outputs)
        std::filesystem::create_directories(spec.output_dir);

    auto compute = [&](std::size_t k) -> Row {
        const auto &cell = cells[k];
        const Params p(cell.params);
        try
        {
            if (compare)
                return compare_cell(spec.kind, *scn, p, cell.seed);
            switch (spec.kind)
            {
            case ExperimentKind::ul_rates:
                return ul_rates_cell(*scn, p, cell.seed);
            case ExperimentKind::dl_rates:
                return dl_rates_cell(*scn, p, cell.seed);
            case ExperimentKind::quantizer_fit:
                return quantizer_fit_cell(*scn, p, cell.seed);
            case ExperimentKind::iq_codec:
                return iq_codec_cell(p, cell.seed);
            case ExperimentKind::dimensioning:
                return dimensioning_cell(p);
            case ExperimentKind::rrm:
                return rrm_cell(*scn, p, cell, spec.output_dir, options.write_outputs);
            }
            return {};
        }
        catch (const std::exception &e)
        {
            fail(ErrorCode::EngineError, describe(spec, cell) + ": " + e.what());
        }
    };
    auto sink = [&](std::size_t k, Row &&row) {
        const auto &cell = cells[k];
        Row full{std::to_string(cell.index)};
        for (const auto &v : cell.axis_values)
            full.push_back(fmt_json(v));
        full.push_back(std::to_string(cell.seed));
        full.insert(full.end(), row.begin(), row.end());
        table.rows.push_back(std::move(full));
    };
    const std::size_t workers = options.workers > 0 ? options.workers : workers_from_env();
    run_pool(cells.size(), workers, compute, sink);

    if (options.write_outputs)
    {
        const std::string stem = compare ? "compare" : "results";
        write_atomic(spec.output_dir / (stem + ".csv"), table.to_csv());
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json manifest{{"tool", "cranlab"},
                      {"version", CRANLAB_VERSION},
                      {"command", compare ? "compare" : "run"},
                      {"kind", to_string(spec.kind)},
                      {"spec", spec.source},
                      {"scenario", scn ? scenario_to_json(*scn) : json(nullptr)},
                      {"columns", table.columns},
                      {"rows", table.rows.size()},
                      {"workers", workers},
                      {"wall_time_s", wall}};
        if (spec.kind == ExperimentKind::iq_codec)
            manifest["baseline_bits_per_component"] = baseline_bits_per_component;
        if (compare)
        {
            const auto ratios = table.numeric_column("ratio");
            std::size_t above = 0;
            for (double r : ratios)
                above += r > 1.0;
            manifest["cells_ratio_above_one"] = above;
            manifest["mean_ratio"] = ratios.empty() ? 0.0 : total(ratios) / static_cast<double>(ratios.size());
        }
        write_atomic(spec.output_dir / (stem == "compare" ? "compare_manifest.json" : "manifest.json"),
                     manifest.dump(2) + "\n");
    }
    return table;
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::ul_rates:
        return "ul_rates";
    case ExperimentKind::dl_rates:
        return "dl_rates";
    case ExperimentKind::quantizer_fit:
        return "quantizer_fit";
    case ExperimentKind::iq_codec:
        return "iq_codec";
    case ExperimentKind::dimensioning:
        return "dimensioning";
    case ExperimentKind::rrm:
        return "rrm";
    }
    return "unknown";
}

ExperimentSpec parse_experiment_spec(const json &j, const std::filesystem::path &base_dir)
{
    if (!j.is_object())
        fail(ErrorCode::SchemaError, "experiment spec must be a JSON object");
    static const std::set<std::string> known{"scenario", "kind", "sweep", "seeds", "output_dir", "params"};
    for (const auto &[key, _] : j.items())
        if (!known.contains(key))
            fail(ErrorCode::SchemaError, "unknown field '" + key + "'");

    ExperimentSpec spec;
    spec.source = j;
    if (!j.contains("kind") || !j["kind"].is_string())
        fail(ErrorCode::SchemaError, "field 'kind' is required");
    const auto kind = j["kind"].get<std::string>();
    bool matched = false;
    for (auto k : {ExperimentKind::ul_rates, ExperimentKind::dl_rates, ExperimentKind::quantizer_fit,
                   ExperimentKind::iq_codec, ExperimentKind::dimensioning, ExperimentKind::rrm})
        if (to_string(k) == kind)
        {
            spec.kind = k;
            matched = true;
        }
    if (!matched)
        fail(ErrorCode::SchemaError, "unknown experiment kind '" + kind + "'");

    if (j.contains("scenario"))
    {
        if (!j["scenario"].is_string())
            fail(ErrorCode::SchemaError, "field 'scenario' must be a path");
        spec.scenario = base_dir / j["scenario"].get<std::string>();
    }
    else if (needs_scenario(spec.kind))
        fail(ErrorCode::SchemaError, "field 'scenario' is required for kind " + kind);

    if (!j.contains("output_dir") || !j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty())
        fail(ErrorCode::SchemaError, "field 'output_dir' is required");
    spec.output_dir = base_dir / j["output_dir"].get<std::string>();

    if (j.contains("params"))
    {
        if (!j["params"].is_object())
            fail(ErrorCode::SchemaError, "field 'params' must be an object");
        spec.params = j["params"];
        for (const auto &[key, value] : spec.params.items())
            check_value(spec.kind, key, value);
    }

    if (j.contains("seeds"))
    {
        const auto &s = j["seeds"];
        if (!s.is_array() || s.empty())
            fail(ErrorCode::SchemaError, "field 'seeds' must be a non-empty list");
        spec.seeds.clear();
        for (const auto &v : s)
        {
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                fail(ErrorCode::SchemaError, "seeds must be non-negative integers");
            spec.seeds.push_back(v.get<std::uint64_t>());
        }
    }

    if (j.contains("sweep"))
    {
        const auto &sw = j["sweep"];
        if (!sw.is_array())
            fail(ErrorCode::SchemaError, "field 'sweep' must be a list of axes");
        std::set<std::string> seen;
        for (const auto &axis : sw)
        {
            if (!axis.is_object() || !axis.contains("param") || !axis["param"].is_string() || !axis.contains("values") ||
                !axis["values"].is_array())
                fail(ErrorCode::SchemaError, "each sweep axis needs 'param' and 'values'");
            for (const auto &[key, _] : axis.items())
                if (key != "param" && key != "values")
                    fail(ErrorCode::SchemaError, "unknown sweep axis field '" + key + "'");
            SweepAxis a{axis["param"].get<std::string>(), {}};
            if (!seen.insert(a.param).second)
                fail(ErrorCode::SchemaError, "parameter '" + a.param + "' is swept twice");
            if (axis["values"].empty())
                fail(ErrorCode::SchemaError, "sweep axis '" + a.param + "' has no values");
            for (const auto &v : axis["values"])
            {
                check_value(spec.kind, a.param, v);
                a.values.push_back(v);
            }
            spec.sweep.push_back(std::move(a));
        }
    }
    return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::SchemaError, "cannot open experiment spec " + path.string());
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (const json::exception &e)
    {
        fail(ErrorCode::SchemaError, std::string("experiment spec is not valid JSON: ") + e.what());
    }
    return parse_experiment_spec(j, path.parent_path());
}

void validate_experiment(const ExperimentSpec &spec)
{
    for (const auto &[key, value] : spec.params.items())
        check_value(spec.kind, key, value);
    for (const auto &a : spec.sweep)
    {
        if (a.values.empty())
            fail(ErrorCode::SchemaError, "sweep axis '" + a.param + "' has no values");
        for (const auto &v : a.values)
            check_value(spec.kind, a.param, v);
    }
    if (spec.seeds.empty())
        fail(ErrorCode::SchemaError, "at least one seed is required");
    if (spec.output_dir.empty())
        fail(ErrorCode::SchemaError, "an output directory is required");
    if (needs_scenario(spec.kind))
    {
        const auto scn = load_scenario(spec.scenario);
        if (spec.kind == ExperimentKind::rrm && scn.cfg.n_ru > 63)
            fail(ErrorCode::SchemaError, "rrm experiments support at most 63 RUs");
    }
    if (spec.kind == ExperimentKind::iq_codec)
    {
        for (const auto &cell : enumerate_cells(spec))
        {
            try
            {
                codec_from_params(Params(cell.params));
            }
            catch (const Error &e)
            {
                fail(ErrorCode::SchemaError, e.what());
            }
        }
    }
}

std::size_t ResultTable::column_index(const std::string &name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        fail(ErrorCode::InvalidArgument, "no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> ResultTable::numeric_column(const std::string &name) const
{
    const auto k = column_index(name);
    std::vector<double> out;
    for (const auto &r : rows)
        out.push_back(r[k].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(r[k]));
    return out;
}

std::string ResultTable::to_csv() const
{
    std::ostringstream out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t k = 0; k < cells.size(); ++k)
        {
            const auto &c = cells[k];
            if (k)
                out << ',';
            if (c.find_first_of(",\"\n") != std::string::npos)
            {
                out << '"';
                for (char ch : c)
                    out << (ch == '"' ? "\"\"" : std::string(1, ch));
                out << '"';
            }
            else
                out << c;
        }
        out << '\n';
    };
    line(columns);
    for (const auto &r : rows)
        line(r);
    return out.str();
}

std::size_t workers_from_env()
{
    if (const char *env = std::getenv("CRANLAB_WORKERS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

ResultTable run_experiment(const ExperimentSpec &spec, const RunOptions &options)
{
    return execute(spec, options, false);
}

ResultTable compare_strategies(const ExperimentSpec &spec, const RunOptions &options)
{
    if (spec.kind != ExperimentKind::ul_rates && spec.kind != ExperimentKind::dl_rates)
        fail(ErrorCode::SchemaError, "compare needs kind ul_rates or dl_rates");
    return execute(spec, options, true);
}

} // namespace cranlab
