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

#include "cranlab/scenario_io.hpp"

#include <fstream>

#include "cranlab/errors.hpp"

namespace cranlab
{

using nlohmann::json;

namespace
{

constexpr const char *known_fields[] = {
    "schema_version", "n_ue", "n_ru", "ue_antennas", "ru_antennas", "fronthaul_caps", "noise_var_ul",
    "noise_var_dl", "ue_tx_cov", "pathloss_db", "ru_power_per_antenna", "duplex", "name", "description",
};

void reject_unknown(const json &j)
{
    for (const auto &item : j.items())
    {
        bool known = false;
        for (const char *k : known_fields)
            known = known || item.key() == k;
        if (!known)
            fail(ErrorCode::SchemaError, "unknown scenario field '" + item.key() + "'");
    }
}

const json &required(const json &j, const char *key)
{
    if (!j.contains(key))
        fail(ErrorCode::SchemaError, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::size_t count_field(const json &j, const char *key)
{
    const auto &v = required(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        fail(ErrorCode::SchemaError, std::string("'") + key + "' must be an integer >= 1");
    return v.get<std::size_t>();
}

double number_field(const json &j, const char *key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        fail(ErrorCode::SchemaError, std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

HermitianPsd parse_cov(const json &v, std::size_t dim)
{
    if (v.is_number())
        return HermitianPsd::identity(dim, v.get<double>());
    if (!v.is_array() || v.size() != dim)
        fail(ErrorCode::SchemaError, "ue_tx_cov matrix must have M_U rows");
    ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
    {
        const auto &row = v[r];
        if (!row.is_array() || row.size() != dim)
            fail(ErrorCode::SchemaError, "ue_tx_cov matrix must be square");
        for (std::size_t c = 0; c < dim; ++c)
        {
            const auto &e = row[c];
            Complex z;
            if (e.is_number())
                z = e.get<double>();
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                z = {e[0].get<double>(), e[1].get<double>()};
            else
                fail(ErrorCode::SchemaError, "matrix entries must be numbers or [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = z;
        }
    }
    try
    {
        return HermitianPsd(m);
    }
    catch (const Error &e)
    {
        fail(ErrorCode::SchemaError, std::string("ue_tx_cov: ") + e.what());
    }
}

} // namespace

std::string to_string(DuplexMode mode)
{
    return mode == DuplexMode::tdd_reciprocal ? "tdd_reciprocal" : "independent";
}

DuplexMode duplex_from_string(const std::string &s)
{
    if (s == "tdd_reciprocal")
        return DuplexMode::tdd_reciprocal;
    if (s == "independent")
        return DuplexMode::independent;
    fail(ErrorCode::SchemaError, "duplex must be 'tdd_reciprocal' or 'independent'");
}

Scenario scenario_from_json(const json &j)
{
    if (!j.is_object())
        fail(ErrorCode::SchemaError, "scenario must be a JSON object");
    const auto &ver = required(j, "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != scenario_schema_version)
        fail(ErrorCode::SchemaError, "unsupported schema_version");
    reject_unknown(j);

    Scenario s;
    auto &cfg = s.cfg;
    cfg.n_ue = count_field(j, "n_ue");
    cfg.n_ru = count_field(j, "n_ru");
    cfg.ue_antennas = count_field(j, "ue_antennas");
    cfg.ru_antennas = count_field(j, "ru_antennas");

    const auto &caps = required(j, "fronthaul_caps");
    if (!caps.is_array() || caps.size() != cfg.n_ru)
        fail(ErrorCode::SchemaError, "fronthaul_caps must list one capacity per RU");
    for (const auto &c : caps)
    {
        if (!c.is_number())
            fail(ErrorCode::SchemaError, "fronthaul_caps entries must be numbers");
        cfg.fronthaul_caps.push_back(c.get<double>());
    }

    cfg.noise_var_ul = number_field(j, "noise_var_ul", 1.0);
    cfg.noise_var_dl = number_field(j, "noise_var_dl", 1.0);
    cfg.ru_power_per_antenna = number_field(j, "ru_power_per_antenna", 1.0);

    if (j.contains("ue_tx_cov"))
    {
        const auto &covs = j.at("ue_tx_cov");
        if (!covs.is_array() || covs.size() != cfg.n_ue)
            fail(ErrorCode::SchemaError, "ue_tx_cov must list one covariance per UE");
        for (const auto &c : covs)
            cfg.ue_tx_cov.push_back(parse_cov(c, cfg.ue_antennas));
    }
    else
    {
        cfg.ue_tx_cov.assign(cfg.n_ue, HermitianPsd::identity(cfg.ue_antennas, 1.0 / static_cast<double>(cfg.ue_antennas)));
    }

    const auto rows = static_cast<Eigen::Index>(cfg.n_ru);
    const auto cols = static_cast<Eigen::Index>(cfg.n_ue);
    cfg.pathloss_db = Eigen::MatrixXd::Zero(rows, cols);
    if (j.contains("pathloss_db"))
    {
        const auto &pl = j.at("pathloss_db");
        if (!pl.is_array())
            fail(ErrorCode::SchemaError, "pathloss_db must be an array");
        const bool nested = !pl.empty() && pl[0].is_array();
        if (nested)
        {
            if (pl.size() != cfg.n_ru)
                fail(ErrorCode::SchemaError, "pathloss_db must have n_ru rows");
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                const auto &row = pl[static_cast<std::size_t>(r)];
                if (!row.is_array() || row.size() != cfg.n_ue)
                    fail(ErrorCode::SchemaError, "pathloss_db rows must have n_ue entries");
                for (Eigen::Index c = 0; c < cols; ++c)
                {
                    if (!row[static_cast<std::size_t>(c)].is_number())
                        fail(ErrorCode::SchemaError, "pathloss_db entries must be numbers");
                    cfg.pathloss_db(r, c) = row[static_cast<std::size_t>(c)].get<double>();
                }
            }
        }
        else
        {
            if (pl.size() != cfg.n_ru * cfg.n_ue)
                fail(ErrorCode::SchemaError, "flat pathloss_db must have n_ru * n_ue entries");
            for (Eigen::Index r = 0; r < rows; ++r)
                for (Eigen::Index c = 0; c < cols; ++c)
                {
                    const auto &e = pl[static_cast<std::size_t>(r * cols + c)];
                    if (!e.is_number())
                        fail(ErrorCode::SchemaError, "pathloss_db entries must be numbers");
                    cfg.pathloss_db(r, c) = e.get<double>();
                }
        }
    }

    if (j.contains("duplex"))
    {
        if (!j.at("duplex").is_string())
            fail(ErrorCode::SchemaError, "duplex must be a string");
        s.duplex = duplex_from_string(j.at("duplex").get<std::string>());
    }

    try
    {
        cfg.validate();
    }
    catch (const Error &e)
    {
        fail(ErrorCode::SchemaError, e.what());
    }
    return s;
}

json scenario_to_json(const Scenario &s)
{
    const auto &cfg = s.cfg;
    json j;
    j["schema_version"] = scenario_schema_version;
    j["n_ue"] = cfg.n_ue;
    j["n_ru"] = cfg.n_ru;
    j["ue_antennas"] = cfg.ue_antennas;
    j["ru_antennas"] = cfg.ru_antennas;
    j["fronthaul_caps"] = cfg.fronthaul_caps;
    j["noise_var_ul"] = cfg.noise_var_ul;
    j["noise_var_dl"] = cfg.noise_var_dl;
    j["ru_power_per_antenna"] = cfg.ru_power_per_antenna;
    json covs = json::array();
    for (const auto &c : cfg.ue_tx_cov)
    {
        json m = json::array();
        for (Eigen::Index r = 0; r < c.matrix().rows(); ++r)
        {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.matrix().cols(); ++k)
                row.push_back({c.matrix()(r, k).real(), c.matrix()(r, k).imag()});
            m.push_back(row);
        }
        covs.push_back(m);
    }
    j["ue_tx_cov"] = covs;
    json pl = json::array();
    for (Eigen::Index r = 0; r < cfg.pathloss_db.rows(); ++r)
    {
        json row = json::array();
        for (Eigen::Index c = 0; c < cfg.pathloss_db.cols(); ++c)
            row.push_back(cfg.pathloss_db(r, c));
        pl.push_back(row);
    }
    j["pathloss_db"] = pl;
    j["duplex"] = to_string(s.duplex);
    return j;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::ScenarioNotFound, "cannot open scenario file " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::parse_error &e)
    {
        fail(ErrorCode::SchemaError, std::string("scenario is not valid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario &s, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::IoError, "cannot write " + path.string());
    out << scenario_to_json(s).dump(2) << '\n';
}

} // namespace cranlab
