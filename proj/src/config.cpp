// SPDX-License-Identifier: Apache-2.0
//
// irsap - codebook design and evaluation for IRS-integrated access points
// Copyright (C) 2026 The irsap authors
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


#include "irsap/config.hpp"
#include "irsap/hash.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace irsap
{
    using nlohmann::json;

    namespace
    {
        // Reads typed fields out of one JSON object and rejects keys nobody asked for
        class Section
        {
        public:
            Section(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw ConfigError(where("") + " must be an object");
            }

            ~Section() noexcept(false)
            {
                if (std::uncaught_exceptions() > 0)
                    return;
                for (const auto &[key, value] : j_.items())
                    if (!seen_.count(key))
                        throw ConfigError("unknown configuration key " + where(key));
            }

            template <typename T>
            void get(const std::string &key, T &out)
            {
                seen_.insert(key);
                if (!j_.contains(key))
                    return;
                out = convert<T>(j_.at(key), where(key));
            }

            template <typename T>
            void get(const std::string &key, std::optional<T> &out)
            {
                seen_.insert(key);
                if (!j_.contains(key) || j_.at(key).is_null())
                    return;
                out = convert<T>(j_.at(key), where(key));
            }

            bool has(const std::string &key) const { return j_.contains(key); }

            Section child(const std::string &key)
            {
                seen_.insert(key);
                return Section(j_.contains(key) ? j_.at(key) : empty(), where(key));
            }

            std::string where(const std::string &key) const
            {
                if (key.empty())
                    return path_.empty() ? "configuration" : path_;
                return path_.empty() ? key : path_ + "." + key;
            }

        private:
            static const json &empty()
            {
                static const json e = json::object();
                return e;
            }

            template <typename T>
            static T convert(const json &v, const std::string &name)
            {
                if constexpr (std::is_same_v<T, bool>)
                {
                    if (!v.is_boolean())
                        throw ConfigError(name + " must be true or false");
                    return v.get<bool>();
                }
                else if constexpr (std::is_integral_v<T>)
                {
                    if (!v.is_number_integer())
                        throw ConfigError(name + " must be an integer");
                    if constexpr (std::is_unsigned_v<T>)
                        if (v.is_number_integer() && !v.is_number_unsigned())
                            throw ConfigError(name + " must be a non-negative integer");
                    return v.get<T>();
                }
                else if constexpr (std::is_floating_point_v<T>)
                {
                    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf"))
                        return std::numeric_limits<T>::infinity();
                    if (!v.is_number())
                        throw ConfigError(name + " must be a number");
                    return v.get<T>();
                }
                else if constexpr (std::is_same_v<T, std::string>)
                {
                    if (!v.is_string())
                        throw ConfigError(name + " must be a string");
                    return v.get<std::string>();
                }
                else
                {
                    // std::vector<E>
                    if (!v.is_array())
                        throw ConfigError(name + " must be an array");
                    T out;
                    for (std::size_t i = 0; i < v.size(); ++i)
                        out.push_back(convert<typename T::value_type>(v[i], name + "[" + std::to_string(i) + "]"));
                    return out;
                }
            }

            const json &j_;
            std::string path_;
            std::set<std::string> seen_;
        };
    }

    RadomeGeometry AppConfig::geometry() const
    {
        return elements ? build_geometry(radome, *elements) : build_full_geometry(radome);
    }

    void AppConfig::validate() const
    {
        radome.validate();
        geometry();
        ao.validate();
        if (design_sectors.empty())
            throw ConfigError("design.D must list at least one sector count");
        std::set<int> unique;
        for (int d : design_sectors)
        {
            if (d < 1)
                throw ConfigError("design.D entries must be >= 1");
            if (!unique.insert(d).second)
                throw ConfigError("design.D lists " + std::to_string(d) + " twice");
        }
        experiment.validate();
        if (threads < 0)
            throw ConfigError("threads must be >= 0");
    }

    std::uint64_t AppConfig::hash() const
    {
        Fnv1a h;
        h.add(dump_config(*this));
        return h.value();
    }

    AppConfig parse_config(const std::string &text)
    {
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
        }

        AppConfig cfg;
        {
            Section top(root, "");
            top.get("seed", cfg.seed);
            top.get("threads", cfg.threads);

            Section r = top.child("radome");
            RadomeConfig &g = cfg.radome;
            r.get("lambda", g.wavelength);
            r.get("d_l", g.length);
            r.get("d_w", g.width);
            r.get("d_t", g.thickness);
            r.get("M_x", g.antennas_x);
            r.get("M_y", g.antennas_y);
            r.get("d_A", g.antenna_spacing);
            r.get("d_I", g.element_spacing);
            r.get("theta_max", g.max_elevation);
            r.get("H_AR", g.mount_height);
            r.get("G_A", g.boresight_gain);
            r.get("G_I", g.reflect_gain);
            std::optional<std::vector<int>> n;
            r.get("N", n);
            if (n)
            {
                if (n->size() != irs_count)
                    throw ConfigError("radome.N must list 4 element counts, one per IRS");
                cfg.elements = std::array<int, irs_count>{(*n)[0], (*n)[1], (*n)[2], (*n)[3]};
            }

            Section a = top.child("ao");
            a.get("L", cfg.ao.samples);
            a.get("Gamma", cfg.ao.inits);
            a.get("epsilon", cfg.ao.epsilon);
            a.get("I_max", cfg.ao.max_iterations);
            a.get("Gamma_r", cfg.ao.randomizations);
            std::string aggregation = to_string(cfg.ao.aggregation);
            a.get("aggregation", aggregation);
            try
            {
                cfg.ao.aggregation = aggregation_from_string(aggregation);
            }
            catch (const ConfigError &e)
            {
                throw ConfigError("ao.aggregation: " + std::string(e.what()));
            }
            a.get("guarded", cfg.ao.guarded);
            a.get("sdp_tolerance", cfg.ao.sdp.tolerance);
            a.get("sdp_max_iterations", cfg.ao.sdp.max_iterations);

            Section d = top.child("design");
            d.get("D", cfg.design_sectors);

            ExperimentConfig &e = cfg.experiment;
            Section x = top.child("experiment");
            x.get("name", e.name);
            x.get("D", e.sectors);
            x.get("X", e.union_sizes);
            x.get("kappa_dB_axis", e.kappa_axis_db);
            x.get("kappa_dB", e.kappa_db);
            x.get("D_kappa", e.rate_sectors);
            x.get("T_u", e.coherence);
            x.get("Psi", e.paths);
            x.get("K", e.users);
            x.get("trials", e.trials);
            x.get("dft_cap", e.dft_cap);
            x.get("pattern_samples", e.pattern_samples);
            if (x.has("schemes"))
            {
                std::vector<std::string> names;
                x.get("schemes", names);
                e.schemes.clear();
                for (const auto &s : names)
                {
                    try
                    {
                        e.schemes.push_back(scheme_from_string(s));
                    }
                    catch (const ConfigError &err)
                    {
                        throw ConfigError("experiment.schemes: " + std::string(err.what()));
                    }
                }
            }

            Section l = top.child("link");
            std::optional<double> power, noise;
            l.get("P", power);
            l.get("sigma2", noise);
            if (power.has_value() != noise.has_value())
                throw ConfigError("link.P and link.sigma2 must be given together");
            if (power)
                e.budget = LinkBudget{*power, *noise, 1};

            Section m = top.child("mobility");
            m.get("v", e.mobility.speed);
            m.get("f_c", e.mobility.carrier);
            m.get("omega", e.mobility.angular_speed);
            m.get("instants", e.mobility.instants);
            m.get("blocks", e.mobility.blocks);
            m.get("T", e.mobility.holds);
            m.get("D", e.mobility.sectors);
        }
        cfg.validate();
        return cfg;
    }

    AppConfig load_config(const std::filesystem::path &file)
    {
        std::ifstream in(file, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read configuration file " + file.string());
        std::ostringstream text;
        text << in.rdbuf();
        return parse_config(text.str());
    }

    std::string dump_config(const AppConfig &cfg)
    {
        const RadomeConfig &g = cfg.radome;
        json root = json::object();
        root["seed"] = cfg.seed;
        root["threads"] = cfg.threads;
        json r = {{"lambda", g.wavelength}, {"d_l", g.length},           {"d_w", g.width},
                  {"d_t", g.thickness},     {"M_x", g.antennas_x},       {"M_y", g.antennas_y},
                  {"d_A", g.antenna_spacing}, {"d_I", g.element_spacing}, {"theta_max", g.max_elevation},
                  {"H_AR", g.mount_height}, {"G_A", g.boresight_gain},   {"G_I", g.element_gain()}};
        const auto counts = cfg.geometry().element_counts();
        r["N"] = std::vector<int>(counts.begin(), counts.end());
        root["radome"] = r;
        root["ao"] = {{"L", cfg.ao.samples},
                      {"Gamma", cfg.ao.inits},
                      {"epsilon", cfg.ao.epsilon},
                      {"I_max", cfg.ao.max_iterations},
                      {"Gamma_r", cfg.ao.randomizations},
                      {"aggregation", to_string(cfg.ao.aggregation)},
                      {"guarded", cfg.ao.guarded},
                      {"sdp_tolerance", cfg.ao.sdp.tolerance},
                      {"sdp_max_iterations", cfg.ao.sdp.max_iterations}};
        root["design"] = {{"D", cfg.design_sectors}};
        const ExperimentConfig &e = cfg.experiment;
        std::vector<std::string> schemes;
        for (Scheme s : e.schemes)
            schemes.push_back(to_string(s));
        root["experiment"] = {{"name", e.name},
                              {"D", e.sectors},
                              {"X", e.union_sizes},
                              {"kappa_dB_axis", e.kappa_axis_db},
                              {"kappa_dB", e.kappa_db},
                              {"D_kappa", e.rate_sectors},
                              {"T_u", e.coherence},
                              {"Psi", e.paths},
                              {"K", e.users},
                              {"trials", e.trials},
                              {"dft_cap", e.dft_cap},
                              {"pattern_samples", e.pattern_samples},
                              {"schemes", schemes}};
        if (e.budget)
            root["link"] = {{"P", e.budget->power}, {"sigma2", e.budget->noise}};
        else
            root["link"] = json::object();
        json m = {{"v", e.mobility.speed},
                  {"f_c", e.mobility.carrier},
                  {"omega", e.mobility.angular_speed},
                  {"instants", e.mobility.instants},
                  {"T", e.mobility.holds},
                  {"D", e.mobility.sectors}};
        if (e.mobility.blocks)
            m["blocks"] = *e.mobility.blocks;
        root["mobility"] = m;
        return root.dump(2) + "\n";
    }
}
