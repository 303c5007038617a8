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


#include "irsap/codebook_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace irsap
{
    using nlohmann::ordered_json;

    std::string to_string(CodebookKind kind)
    {
        switch (kind)
        {
        case CodebookKind::SingleUser: return "single-user";
        case CodebookKind::MultiUser: return "multi-user";
        case CodebookKind::Benchmark: return "benchmark";
        }
        return "unknown";
    }

    CodebookKind codebook_kind_from_string(const std::string &s)
    {
        for (CodebookKind k : {CodebookKind::SingleUser, CodebookKind::MultiUser, CodebookKind::Benchmark})
            if (to_string(k) == s)
                return k;
        throw ConfigError("unknown codebook kind '" + s + "'");
    }

    namespace
    {
        std::string hex(std::uint64_t v)
        {
            char buf[20];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
            return buf;
        }
    }

    std::string codebook_to_json(const Codebook &cb)
    {
        ordered_json j;
        j["format"] = "irsap-codebook";
        j["version"] = codebook_format_version;
        j["kind"] = to_string(cb.kind);
        j["aggregation"] = to_string(cb.aggregation);
        j["geometry_hash"] = hex(cb.geometry_hash);
        j["seed"] = cb.seed;
        ordered_json words = ordered_json::array();
        for (const auto &e : cb.entries)
        {
            ordered_json w;
            w["D"] = e.sectors;
            w["d"] = e.sector;
            w["objective"] = e.objective;
            w["seed"] = e.seed;
            w["sweeps"] = e.sweeps;
            const auto &c = e.pattern.counts();
            w["N"] = std::vector<int>(c.begin(), c.end());
            const RVector &ph = e.pattern.phases();
            w["phases"] = std::vector<double>(ph.data(), ph.data() + ph.size());
            words.push_back(std::move(w));
        }
        j["codewords"] = std::move(words);
        return j.dump(1) + "\n";
    }

    Codebook codebook_from_json(const std::string &text, std::optional<std::uint64_t> geometry_hash)
    {
        Codebook cb;
        try
        {
            const ordered_json j = ordered_json::parse(text);
            if (j.value("format", "") != "irsap-codebook")
                throw ConfigError("not a codebook file");
            const int version = j.at("version").get<int>();
            if (version != codebook_format_version)
                throw ConfigError("unsupported codebook version " + std::to_string(version));
            cb.kind = codebook_kind_from_string(j.at("kind").get<std::string>());
            cb.aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
            cb.geometry_hash = std::stoull(j.at("geometry_hash").get<std::string>(), nullptr, 16);
            cb.seed = j.at("seed").get<std::uint64_t>();
            for (const auto &w : j.at("codewords"))
            {
                CodebookEntry e;
                e.sectors = w.at("D").get<int>();
                e.sector = w.at("d").get<int>();
                e.objective = w.at("objective").get<double>();
                e.seed = w.at("seed").get<std::uint64_t>();
                e.sweeps = w.at("sweeps").get<int>();
                const auto n = w.at("N").get<std::vector<int>>();
                if (n.size() != irs_count)
                    throw ConfigError("codeword N must list 4 element counts");
                const auto phases = w.at("phases").get<std::vector<double>>();
                e.pattern = ReflectionPattern::from_phases({n[0], n[1], n[2], n[3]}, phases);
                cb.entries.push_back(std::move(e));
            }
        }
        catch (const ordered_json::exception &e)
        {
            throw ConfigError(std::string("malformed codebook file: ") + e.what());
        }
        if (geometry_hash && *geometry_hash != cb.geometry_hash)
            throw HashMismatchError("codebook geometry hash " + hex(cb.geometry_hash) + " does not match the configured geometry " +
                                    hex(*geometry_hash));
        return cb;
    }

    void save_codebook(const std::filesystem::path &file, const Codebook &codebook)
    {
        if (file.has_parent_path())
            std::filesystem::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + file.string());
        out << codebook_to_json(codebook);
    }

    Codebook load_codebook(const std::filesystem::path &file, std::optional<std::uint64_t> geometry_hash)
    {
        std::ifstream in(file, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read codebook file " + file.string());
        std::ostringstream text;
        text << in.rdbuf();
        return codebook_from_json(text.str(), geometry_hash);
    }
}
