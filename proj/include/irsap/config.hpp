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


#ifndef IRSAP_CONFIG_HPP
#define IRSAP_CONFIG_HPP

#include "irsap/eval.hpp"

#include <filesystem>

namespace irsap
{
    // Everything a CLI run depends on. Keys in the JSON file follow the model symbols, e.g.
    // {"radome": {"lambda": 0.05, "theta_max": 1.396}, "ao": {"L": 40, "Gamma": 100}, "seed": 7}
    struct AppConfig
    {
        RadomeConfig radome;
        std::optional<std::array<int, irs_count>> elements; // N_j; maximum deployable counts when unset
        AOConfig ao;
        std::vector<int> design_sectors{4}; // one D designs C_D, several design the union codebook
        ExperimentConfig experiment;
        std::uint64_t seed = 1;
        int threads = 1;

        RadomeGeometry geometry() const;
        void validate() const;
        std::uint64_t hash() const;
    };

    // Throws ConfigError naming the offending key for unknown keys, wrong types and invalid values
    AppConfig parse_config(const std::string &json_text);
    AppConfig load_config(const std::filesystem::path &file);

    // Full configuration as JSON, every key present
    std::string dump_config(const AppConfig &cfg);
}

#endif
