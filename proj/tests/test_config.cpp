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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irsap/config.hpp"

using namespace irsap;

namespace
{
    std::string error_of(const std::string &text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return "";
    }
}

TEST_CASE("empty configuration yields the defaults")
{
    const AppConfig c = parse_config("{}");
    CHECK(c.radome.wavelength == 0.05);
    CHECK(c.radome.antenna_count() == 4);
    CHECK(c.ao.samples == 40);
    CHECK(c.ao.inits == 100);
    CHECK(c.ao.randomizations == 1000);
    CHECK(c.seed == 1);
    CHECK(c.experiment.name == "coverage-vs-D");
    CHECK(c.experiment.schemes.size() == 5);
    CHECK(c.geometry().element_counts() == std::array<int, irs_count>{10, 10, 10, 10});
    CHECK_FALSE(c.experiment.budget.has_value());
}

TEST_CASE("values are read from their sections")
{
    const AppConfig c = parse_config(R"({
        "seed": 42, "threads": 3,
        "radome": {"lambda": 0.1, "theta_max": 0.5, "N": [2, 2, 0, 1]},
        "ao": {"L": 12, "Gamma": 5, "aggregation": "power-of-average", "guarded": false},
        "design": {"D": [1, 2]},
        "experiment": {"name": "rate-vs-kappa", "kappa_dB_axis": [0, "inf"], "schemes": ["dft", "no-irs"], "trials": 7},
        "link": {"P": 2.0, "sigma2": 0.5},
        "mobility": {"T": [2], "blocks": 10}
    })");
    CHECK(c.seed == 42);
    CHECK(c.threads == 3);
    CHECK(c.radome.wavelength == 0.1);
    CHECK(c.elements == std::array<int, irs_count>{2, 2, 0, 1});
    CHECK(c.ao.samples == 12);
    CHECK(c.ao.aggregation == Aggregation::PowerOfAverage);
    CHECK_FALSE(c.ao.guarded);
    CHECK(c.design_sectors == std::vector<int>{1, 2});
    CHECK(c.experiment.kappa_axis_db[1] == std::numeric_limits<double>::infinity());
    CHECK(c.experiment.schemes == std::vector<Scheme>{Scheme::DftCodebook, Scheme::NoIrs});
    REQUIRE(c.experiment.budget.has_value());
    CHECK(c.experiment.budget->power == 2.0);
    CHECK(c.experiment.budget->noise == 0.5);
    CHECK(c.experiment.mobility.holds == std::vector<int>{2});
    CHECK(c.experiment.mobility.blocks_per_instant() == 10);
}

TEST_CASE("errors name the offending key")
{
    CHECK(error_of(R"({"radome": {"lambdaa": 0.05}})").find("radome.lambdaa") != std::string::npos);
    CHECK(error_of(R"({"colour": 1})").find("colour") != std::string::npos);
    CHECK(error_of(R"({"ao": {"L": "forty"}})").find("ao.L") != std::string::npos);
    CHECK(error_of(R"({"radome": {"N": [10, 10, 10]}})").find("radome.N") != std::string::npos);
    CHECK(error_of(R"({"experiment": {"schemes": ["best"]}})").find("best") != std::string::npos);
    CHECK(error_of(R"({"link": {"P": 1.0}})").find("link") != std::string::npos);
    CHECK(error_of(R"({"experiment": {"trials": 0}})").find("experiment.trials") != std::string::npos);
    CHECK(error_of(R"({"radome": {"N": [11, 10, 10, 10]}})").find("IRS 1") != std::string::npos);
    CHECK(error_of("not json") != "");
    CHECK(error_of("[1, 2]") != "");
}

TEST_CASE("dump and parse round trip")
{
    AppConfig c;
    c.seed = 99;
    c.ao.samples = 17;
    c.elements = std::array<int, irs_count>{3, 0, 4, 1};
    c.experiment.name = "mobility";
    c.experiment.budget = LinkBudget{3.0, 2.0, 1};
    const std::string text = dump_config(c);
    const AppConfig back = parse_config(text);
    CHECK(dump_config(back) == text);
    CHECK(back.hash() == c.hash());

    AppConfig d = c;
    d.seed = 100;
    CHECK(d.hash() != c.hash());
}
