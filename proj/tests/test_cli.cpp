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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace
{
    const fs::path work = fs::temp_directory_path() / "irsap_test_cli";

    struct Run
    {
        int code = -1;
        std::string out;
    };

    Run run(const std::string &args)
    {
        const fs::path log = work / "stdout.txt";
        const std::string cmd = std::string("\"") + IRSAP_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::vector<std::string>> read_csv(const fs::path &p)
    {
        std::vector<std::vector<std::string>> rows;
        std::ifstream in(p);
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
                cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    }

    // small deployment and light optimizer so every command finishes quickly
    fs::path small_config()
    {
        fs::create_directories(work);
        const fs::path p = work / "small.json";
        std::ofstream(p) << R"({"radome": {"N": [2, 2, 2, 2]},
                               "ao": {"L": 8, "Gamma": 4, "Gamma_r": 50},
                               "experiment": {"trials": 2, "pattern_samples": 12, "dft_cap": 100000}})";
        return p;
    }
}

TEST_CASE("design is deterministic and loadable")
{
    const fs::path cfg = small_config();
    const Run a = run("design --config " + cfg.string() + " --out " + (work / "a.json").string());
    REQUIRE(a.code == 0);
    CHECK(a.out.find("D=4 d=4") != std::string::npos);
    const Run b = run("design --config " + cfg.string() + " --threads 2 --out " + (work / "b.json").string());
    REQUIRE(b.code == 0);
    CHECK(slurp(work / "a.json") == slurp(work / "b.json"));
    const Run c = run("design --config " + cfg.string() + " --seed 2 --out " + (work / "c.json").string());
    REQUIRE(c.code == 0);
    CHECK(slurp(work / "a.json") != slurp(work / "c.json"));
}

TEST_CASE("eval writes CSV and metadata")
{
    const fs::path cfg = small_config();
    const fs::path out = work / "results";
    fs::remove_all(out);

    const Run cov = run("eval --config " + cfg.string() + " --experiment coverage-vs-D --out " + out.string());
    REQUIRE(cov.code == 0);
    const auto rows = read_csv(out / "coverage-vs-D.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].size() == 6);
    CHECK(rows[0][0] == "D");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][0]) == std::vector<double>{1, 2, 4, 8}[i - 1]);
    CHECK(fs::exists(out / "coverage-vs-D.meta.json"));

    const Run kap = run("eval --config " + cfg.string() + " --experiment rate-vs-kappa --out " + out.string());
    REQUIRE(kap.code == 0);
    CHECK(read_csv(out / "rate-vs-kappa.csv").size() == 6);

    SUBCASE("a supplied codebook replaces the on-the-fly design")
    {
        REQUIRE(run("design --config " + cfg.string() + " --out " + (work / "c4.json").string()).code == 0);
        const Run with = run("eval --config " + cfg.string() + " --experiment rate-vs-D --codebook " +
                             (work / "c4.json").string() + " --out " + out.string());
        CHECK(with.code == 0);
    }
}

TEST_CASE("patterns")
{
    const fs::path cfg = small_config();
    REQUIRE(run("design --config " + cfg.string() + " --out " + (work / "p.json").string()).code == 0);
    const fs::path out = work / "patterns";
    const Run r = run("patterns --config " + cfg.string() + " --codebook " + (work / "p.json").string() + " --index 1 --out " +
                      out.string());
    REQUIRE(r.code == 0);
    const auto el = read_csv(out / "elevation.csv");
    const auto az = read_csv(out / "azimuth.csv");
    REQUIRE(el.size() == 13);
    REQUIRE(az.size() == 13);
    CHECK(el[0] == std::vector<std::string>{"theta", "effective_dB", "reflection_dB", "direct_dB"});
    CHECK(az[0][0] == "phi");
    for (std::size_t i = 1; i < el.size(); ++i)
    {
        CHECK(std::stod(el[i][0]) > 0.0);
        CHECK(std::stod(el[i][0]) < 4 * 3.14159265358979 / 9);
        CHECK(az[i][3] == az[1][3]); // the direct path has no azimuth dependence at theta_max
    }
    const Run bad = run("patterns --config " + cfg.string() + " --codebook " + (work / "p.json").string() + " --index 4");
    CHECK(bad.code == 2);
}

TEST_CASE("exit codes")
{
    const fs::path cfg = small_config();
    CHECK(run("defaults").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("design --bogus").code == 2);

    std::ofstream(work / "typo.json") << R"({"radome": {"lambdaa": 0.05}})";
    const Run typo = run("defaults --config " + (work / "typo.json").string());
    CHECK(typo.code == 2);
    CHECK(typo.out.find("radome.lambdaa") != std::string::npos);

    CHECK(run("eval --config " + cfg.string() + " --trials 0").code == 2);
    CHECK(run("eval --config " + cfg.string() + " --experiment nope").code == 2);

    // codebook designed for the small deployment, evaluated against the full one
    REQUIRE(run("design --config " + cfg.string() + " --out " + (work / "h.json").string()).code == 0);
    const Run mismatch = run("patterns --codebook " + (work / "h.json").string() + " --out " + (work / "x").string());
    CHECK(mismatch.code == 4);
}

TEST_CASE("oracle-check passes on the reference deployment")
{
    const Run r = run("oracle-check");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
