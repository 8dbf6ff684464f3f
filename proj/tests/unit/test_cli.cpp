// Copyright 2026 The qsld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "qsld/error.hpp"
#include "qsld/io.hpp"
#include "qsld_cli/cli.hpp"

namespace qsld::cli {
namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"qsld"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : storage) {
        argv.push_back(s.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json body_of(const std::string &text) { return Json::parse(text).at("body"); }

std::filesystem::path scratch(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qsld_test_" + name);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"check-autoparallel", "--model", "bloch-ellipsoid(c=0.3)"}).code, kExitPass);
    EXPECT_EQ(invoke({"check-autoparallel", "--model", "latitude-band(R=0.8)"}).code, kExitVerdictFalse);
    EXPECT_EQ(invoke({"check-autoparallel", "--model", "nope"}).code, kExitInputError);
    EXPECT_EQ(invoke({"check-autoparallel", "--model", "bloch-full", "--tol", "-1"}).code, kExitInputError);
    EXPECT_EQ(invoke({"counterexample", "--dim", "3"}).code, kExitVerdictFalse);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitInputError);
}

TEST(Cli, VerdictJsonShape) {
    const Outcome o = invoke({"check-autoparallel", "--model", "bloch-ellipsoid(c=0.3)"});
    const Json b = body_of(o.out);
    EXPECT_EQ(b.at("command"), "check-autoparallel");
    EXPECT_EQ(b.at("verdict"), true);
    const Json &r = b.at("results");
    for (const char *key : {"verdict", "max_residual", "max_pairwise", "tol", "grid_points", "certificate",
                            "witness"}) {
        EXPECT_TRUE(r.contains(key)) << key;
    }
    EXPECT_TRUE(r.at("witness").is_null());
}

TEST(Cli, SeedRequiredForStochasticCommands) {
    const Outcome o = invoke({"involutivity", "--dim", "2"});
    EXPECT_EQ(o.code, kExitInputError);
    EXPECT_NE(o.err.find("seed"), std::string::npos);
    EXPECT_EQ(invoke({"involutivity", "--dim", "2", "--states", "5", "--seed", "3"}).code, kExitPass);
    EXPECT_EQ(invoke({"filtration-sweep", "--model", "bloch-ellipsoid(c=0.3)", "--shots", "0"}).code,
              kExitPass);
}

TEST(Cli, RerunBodiesAreIdentical) {
    const auto args = {std::string("filtration-sweep"), std::string("--model"),
                       std::string("bloch-ellipsoid(c=0.3)"), std::string("--shots"),
                       std::string("20000"), std::string("--seed"), std::string("11"),
                       std::string("--format"), std::string("json")};
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    ASSERT_EQ(a.code, kExitPass) << a.err;
    EXPECT_EQ(body_of(a.out).dump(), body_of(b.out).dump());
}

TEST(Cli, CsvOutputAndSidecar) {
    const auto path = scratch("geodesic.csv");
    const Outcome o = invoke({"geodesic", "--r0", "0.2,0.1,0.3", "--u", "0,0,1", "--samples", "5",
                              "--out", path.string()});
    ASSERT_EQ(o.code, kExitPass) << o.err;
    std::ifstream csv(path);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "xi,theta,r1,r2,r3");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) {
        ++rows;
    }
    EXPECT_EQ(rows, 5);
    EXPECT_TRUE(std::filesystem::exists(path.string() + ".meta.json"));
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".meta.json");

    EXPECT_EQ(invoke({"counterexample", "--format", "csv"}).code, kExitInputError);
}

TEST(Cli, ConfigFileWithFlagPrecedence) {
    const auto path = scratch("config.json");
    {
        std::ofstream cfg(path);
        cfg << R"json({"model": "bloch-ellipsoid(c=0.3)", "grid": 3, "tol": 1e-6})json";
    }
    const Outcome from_file = invoke({"check-autoparallel", "--config", path.string()});
    ASSERT_EQ(from_file.code, kExitPass) << from_file.err;
    const Json r = body_of(from_file.out).at("results");
    EXPECT_EQ(r.at("grid_points"), 9);
    EXPECT_EQ(r.at("tol"), 1e-6);

    const Outcome overridden =
        invoke({"check-autoparallel", "--config", path.string(), "--grid", "2", "--model", "latitude-band"});
    EXPECT_EQ(overridden.code, kExitVerdictFalse);
    EXPECT_EQ(body_of(overridden.out).at("results").at("grid_points"), 4);
    std::filesystem::remove(path);

    EXPECT_EQ(invoke({"check-autoparallel", "--config", scratch("missing.json").string()}).code,
              kExitInputError);
}

TEST(RunConfig, FromValuesValidates) {
    EXPECT_THROW(RunConfig::from_values(Command::FiltrationSweep, {{"eps-list", "0.1,0.2"}}), qsld::Error);
    EXPECT_THROW(RunConfig::from_values(Command::Geodesic, {{"samples", "x"}}), qsld::Error);
    const RunConfig c = RunConfig::from_values(Command::Geodesic, {});
    EXPECT_EQ(c.resolved_format(), Format::Csv);
    EXPECT_DOUBLE_EQ(c.resolved_tol(), 1e-9);
    EXPECT_FALSE(c.stochastic());
}

} // namespace
} // namespace qsld::cli
