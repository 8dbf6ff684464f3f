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

/**
 * @file
 * Command-line front end: configuration, dispatch and report emission.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qsld::cli {

enum class Command {
    Geodesic,
    Surface,
    CheckAutoparallel,
    Involutivity,
    FiltrationSweep,
    Counterexample,
    ScalarEstimate,
    IidExtend,
};

enum class Format { Csv, Json };

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFalse = 1;
inline constexpr int kExitInputError = 2;

std::string to_string(Command c);
std::optional<Command> command_from_string(const std::string &name);

/// Fully resolved configuration. Unset optionals take command defaults.
struct RunConfig {
    Command command = Command::CheckAutoparallel;
    std::string model;
    double tol = 0.0; ///< 0 selects the command default
    std::size_t grid = 0;
    std::vector<double> eps_list;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<Format> format;
    std::optional<double> fd_step;

    std::vector<double> r0;
    std::vector<double> u;
    std::size_t samples = 101;
    double c = 0.3;
    std::vector<double> xi;
    std::vector<double> grad;
    double f_value = 0.0;
    double eps = 0.05;
    std::size_t dim = 3;
    int copies = 2;
    std::uint64_t shots = 100000;
    std::size_t states = 50;
    std::string basis = "computational";

    /// Builds a config from flag name -> textual value (flags without the
    /// leading dashes). Throws qsld::Error(InvalidArgument) on bad values.
    static RunConfig from_values(Command command, const std::map<std::string, std::string> &values);

    [[nodiscard]] double resolved_tol() const;
    [[nodiscard]] Format resolved_format() const;
    [[nodiscard]] bool stochastic() const;
};

/// Executes one command. The report goes to `config.out` or, when that is
/// empty, to `out`. Diagnostics go to `err`.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses argv (including --config JSON, overridden by explicit flags) and
/// runs the selected command.
int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace qsld::cli
