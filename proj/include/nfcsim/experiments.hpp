// SPDX-License-Identifier: Apache-2.0
//
// nfcsim - near-field multiuser channel models, capacity limits, and beamforming
// Copyright (C) 2025-2026 The nfcsim developers
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

#ifndef NFCSIM_EXPERIMENTS_HPP
#define NFCSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nfcsim
{
    // Named experiment run: scenario parameters live in params (defaults match
    // the reference setups); seed/trials/format control the Monte Carlo loop.
    struct ExperimentConfig
    {
        std::string experiment;
        std::uint64_t seed = 1;
        unsigned trials = 0; // 0 = per-experiment default
        std::string out_dir = ".";
        std::string format = "csv"; // csv or json
        int threads = 1;
        nlohmann::json params = nlohmann::json::object();

        static ExperimentConfig from_json(const nlohmann::json &j);
    };

    struct ResultTable
    {
        std::vector<std::string> columns;            // names with units
        std::vector<std::vector<double>> rows;
        std::vector<std::pair<std::string, std::string>> metadata; // ordered echo

        std::string to_csv() const;
        std::string to_json() const;
    };

    struct ExperimentResult
    {
        // first table carries the experiment name; extra tables get suffixes
        std::vector<std::pair<std::string, ResultTable>> tables;
    };

    std::vector<std::string> experiment_names();

    ExperimentResult run_experiment(const ExperimentConfig &cfg);

    // Emits every table of the run under cfg.out_dir; returns the file paths.
    std::vector<std::string> run_and_write(const ExperimentConfig &cfg);

    // Deterministic slot-parallel loop used by trial sweeps.
    void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &body);

} // namespace nfcsim

#endif
