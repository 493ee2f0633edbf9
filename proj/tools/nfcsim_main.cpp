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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfcsim/experiments.hpp"
#include "nfcsim/version.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"nfcsim - near-field multiuser capacity and beamforming experiments"};
    app.set_version_flag("--version", NFCSIM_VERSION);

    std::string experiment, config_path, out_dir = ".", format = "csv";
    std::uint64_t seed = 1;
    unsigned trials = 0;
    int threads = 0;

    app.add_option("experiment", experiment,
                   "experiment name, or 'list' to print the available ones")
        ->required();
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "64-bit RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials (0 = experiment default)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--threads", threads, "worker threads (default: NFCSIM_THREADS or 1)");

    CLI11_PARSE(app, argc, argv);

    if (experiment == "list")
    {
        for (const auto &name : nfcsim::experiment_names())
            std::cout << name << "\n";
        return 0;
    }

    nfcsim::ExperimentConfig cfg;
    try
    {
        if (!config_path.empty())
        {
            std::ifstream is(config_path);
            if (!is)
            {
                std::cerr << "error: cannot open config file " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            is >> j;
            cfg = nfcsim::ExperimentConfig::from_json(j);
        }
        cfg.experiment = experiment;
        // CLI flags override the config file
        if (app.count("--seed"))
            cfg.seed = seed;
        if (app.count("--trials"))
            cfg.trials = trials;
        if (app.count("--out"))
            cfg.out_dir = out_dir;
        if (app.count("--format"))
            cfg.format = format;
        if (app.count("--threads"))
            cfg.threads = threads;
        else if (cfg.threads <= 0)
        {
            const char *env = std::getenv("NFCSIM_THREADS");
            cfg.threads = env ? std::max(1, std::atoi(env)) : 1;
        }
    }
    catch (const std::exception &ex)
    {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    }

    try
    {
        const auto paths = nfcsim::run_and_write(cfg);
        for (const auto &p : paths)
            std::cout << p << "\n";
        return 0;
    }
    catch (const std::invalid_argument &ex)
    {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    }
    catch (const std::exception &ex)
    {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    }
}
