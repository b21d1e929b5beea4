// SPDX-License-Identifier: Apache-2.0
//
// polara - polarization-aware rotatable antenna simulation and optimization
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

#include "polara/config.hpp"
#include "polara/harness.hpp"
#include "polara/los_analysis.hpp"
#include "polara/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace
{
    using namespace polara;

    constexpr int exit_ok = 0;
    constexpr int exit_error = 1;
    constexpr int exit_infeasible = 2;

    std::ostream &open_out(const std::string &path, std::ofstream &file)
    {
        if (path.empty() || path == "-")
            return std::cout;
        file.open(path);
        if (!file)
            throw std::runtime_error("cannot open " + path + " for writing");
        return file;
    }

    int cmd_los_map(double z, double extent, int grid, double p, const std::string &out)
    {
        if (!(z > 0.0) || !(extent >= 0.0) || grid < 1 || p < 0.0)
            throw CLI::ValidationError("los-map", "need z > 0, extent >= 0, grid >= 1, p >= 0");
        const los::Heatmap map = los::coverage_heatmap(z, extent, grid, p);
        std::ofstream f;
        los::write_heatmap_csv(map, open_out(out, f));
        return exit_ok;
    }

    int cmd_solve(const std::string &config_path, std::optional<std::uint64_t> seed, const std::string &scheme_name,
                  const std::string &out)
    {
        const SweepConfig cfg = load_config(config_path);
        const Scheme scheme = scheme_from_string(scheme_name);
        const std::uint64_t s = seed.value_or(cfg.base_seed);
        const Scene scene = generate_scene(cfg.scenario, s);
        const SolutionState st = scheme_variant(scene, cfg.ao, scheme);

        std::ofstream f;
        write_trace_csv(open_out(out, f), st);
        std::cerr << "scheme=" << to_string(scheme) << " seed=" << s;
        if (st.feasible)
            std::cerr << " power_dbm=" << watt_to_dbm(st.power());
        std::cerr << " feasible=" << (st.feasible ? "yes" : "no") << " outer_iterations=" << st.power_trace.size() - 1
                  << " converged=" << (st.converged ? "yes" : "no") << '\n';
        return st.feasible ? exit_ok : exit_infeasible;
    }

    int cmd_sweep(const std::string &config_path, int jobs, const std::string &out)
    {
        SweepConfig cfg = load_config(config_path);
        cfg.jobs = resolve_jobs(jobs, cfg.jobs);
        const SweepResult res = run_sweep(cfg, [&](size_t i, double v) {
            std::cerr << "sweep " << to_string(cfg.param) << " point " << i + 1 << " value " << v << " done\n";
        });
        if (out.empty() || out == "-")
            write_sweep_csv(std::cout, res);
        else
            emit_csv(res, out);
        return exit_ok;
    }

    int cmd_verify(const std::string &level)
    {
        verify::Options opt;
        if (level == "full")
            opt.level = verify::Level::full;
        else if (level != "fast")
            throw CLI::ValidationError("verify", "level must be fast or full");
        bool all = true;
        for (const verify::SuiteReport &r : verify::run_all(opt))
        {
            std::printf("%-20s %s  %.2fs  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
            all = all && r.passed;
        }
        return all ? exit_ok : exit_error;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"polara: polarization-aware rotatable antenna simulation and optimization"};
    app.require_subcommand(1);

    double z = 30.0, extent = 100.0, p = 2.0;
    int grid = 201;
    std::string map_out = "-";
    auto *los_cmd = app.add_subcommand("los-map", "Single-user LoS gain heatmap (CSV)");
    los_cmd->add_option("--z", z, "Plane height [m]");
    los_cmd->add_option("--extent", extent, "Half-width of the square grid [m]");
    los_cmd->add_option("--grid", grid, "Points per side");
    los_cmd->add_option("--p", p, "Directivity factor");
    los_cmd->add_option("--out", map_out, "Output path, - for stdout");

    std::string solve_config, scheme = "proposed", trace_out = "-";
    std::optional<std::uint64_t> seed;
    auto *solve_cmd = app.add_subcommand("solve", "Run one scheme on one generated scene; trace CSV out");
    solve_cmd->add_option("--config", solve_config, "Experiment JSON")->required();
    solve_cmd->add_option("--seed", seed, "Scene seed (default: the config seed)");
    solve_cmd->add_option("--scheme", scheme, "proposed | rotation_only | boresight_only | fixed_upa");
    solve_cmd->add_option("--out", trace_out, "Trace CSV path, - for stdout");

    std::string sweep_config, sweep_out = "-";
    int jobs = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep; result CSV out");
    sweep_cmd->add_option("--config", sweep_config, "Experiment JSON")->required();
    sweep_cmd->add_option("--jobs", jobs, "Worker threads (default: POLARA_JOBS or the config)");
    sweep_cmd->add_option("--out", sweep_out, "Result CSV path, - for stdout");

    std::string level = "fast";
    auto *verify_cmd = app.add_subcommand("verify", "Built-in self checks");
    verify_cmd->add_option("level", level, "fast | full");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        app.exit(e);
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &e)
    {
        app.exit(e);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_error;
    }

    try
    {
        if (los_cmd->parsed())
            return cmd_los_map(z, extent, grid, p, map_out);
        if (solve_cmd->parsed())
            return cmd_solve(solve_config, seed, scheme, trace_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_config, jobs, sweep_out);
        if (verify_cmd->parsed())
            return cmd_verify(level);
    }
    catch (const CLI::Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
