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

#pragma once

#include "polara/ao.hpp"
#include "polara/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace polara
{
    enum class SweepParam
    {
        rate_bps_hz,
        theta_max_rad,
        directivity_p,
        num_antennas,
        num_users,
    };

    std::string to_string(SweepParam p);
    SweepParam sweep_param_from_string(const std::string &name);

    struct SweepConfig
    {
        ScenarioConfig scenario;
        AoConfig ao;
        SweepParam param = SweepParam::rate_bps_hz;
        std::vector<double> values;                  // empty: a single point at the scenario defaults
        std::vector<std::pair<int, int>> array_shapes; // (mx, my) per value when sweeping num_antennas
        int trials = 50;
        std::uint64_t base_seed = 1;
        std::vector<Scheme> schemes{Scheme::proposed, Scheme::rotation_only, Scheme::boresight_only, Scheme::fixed_upa};
        int jobs = 1;
        // Cone sweeps: each rotatable scheme also resumes from its solution at the previous cone
        // angle of the same trial, keeping the lower power.
        bool cone_continuation = true;

        void validate() const;
        // Scenario with the swept parameter set to values[index].
        ScenarioConfig scenario_at(size_t index) const;
        std::vector<double> sweep_values() const;
    };

    std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

    struct SweepCell
    {
        double sweep_value = 0.0;
        Scheme scheme = Scheme::proposed;
        double mean_power_dbm = 0.0; // over mutually feasible trials
        double stderr_db = 0.0;
        int n_feasible = 0;
        int n_trials = 0;
    };

    struct SweepResult
    {
        SweepParam param = SweepParam::rate_bps_hz;
        std::vector<double> values;
        std::vector<Scheme> schemes;
        std::vector<SweepCell> cells; // value-major, schemes in configuration order
        // power_w[value][scheme][trial]; NaN for infeasible trials
        std::vector<std::vector<std::vector<double>>> power_w;

        const SweepCell &cell(size_t value_index, size_t scheme_index) const
        {
            return cells[value_index * schemes.size() + scheme_index];
        }
    };

    // Powers of every scheme on one scene, all started from the same initialization. NaN marks infeasible.
    std::vector<double> run_trial(const Scene &scene, const AoConfig &ao, const std::vector<Scheme> &schemes);

    // Final states per scheme. With previous states, rotatable schemes also resume from them.
    std::vector<SolutionState> run_trial_states(const Scene &scene, const AoConfig &ao, const std::vector<Scheme> &schemes,
                                                const std::vector<SolutionState> *previous = nullptr);

    using SweepProgress = std::function<void(size_t value_index, double value)>;

    SweepResult run_sweep(const SweepConfig &config, const SweepProgress &progress = {});

    void write_sweep_csv(std::ostream &os, const SweepResult &result);
    void emit_csv(const SweepResult &result, const std::string &path);

    // --jobs, then POLARA_JOBS, then the fallback.
    int resolve_jobs(int flag_value, int fallback = 1);
}
