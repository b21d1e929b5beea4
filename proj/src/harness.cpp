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

#include "polara/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace polara
{
    std::string to_string(SweepParam p)
    {
        switch (p)
        {
        case SweepParam::rate_bps_hz:
            return "rate_bps_hz";
        case SweepParam::theta_max_rad:
            return "theta_max_rad";
        case SweepParam::directivity_p:
            return "directivity_p";
        case SweepParam::num_antennas:
            return "num_antennas";
        case SweepParam::num_users:
            return "num_users";
        }
        return "unknown";
    }

    SweepParam sweep_param_from_string(const std::string &name)
    {
        for (SweepParam p : {SweepParam::rate_bps_hz, SweepParam::theta_max_rad, SweepParam::directivity_p,
                             SweepParam::num_antennas, SweepParam::num_users})
            if (to_string(p) == name)
                return p;
        throw std::invalid_argument("unknown sweep parameter: " + name);
    }

    std::vector<double> SweepConfig::sweep_values() const
    {
        if (param == SweepParam::num_antennas && values.empty() && !array_shapes.empty())
        {
            std::vector<double> v;
            for (const auto &s : array_shapes)
                v.push_back(static_cast<double>(s.first) * s.second);
            return v;
        }
        if (!values.empty())
            return values;
        switch (param)
        {
        case SweepParam::rate_bps_hz:
            return {scenario.rate_bps_hz};
        case SweepParam::theta_max_rad:
            return {scenario.theta_max_rad};
        case SweepParam::directivity_p:
            return {scenario.directivity_p};
        case SweepParam::num_antennas:
            return {static_cast<double>(scenario.mx) * scenario.my};
        case SweepParam::num_users:
            return {static_cast<double>(scenario.num_users)};
        }
        return {};
    }

    void SweepConfig::validate() const
    {
        scenario.validate();
        ao.smoothing.validate();
        if (trials < 1)
            throw std::invalid_argument("trials must be at least 1");
        if (schemes.empty())
            throw std::invalid_argument("at least one scheme is required");
        if (jobs < 1)
            throw std::invalid_argument("jobs must be at least 1");
        const std::vector<double> v = sweep_values();
        for (size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1]))
                throw std::invalid_argument("swept values must be strictly increasing");
        if (param == SweepParam::num_antennas)
        {
            if (array_shapes.size() != v.size() && !(v.size() == 1 && array_shapes.empty()))
                throw std::invalid_argument("num_antennas sweeps need one array shape per value");
            for (size_t i = 0; i < array_shapes.size(); ++i)
                if (static_cast<double>(array_shapes[i].first) * array_shapes[i].second != v[i])
                    throw std::invalid_argument("array shape does not match the swept antenna count");
        }
        for (size_t i = 0; i < v.size(); ++i)
            scenario_at(i).validate();
    }

    ScenarioConfig SweepConfig::scenario_at(size_t index) const
    {
        ScenarioConfig s = scenario;
        const double v = sweep_values().at(index);
        switch (param)
        {
        case SweepParam::rate_bps_hz:
            s.rate_bps_hz = v;
            break;
        case SweepParam::theta_max_rad:
            s.theta_max_rad = v;
            break;
        case SweepParam::directivity_p:
            s.directivity_p = v;
            break;
        case SweepParam::num_antennas:
            if (!array_shapes.empty())
            {
                s.mx = array_shapes.at(index).first;
                s.my = array_shapes.at(index).second;
            }
            break;
        case SweepParam::num_users:
            if (v != std::floor(v))
                throw std::invalid_argument("num_users values must be integers");
            s.num_users = static_cast<int>(v);
            break;
        }
        return s;
    }

    std::uint64_t trial_seed(std::uint64_t base_seed, int trial)
    {
        return derive_seed(base_seed, 1000 + static_cast<std::uint64_t>(trial));
    }

    std::vector<SolutionState> run_trial_states(const Scene &scene, const AoConfig &ao, const std::vector<Scheme> &schemes,
                                                const std::vector<SolutionState> *previous)
    {
        const InitialStates init = initialize(scene, ao);
        std::vector<SolutionState> out;
        for (size_t i = 0; i < schemes.size(); ++i)
        {
            SolutionState st = scheme_variant(scene, ao, schemes[i], init);
            if (previous && schemes[i] != Scheme::fixed_upa && (*previous)[i].feasible)
            {
                SolutionState warm = resume(scene, ao, schemes[i], (*previous)[i]);
                if (warm.feasible && (!st.feasible || warm.power() < st.power()))
                    st = std::move(warm);
            }
            out.push_back(std::move(st));
        }
        return out;
    }

    std::vector<double> run_trial(const Scene &scene, const AoConfig &ao, const std::vector<Scheme> &schemes)
    {
        std::vector<double> out;
        for (const SolutionState &st : run_trial_states(scene, ao, schemes))
            out.push_back(st.feasible ? st.power() : std::numeric_limits<double>::quiet_NaN());
        return out;
    }

    SweepResult run_sweep(const SweepConfig &cfg, const SweepProgress &progress)
    {
        cfg.validate();
        SweepResult res;
        res.param = cfg.param;
        res.values = cfg.sweep_values();
        res.schemes = cfg.schemes;
        const size_t nv = res.values.size(), ns = cfg.schemes.size(), nt = static_cast<size_t>(cfg.trials);
        res.power_w.assign(nv, std::vector<std::vector<double>>(ns, std::vector<double>(nt, std::numeric_limits<double>::quiet_NaN())));
        const bool continuation = cfg.cone_continuation && cfg.param == SweepParam::theta_max_rad;

        std::vector<ScenarioConfig> scenarios;
        for (size_t vi = 0; vi < nv; ++vi)
            scenarios.push_back(cfg.scenario_at(vi));

        // One work item per trial; the sweep values of a trial run in order.
        std::atomic<size_t> next{0};
        std::mutex mu;
        std::exception_ptr err;
        std::vector<size_t> done(nv, 0);
        auto worker = [&]() {
            for (size_t t = next++; t < nt; t = next++)
            {
                try
                {
                    std::vector<SolutionState> prev;
                    for (size_t vi = 0; vi < nv; ++vi)
                    {
                        const Scene scene = generate_scene(scenarios[vi], trial_seed(cfg.base_seed, static_cast<int>(t)));
                        std::vector<SolutionState> states =
                            run_trial_states(scene, cfg.ao, cfg.schemes, continuation && !prev.empty() ? &prev : nullptr);
                        for (size_t si = 0; si < ns; ++si)
                            res.power_w[vi][si][t] = states[si].feasible ? states[si].power() : std::numeric_limits<double>::quiet_NaN();
                        if (continuation)
                            prev = std::move(states);

                        std::lock_guard<std::mutex> lock(mu);
                        if (++done[vi] == nt && progress)
                            progress(vi, res.values[vi]);
                    }
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err)
                        err = std::current_exception();
                }
            }
        };
        const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(nt)));
        std::vector<std::thread> pool;
        for (int j = 1; j < jobs; ++j)
            pool.emplace_back(worker);
        worker();
        for (std::thread &th : pool)
            th.join();
        if (err)
            std::rethrow_exception(err);

        for (size_t vi = 0; vi < nv; ++vi)
        {
            // Paired statistics over trials feasible for every scheme.
            std::vector<size_t> common;
            for (size_t t = 0; t < nt; ++t)
            {
                bool ok = true;
                for (size_t si = 0; si < ns; ++si)
                    ok = ok && std::isfinite(res.power_w[vi][si][t]);
                if (ok)
                    common.push_back(t);
            }
            for (size_t si = 0; si < ns; ++si)
            {
                SweepCell c;
                c.sweep_value = res.values[vi];
                c.scheme = cfg.schemes[si];
                c.n_trials = cfg.trials;
                c.n_feasible = static_cast<int>(common.size());
                if (!common.empty())
                {
                    double sum = 0.0, sum2 = 0.0;
                    for (size_t t : common)
                    {
                        const double d = watt_to_dbm(res.power_w[vi][si][t]);
                        sum += d;
                        sum2 += d * d;
                    }
                    const double n = static_cast<double>(common.size());
                    c.mean_power_dbm = sum / n;
                    const double var = n > 1 ? std::max(0.0, (sum2 - n * c.mean_power_dbm * c.mean_power_dbm) / (n - 1)) : 0.0;
                    c.stderr_db = std::sqrt(var / n);
                }
                res.cells.push_back(c);
            }
        }
        return res;
    }

    void write_sweep_csv(std::ostream &os, const SweepResult &res)
    {
        const auto prec = os.precision(17);
        os << "sweep_param,sweep_value,scheme,mean_power_dbm,stderr_db,n_feasible,n_trials\n";
        for (const SweepCell &c : res.cells)
        {
            os << to_string(res.param) << ',' << c.sweep_value << ',' << to_string(c.scheme) << ',';
            if (c.n_feasible > 0)
                os << c.mean_power_dbm << ',' << c.stderr_db;
            else
                os << ',';
            os << ',' << c.n_feasible << ',' << c.n_trials << '\n';
        }
        os.precision(prec);
    }

    void emit_csv(const SweepResult &res, const std::string &path)
    {
        if (res.cells.empty())
            throw std::invalid_argument("emit_csv: empty sweep result");
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot open " + path + " for writing");
        write_sweep_csv(f, res);
        f.flush();
        if (!f)
            throw std::runtime_error("write failed: " + path);
    }

    int resolve_jobs(int flag_value, int fallback)
    {
        if (flag_value > 0)
            return flag_value;
        if (const char *env = std::getenv("POLARA_JOBS"))
        {
            char *end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0)
                return static_cast<int>(v);
            throw std::invalid_argument(std::string("POLARA_JOBS must be a positive integer, got '") + env + "'");
        }
        return fallback;
    }
}
