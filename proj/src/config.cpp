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

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace polara
{
    namespace
    {
        using json = nlohmann::json;

        class Reader
        {
        public:
            Reader(const json &obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix))
            {
                if (!obj_.is_object())
                    throw std::invalid_argument("config: '" + (prefix_.empty() ? std::string("<root>") : prefix_) + "' must be an object");
            }

            template <class T>
            void get(const char *key, T &out)
            {
                seen_.push_back(key);
                auto it = obj_.find(key);
                if (it == obj_.end())
                    return;
                try
                {
                    out = it->template get<T>();
                }
                catch (const json::exception &)
                {
                    throw std::invalid_argument("config: key '" + name(key) + "' has the wrong type");
                }
            }

            const json *child(const char *key)
            {
                seen_.push_back(key);
                auto it = obj_.find(key);
                return it == obj_.end() ? nullptr : &*it;
            }

            std::string name(const std::string &key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

            void reject_unknown() const
            {
                for (auto it = obj_.begin(); it != obj_.end(); ++it)
                    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                        throw std::invalid_argument("config: unknown key '" + name(it.key()) + "'");
            }

        private:
            const json &obj_;
            std::string prefix_;
            std::vector<std::string> seen_;
        };

        void read_optimizer(const json &j, AoConfig &ao)
        {
            Reader r(j, "optimizer");
            r.get("mu", ao.smoothing.mu);
            r.get("alpha", ao.smoothing.alpha);
            r.get("lambda1", ao.smoothing.lambda1);
            r.get("lambda2", ao.smoothing.lambda2);
            r.get("lambda3", ao.smoothing.lambda3);
            r.get("lambda4", ao.smoothing.lambda4);
            r.get("tau", ao.smoothing.tau);
            r.get("normalize_targets", ao.smoothing.normalize_targets);
            r.get("max_outer", ao.max_outer);
            r.get("rel_tol", ao.rel_tol);
            r.get("max_escalations", ao.max_escalations);
            r.get("rcg_max_iters", ao.rcg.max_iters);
            r.get("rcg_grad_tol", ao.rcg.grad_tol);
            r.get("dc_lambda0", ao.dc.lambda0);
            r.get("dc_tau", ao.dc.tau);
            r.get("dc_max_escalations", ao.dc.max_escalations);
            r.reject_unknown();
            if (ao.max_outer < 1 || ao.max_escalations < 0 || ao.rcg.max_iters < 1)
                throw std::invalid_argument("config: optimizer iteration limits must be positive");
            if (!(ao.rel_tol > 0.0))
                throw std::invalid_argument("config: optimizer.rel_tol must be positive");
        }

        void read_sweep(const json &j, SweepConfig &cfg)
        {
            Reader r(j, "sweep");
            std::string param = to_string(cfg.param);
            r.get("param", param);
            cfg.param = sweep_param_from_string(param);
            r.get("values", cfg.values);
            r.get("continuation", cfg.cone_continuation);
            std::vector<std::vector<int>> shapes;
            r.get("array_shapes", shapes);
            for (const auto &s : shapes)
            {
                if (s.size() != 2)
                    throw std::invalid_argument("config: sweep.array_shapes entries must be [mx, my]");
                cfg.array_shapes.emplace_back(s[0], s[1]);
            }
            r.reject_unknown();
        }
    }

    SweepConfig parse_config(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
        }

        SweepConfig cfg;
        ScenarioConfig &s = cfg.scenario;
        Reader r(j, "");
        r.get("carrier_frequency_hz", s.carrier_frequency_hz);
        r.get("mx", s.mx);
        r.get("my", s.my);
        r.get("num_scatterers", s.num_scatterers);
        r.get("num_users", s.num_users);
        r.get("noise_dbm", s.noise_dbm);
        r.get("rate_bps_hz", s.rate_bps_hz);
        r.get("directivity_p", s.directivity_p);
        r.get("chi", s.chi);
        r.get("theta_max_rad", s.theta_max_rad);
        r.get("user_distance_min_m", s.user_distance_min_m);
        r.get("user_distance_max_m", s.user_distance_max_m);
        r.get("user_polar_max_deg", s.user_polar_max_deg);
        r.get("scatterer_distance_min_m", s.scatterer_distance_min_m);
        r.get("scatterer_distance_max_m", s.scatterer_distance_max_m);
        r.get("scatterer_polar_max_deg", s.scatterer_polar_max_deg);
        r.get("scatter_loss", s.scatter_loss);
        r.get("spacing_wavelengths", s.spacing_wavelengths);

        r.get("trials", cfg.trials);
        r.get("seed", cfg.base_seed);
        r.get("jobs", cfg.jobs);
        std::vector<std::string> schemes;
        r.get("schemes", schemes);
        if (!schemes.empty())
        {
            cfg.schemes.clear();
            for (const std::string &name : schemes)
                cfg.schemes.push_back(scheme_from_string(name));
        }
        if (const json *sw = r.child("sweep"))
            read_sweep(*sw, cfg);
        if (const json *op = r.child("optimizer"))
            read_optimizer(*op, cfg.ao);
        r.reject_unknown();
        cfg.validate();
        return cfg;
    }

    SweepConfig load_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw std::runtime_error("cannot open config file: " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        try
        {
            return parse_config(ss.str());
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument(path + ": " + e.what());
        }
    }

    std::string default_config_json()
    {
        const SweepConfig c;
        const ScenarioConfig &s = c.scenario;
        json j = {
            {"carrier_frequency_hz", s.carrier_frequency_hz},
            {"mx", s.mx},
            {"my", s.my},
            {"num_scatterers", s.num_scatterers},
            {"num_users", s.num_users},
            {"noise_dbm", s.noise_dbm},
            {"rate_bps_hz", s.rate_bps_hz},
            {"directivity_p", s.directivity_p},
            {"chi", s.chi},
            {"theta_max_rad", s.theta_max_rad},
            {"trials", c.trials},
            {"seed", c.base_seed},
        };
        return j.dump(2);
    }
}
