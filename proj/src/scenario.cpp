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

#include "polara/scenario.hpp"

#include <random>
#include <stdexcept>

namespace polara
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        Vec3 spherical_point(std::mt19937_64 &rng, double dmin, double dmax, double polar_max)
        {
            std::uniform_real_distribution<double> dist(dmin, dmax), polar(0.0, polar_max), azim(0.0, 2.0 * M_PI);
            const double d = dist(rng), th = polar(rng), ph = azim(rng);
            return d * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        }

        constexpr double deg = M_PI / 180.0;
    }

    void ScenarioConfig::validate() const
    {
        if (!(carrier_frequency_hz > 0.0))
            throw std::invalid_argument("carrier_frequency_hz must be positive");
        if (mx < 1 || my < 1)
            throw std::invalid_argument("mx and my must be at least 1");
        if (num_users < 1)
            throw std::invalid_argument("num_users must be at least 1");
        if (num_scatterers < 0)
            throw std::invalid_argument("num_scatterers must be nonnegative");
        if (!(rate_bps_hz > 0.0))
            throw std::invalid_argument("rate_bps_hz must be positive");
        if (directivity_p < 0.0)
            throw std::invalid_argument("directivity_p must be nonnegative");
        if (!(chi >= 0.0 && chi <= 1.0))
            throw std::invalid_argument("chi must lie in [0, 1]");
        if (!(theta_max_rad >= 0.0 && theta_max_rad <= M_PI / 2.0))
            throw std::invalid_argument("theta_max_rad must lie in [0, pi/2]");
        if (!(user_distance_min_m > 0.0 && user_distance_max_m >= user_distance_min_m))
            throw std::invalid_argument("invalid user distance range");
        if (!(scatterer_distance_min_m > 0.0 && scatterer_distance_max_m >= scatterer_distance_min_m))
            throw std::invalid_argument("invalid scatterer distance range");
        if (!(user_polar_max_deg >= 0.0 && user_polar_max_deg <= 180.0) ||
            !(scatterer_polar_max_deg >= 0.0 && scatterer_polar_max_deg <= 180.0))
            throw std::invalid_argument("polar angle limits must lie in [0, 180] degrees");
        if (!(scatter_loss > 0.0))
            throw std::invalid_argument("scatter_loss must be positive");
        if (!(spacing_wavelengths > 0.0))
            throw std::invalid_argument("spacing_wavelengths must be positive");
    }

    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
    {
        return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    }

    Scene generate_scene(const ScenarioConfig &cfg, std::uint64_t trial_seed)
    {
        cfg.validate();
        const double lambda = cfg.wavelength();
        std::mt19937_64 user_rng(derive_seed(trial_seed, 1));
        std::mt19937_64 scat_rng(derive_seed(trial_seed, 2));
        std::mt19937_64 coup_rng(derive_seed(trial_seed, 3));

        SceneLayout lay;
        lay.antennas = build_upa_positions(cfg.mx, cfg.my, cfg.spacing_wavelengths * lambda);
        for (int k = 0; k < cfg.num_users; ++k)
            lay.users.push_back(spherical_point(user_rng, cfg.user_distance_min_m, cfg.user_distance_max_m,
                                                cfg.user_polar_max_deg * deg));
        for (int l = 0; l < cfg.num_scatterers; ++l)
            lay.scatterers.push_back(spherical_point(scat_rng, cfg.scatterer_distance_min_m, cfg.scatterer_distance_max_m,
                                                     cfg.scatterer_polar_max_deg * deg));
        for (int i = 0; i < cfg.num_users * cfg.num_scatterers; ++i)
            lay.coupling.push_back(sample_coupling(cfg.chi, coup_rng));

        lay.pattern = PatternParams::isotropic_aperture(cfg.directivity_p, lambda);
        lay.noise_w.assign(cfg.num_users, dbm_to_watt(cfg.noise_dbm));
        lay.rate_bps_hz.assign(cfg.num_users, cfg.rate_bps_hz);
        lay.theta_max = cfg.theta_max_rad;
        lay.scatter_loss = cfg.scatter_loss;
        lay.seed = trial_seed;
        return Scene(std::move(lay));
    }
}
