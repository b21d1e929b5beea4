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

#include "polara/channel.hpp"

#include <cstdint>

namespace polara
{
    // Table I defaults.
    struct ScenarioConfig
    {
        double carrier_frequency_hz = 2.4e9;
        int mx = 4;
        int my = 4;
        int num_scatterers = 8;
        int num_users = 5;
        double noise_dbm = -80.0;
        double rate_bps_hz = 2.0;
        double directivity_p = 2.0;
        double chi = 0.9;
        double theta_max_rad = M_PI / 5.0;

        double user_distance_min_m = 30.0;
        double user_distance_max_m = 60.0;
        double user_polar_max_deg = 70.0;
        double scatterer_distance_min_m = 10.0;
        double scatterer_distance_max_m = 50.0;
        double scatterer_polar_max_deg = 70.0;
        double scatter_loss = 0.1;
        double spacing_wavelengths = 0.5;

        double wavelength() const { return speed_of_light / carrier_frequency_hz; }
        void validate() const;
    };

    // Fixed splitting of one seed into independent streams.
    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

    // Users: distance and polar angle uniform, azimuth uniform on [0, 2 pi). Scatterers likewise
    // with their own ranges. One coupling matrix per (user, scatterer).
    Scene generate_scene(const ScenarioConfig &config, std::uint64_t trial_seed);
}
