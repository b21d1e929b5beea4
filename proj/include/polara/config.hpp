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

#include "polara/harness.hpp"

#include <string>

namespace polara
{
    // JSON experiment file. Top-level keys follow the scenario table (carrier_frequency_hz, mx, my,
    // num_scatterers, num_users, noise_dbm, rate_bps_hz, directivity_p, chi, theta_max_rad, ...),
    // plus trials, seed, jobs, schemes, sweep {param, values, array_shapes} and optimizer {...}.
    // Unknown keys are rejected with the key named.
    SweepConfig parse_config(const std::string &json_text);
    SweepConfig load_config(const std::string &path);

    // Table I defaults written back as JSON.
    std::string default_config_json();
}
