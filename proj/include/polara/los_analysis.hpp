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
#include "polara/geometry.hpp"

#include <iosfwd>
#include <vector>

// Closed-form single-antenna, single-user LoS gains with vertical transmit
// polarization v = (0, 1) and a dual-port phase-only receiver.
namespace polara::los
{
    // (|t1| + |t2|)^2: best |u^H t|^2 over unit-modulus u.
    double eta_star(const Vec2c &t);

    // Polarization efficiency with the antenna left unrotated (R = I).
    double eta_fixed(const Vec3 &f);

    // Polarization efficiency with boresight steered to f and the best roll.
    double eta_rot(const Vec3 &f);

    // t = E^T (I - f f^T) R e_v, the port-domain field seen by the receiver.
    Vec2c received_field(const Vec3 &f, const Rotation &R);

    // Boresight on f, V-port axis along the normalized projection of (1, +-1, 0).
    Rotation optimal_rotation_los(const Vec3 &f);

    struct GainRatio
    {
        double total_db = 0.0;
        double directional_db = 0.0;
        double polarization_db = 0.0;
        bool unbounded = false; // fixed antenna sees the user from behind: ratio is +inf
    };

    GainRatio gain_ratio(const Vec3 &f, double p);

    struct Heatmap
    {
        int grid_n = 0;
        std::vector<double> x, y;          // point coordinates [m]
        std::vector<double> fixed_db;      // g_fix / (2 G0)
        std::vector<double> rotated_db;    // g_rot / (2 G0)
    };

    // Points are ordered with x as the outer index.
    Heatmap coverage_heatmap(double plane_z, double extent, int grid_n, double p);

    // Header x_m,y_m,gain_fixed_db,gain_rot_db.
    void write_heatmap_csv(const Heatmap &map, std::ostream &os);
}
