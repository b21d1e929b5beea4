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
#include "polara/beamforming.hpp"
#include "polara/objective.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polara::verify
{
    enum class Level
    {
        fast,
        full,
    };

    struct SuiteReport
    {
        std::string name;
        bool passed = false;
        std::string detail;
        double seconds = 0.0;
    };

    struct Options
    {
        Level level = Level::fast;
        bool flip_gradient_sign = false; // fault injection for the gradient suite
    };

    // Small random problem: 2 antennas, 2 users, 2 scatterers, random blocks and beamformers.
    struct DeskInstance
    {
        Scene scene;
        Design x;
        Eigen::MatrixXcd W;
        std::vector<Vec3> boresights;
    };

    DeskInstance random_desk_instance(std::uint64_t seed, int mx = 1, int my = 2, int users = 2, int scatterers = 2);

    struct GradientCheck
    {
        double worst_R = 0.0, worst_V = 0.0, worst_U = 0.0, worst_boresight = 0.0;
    };

    // Worst relative error between analytic and central-difference directional derivatives, the best
    // step taken from {1e-4, 1e-5, 1e-6}, over the given number of random directions per block.
    GradientCheck check_gradients(const DeskInstance &inst, const SmoothingParams &params, int directions,
                                  std::uint64_t seed, bool flip_sign = false);

    // Random beamforming instance with a feasible target set.
    BeamformingProblem random_beamforming_problem(std::uint64_t seed, int M, int K);

    struct BeamformingCheck
    {
        bool feasible = false;
        double sdr_power = 0.0;
        double oracle_power = 0.0;
        double relative_difference = 0.0;
        double rank_residual = 0.0;
        double worst_sinr_shortfall = 0.0; // max_k (1 - gamma_k / iota_k), clipped at 0
    };

    BeamformingCheck check_beamforming(const BeamformingProblem &pb);

    struct ManifoldCheck
    {
        double so3 = 0.0, sphere = 0.0, circle = 0.0, boresight = 0.0;
        double worst() const;
    };

    // Random retractions with steps spanning 1e-8 .. 1e3 times the tangent norm.
    ManifoldCheck check_retractions(int steps, std::uint64_t seed);

    struct LosCheck
    {
        double worst_fixed = 0.0; // |eta_fixed - phase-grid oracle|
        double worst_rot = 0.0;   // |eta_rot - roll-grid oracle|
    };

    double eta_fixed_grid(const Vec3 &f, int phases);
    double eta_rot_grid(const Vec3 &f, int rolls);
    LosCheck check_los(int directions, int phases, int rolls, std::uint64_t seed);

    std::vector<SuiteReport> run_all(const Options &options);
}
