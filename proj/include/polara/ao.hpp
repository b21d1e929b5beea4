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

#include "polara/beamforming.hpp"
#include "polara/manifold.hpp"
#include "polara/objective.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace polara
{
    enum class Scheme
    {
        proposed,
        rotation_only,
        boresight_only,
        fixed_upa,
    };

    std::string to_string(Scheme s);
    Scheme scheme_from_string(const std::string &name);

    struct AoConfig
    {
        SmoothingParams smoothing;
        RcgOptions rcg;
        DcOptions dc;
        int max_outer = 50;
        double rel_tol = 1e-3;     // stop when |P_i - P_{i-1}| <= rel_tol P_{i-1}
        int max_escalations = 8;   // per block and outer iteration
        double sinr_rtol = 1e-9;   // a block update must keep gamma_k >= iota_k (1 - sinr_rtol)
        // Block switches; the scheme variants set these.
        bool update_R = true;
        bool update_V = true;
        bool update_U = true;
        bool boresight_only = false;
    };

    struct TraceRow
    {
        int iter = 0;
        double power_w = 0.0;
        bool feasible = false;
        int block_reverts = 0;
    };

    struct SolutionState
    {
        Eigen::MatrixXcd W;
        RotationSet R;
        TxPolSet V;
        RxPolSet U;
        SmoothingParams penalties;
        bool feasible = false;
        bool infeasible_at_init = false;
        bool converged = false;
        std::vector<double> power_trace;                 // P^(i) [W], index 0 is the initialization
        std::vector<std::array<int, 3>> inner_iterations; // RCG iterations per outer pass for R, V, U
        std::vector<TraceRow> trace;

        double power() const { return power_trace.empty() ? 0.0 : power_trace.back(); }
    };

    // Starting blocks: R_m steered toward the user centroid within the cone, v_m = (0, 1), u_k = (1, 1).
    struct InitialStates
    {
        SolutionState common;   // shared by the rotatable schemes
        SolutionState identity; // R_m = I, used by fixed_upa
    };

    Rotation steer_toward_centroid(const Scene &scene, int m);

    // W^(0) for the given blocks from one rank-one DC solve.
    SolutionState initial_state(const Scene &scene, const AoConfig &config, RotationSet R);

    // The steered start falls back to the identity start whenever that needs less power.
    InitialStates initialize(const Scene &scene, const AoConfig &config);

    // Outer loop R -> V -> U -> W from the given state.
    SolutionState run(const Scene &scene, const AoConfig &config, SolutionState state);

    AoConfig configure_scheme(AoConfig config, Scheme scheme);

    SolutionState scheme_variant(const Scene &scene, const AoConfig &config, Scheme scheme, const InitialStates &init);
    SolutionState scheme_variant(const Scene &scene, const AoConfig &config, Scheme scheme);

    // Continue from a feasible state of the same scene found under a narrower cone.
    SolutionState resume(const Scene &scene, const AoConfig &config, Scheme scheme, const SolutionState &previous);

    // One W update under the current channels; returns false (and leaves W) when it fails or gains nothing.
    bool update_beamformers(const Scene &scene, const AoConfig &config, SolutionState &state);

    bool meets_targets(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const Scene &scene, double rtol);

    void write_trace_csv(std::ostream &os, const SolutionState &state);
}
