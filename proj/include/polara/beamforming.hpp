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

#include "polara/sdp.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace polara
{
    // Downlink power minimization under per-user SINR targets:
    //   min sum_k ||w_k||^2  s.t.  |h_k^H w_k|^2 >= iota_k (sum_{i != k} |h_k^H w_i|^2 + sigma_k^2).
    struct BeamformingProblem
    {
        Eigen::MatrixXcd H;       // column k is h_k (M x K)
        Eigen::VectorXd targets;  // iota_k = 2^{R_k} - 1
        std::vector<double> noise; // sigma_k^2 [W]

        int num_antennas() const { return static_cast<int>(H.rows()); }
        int num_users() const { return static_cast<int>(H.cols()); }
        void validate() const;
    };

    enum class BeamformingStatus
    {
        optimal,
        infeasible,
        not_rank_one,
        numerical_failure,
    };

    std::string to_string(BeamformingStatus s);

    struct CovarianceIterate
    {
        BeamformingStatus status = BeamformingStatus::numerical_failure;
        std::vector<Eigen::MatrixXcd> D;
        double power = 0.0;        // sum_k tr(D_k) [W]
        double relative_gap = 0.0; // from the conic solver
        int iterations = 0;
    };

    // One convex P2.2 solve: min sum_k tr(D_k) + lambda0 sum_k (tr(D_k) - d_k^H D_k d_k).
    // An empty prev_eigvecs gives the plain semidefinite relaxation.
    CovarianceIterate solve_sdp(const BeamformingProblem &problem, double lambda0,
                                const std::vector<Eigen::VectorXcd> &prev_eigvecs,
                                const sdp::Options &options = {});

    // Maximum over {D_k} of the minimum constraint slack under a generous power budget.
    // Returns that slack in noise-normalized units; a negative value proves infeasibility.
    double feasibility_margin(const BeamformingProblem &problem, double budget_factor = 1e6);

    struct DcOptions
    {
        double lambda0 = 0.01; // initial penalty weight
        double tau = 5.0;
        int max_escalations = 12;
        double rank_tol = 1e-6; // sum (tr - ||D||_2) <= rank_tol sum tr
    };

    struct DcResult
    {
        BeamformingStatus status = BeamformingStatus::numerical_failure;
        std::vector<Eigen::MatrixXcd> D;
        double power = 0.0;
        double rank_residual = 0.0;     // sum (tr - lambda_max) / sum tr
        std::vector<double> penalty_trace;  // lambda0 used at each DC iteration (0 for the plain relaxation)
        std::vector<double> residual_trace;
        std::vector<double> objective_trace; // P2.2 objective at each iteration
    };

    double rank_one_residual(const std::vector<Eigen::MatrixXcd> &D);

    DcResult dc_rank_one_loop(const BeamformingProblem &problem, const DcOptions &options = {});

    // w_k = sqrt(lambda_max) q_max. If round-off leaves a target unmet, powers along the
    // recovered directions are re-solved from the tight SINR equations.
    // Throws std::runtime_error when the rank-one residual exceeds rank_tol.
    Eigen::MatrixXcd recover_beamformers(const std::vector<Eigen::MatrixXcd> &D, const BeamformingProblem &problem,
                                         double rank_tol = 1e-6);

    // Minimum-power powers along fixed beam directions (columns of dirs, any norm).
    // Returns false when no nonnegative solution exists.
    bool power_for_directions(const Eigen::MatrixXcd &dirs, const BeamformingProblem &problem, Eigen::VectorXd &powers);

    struct OracleResult
    {
        bool feasible = false;
        Eigen::MatrixXcd W;
        double power = 0.0;
        int iterations = 0;
    };

    // Uplink-downlink duality: fixed-point iteration on the virtual uplink powers with
    // MMSE receive directions, then downlink powers from the tight SINR equations.
    OracleResult duality_oracle(const BeamformingProblem &problem, int max_iterations = 100000, double tol = 1e-13);

    // Complex Hermitian <-> real symmetric embedding [[Re, -Im], [Im, Re]].
    Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd &A);
    Eigen::MatrixXcd complex_from_embedding(const Eigen::MatrixXd &X);
}
