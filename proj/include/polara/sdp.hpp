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

#include <Eigen/Dense>
#include <string>
#include <vector>

// Small dense primal-dual interior-point solver for block-diagonal real SDPs
//
//   min  sum_j <C_j, X_j> + c_lp^T x       s.t.  sum_j <A_ij, X_j> + a_i^T x = b_i,
//        X_j >= 0 (PSD), x >= 0
//
// and its dual  max b^T y  s.t.  C_j - sum_i y_i A_ij >= 0, c_lp - sum_i y_i a_i >= 0.
// HKM search direction with Mehrotra predictor-corrector steps.
namespace polara::sdp
{
    struct Problem
    {
        std::vector<int> block_sizes; // PSD blocks
        int lp_size = 0;              // nonnegative orthant dimension

        std::vector<Eigen::MatrixXd> C; // one per PSD block
        Eigen::VectorXd c_lp;

        // A[i][j]: constraint i restricted to block j. An empty matrix means zero.
        std::vector<std::vector<Eigen::MatrixXd>> A;
        std::vector<Eigen::VectorXd> a_lp; // one per constraint, length lp_size
        Eigen::VectorXd b;

        int num_constraints() const { return static_cast<int>(b.size()); }
        void validate() const;
    };

    enum class Status
    {
        optimal,
        iteration_limit,
        numerical_failure,
    };

    std::string to_string(Status s);

    struct Options
    {
        int max_iterations = 100;
        double gap_tol = 1e-10;      // relative duality gap
        double feas_tol = 1e-10;     // relative primal/dual residuals
        double step_fraction = 0.98; // fraction of the distance to the boundary
    };

    struct Solution
    {
        Status status = Status::numerical_failure;
        std::vector<Eigen::MatrixXd> X, S;
        Eigen::VectorXd x_lp, s_lp, y;
        double primal_objective = 0.0;
        double dual_objective = 0.0;
        double relative_gap = 0.0;
        double primal_infeasibility = 0.0;
        double dual_infeasibility = 0.0;
        int iterations = 0;
    };

    Solution solve(const Problem &problem, const Options &options = {});
}
