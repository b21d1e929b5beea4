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

#include <Eigen/Dense>
#include <vector>

namespace polara
{
    // Smoothed max-min SINR surrogate and its penalty weights.
    struct SmoothingParams
    {
        double mu = 10.0;    // log-sum-exp sharpness
        double alpha = 20.0; // softplus sharpness
        double lambda1 = 1.0; // rotation: boresight cone penalty
        double lambda2 = 1.0; // rotation: SINR threshold penalty
        double lambda3 = 1.0; // transmit polarization: SINR threshold penalty
        double lambda4 = 1.0; // receive polarization: SINR threshold penalty
        double tau = 5.0;     // penalty escalation factor
        // Use gamma_k / iota_k inside the log-sum-exp instead of raw gamma_k.
        bool normalize_targets = false;

        void validate() const;
    };

    enum class Block
    {
        rotation,
        tx_pol,
        rx_pol,
    };

    struct Design
    {
        RotationSet R;
        TxPolSet V;
        RxPolSet U;
    };

    // sp_a(x) = ln(1 + exp(a x)) / a, evaluated without overflow.
    double softplus(double x, double alpha);
    double logistic(double x);

    // Per-user sensitivities of the smoothed objective at the current channels.
    struct SinrSensitivity
    {
        Eigen::VectorXd sinr;
        Eigen::VectorXd omega;  // dJ/dgamma_k
        Eigen::MatrixXcd Gamma; // (m, k): dgamma_k / d conj(h_{m,k})
        double sinr_part = 0.0; // log-sum-exp surrogate of max_k(-gamma_k)
        double thresh_penalty = 0.0;
    };

    // Weight of the SINR threshold penalty for a block.
    double thresh_weight(const SmoothingParams &params, Block which);

    SinrSensitivity sinr_sensitivity(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const Scene &scene,
                                     const SmoothingParams &params, double thresh_lambda);

    double angle_penalty(const RotationSet &R, double theta_max, double alpha);

    double smooth_objective(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene,
                            const SmoothingParams &params, Block which);

    // Real 3x3 gradients: the directional derivative along dR_m is <G_m, dR_m>_F.
    std::vector<Mat3> euclid_grad_R(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params);

    // Wirtinger gradients dJ/d conj(v_m): the directional derivative along dv_m is 2 Re(G_m^H dv_m).
    std::vector<Vec2c> euclid_grad_V(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params);

    // Wirtinger gradients dJ/d conj(u_k).
    std::vector<Vec2c> euclid_grad_U(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params);

    // Rotation-block objective and gradient for boresight-only antennas, R_m = geodesic_from_z(b_m).
    // The gradient is with respect to b_m as a free vector of R^3.
    double boresight_objective(const std::vector<Vec3> &b, const Design &x, const Eigen::MatrixXcd &W,
                               const Scene &scene, const SmoothingParams &params);
    std::vector<Vec3> euclid_grad_boresight(const std::vector<Vec3> &b, const Design &x, const Eigen::MatrixXcd &W,
                                            const Scene &scene, const SmoothingParams &params);
}
