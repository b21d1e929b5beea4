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

#include "polara/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polara
{
    namespace
    {
        // Guards (f^T R e_z)^{-1} in the pattern derivative.
        constexpr double gain_floor = 1e-6;

        double amplitude_slope(const PathState &ps, double p)
        {
            if (ps.amp == 0.0 || p == 0.0)
                return 0.0;
            return p * ps.amp / std::max(ps.cos_tx, gain_floor);
        }

        double cone_slack(const Rotation &R, double theta_max)
        {
            return std::cos(theta_max) - R(2, 2);
        }
    }

    void SmoothingParams::validate() const
    {
        if (!(mu > 0.0) || !(alpha > 0.0))
            throw std::invalid_argument("SmoothingParams: mu and alpha must be positive");
        if (!(tau > 1.0))
            throw std::invalid_argument("SmoothingParams: tau must exceed 1");
        if (lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0 || lambda4 < 0.0)
            throw std::invalid_argument("SmoothingParams: penalty weights must be nonnegative");
    }

    double softplus(double x, double alpha)
    {
        const double ax = alpha * x;
        return ax > 0.0 ? x + std::log1p(std::exp(-ax)) / alpha : std::log1p(std::exp(ax)) / alpha;
    }

    double logistic(double x)
    {
        if (x >= 0.0)
            return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
    }

    double thresh_weight(const SmoothingParams &params, Block which)
    {
        switch (which)
        {
        case Block::rotation:
            return params.lambda2;
        case Block::tx_pol:
            return params.lambda3;
        case Block::rx_pol:
            return params.lambda4;
        }
        return 0.0;
    }

    SinrSensitivity sinr_sensitivity(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const Scene &scene,
                                     const SmoothingParams &params, double thresh_lambda)
    {
        const int K = static_cast<int>(H.cols());
        const Eigen::VectorXd iota = scene.sinr_targets();
        const std::vector<double> &noise = scene.noise();
        const Eigen::MatrixXcd A = H.adjoint() * W; // A(k, j) = h_k^H w_j

        SinrSensitivity s;
        s.sinr.resize(K);
        s.omega.resize(K);
        s.Gamma.resize(H.rows(), K);

        Eigen::VectorXd signal(K), interf(K), z(K);
        for (int k = 0; k < K; ++k)
        {
            signal(k) = std::norm(A(k, k));
            interf(k) = noise[k];
            for (int j = 0; j < K; ++j)
                if (j != k)
                    interf(k) += std::norm(A(k, j));
            s.sinr(k) = signal(k) / interf(k);
            z(k) = -params.mu * s.sinr(k) / (params.normalize_targets ? iota(k) : 1.0);
        }

        const double zmax = z.maxCoeff();
        const Eigen::VectorXd w = (z.array() - zmax).exp();
        const double wsum = w.sum();
        s.sinr_part = (zmax + std::log(wsum)) / params.mu;

        for (int k = 0; k < K; ++k)
        {
            const double gap = iota(k) - s.sinr(k);
            const double sp = softplus(gap, params.alpha);
            s.thresh_penalty += thresh_lambda * sp * sp;
            s.omega(k) = -(w(k) / wsum) / (params.normalize_targets ? iota(k) : 1.0) -
                         2.0 * thresh_lambda * sp * logistic(params.alpha * gap);

            Eigen::VectorXcd num = interf(k) * std::conj(A(k, k)) * W.col(k);
            for (int j = 0; j < K; ++j)
                if (j != k)
                    num -= signal(k) * std::conj(A(k, j)) * W.col(j);
            s.Gamma.col(k) = num / (interf(k) * interf(k));
        }
        return s;
    }

    double angle_penalty(const RotationSet &R, double theta_max, double alpha)
    {
        double pen = 0.0;
        for (const Rotation &Rm : R)
        {
            const double sp = softplus(cone_slack(Rm, theta_max), alpha);
            pen += sp * sp;
        }
        return pen;
    }

    double smooth_objective(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene,
                            const SmoothingParams &params, Block which)
    {
        const ChannelSet ch = assemble_channels(x.R, x.V, x.U, scene);
        const SinrSensitivity s = sinr_sensitivity(W, ch.H, scene, params, thresh_weight(params, which));
        double val = s.sinr_part + s.thresh_penalty;
        if (which == Block::rotation)
            val += params.lambda1 * angle_penalty(x.R, scene.theta_max(), params.alpha);
        return val;
    }

    std::vector<Mat3> euclid_grad_R(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params)
    {
        const ChannelSet ch = assemble_channels(x.R, x.V, x.U, scene);
        const SinrSensitivity s = sinr_sensitivity(W, ch.H, scene, params, params.lambda2);
        const double p = scene.pattern().p;

        std::vector<Mat3> G(ch.M, Mat3::Zero());
        for (int m = 0; m < ch.M; ++m)
        {
            Eigen::Vector3cd Ev = Eigen::Vector3cd::Zero();
            Ev.head<2>() = x.V[m];

            for (int k = 0; k < ch.K; ++k)
            {
                Eigen::Matrix3cd dh = Eigen::Matrix3cd::Zero();
                const Vec2c &u = x.U[k];
                for (int l = 0; l <= ch.L; ++l)
                {
                    const PathState &ps = ch.path(m, k, l);
                    if (ps.amp == 0.0)
                        continue;
                    const PathGeometry &pg = scene.path(m, k, l);
                    // d(u^H Q M Z^T R E v)/dR = Z M^T Q^T conj(u) (E v)^T
                    const Eigen::Vector3cd row = pg.Z_tx * (pg.M.transpose() * (pg.Q.transpose() * u.conjugate()));
                    const cplx pol = u.dot(pg.Q * ps.MPv);
                    dh += pg.coeff * (ps.amp * (row * Ev.transpose()) +
                                      (pol * amplitude_slope(ps, p)) * (pg.f_tx * unit_z().transpose()).cast<cplx>());
                }
                G[m] += 2.0 * s.omega(k) * (std::conj(s.Gamma(m, k)) * dh).real();
            }

            const double slack = cone_slack(x.R[m], scene.theta_max());
            const double kappa = 2.0 * softplus(slack, params.alpha) * logistic(params.alpha * slack);
            G[m](2, 2) -= params.lambda1 * kappa;
        }
        return G;
    }

    std::vector<Vec2c> euclid_grad_V(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params)
    {
        const ChannelSet ch = assemble_channels(x.R, x.V, x.U, scene);
        const SinrSensitivity s = sinr_sensitivity(W, ch.H, scene, params, params.lambda3);

        std::vector<Vec2c> G(ch.M, Vec2c::Zero());
        for (int m = 0; m < ch.M; ++m)
            for (int k = 0; k < ch.K; ++k)
            {
                // conj of d h_{m,k} / d v_m: sum_l conj(alpha) P^T M^H Q^T u
                Vec2c acc = Vec2c::Zero();
                for (int l = 0; l <= ch.L; ++l)
                {
                    const PathState &ps = ch.path(m, k, l);
                    if (ps.amp == 0.0)
                        continue;
                    const PathGeometry &pg = scene.path(m, k, l);
                    acc += std::conj(pg.coeff) * ps.amp * (ps.P.transpose() * (pg.M.adjoint() * (pg.Q.transpose() * x.U[k])));
                }
                G[m] += s.omega(k) * s.Gamma(m, k) * acc;
            }
        return G;
    }

    std::vector<Vec2c> euclid_grad_U(const Design &x, const Eigen::MatrixXcd &W, const Scene &scene, const SmoothingParams &params)
    {
        const ChannelSet ch = assemble_channels(x.R, x.V, x.U, scene);
        const SinrSensitivity s = sinr_sensitivity(W, ch.H, scene, params, params.lambda4);

        std::vector<Vec2c> G(ch.K, Vec2c::Zero());
        for (int k = 0; k < ch.K; ++k)
        {
            Vec2c acc = Vec2c::Zero();
            for (int m = 0; m < ch.M; ++m)
            {
                // h_{m,k} = u_k^H x_{m,k}
                Vec2c xmk = Vec2c::Zero();
                for (int l = 0; l <= ch.L; ++l)
                {
                    const PathState &ps = ch.path(m, k, l);
                    if (ps.amp != 0.0)
                        xmk += scene.path(m, k, l).coeff * ps.amp * (scene.path(m, k, l).Q * ps.MPv);
                }
                acc += std::conj(s.Gamma(m, k)) * xmk;
            }
            G[k] = s.omega(k) * acc;
        }
        return G;
    }

    namespace
    {
        Design with_boresights(const std::vector<Vec3> &b, const Design &x)
        {
            Design d = x;
            for (size_t m = 0; m < b.size(); ++m)
                d.R[m] = geodesic_from_z(b[m]);
            return d;
        }
    }

    double boresight_objective(const std::vector<Vec3> &b, const Design &x, const Eigen::MatrixXcd &W,
                               const Scene &scene, const SmoothingParams &params)
    {
        return smooth_objective(with_boresights(b, x), W, scene, params, Block::rotation);
    }

    std::vector<Vec3> euclid_grad_boresight(const std::vector<Vec3> &b, const Design &x, const Eigen::MatrixXcd &W,
                                            const Scene &scene, const SmoothingParams &params)
    {
        const std::vector<Mat3> GR = euclid_grad_R(with_boresights(b, x), W, scene, params);
        std::vector<Vec3> g(b.size());
        for (size_t m = 0; m < b.size(); ++m)
        {
            const auto J = geodesic_from_z_jacobian(b[m]);
            for (int c = 0; c < 3; ++c)
                g[m](c) = GR[m].cwiseProduct(J[c]).sum();
        }
        return g;
    }
}
