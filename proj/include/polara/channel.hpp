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

#include "polara/geometry.hpp"

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace polara
{
    using cplx = std::complex<double>;
    using Vec2c = Eigen::Vector2cd;
    using Mat2 = Eigen::Matrix2d;
    using Mat2c = Eigen::Matrix2cd;

    using RotationSet = std::vector<Rotation>;
    using TxPolSet = std::vector<Vec2c>; // unit-norm v_m
    using RxPolSet = std::vector<Vec2c>; // unit-modulus entries u_k

    constexpr double speed_of_light = 299792458.0;

    // Cosine-power pattern G(eps) = G0 cos^{2p}(eps), G0 = 2(2p + 1), plus Friis parameters.
    struct PatternParams
    {
        double p = 2.0;          // directivity factor
        double aperture = 0.0;   // receive effective aperture A [m^2]
        double wavelength = 0.0; // [m]

        double peak_gain() const { return 2.0 * (2.0 * p + 1.0); }

        // A = lambda^2 / (4 pi)
        static PatternParams isotropic_aperture(double p, double wavelength);
    };

    struct CouplingMatrix
    {
        Mat2c M = Mat2c::Identity();
        double chi = 1.0;
        std::array<double, 4> phases{}; // HH, HV, VH, VV

        double xpd() const { return chi / (1.0 - chi); }
    };

    double gain_pattern(double eps, const PatternParams &params);
    double los_pathloss(double distance, double eps, const PatternParams &params);

    // Four phases i.i.d. uniform on (0, 2 pi]; |M11| = |M22| = sqrt(chi), |M12| = |M21| = sqrt(1 - chi).
    CouplingMatrix sample_coupling(double chi, std::mt19937_64 &rng);

    // Directional amplitude (cos eps)^p, zero for paths leaving through the back hemisphere.
    inline double directional_amplitude(double cos_eps, double p)
    {
        return cos_eps <= 0.0 ? 0.0 : std::pow(cos_eps, p);
    }

    // Everything a trial needs that does not change during optimization.
    struct SceneLayout
    {
        std::vector<Vec3> antennas;
        std::vector<Vec3> users;
        std::vector<Vec3> scatterers;
        std::vector<CouplingMatrix> coupling; // index k * L + l, one per (user, scatterer)
        PatternParams pattern;
        std::vector<double> noise_w;     // sigma_k^2 [W]
        std::vector<double> rate_bps_hz; // per-user rate targets
        double theta_max = M_PI / 5.0;
        double scatter_loss = 0.1; // per-scatterer power loss kappa_s
        std::uint64_t seed = 0;
    };

    // Geometry of one (antenna, user, path) triple that is independent of R, V and U.
    // Path 0 is LoS; paths 1..L go through scatterer l - 1.
    struct PathGeometry
    {
        cplx coeff;   // sqrt(A G0 kappa / (4 pi d^2)) exp(-j 2 pi d / lambda)
        Vec3 f_tx;    // departure direction at the BS
        Mat32 Z_tx;   // departure transverse basis
        Mat2 Q;       // E^T Z_rx
        Mat2c M;      // coupling (identity for LoS)
        double distance;
    };

    class Scene
    {
    public:
        explicit Scene(SceneLayout layout);

        const SceneLayout &layout() const { return layout_; }
        int num_antennas() const { return static_cast<int>(layout_.antennas.size()); }
        int num_users() const { return static_cast<int>(layout_.users.size()); }
        int num_scatterers() const { return static_cast<int>(layout_.scatterers.size()); }
        int num_paths() const { return num_scatterers() + 1; }

        const PatternParams &pattern() const { return layout_.pattern; }
        double theta_max() const { return layout_.theta_max; }
        const std::vector<double> &noise() const { return layout_.noise_w; }
        const CouplingMatrix &coupling(int k, int l) const { return layout_.coupling[static_cast<size_t>(k) * num_scatterers() + l]; }

        // SINR targets 2^{R_k} - 1.
        Eigen::VectorXd sinr_targets() const;

        size_t path_index(int m, int k, int l) const
        {
            return (static_cast<size_t>(m) * num_users() + k) * num_paths() + l;
        }
        const PathGeometry &path(int m, int k, int l) const { return paths_[path_index(m, k, l)]; }

    private:
        SceneLayout layout_;
        std::vector<PathGeometry> paths_;
    };

    // R-dependent per-path data kept for gradient evaluation.
    struct PathState
    {
        double cos_tx = 0.0; // f_tx^T R e_z
        double amp = 0.0;    // directional_amplitude(cos_tx, p)
        Mat2 P;              // Z_tx^T R E
        Vec2c MPv;           // M P v
        cplx value;          // h_{m,k,l}
    };

    struct ChannelSet
    {
        int M = 0, K = 0, L = 0;
        Eigen::MatrixXcd H;           // column k is h_k
        std::vector<PathState> paths; // Scene::path_index order

        const PathState &path(int m, int k, int l) const
        {
            return paths[(static_cast<size_t>(m) * K + k) * (L + 1) + l];
        }
        // Recompute h_k from the cached per-path values.
        Eigen::MatrixXcd rebuild() const;
    };

    cplx channel_coefficient_los(int m, int k, const Rotation &R_m, const Vec2c &v_m, const Vec2c &u_k, const Scene &scene);
    cplx channel_coefficient_nlos(int m, int k, int l, const Rotation &R_m, const Vec2c &v_m, const Vec2c &u_k, const Scene &scene);

    ChannelSet assemble_channels(const RotationSet &R, const TxPolSet &V, const RxPolSet &U, const Scene &scene);

    struct LinkQuality
    {
        Eigen::VectorXd sinr;
        Eigen::VectorXd rate; // log2(1 + sinr)
    };

    LinkQuality sinr_and_rate(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const std::vector<double> &noise);
    inline LinkQuality sinr_and_rate(const Eigen::MatrixXcd &W, const ChannelSet &ch, const std::vector<double> &noise)
    {
        return sinr_and_rate(W, ch.H, noise);
    }

    double dbm_to_watt(double dbm);
    double watt_to_dbm(double w);
}
