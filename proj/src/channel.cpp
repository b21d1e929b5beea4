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

#include "polara/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polara
{
    namespace
    {
        constexpr double min_distance = 1e-9;

        cplx propagation_phase(double d, double wavelength)
        {
            return std::polar(1.0, -2.0 * M_PI * d / wavelength);
        }

        double friis_amplitude(double d, const PatternParams &pp, double extra_loss)
        {
            return std::sqrt(pp.aperture * pp.peak_gain() * extra_loss / (4.0 * M_PI * d * d));
        }

        Mat2 receive_projection(const Mat32 &Z)
        {
            return port_basis().transpose() * Z;
        }

        Mat2 transmit_projection(const Mat32 &Z, const Rotation &R)
        {
            return Z.transpose() * R * port_basis();
        }
    }

    PatternParams PatternParams::isotropic_aperture(double p, double wavelength)
    {
        PatternParams pp;
        pp.p = p;
        pp.wavelength = wavelength;
        pp.aperture = wavelength * wavelength / (4.0 * M_PI);
        return pp;
    }

    double gain_pattern(double eps, const PatternParams &params)
    {
        if (eps > M_PI / 2.0)
            return 0.0;
        return params.peak_gain() * std::pow(std::cos(eps), 2.0 * params.p);
    }

    double los_pathloss(double distance, double eps, const PatternParams &params)
    {
        if (!(distance > 0.0))
            throw std::invalid_argument("los_pathloss: distance must be positive");
        return params.aperture / (4.0 * M_PI * distance * distance) * gain_pattern(eps, params);
    }

    CouplingMatrix sample_coupling(double chi, std::mt19937_64 &rng)
    {
        if (!(chi >= 0.0 && chi <= 1.0))
            throw std::invalid_argument("sample_coupling: chi must lie in [0, 1]");

        // uniform_real_distribution draws [0, 2pi); reflect to (0, 2pi].
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
        CouplingMatrix c;
        c.chi = chi;
        for (auto &ph : c.phases)
            ph = 2.0 * M_PI - phase(rng);

        const double co = std::sqrt(chi), cross = std::sqrt(1.0 - chi);
        c.M(0, 0) = std::polar(co, c.phases[0]);
        c.M(0, 1) = std::polar(cross, c.phases[1]);
        c.M(1, 0) = std::polar(cross, c.phases[2]);
        c.M(1, 1) = std::polar(co, c.phases[3]);
        return c;
    }

    Scene::Scene(SceneLayout layout) : layout_(std::move(layout))
    {
        const int M = num_antennas(), K = num_users(), L = num_scatterers();
        if (M < 1 || K < 1)
            throw std::invalid_argument("Scene: need at least one antenna and one user");
        if (static_cast<int>(layout_.coupling.size()) != K * L)
            throw std::invalid_argument("Scene: expected one coupling matrix per (user, scatterer)");
        if (static_cast<int>(layout_.noise_w.size()) != K || static_cast<int>(layout_.rate_bps_hz.size()) != K)
            throw std::invalid_argument("Scene: noise and rate targets must have one entry per user");
        for (double s2 : layout_.noise_w)
            if (!(s2 > 0.0))
                throw std::invalid_argument("Scene: noise powers must be positive");
        for (double r : layout_.rate_bps_hz)
            if (!(r > 0.0))
                throw std::invalid_argument("Scene: rate targets must be positive");
        if (!(layout_.pattern.wavelength > 0.0) || !(layout_.pattern.aperture > 0.0) || layout_.pattern.p < 0.0)
            throw std::invalid_argument("Scene: invalid pattern parameters");

        const PatternParams &pp = layout_.pattern;
        paths_.resize(static_cast<size_t>(M) * K * (L + 1));
        for (int m = 0; m < M; ++m)
        {
            const Vec3 &pm = layout_.antennas[m];
            for (int k = 0; k < K; ++k)
            {
                const Vec3 &pk = layout_.users[k];
                const double d0 = (pk - pm).norm();
                if (d0 < min_distance)
                    throw std::invalid_argument("Scene: user " + std::to_string(k) + " coincides with antenna " + std::to_string(m));

                PathGeometry &los = paths_[path_index(m, k, 0)];
                los.distance = d0;
                los.f_tx = (pk - pm) / d0;
                los.Z_tx = transverse_basis(los.f_tx).Z;
                los.Q = receive_projection(los.Z_tx);
                los.M = Mat2c::Identity();
                los.coeff = friis_amplitude(d0, pp, 1.0) * propagation_phase(d0, pp.wavelength);

                for (int l = 1; l <= L; ++l)
                {
                    const Vec3 &s = layout_.scatterers[l - 1];
                    const double d1 = (s - pm).norm(), d2 = (pk - s).norm();
                    if (d1 < min_distance || d2 < min_distance)
                        throw std::invalid_argument("Scene: scatterer " + std::to_string(l - 1) + " coincides with an endpoint");

                    PathGeometry &pg = paths_[path_index(m, k, l)];
                    pg.distance = d1 + d2;
                    pg.f_tx = (s - pm) / d1;
                    pg.Z_tx = transverse_basis(pg.f_tx).Z;
                    pg.Q = receive_projection(transverse_basis((pk - s) / d2).Z);
                    pg.M = coupling(k, l - 1).M;
                    pg.coeff = friis_amplitude(pg.distance, pp, layout_.scatter_loss) * propagation_phase(pg.distance, pp.wavelength);
                }
            }
        }
    }

    Eigen::VectorXd Scene::sinr_targets() const
    {
        Eigen::VectorXd t(num_users());
        for (int k = 0; k < num_users(); ++k)
            t(k) = std::exp2(layout_.rate_bps_hz[k]) - 1.0;
        return t;
    }

    Eigen::MatrixXcd ChannelSet::rebuild() const
    {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                for (int l = 0; l <= L; ++l)
                    out(m, k) += path(m, k, l).value;
        return out;
    }

    cplx channel_coefficient_los(int m, int k, const Rotation &R_m, const Vec2c &v_m, const Vec2c &u_k, const Scene &scene)
    {
        const SceneLayout &sl = scene.layout();
        const Vec3 delta = sl.users.at(k) - sl.antennas.at(m);
        const double d = delta.norm();
        if (d < min_distance)
            throw std::invalid_argument("channel_coefficient_los: coincident endpoints");

        const Vec3 f = delta / d;
        const Mat32 Z = transverse_basis(f).Z;
        const double amp = directional_amplitude(f.dot(R_m.col(2)), sl.pattern.p);
        const cplx pol = u_k.dot(receive_projection(Z) * transmit_projection(Z, R_m) * v_m);
        return friis_amplitude(d, sl.pattern, 1.0) * amp * pol * propagation_phase(d, sl.pattern.wavelength);
    }

    cplx channel_coefficient_nlos(int m, int k, int l, const Rotation &R_m, const Vec2c &v_m, const Vec2c &u_k, const Scene &scene)
    {
        const SceneLayout &sl = scene.layout();
        if (l < 1 || l > scene.num_scatterers())
            throw std::out_of_range("channel_coefficient_nlos: scatterer index out of range");

        const Vec3 &s = sl.scatterers[l - 1];
        const Vec3 out = s - sl.antennas.at(m), in = sl.users.at(k) - s;
        const double d1 = out.norm(), d2 = in.norm();
        if (d1 < min_distance || d2 < min_distance)
            throw std::invalid_argument("channel_coefficient_nlos: coincident endpoints");

        const Vec3 f_tx = out / d1, f_rx = in / d2;
        const double amp = directional_amplitude(f_tx.dot(R_m.col(2)), sl.pattern.p);
        if (amp == 0.0)
            return 0.0;

        const Mat2 P = transmit_projection(transverse_basis(f_tx).Z, R_m);
        const Mat2 Q = receive_projection(transverse_basis(f_rx).Z);
        const cplx pol = u_k.dot(Q * scene.coupling(k, l - 1).M * (P * v_m));
        const double d = d1 + d2;
        return friis_amplitude(d, sl.pattern, sl.scatter_loss) * amp * pol * propagation_phase(d, sl.pattern.wavelength);
    }

    ChannelSet assemble_channels(const RotationSet &R, const TxPolSet &V, const RxPolSet &U, const Scene &scene)
    {
        const int M = scene.num_antennas(), K = scene.num_users(), L = scene.num_scatterers();
        if (static_cast<int>(R.size()) != M || static_cast<int>(V.size()) != M || static_cast<int>(U.size()) != K)
            throw std::invalid_argument("assemble_channels: expected |R| = |V| = M and |U| = K");

        const double p = scene.pattern().p;
        ChannelSet ch;
        ch.M = M;
        ch.K = K;
        ch.L = L;
        ch.H = Eigen::MatrixXcd::Zero(M, K);
        ch.paths.resize(static_cast<size_t>(M) * K * (L + 1));

        for (int m = 0; m < M; ++m)
        {
            const Eigen::Matrix<double, 3, 2> RE = R[m].leftCols<2>();
            const Vec3 boresight = R[m].col(2);
            for (int k = 0; k < K; ++k)
            {
                cplx sum = 0.0;
                for (int l = 0; l <= L; ++l)
                {
                    const size_t idx = scene.path_index(m, k, l);
                    const PathGeometry &pg = scene.path(m, k, l);
                    PathState &ps = ch.paths[idx];
                    ps.cos_tx = pg.f_tx.dot(boresight);
                    ps.amp = directional_amplitude(ps.cos_tx, p);
                    ps.P = pg.Z_tx.transpose() * RE;
                    ps.MPv = pg.M * (ps.P * V[m]);
                    ps.value = pg.coeff * ps.amp * U[k].dot(pg.Q * ps.MPv);
                    sum += ps.value;
                }
                ch.H(m, k) = sum;
            }
        }
        return ch;
    }

    LinkQuality sinr_and_rate(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const std::vector<double> &noise)
    {
        const int K = static_cast<int>(H.cols());
        if (W.rows() != H.rows() || W.cols() != K || static_cast<int>(noise.size()) != K)
            throw std::invalid_argument("sinr_and_rate: dimension mismatch");

        const Eigen::MatrixXcd A = H.adjoint() * W; // A(k, j) = h_k^H w_j
        LinkQuality q;
        q.sinr.resize(K);
        q.rate.resize(K);
        for (int k = 0; k < K; ++k)
        {
            double interf = noise[k];
            for (int j = 0; j < K; ++j)
                if (j != k)
                    interf += std::norm(A(k, j));
            q.sinr(k) = std::norm(A(k, k)) / interf;
            q.rate(k) = std::log2(1.0 + q.sinr(k));
        }
        return q;
    }

    double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
}
