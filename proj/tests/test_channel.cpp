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
#include "polara/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace polara;

namespace
{
    // Reference channel built straight from the layout with 3D field vectors.
    cplx reference_channel(const SceneLayout &lay, int m, int k, const Rotation &R, const Vec2c &v, const Vec2c &u)
    {
        const double lambda = lay.pattern.wavelength;
        const double p = lay.pattern.p;
        const double G0 = 2.0 * (2.0 * p + 1.0);
        const double A = lambda * lambda / (4.0 * M_PI);
        const Eigen::Vector3cd port_field = R.col(0).cast<cplx>() * v(0) + R.col(1).cast<cplx>() * v(1);

        auto basis = [](const Vec3 &f) {
            Vec3 z1 = Vec3(0, 0, 1).cross(f);
            z1 = z1.norm() > 1e-9 ? Vec3(z1.normalized()) : Vec3(1, 0, 0);
            Eigen::Matrix<double, 3, 2> Z;
            Z.col(0) = z1;
            Z.col(1) = f.cross(z1);
            return Z;
        };
        auto pattern = [&](const Vec3 &f) {
            const double c = f.dot(R.col(2));
            return c > 0.0 ? std::pow(c, p) : 0.0;
        };
        auto receive = [&](const Eigen::Vector3cd &e) { return std::conj(u(0)) * e(0) + std::conj(u(1)) * e(1); };

        const Vec3 d0v = lay.users[k] - lay.antennas[m];
        const double d0 = d0v.norm();
        const Vec3 f0 = d0v / d0;
        const Eigen::Vector3cd e0 = (Mat3::Identity() - f0 * f0.transpose()).cast<cplx>() * port_field;
        cplx h = std::sqrt(A * G0 / (4 * M_PI * d0 * d0)) * std::polar(1.0, -2 * M_PI * d0 / lambda) * pattern(f0) * receive(e0);

        const int L = static_cast<int>(lay.scatterers.size());
        for (int l = 0; l < L; ++l)
        {
            const Vec3 a = lay.scatterers[l] - lay.antennas[m], b = lay.users[k] - lay.scatterers[l];
            const double d = a.norm() + b.norm();
            const Vec3 ft = a.normalized(), fr = b.normalized();
            const Eigen::Matrix<double, 3, 2> Zt = basis(ft), Zr = basis(fr);
            const Eigen::Vector2cd incident = Zt.transpose().cast<cplx>() * port_field;
            const Eigen::Vector3cd e = Zr.cast<cplx>() * (lay.coupling[k * L + l].M * incident);
            h += std::sqrt(A * G0 * lay.scatter_loss / (4 * M_PI * d * d)) * std::polar(1.0, -2 * M_PI * d / lambda) *
                 pattern(ft) * receive(e);
        }
        return h;
    }

    Rotation random_rotation(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n;
        Mat3 Y;
        for (int i = 0; i < 9; ++i)
            Y(i) = n(rng);
        return project_so3(Y);
    }
}

TEST_SUITE("channel")
{
    TEST_CASE("cosine-power pattern")
    {
        PatternParams pp;
        pp.p = 2.0;
        CHECK(pp.peak_gain() == 10.0);
        CHECK(gain_pattern(0.0, pp) == doctest::Approx(10.0));
        CHECK(gain_pattern(M_PI / 3, pp) == doctest::Approx(10.0 / 16.0));
        pp.p = 3.0;
        CHECK(gain_pattern(2.0, pp) == 0.0);
        pp.p = 0.0;
        CHECK(pp.peak_gain() == 2.0);
        CHECK(gain_pattern(1.5, pp) == doctest::Approx(2.0));
    }

    TEST_CASE("Friis LoS path loss")
    {
        const PatternParams pp = PatternParams::isotropic_aperture(2.0, 0.125);
        CHECK(pp.aperture == doctest::Approx(0.125 * 0.125 / (4 * M_PI)));
        const double d = 40.0;
        CHECK(los_pathloss(d, 0.0, pp) == doctest::Approx(pp.aperture * 10.0 / (4 * M_PI * d * d)));
        CHECK(los_pathloss(d, M_PI / 2 + 0.1, pp) == 0.0);
        CHECK_THROWS_AS(los_pathloss(0.0, 0.0, pp), std::invalid_argument);
        CHECK_THROWS_AS(los_pathloss(-1.0, 0.0, pp), std::invalid_argument);
    }

    TEST_CASE("coupling matrix magnitudes and XPD")
    {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100; ++i)
        {
            const CouplingMatrix c = sample_coupling(0.9, rng);
            CHECK(std::norm(c.M(0, 0)) == doctest::Approx(0.9));
            CHECK(std::norm(c.M(1, 1)) == doctest::Approx(0.9));
            CHECK(std::norm(c.M(0, 1)) == doctest::Approx(0.1));
            CHECK(std::norm(c.M(1, 0)) == doctest::Approx(0.1));
            for (double ph : c.phases)
            {
                CHECK(ph > 0.0);
                CHECK(ph <= 2 * M_PI);
            }
            CHECK(c.xpd() == doctest::Approx(9.0));
        }
        CHECK_THROWS_AS(sample_coupling(-0.1, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_coupling(1.1, rng), std::invalid_argument);
    }

    TEST_CASE("assembled channels match the reference model")
    {
        ScenarioConfig cfg;
        cfg.mx = 2;
        cfg.my = 2;
        cfg.num_users = 3;
        cfg.num_scatterers = 4;
        std::mt19937_64 rng(8);
        std::normal_distribution<double> n;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const Scene scene = generate_scene(cfg, seed);
            RotationSet R;
            TxPolSet V;
            RxPolSet U;
            for (int m = 0; m < 4; ++m)
            {
                R.push_back(seed == 1 ? Rotation(Rotation::Identity()) : random_rotation(rng));
                V.push_back(Vec2c(cplx(n(rng), n(rng)), cplx(n(rng), n(rng))).normalized());
            }
            for (int k = 0; k < 3; ++k)
                U.push_back(Vec2c(std::polar(1.0, n(rng)), std::polar(1.0, n(rng))));
            const ChannelSet ch = assemble_channels(R, V, U, scene);
            CHECK((ch.rebuild() - ch.H).norm() <= 1e-14 * ch.H.norm());
            for (int m = 0; m < 4; ++m)
                for (int k = 0; k < 3; ++k)
                {
                    const cplx ref = reference_channel(scene.layout(), m, k, R[m], V[m], U[k]);
                    CHECK(std::abs(ch.H(m, k) - ref) <= 1e-12 * std::abs(ref) + 1e-20);
                    cplx direct = channel_coefficient_los(m, k, R[m], V[m], U[k], scene);
                    for (int l = 1; l <= 4; ++l)
                        direct += channel_coefficient_nlos(m, k, l, R[m], V[m], U[k], scene);
                    CHECK(std::abs(ch.H(m, k) - direct) <= 1e-12 * std::abs(ref) + 1e-20);
                }
        }
    }

    TEST_CASE("without scatterers the channel is the LoS term")
    {
        ScenarioConfig cfg;
        cfg.mx = 1;
        cfg.my = 2;
        cfg.num_users = 2;
        cfg.num_scatterers = 0;
        const Scene scene = generate_scene(cfg, 3);
        const RotationSet R(2, Rotation::Identity());
        const TxPolSet V(2, Vec2c(0.0, 1.0));
        const RxPolSet U(2, Vec2c(1.0, 1.0));
        const ChannelSet ch = assemble_channels(R, V, U, scene);
        for (int m = 0; m < 2; ++m)
            for (int k = 0; k < 2; ++k)
                CHECK(std::abs(ch.H(m, k) - channel_coefficient_los(m, k, R[m], V[m], U[k], scene)) <= 1e-15);
    }

    TEST_CASE("back-hemisphere paths contribute nothing")
    {
        ScenarioConfig cfg;
        cfg.mx = 1;
        cfg.my = 1;
        cfg.num_users = 2;
        cfg.num_scatterers = 3;
        const Scene scene = generate_scene(cfg, 4);
        // Boresight pointing straight down: every user and scatterer is above the array.
        const RotationSet R{rotation_from_axis_angle(unit_x(), M_PI)};
        const ChannelSet ch = assemble_channels(R, TxPolSet{Vec2c(0.0, 1.0)}, RxPolSet(2, Vec2c(1.0, 1.0)), scene);
        CHECK(ch.H.norm() == 0.0);
        for (const PathState &ps : ch.paths)
            CHECK(ps.amp == 0.0);
    }

    TEST_CASE("dimension checks")
    {
        ScenarioConfig cfg;
        cfg.mx = 1;
        cfg.my = 2;
        cfg.num_users = 2;
        cfg.num_scatterers = 1;
        const Scene scene = generate_scene(cfg, 5);
        CHECK_THROWS_AS(assemble_channels(RotationSet(1, Rotation::Identity()), TxPolSet(2, Vec2c(0, 1)), RxPolSet(2, Vec2c(1, 1)), scene),
                        std::invalid_argument);
        CHECK_THROWS_AS(assemble_channels(RotationSet(2, Rotation::Identity()), TxPolSet(2, Vec2c(0, 1)), RxPolSet(1, Vec2c(1, 1)), scene),
                        std::invalid_argument);
        CHECK_THROWS_AS(channel_coefficient_nlos(0, 0, 2, Rotation::Identity(), Vec2c(0, 1), Vec2c(1, 1), scene), std::out_of_range);

        SceneLayout lay = scene.layout();
        lay.users[0] = lay.antennas[0];
        CHECK_THROWS_AS(Scene{lay}, std::invalid_argument);
    }

    TEST_CASE("SINR and rate")
    {
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd W = Eigen::MatrixXcd::Identity(2, 2) * std::sqrt(3.0);
        const LinkQuality q = sinr_and_rate(W, H, {1.0, 1.0});
        CHECK(q.sinr(0) == doctest::Approx(3.0));
        CHECK(q.rate(1) == doctest::Approx(2.0));

        // Interference from the other beam.
        H(0, 1) = 1.0;
        const LinkQuality q2 = sinr_and_rate(W, H, {1.0, 1.0});
        CHECK(q2.sinr(1) == doctest::Approx(3.0 / (3.0 + 1.0)));
        CHECK_THROWS_AS(sinr_and_rate(W, H, {1.0}), std::invalid_argument);
    }

    TEST_CASE("power unit conversions")
    {
        CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
        CHECK(dbm_to_watt(-80.0) == doctest::Approx(1e-11));
        CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0));
    }
}
