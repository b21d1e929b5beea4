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

#include "polara/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace polara;

namespace
{
    Mat3 gaussian_mat3(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n;
        Mat3 Y;
        for (int i = 0; i < 9; ++i)
            Y(i) = n(rng);
        return Y;
    }

    Vec3 random_unit(std::mt19937_64 &rng)
    {
        return gaussian_mat3(rng).col(0).normalized();
    }
}

TEST_SUITE("geometry")
{
    TEST_CASE("upa positions are row-major with the requested spacing")
    {
        const auto pos = build_upa_positions(2, 3, 0.5);
        REQUIRE(pos.size() == 6);
        // m = nx * My + ny
        CHECK((pos[1] - pos[0]).norm() == doctest::Approx(0.5));
        CHECK((pos[3] - pos[0]).norm() == doctest::Approx(0.5));
        CHECK(pos[1].x() == doctest::Approx(pos[0].x()));
        CHECK(pos[3].y() == doctest::Approx(pos[0].y()));
        Vec3 c = Vec3::Zero();
        for (const Vec3 &p : pos)
        {
            c += p;
            CHECK(p.z() == 0.0);
        }
        CHECK(c.norm() < 1e-12);

        CHECK_THROWS_AS(build_upa_positions(0, 3, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(build_upa_positions(2, 0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(build_upa_positions(2, 2, 0.0), std::invalid_argument);
    }

    TEST_CASE("transverse basis is orthonormal and right-handed")
    {
        std::mt19937_64 rng(1);
        for (int i = 0; i < 200; ++i)
        {
            const Vec3 f = random_unit(rng);
            const TransverseBasis tb = transverse_basis(f);
            CHECK((tb.Z.transpose() * tb.Z - Eigen::Matrix2d::Identity()).norm() < 1e-12);
            CHECK((tb.Z.transpose() * f).norm() < 1e-12);
            CHECK((tb.Z.col(0).cross(tb.Z.col(1)) - f).norm() < 1e-12);
        }
        const TransverseBasis pole = transverse_basis(unit_z());
        CHECK((pole.Z.col(0) - unit_x()).norm() < 1e-15);
        CHECK((pole.Z.col(1) - unit_y()).norm() < 1e-15);
        CHECK_THROWS_AS(transverse_basis(Vec3(1.0, 1.0, 0.0)), std::invalid_argument);
    }

    TEST_CASE("misalignment angle")
    {
        CHECK(misalignment_angle(Rotation::Identity(), unit_z()) == 0.0);
        CHECK(misalignment_angle(Rotation::Identity(), unit_x()) == doctest::Approx(M_PI / 2));
        CHECK(misalignment_angle(Rotation::Identity(), -unit_z()) == doctest::Approx(M_PI));
        // Slightly over-long input is clamped rather than producing NaN.
        CHECK(misalignment_angle(Rotation::Identity(), Vec3(0.0, 0.0, 1.0 + 1e-15)) == 0.0);
    }

    TEST_CASE("project_so3 is the nearest rotation")
    {
        CHECK((project_so3(Mat3::Identity()) - Mat3::Identity()).norm() < 1e-15);
        std::mt19937_64 rng(2);
        for (int i = 0; i < 100; ++i)
        {
            const Mat3 Y = gaussian_mat3(rng);
            const Rotation R = project_so3(Y);
            CHECK(is_rotation(R));
            // Any other rotation is no closer.
            for (int j = 0; j < 20; ++j)
            {
                const Rotation Q = project_so3(gaussian_mat3(rng));
                CHECK((R - Y).norm() <= (Q - Y).norm() + 1e-12);
                // Small perturbation along the tangent space.
                const Mat3 S = gaussian_mat3(rng);
                const Rotation Rp = project_so3(R * (Mat3::Identity() + 1e-3 * (S - S.transpose())));
                CHECK((R - Y).norm() <= (Rp - Y).norm() + 1e-12);
            }
        }
        Mat3 singular = Mat3::Zero();
        singular(0, 0) = 1.0;
        CHECK_THROWS_AS(project_so3(singular), std::invalid_argument);
    }

    TEST_CASE("axis-angle rotations")
    {
        CHECK((rotation_from_axis_angle(unit_z(), 0.0) - Mat3::Identity()).norm() < 1e-15);
        const Rotation Rz = rotation_from_axis_angle(unit_z(), M_PI / 2);
        CHECK((Rz * unit_x() - unit_y()).norm() < 1e-15);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 50; ++i)
        {
            const Vec3 a = random_unit(rng);
            const Rotation R = rotation_from_axis_angle(a, 0.1 * i);
            CHECK(is_rotation(R));
            CHECK((R * a - a).norm() < 1e-13);
        }
        CHECK_THROWS_AS(rotation_from_axis_angle(Vec3(0.0, 0.0, 2.0), 1.0), std::invalid_argument);
    }

    TEST_CASE("zero-roll geodesic rotation and its Jacobian")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 100; ++i)
        {
            Vec3 b = random_unit(rng);
            if (b.z() < -0.9)
                b.z() = -b.z();
            const Rotation R = geodesic_from_z(b);
            CHECK(is_rotation(R));
            CHECK((R.col(2) - b).norm() < 1e-13);
            // The rotation axis e_z x b is left fixed: no roll about the boresight.
            const Vec3 axis = unit_z().cross(b);
            if (axis.norm() > 1e-6)
                CHECK((R * axis - axis).norm() < 1e-12);

            const auto J = geodesic_from_z_jacobian(b);
            for (int c = 0; c < 3; ++c)
            {
                const double h = 1e-6;
                Vec3 bp = b, bm = b;
                bp(c) += h;
                bm(c) -= h;
                const Mat3 fd = (geodesic_from_z(bp) - geodesic_from_z(bm)) / (2 * h);
                CHECK((fd - J[c]).norm() < 1e-7);
            }
        }
        CHECK((geodesic_from_z(unit_z()) - Mat3::Identity()).norm() == 0.0);
    }

    TEST_CASE("clip_to_cone")
    {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 100; ++i)
        {
            const Rotation R = project_so3(gaussian_mat3(rng));
            const double theta = 0.05 * (i % 30);
            const Rotation C = clip_to_cone(R, theta);
            CHECK(is_rotation(C));
            CHECK(C(2, 2) >= std::cos(theta) - 1e-12);
            if (std::acos(std::clamp(R(2, 2), -1.0, 1.0)) <= theta)
                CHECK((C - R).norm() == 0.0);
        }
        // Clipping a zero-roll rotation keeps it zero-roll.
        const Vec3 b = Vec3(0.8, 0.0, 0.6);
        const Rotation C = clip_to_cone(geodesic_from_z(b), 0.3);
        CHECK((C - geodesic_from_z(C.col(2))).norm() < 1e-12);
    }
}
