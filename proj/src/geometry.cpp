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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polara
{
    namespace
    {
        constexpr double unit_input_tol = 1e-10;

        void require_unit(const Vec3 &v, const char *what)
        {
            if (std::abs(v.norm() - 1.0) > unit_input_tol)
                throw std::invalid_argument(std::string(what) + " must be a unit vector");
        }
    }

    const Mat32 &port_basis()
    {
        static const Mat32 E = []
        {
            Mat32 e = Mat32::Zero();
            e(0, 0) = 1.0;
            e(1, 1) = 1.0;
            return e;
        }();
        return E;
    }

    std::vector<Vec3> build_upa_positions(int Mx, int My, double spacing)
    {
        if (Mx < 1 || My < 1)
            throw std::invalid_argument("build_upa_positions: array dimensions must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("build_upa_positions: spacing must be positive");

        std::vector<Vec3> pos;
        pos.reserve(static_cast<size_t>(Mx) * My);
        for (int nx = 0; nx < Mx; ++nx)
            for (int ny = 0; ny < My; ++ny)
                pos.emplace_back((nx - 0.5 * (Mx - 1)) * spacing, (ny - 0.5 * (My - 1)) * spacing, 0.0);
        return pos;
    }

    TransverseBasis transverse_basis(const Vec3 &f)
    {
        require_unit(f, "transverse_basis: f");
        Vec3 z1 = unit_z().cross(f);
        const double n = z1.norm();
        if (n > 1e-9)
            z1 /= n;
        else
            z1 = unit_x();
        Vec3 z2 = f.cross(z1);
        z2.normalize();

        TransverseBasis tb;
        tb.Z.col(0) = z1;
        tb.Z.col(1) = z2;
        tb.f = f;
        return tb;
    }

    double misalignment_angle(const Rotation &R, const Vec3 &f)
    {
        const double c = R.col(2).dot(f);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    Rotation project_so3(const Mat3 &Y)
    {
        Eigen::JacobiSVD<Mat3> svd(Y, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec3 &s = svd.singularValues();
        if (!(s(2) > 1e-12 * std::max(1.0, s(0))))
            throw std::invalid_argument("project_so3: input is rank deficient");

        const Mat3 &A = svd.matrixU();
        const Mat3 &B = svd.matrixV();
        Vec3 d(1.0, 1.0, (A * B.transpose()).determinant() < 0.0 ? -1.0 : 1.0);
        return A * d.asDiagonal() * B.transpose();
    }

    Rotation rotation_from_axis_angle(const Vec3 &axis, double angle)
    {
        require_unit(axis, "rotation_from_axis_angle: axis");
        Mat3 K;
        K << 0.0, -axis.z(), axis.y(),
            axis.z(), 0.0, -axis.x(),
            -axis.y(), axis.x(), 0.0;
        return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
    }

    Rotation geodesic_from_z(const Vec3 &b)
    {
        const double x = b.x(), y = b.y(), z = b.z();
        const double den = 1.0 + z;
        if (den < 1e-12)
            return Vec3(1.0, -1.0, -1.0).asDiagonal();

        Rotation R;
        R << 1.0 - x * x / den, -x * y / den, x,
            -x * y / den, 1.0 - y * y / den, y,
            -x, -y, z;
        return R;
    }

    std::array<Mat3, 3> geodesic_from_z_jacobian(const Vec3 &b)
    {
        const double x = b.x(), y = b.y(), z = b.z();
        const double den = std::max(1.0 + z, 1e-12);
        const double den2 = den * den;

        std::array<Mat3, 3> J;
        J[0] << -2.0 * x / den, -y / den, 1.0,
            -y / den, 0.0, 0.0,
            -1.0, 0.0, 0.0;
        J[1] << 0.0, -x / den, 0.0,
            -x / den, -2.0 * y / den, 1.0,
            0.0, -1.0, 0.0;
        J[2] << x * x / den2, x * y / den2, 0.0,
            x * y / den2, y * y / den2, 0.0,
            0.0, 0.0, 1.0;
        return J;
    }

    Rotation clip_to_cone(const Rotation &R, double theta_max)
    {
        if (theta_max >= M_PI)
            return R;
        const Vec3 b = R.col(2);
        const double eps = std::acos(std::clamp(b.z(), -1.0, 1.0));
        if (eps <= theta_max)
            return R;

        Vec3 axis = b.cross(unit_z());
        const double n = axis.norm();
        axis = n > 1e-12 ? Vec3(axis / n) : unit_x();
        return project_so3(rotation_from_axis_angle(axis, eps - std::max(theta_max, 0.0)) * R);
    }

    double orthogonality_residual(const Rotation &R)
    {
        return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
    }

    bool is_rotation(const Rotation &R, double tol)
    {
        return orthogonality_residual(R) <= tol && std::abs(R.determinant() - 1.0) <= tol;
    }

    bool is_unit(const Vec3 &v, double tol)
    {
        return std::abs(v.norm() - 1.0) <= tol;
    }
}
