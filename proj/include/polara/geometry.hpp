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
#include <array>
#include <vector>

namespace polara
{
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;
    using Mat32 = Eigen::Matrix<double, 3, 2>;

    // Columns r1, r2, r3 are the rotated H-port axis, V-port axis and boresight.
    using Rotation = Eigen::Matrix3d;

    inline const Vec3 &unit_x() { static const Vec3 v(1.0, 0.0, 0.0); return v; }
    inline const Vec3 &unit_y() { static const Vec3 v(0.0, 1.0, 0.0); return v; }
    inline const Vec3 &unit_z() { static const Vec3 v(0.0, 0.0, 1.0); return v; }

    // Global H/V port reference basis [e_x, e_y].
    const Mat32 &port_basis();

    // Orthonormal basis of the plane orthogonal to a propagation direction f.
    struct TransverseBasis
    {
        Mat32 Z;
        Vec3 f;
    };

    // Uniform planar array in the x-y plane, centered at the origin.
    // Element (nx, ny) is stored at index nx * My + ny.
    std::vector<Vec3> build_upa_positions(int Mx, int My, double spacing);

    // z1 = normalize(e_z x f) (or e_x at the poles), z2 = f x z1.
    TransverseBasis transverse_basis(const Vec3 &f);

    // Angle between the boresight column of R and a unit direction, in [0, pi].
    double misalignment_angle(const Rotation &R, const Vec3 &f);

    // Closest rotation to Y in Frobenius norm: A diag(1, 1, det(A B^T)) B^T from Y = A S B^T.
    Rotation project_so3(const Mat3 &Y);

    // Rodrigues rotation about a unit axis.
    Rotation rotation_from_axis_angle(const Vec3 &axis, double angle);

    // Minimal (zero-roll) rotation taking e_z onto the unit vector b.
    // Undefined at b = -e_z; there the rotation by pi about e_x is returned.
    Rotation geodesic_from_z(const Vec3 &b);

    // Partial derivatives of geodesic_from_z's closed form with respect to b_x, b_y, b_z,
    // treating b as a free vector of R^3.
    std::array<Mat3, 3> geodesic_from_z_jacobian(const Vec3 &b);

    // Rotate the boresight of R about r3 x e_z so that it lies inside the cone
    // of half-angle theta_max around e_z. R is returned unchanged if it already does.
    Rotation clip_to_cone(const Rotation &R, double theta_max);

    double orthogonality_residual(const Rotation &R); // ||R^T R - I||_max
    bool is_rotation(const Rotation &R, double tol = 1e-10);
    bool is_unit(const Vec3 &v, double tol = 1e-12);
}
