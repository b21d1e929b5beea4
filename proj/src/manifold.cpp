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

#include "polara/manifold.hpp"

#include "polara/geometry.hpp"

namespace polara
{
    RotationManifold::Point RotationManifold::riem_grad(const Point &x, const Point &G)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
        {
            const Mat3 A = x[m].transpose() * G[m];
            out[m] = G[m] - x[m] * (0.5 * (A + A.transpose()));
        }
        return out;
    }

    RotationManifold::Point RotationManifold::retract(const Point &x, const Point &xi, double t)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
            out[m] = project_so3(x[m] + t * xi[m]);
        return out;
    }

    SphereManifold::Point SphereManifold::riem_grad(const Point &x, const Point &G)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
            out[m] = G[m] - x[m] * x[m].dot(G[m]);
        return out;
    }

    SphereManifold::Point SphereManifold::retract(const Point &x, const Point &xi, double t)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
            out[m] = (x[m] + t * xi[m]).normalized();
        return out;
    }

    CircleManifold::Point CircleManifold::riem_grad(const Point &x, const Point &G)
    {
        Point out(x.size());
        for (size_t k = 0; k < x.size(); ++k)
            for (int i = 0; i < 2; ++i)
                out[k](i) = G[k](i) - std::real(G[k](i) * std::conj(x[k](i))) * x[k](i);
        return out;
    }

    CircleManifold::Point CircleManifold::retract(const Point &x, const Point &xi, double t)
    {
        Point out(x.size());
        for (size_t k = 0; k < x.size(); ++k)
            for (int i = 0; i < 2; ++i)
            {
                const cplx y = x[k](i) + t * xi[k](i);
                out[k](i) = std::abs(y) > 0.0 ? y / std::abs(y) : x[k](i);
            }
        return out;
    }

    BoresightManifold::Point BoresightManifold::riem_grad(const Point &x, const Point &G)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
            out[m] = G[m] - x[m] * x[m].dot(G[m]);
        return out;
    }

    BoresightManifold::Point BoresightManifold::retract(const Point &x, const Point &xi, double t)
    {
        Point out(x.size());
        for (size_t m = 0; m < x.size(); ++m)
            out[m] = (x[m] + t * xi[m]).normalized();
        return out;
    }
}
