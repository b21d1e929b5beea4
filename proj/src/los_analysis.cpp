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

#include "polara/los_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace polara::los
{
    namespace
    {
        void require_unit(const Vec3 &f)
        {
            if (std::abs(f.norm() - 1.0) > 1e-10)
                throw std::invalid_argument("los: direction must be a unit vector");
        }

        double to_db(double x) { return 10.0 * std::log10(x); }
    }

    double eta_star(const Vec2c &t)
    {
        const double s = std::abs(t(0)) + std::abs(t(1));
        return s * s;
    }

    double eta_fixed(const Vec3 &f)
    {
        require_unit(f);
        const double s = std::abs(f.x() * f.y()) + std::abs(1.0 - f.y() * f.y());
        return s * s;
    }

    double eta_rot(const Vec3 &f)
    {
        require_unit(f);
        const double a = f.x() + f.y(), b = f.x() - f.y();
        return 2.0 - std::min(a * a, b * b);
    }

    Vec2c received_field(const Vec3 &f, const Rotation &R)
    {
        const Vec3 field = (Mat3::Identity() - f * f.transpose()) * R.col(1);
        return Vec2c(field.x(), field.y());
    }

    Rotation optimal_rotation_los(const Vec3 &f)
    {
        require_unit(f);
        const double plus = (f.x() + f.y()) * (f.x() + f.y());
        const double minus = (f.x() - f.y()) * (f.x() - f.y());
        const double first = plus <= minus ? 1.0 : -1.0;

        const Mat3 proj = Mat3::Identity() - f * f.transpose();
        Vec3 r2 = Vec3::Zero();
        for (double s : {first, -first})
        {
            const Vec3 q = proj * Vec3(1.0, s, 0.0);
            if (q.norm() > 1e-9)
            {
                r2 = q.normalized();
                break;
            }
        }
        // Unreachable for unit f since the chosen sign keeps |q|^2 >= 1; kept for safety.
        if (r2.isZero())
            r2 = transverse_basis(f).Z.col(0);

        Rotation R;
        R.col(2) = f;
        R.col(1) = r2;
        R.col(0) = r2.cross(f);
        return R;
    }

    GainRatio gain_ratio(const Vec3 &f, double p)
    {
        require_unit(f);
        GainRatio out;
        const double cos_fix = std::clamp(f.z(), -1.0, 1.0);
        const double pol = eta_rot(f) / eta_fixed(f);
        out.polarization_db = to_db(pol);
        if (cos_fix <= 0.0)
        {
            out.unbounded = true;
            out.directional_db = std::numeric_limits<double>::infinity();
            out.total_db = std::numeric_limits<double>::infinity();
            return out;
        }
        const double directional = 1.0 / std::pow(cos_fix, 2.0 * p);
        out.directional_db = to_db(directional);
        out.total_db = to_db(directional * pol);
        return out;
    }

    Heatmap coverage_heatmap(double plane_z, double extent, int grid_n, double p)
    {
        if (!(plane_z > 0.0))
            throw std::invalid_argument("coverage_heatmap: plane height must be positive");
        if (grid_n < 1 || extent < 0.0)
            throw std::invalid_argument("coverage_heatmap: need grid_n >= 1 and extent >= 0");

        PatternParams pp;
        pp.p = p;
        const double g_max = 2.0 * pp.peak_gain();
        const double step = grid_n > 1 ? 2.0 * extent / (grid_n - 1) : 0.0;

        Heatmap map;
        map.grid_n = grid_n;
        const size_t n = static_cast<size_t>(grid_n) * grid_n;
        map.x.reserve(n);
        map.y.reserve(n);
        map.fixed_db.reserve(n);
        map.rotated_db.reserve(n);

        for (int ix = 0; ix < grid_n; ++ix)
        {
            const double x = grid_n > 1 ? -extent + ix * step : 0.0;
            for (int iy = 0; iy < grid_n; ++iy)
            {
                const double y = grid_n > 1 ? -extent + iy * step : 0.0;
                const Vec3 f = Vec3(x, y, plane_z).normalized();
                const double g_fix = gain_pattern(std::acos(std::clamp(f.z(), -1.0, 1.0)), pp) * eta_fixed(f);
                const double g_rot = pp.peak_gain() * eta_rot(f);
                map.x.push_back(x);
                map.y.push_back(y);
                map.fixed_db.push_back(to_db(g_fix / g_max));
                map.rotated_db.push_back(to_db(g_rot / g_max));
            }
        }
        return map;
    }

    void write_heatmap_csv(const Heatmap &map, std::ostream &os)
    {
        const auto old = os.precision(std::numeric_limits<double>::max_digits10);
        os << "x_m,y_m,gain_fixed_db,gain_rot_db\n";
        for (size_t i = 0; i < map.x.size(); ++i)
            os << map.x[i] << ',' << map.y[i] << ',' << map.fixed_db[i] << ',' << map.rotated_db[i] << '\n';
        os.precision(old);
    }
}
