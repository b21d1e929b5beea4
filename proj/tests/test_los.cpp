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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace polara;

namespace
{
    // max over unit-modulus u of |u^H t|^2, brute force over the relative phase.
    double phase_grid(const Vec2c &t, int n)
    {
        double best = 0.0;
        for (int i = 0; i < n; ++i)
            best = std::max(best, std::norm(t(0) + std::polar(1.0, 2 * M_PI * i / n) * t(1)));
        return best;
    }

    // max over unit r orthogonal to f of (|r_x| + |r_y|)^2.
    double transverse_grid(const Vec3 &f, int n)
    {
        Vec3 a = std::abs(f.z()) < 0.9 ? Vec3(0, 0, 1).cross(f) : Vec3(1, 0, 0).cross(f);
        a.normalize();
        const Vec3 b = f.cross(a);
        double best = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double t = 2 * M_PI * i / n;
            const Vec3 r = std::cos(t) * a + std::sin(t) * b;
            best = std::max(best, std::pow(std::abs(r.x()) + std::abs(r.y()), 2));
        }
        return best;
    }

    Vec3 upper_direction(std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double z = u(rng), ph = 2 * M_PI * u(rng), r = std::sqrt(1 - z * z);
        return Vec3(r * std::cos(ph), r * std::sin(ph), z);
    }
}

TEST_SUITE("los_analysis")
{
    TEST_CASE("worked example at a 60 degree misalignment")
    {
        const Vec3 f(std::sqrt(3.0 / 8.0), std::sqrt(3.0 / 8.0), 0.5);
        const double p = 2.0, G0 = 10.0;
        CHECK(misalignment_angle(Rotation::Identity(), f) == doctest::Approx(M_PI / 3).epsilon(1e-12));

        PatternParams pp;
        pp.p = p;
        const double g_fix = gain_pattern(M_PI / 3, pp) * los::eta_fixed(f);
        const double g_rot = pp.peak_gain() * los::eta_rot(f);
        CHECK(std::abs(g_fix - G0 / 16) <= 1e-9);
        CHECK(std::abs(g_rot - 2 * G0) <= 1e-9);

        const los::GainRatio r = los::gain_ratio(f, p);
        CHECK(!r.unbounded);
        CHECK(std::abs(r.total_db - 10 * std::log10(32.0)) <= 1e-9);
        CHECK(std::abs(r.directional_db - 10 * std::log10(16.0)) <= 1e-9);
        CHECK(std::abs(r.polarization_db - 10 * std::log10(2.0)) <= 1e-9);
        // Reported as roughly 15.1 dB.
        CHECK(std::abs(r.total_db - 15.1) < 0.05);
    }

    TEST_CASE("eta_star equals the phase-grid maximum")
    {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> n;
        for (int i = 0; i < 200; ++i)
        {
            const Vec2c t(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
            CHECK(std::abs(los::eta_star(t) - phase_grid(t, 10000)) <= 1e-6 * los::eta_star(t));
        }
        CHECK(los::eta_star(Vec2c(1.0, 0.0)) == 1.0);
        CHECK(los::eta_star(Vec2c(1.0, cplx(0.0, 1.0))) == doctest::Approx(4.0));
    }

    TEST_CASE("closed-form efficiencies match brute-force searches")
    {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 100; ++i)
        {
            const Vec3 f = upper_direction(rng);
            const Vec2c t = los::received_field(f, Rotation::Identity());
            CHECK(std::abs(los::eta_fixed(f) - phase_grid(t, 10000)) <= 1e-4);
            CHECK(std::abs(los::eta_rot(f) - transverse_grid(f, 100000)) <= 1e-4);
        }
        CHECK(los::eta_rot(unit_x()) == doctest::Approx(1.0));
        CHECK(los::eta_fixed(unit_z()) == doctest::Approx(1.0));
        CHECK(los::eta_rot(unit_z()) == doctest::Approx(2.0));
        CHECK_THROWS_AS(los::eta_fixed(Vec3(0, 0, 2)), std::invalid_argument);
    }

    TEST_CASE("optimal rotation attains eta_rot with boresight on f")
    {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 200; ++i)
        {
            const Vec3 f = upper_direction(rng);
            const Rotation R = los::optimal_rotation_los(f);
            CHECK(is_rotation(R));
            CHECK((R.col(2) - f).norm() < 1e-10);
            CHECK(los::eta_star(los::received_field(f, R)) >= los::eta_rot(f) - 1e-10);
            CHECK(los::eta_star(los::received_field(f, R)) >= transverse_grid(f, 2000) - 1e-4);
        }
    }

    TEST_CASE("rotation never loses to the fixed antenna")
    {
        std::mt19937_64 rng(14);
        for (int i = 0; i < 500; ++i)
        {
            const Vec3 f = upper_direction(rng);
            CHECK(los::eta_rot(f) >= los::eta_fixed(f) - 1e-12);
            CHECK(los::eta_rot(f) >= 1.0 - 1e-12);
            CHECK(los::eta_rot(f) <= 2.0 + 1e-12);
            const los::GainRatio g = los::gain_ratio(f, 2.0);
            if (!g.unbounded)
                CHECK(g.total_db >= -1e-12);
        }
        const los::GainRatio side = los::gain_ratio(unit_x(), 2.0);
        CHECK(side.unbounded);
        CHECK(std::isinf(side.total_db));
    }

    TEST_CASE("coverage heatmap")
    {
        const los::Heatmap map = los::coverage_heatmap(30.0, 100.0, 41, 2.0);
        REQUIRE(map.x.size() == 41u * 41u);
        for (size_t i = 0; i < map.x.size(); ++i)
        {
            CHECK(map.rotated_db[i] >= map.fixed_db[i] - 1e-12);
            CHECK(map.rotated_db[i] >= 10 * std::log10(0.5) - 1e-12);
            const double eps = std::atan2(std::hypot(map.x[i], map.y[i]), 30.0);
            if (eps > 70.0 * M_PI / 180.0)
                CHECK(map.fixed_db[i] < -20.0);
        }
        // x is the outer index.
        CHECK(map.x[0] == map.x[1]);
        CHECK(map.y[0] != map.y[1]);
        // Boresight cell: full directional gain, one of two polarization halves.
        const size_t centre = 20 * 41 + 20;
        CHECK(map.x[centre] == doctest::Approx(0.0));
        CHECK(map.fixed_db[centre] == doctest::Approx(-3.0103).epsilon(1e-4));

        std::ostringstream os;
        los::write_heatmap_csv(los::coverage_heatmap(30.0, 100.0, 3, 2.0), os);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "x_m,y_m,gain_fixed_db,gain_rot_db");
        int rows = 0;
        while (std::getline(is, line))
            ++rows;
        CHECK(rows == 9);

        CHECK_THROWS_AS(los::coverage_heatmap(0.0, 10.0, 3, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(los::coverage_heatmap(30.0, 10.0, 0, 2.0), std::invalid_argument);
    }
}
