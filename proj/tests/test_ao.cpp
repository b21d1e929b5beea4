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

#include "polara/ao.hpp"
#include "polara/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace polara;

namespace
{
    ScenarioConfig small_config(double theta = M_PI / 5)
    {
        ScenarioConfig cfg;
        cfg.mx = 2;
        cfg.my = 2;
        cfg.num_users = 2;
        cfg.num_scatterers = 2;
        cfg.rate_bps_hz = 1.0;
        cfg.theta_max_rad = theta;
        return cfg;
    }

    AoConfig quick_ao()
    {
        AoConfig ao;
        ao.max_outer = 6;
        ao.rcg.max_iters = 40;
        return ao;
    }

    void check_trace_non_increasing(const SolutionState &s)
    {
        for (size_t i = 1; i < s.power_trace.size(); ++i)
            CHECK(s.power_trace[i] <= s.power_trace[i - 1] * (1.0 + 1e-9));
    }
}

TEST_SUITE("ao")
{
    TEST_CASE("scheme names round trip")
    {
        for (Scheme s : {Scheme::proposed, Scheme::rotation_only, Scheme::boresight_only, Scheme::fixed_upa})
            CHECK(scheme_from_string(to_string(s)) == s);
        CHECK_THROWS_AS(scheme_from_string("spinning"), std::invalid_argument);
    }

    TEST_CASE("scheme switches")
    {
        const AoConfig base;
        const AoConfig ro = configure_scheme(base, Scheme::rotation_only);
        CHECK(ro.update_R);
        CHECK_FALSE(ro.update_V);
        CHECK_FALSE(ro.update_U);
        const AoConfig bo = configure_scheme(base, Scheme::boresight_only);
        CHECK(bo.boresight_only);
        CHECK_FALSE(bo.update_V);
        const AoConfig fx = configure_scheme(base, Scheme::fixed_upa);
        CHECK_FALSE(fx.update_R);
        CHECK_FALSE(fx.update_V);
        CHECK_FALSE(fx.update_U);
        const AoConfig pr = configure_scheme(base, Scheme::proposed);
        CHECK(pr.update_R);
        CHECK(pr.update_V);
        CHECK(pr.update_U);
    }

    TEST_CASE("centroid steering stays inside the cone")
    {
        const Scene scene = generate_scene(small_config(M_PI / 10), 3);
        for (int m = 0; m < scene.num_antennas(); ++m)
        {
            const Rotation R = steer_toward_centroid(scene, m);
            CHECK(is_rotation(R));
            CHECK(R(2, 2) >= std::cos(M_PI / 10) - 1e-12);
        }
    }

    TEST_CASE("proposed scheme: feasible, monotone and within the cone")
    {
        for (std::uint64_t seed : {1u, 2u})
        {
            const Scene scene = generate_scene(small_config(), seed);
            const SolutionState s = scheme_variant(scene, quick_ao(), Scheme::proposed);
            REQUIRE(s.feasible);
            check_trace_non_increasing(s);
            const ChannelSet ch = assemble_channels(s.R, s.V, s.U, scene);
            CHECK(meets_targets(s.W, ch.H, scene, 1e-9));
            CHECK(s.W.squaredNorm() == doctest::Approx(s.power()).epsilon(1e-9));
            for (const Rotation &R : s.R)
            {
                CHECK(is_rotation(R));
                CHECK(R(2, 2) >= std::cos(M_PI / 5) - 1e-9);
            }
            for (const Vec2c &v : s.V)
                CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-10));
            for (const Vec2c &u : s.U)
            {
                CHECK(std::abs(u(0)) == doctest::Approx(1.0).epsilon(1e-10));
                CHECK(std::abs(u(1)) == doctest::Approx(1.0).epsilon(1e-10));
            }
            CHECK(s.trace.size() == s.power_trace.size());
        }
    }

    TEST_CASE("zero cone keeps every rotation at the identity")
    {
        const Scene scene = generate_scene(small_config(0.0), 4);
        const SolutionState s = scheme_variant(scene, quick_ao(), Scheme::proposed);
        REQUIRE(s.feasible);
        for (const Rotation &R : s.R)
            CHECK((R - Rotation::Identity()).norm() <= 1e-12);
    }

    TEST_CASE("zero cone: rotation_only and boresight_only match fixed_upa")
    {
        const Scene scene = generate_scene(small_config(0.0), 5);
        const AoConfig ao = quick_ao();
        const InitialStates init = initialize(scene, ao);
        const double fixed = scheme_variant(scene, ao, Scheme::fixed_upa, init).power();
        CHECK(scheme_variant(scene, ao, Scheme::rotation_only, init).power() == doctest::Approx(fixed).epsilon(1e-9));
        CHECK(scheme_variant(scene, ao, Scheme::boresight_only, init).power() == doctest::Approx(fixed).epsilon(1e-9));
    }

    TEST_CASE("frozen blocks stay frozen")
    {
        const Scene scene = generate_scene(small_config(), 6);
        const AoConfig ao = quick_ao();
        const InitialStates init = initialize(scene, ao);

        const SolutionState ro = scheme_variant(scene, ao, Scheme::rotation_only, init);
        for (const Vec2c &v : ro.V)
            CHECK((v - Vec2c(0, 1)).norm() == 0.0);
        for (const Vec2c &u : ro.U)
            CHECK((u - Vec2c(1, 1)).norm() == 0.0);
        check_trace_non_increasing(ro);

        const SolutionState fx = scheme_variant(scene, ao, Scheme::fixed_upa, init);
        for (const Rotation &R : fx.R)
            CHECK(R == Rotation::Identity());
        check_trace_non_increasing(fx);

        const SolutionState bo = scheme_variant(scene, ao, Scheme::boresight_only, init);
        for (const Rotation &R : bo.R)
            CHECK((R - geodesic_from_z(R.col(2))).norm() <= 1e-9);
        check_trace_non_increasing(bo);
    }

    TEST_CASE("rotatable schemes start no worse than the fixed array")
    {
        const Scene scene = generate_scene(small_config(), 7);
        const AoConfig ao = quick_ao();
        const InitialStates init = initialize(scene, ao);
        REQUIRE(init.common.feasible);
        REQUIRE(init.identity.feasible);
        CHECK(init.common.power() <= init.identity.power() * (1 + 1e-12));
    }

    TEST_CASE("beamformer update never raises power")
    {
        const Scene scene = generate_scene(small_config(), 8);
        const AoConfig ao = quick_ao();
        SolutionState s = initialize(scene, ao).common;
        const double before = s.W.squaredNorm();
        update_beamformers(scene, ao, s);
        CHECK(s.W.squaredNorm() <= before * (1 + 1e-12));
    }

    TEST_CASE("unreachable targets are reported infeasible")
    {
        ScenarioConfig cfg = small_config();
        cfg.mx = 1;
        cfg.my = 1;
        cfg.num_users = 2;
        const Scene scene = generate_scene(cfg, 9);
        // One antenna cannot serve two users at SINR 1 each.
        const SolutionState s = scheme_variant(scene, quick_ao(), Scheme::proposed);
        CHECK_FALSE(s.feasible);
        CHECK(s.infeasible_at_init);
    }

    TEST_CASE("resuming under a wider cone never raises power")
    {
        const Scene narrow = generate_scene(small_config(M_PI / 10), 11);
        const Scene wide = generate_scene(small_config(M_PI / 3), 11);
        const AoConfig ao = quick_ao();
        const SolutionState s = scheme_variant(narrow, ao, Scheme::proposed);
        REQUIRE(s.feasible);
        const SolutionState r = resume(wide, ao, Scheme::proposed, s);
        CHECK(r.feasible);
        CHECK(r.power() <= s.power());
        CHECK(r.power_trace.front() == doctest::Approx(s.power()).epsilon(1e-12));
        // The reverse direction leaves the cone.
        const SolutionState w = scheme_variant(wide, ao, Scheme::proposed);
        bool outside = false;
        for (const Rotation &R : w.R)
            outside = outside || R(2, 2) < std::cos(M_PI / 10) - 1e-12;
        if (outside)
            CHECK_THROWS_AS(resume(narrow, ao, Scheme::proposed, w), std::invalid_argument);
    }

    TEST_CASE("trace CSV layout")
    {
        const Scene scene = generate_scene(small_config(), 10);
        const SolutionState s = scheme_variant(scene, quick_ao(), Scheme::fixed_upa);
        std::ostringstream os;
        write_trace_csv(os, s);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "iter,power_w,power_dbm,feasible,block_reverts");
        size_t rows = 0;
        while (std::getline(is, line))
            ++rows;
        CHECK(rows == s.trace.size());
    }
}
