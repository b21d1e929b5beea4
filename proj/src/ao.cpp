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

#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace polara
{
    namespace
    {
        BeamformingProblem problem_for(const Eigen::MatrixXcd &H, const Scene &scene)
        {
            BeamformingProblem pb;
            pb.H = H;
            pb.targets = scene.sinr_targets();
            pb.noise = scene.noise();
            return pb;
        }

        // Minimum-power W for the given channels, or an empty matrix.
        Eigen::MatrixXcd solve_beamformers(const Eigen::MatrixXcd &H, const Scene &scene, const AoConfig &cfg)
        {
            const BeamformingProblem pb = problem_for(H, scene);
            Eigen::MatrixXcd W;
            const DcResult dc = dc_rank_one_loop(pb, cfg.dc);
            if (dc.status == BeamformingStatus::optimal)
            {
                try
                {
                    W = recover_beamformers(dc.D, pb, cfg.dc.rank_tol);
                }
                catch (const std::runtime_error &)
                {
                    W.resize(0, 0);
                }
            }
            if (W.size() == 0 && dc.status != BeamformingStatus::infeasible)
            {
                const OracleResult orc = duality_oracle(pb);
                if (orc.feasible)
                    W = orc.W;
            }
            if (W.size() != 0 && !meets_targets(W, H, scene, 1e-6))
                W.resize(0, 0);
            return W;
        }

        Vec3 clip_boresight(const Vec3 &b, double theta_max)
        {
            if (b.z() >= std::cos(theta_max))
                return b;
            const double rho = std::hypot(b.x(), b.y());
            if (rho == 0.0)
                return unit_z();
            const double s = std::sin(theta_max) / rho;
            return Vec3(s * b.x(), s * b.y(), std::cos(theta_max));
        }

        Design design_of(const SolutionState &st)
        {
            return Design{st.R, st.V, st.U};
        }

        // One penalized block update with constraint-triggered escalation. The point is replaced
        // only by a candidate that keeps every SINR target; otherwise it is left untouched.
        template <class Mf>
        bool block_update(typename Mf::Point &point,
                          const std::function<double(const typename Mf::Point &)> &objective,
                          const std::function<typename Mf::Point(const typename Mf::Point &)> &grad,
                          const std::function<typename Mf::Point(const typename Mf::Point &)> &finalize,
                          const std::function<bool(const typename Mf::Point &)> &cone_violated,
                          const std::function<bool(const typename Mf::Point &)> &feasible,
                          double *sinr_lambda, double *cone_lambda, double tau, const AoConfig &cfg, int &iterations)
        {
            typename Mf::Point start = point;
            for (int e = 0; e <= cfg.max_escalations; ++e)
            {
                RcgResult<typename Mf::Point> res = rcg_minimize<Mf>(objective, grad, start, cfg.rcg);
                iterations += res.iterations;
                const bool cone_bad = cone_violated(res.point);
                typename Mf::Point cand = finalize(res.point);
                if (feasible(cand))
                {
                    point = std::move(cand);
                    return true;
                }
                *sinr_lambda *= tau;
                if (cone_bad && cone_lambda)
                    *cone_lambda *= tau;
                start = std::move(res.point);
            }
            return false;
        }

        TraceRow row_for(const SolutionState &st, int iter, int reverts)
        {
            return TraceRow{iter, st.W.squaredNorm(), st.feasible, reverts};
        }
    }

    std::string to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::proposed:
            return "proposed";
        case Scheme::rotation_only:
            return "rotation_only";
        case Scheme::boresight_only:
            return "boresight_only";
        case Scheme::fixed_upa:
            return "fixed_upa";
        }
        return "unknown";
    }

    Scheme scheme_from_string(const std::string &name)
    {
        for (Scheme s : {Scheme::proposed, Scheme::rotation_only, Scheme::boresight_only, Scheme::fixed_upa})
            if (to_string(s) == name)
                return s;
        throw std::invalid_argument("unknown scheme: " + name);
    }

    bool meets_targets(const Eigen::MatrixXcd &W, const Eigen::MatrixXcd &H, const Scene &scene, double rtol)
    {
        const LinkQuality q = sinr_and_rate(W, H, scene.noise());
        const Eigen::VectorXd iota = scene.sinr_targets();
        for (int k = 0; k < iota.size(); ++k)
            if (!(q.sinr(k) >= iota(k) * (1.0 - rtol)))
                return false;
        return true;
    }

    Rotation steer_toward_centroid(const Scene &scene, int m)
    {
        const SceneLayout &lay = scene.layout();
        Vec3 c = Vec3::Zero();
        for (const Vec3 &u : lay.users)
            c += u;
        c /= static_cast<double>(lay.users.size());
        const Vec3 d = c - lay.antennas[m];
        if (d.norm() == 0.0)
            return Rotation::Identity();
        return geodesic_from_z(clip_boresight(d.normalized(), scene.theta_max()));
    }

    SolutionState initial_state(const Scene &scene, const AoConfig &cfg, RotationSet R)
    {
        SolutionState st;
        st.R = std::move(R);
        st.V.assign(scene.num_antennas(), Vec2c(0.0, 1.0));
        st.U.assign(scene.num_users(), Vec2c(1.0, 1.0));
        st.penalties = cfg.smoothing;

        const ChannelSet ch = assemble_channels(st.R, st.V, st.U, scene);
        st.W = solve_beamformers(ch.H, scene, cfg);
        if (st.W.size() == 0)
        {
            st.W = Eigen::MatrixXcd::Zero(scene.num_antennas(), scene.num_users());
            st.infeasible_at_init = true;
            st.feasible = false;
        }
        else
            st.feasible = true;
        st.power_trace.push_back(st.W.squaredNorm());
        st.trace.push_back(row_for(st, 0, 0));
        return st;
    }

    InitialStates initialize(const Scene &scene, const AoConfig &cfg)
    {
        cfg.smoothing.validate();
        InitialStates init;
        init.identity = initial_state(scene, cfg, RotationSet(scene.num_antennas(), Rotation::Identity()));
        init.common = init.identity;
        if (scene.theta_max() > 0.0)
        {
            RotationSet R;
            for (int m = 0; m < scene.num_antennas(); ++m)
                R.push_back(steer_toward_centroid(scene, m));
            SolutionState steered = initial_state(scene, cfg, std::move(R));
            if (!steered.infeasible_at_init &&
                (init.identity.infeasible_at_init || steered.power() <= init.identity.power()))
                init.common = std::move(steered);
        }
        return init;
    }

    bool update_beamformers(const Scene &scene, const AoConfig &cfg, SolutionState &st)
    {
        const ChannelSet ch = assemble_channels(st.R, st.V, st.U, scene);
        Eigen::MatrixXcd W = solve_beamformers(ch.H, scene, cfg);
        if (W.size() == 0 || !(W.squaredNorm() < st.W.squaredNorm()))
            return false;
        st.W = std::move(W);
        return true;
    }

    SolutionState run(const Scene &scene, const AoConfig &cfg, SolutionState st)
    {
        if (st.infeasible_at_init)
            return st;
        const double theta_max = scene.theta_max();
        const double cos_max = std::cos(theta_max);
        SmoothingParams &pen = st.penalties;

        auto feasible_with = [&](const Design &x) {
            return meets_targets(st.W, assemble_channels(x.R, x.V, x.U, scene).H, scene, cfg.sinr_rtol);
        };

        for (int it = 1; it <= cfg.max_outer; ++it)
        {
            int reverts = 0;
            std::array<int, 3> iters{0, 0, 0};
            pen = cfg.smoothing;

            // A zero cone leaves no room to move: the rotation block is locked.
            if (cfg.update_R && theta_max > 0.0)
            {
                bool ok;
                if (cfg.boresight_only)
                {
                    std::vector<Vec3> b;
                    for (const Rotation &R : st.R)
                        b.push_back(R.col(2));
                    const Design x = design_of(st);
                    ok = block_update<BoresightManifold>(
                        b,
                        [&](const std::vector<Vec3> &p) { return boresight_objective(p, x, st.W, scene, pen); },
                        [&](const std::vector<Vec3> &p) { return euclid_grad_boresight(p, x, st.W, scene, pen); },
                        [&](const std::vector<Vec3> &p) {
                            std::vector<Vec3> q(p.size());
                            for (size_t m = 0; m < p.size(); ++m)
                                q[m] = clip_boresight(p[m], theta_max);
                            return q;
                        },
                        [&](const std::vector<Vec3> &p) {
                            for (const Vec3 &bm : p)
                                if (bm.z() < cos_max)
                                    return true;
                            return false;
                        },
                        [&](const std::vector<Vec3> &p) {
                            Design y = x;
                            for (size_t m = 0; m < p.size(); ++m)
                                y.R[m] = geodesic_from_z(p[m]);
                            return feasible_with(y);
                        },
                        &pen.lambda2, &pen.lambda1, pen.tau, cfg, iters[0]);
                    if (ok)
                        for (size_t m = 0; m < b.size(); ++m)
                            st.R[m] = geodesic_from_z(b[m]);
                }
                else
                {
                    const Design x = design_of(st);
                    auto with = [&](const std::vector<Mat3> &p) {
                        Design y = x;
                        y.R = p;
                        return y;
                    };
                    ok = block_update<RotationManifold>(
                        st.R,
                        [&](const std::vector<Mat3> &p) { return smooth_objective(with(p), st.W, scene, pen, Block::rotation); },
                        [&](const std::vector<Mat3> &p) { return euclid_grad_R(with(p), st.W, scene, pen); },
                        [&](const std::vector<Mat3> &p) {
                            std::vector<Mat3> q(p.size());
                            for (size_t m = 0; m < p.size(); ++m)
                                q[m] = clip_to_cone(p[m], theta_max);
                            return q;
                        },
                        [&](const std::vector<Mat3> &p) {
                            for (const Mat3 &R : p)
                                if (R(2, 2) < cos_max)
                                    return true;
                            return false;
                        },
                        [&](const std::vector<Mat3> &p) { return feasible_with(with(p)); },
                        &pen.lambda2, &pen.lambda1, pen.tau, cfg, iters[0]);
                }
                reverts += ok ? 0 : 1;
            }

            if (cfg.update_V)
            {
                const Design x = design_of(st);
                auto with = [&](const std::vector<Vec2c> &p) {
                    Design y = x;
                    y.V = p;
                    return y;
                };
                const bool ok = block_update<SphereManifold>(
                    st.V,
                    [&](const std::vector<Vec2c> &p) { return smooth_objective(with(p), st.W, scene, pen, Block::tx_pol); },
                    [&](const std::vector<Vec2c> &p) {
                        std::vector<Vec2c> g = euclid_grad_V(with(p), st.W, scene, pen);
                        for (Vec2c &gi : g)
                            gi *= 2.0;
                        return g;
                    },
                    [](const std::vector<Vec2c> &p) { return p; },
                    [](const std::vector<Vec2c> &) { return false; },
                    [&](const std::vector<Vec2c> &p) { return feasible_with(with(p)); },
                    &pen.lambda3, nullptr, pen.tau, cfg, iters[1]);
                reverts += ok ? 0 : 1;
            }

            if (cfg.update_U)
            {
                const Design x = design_of(st);
                auto with = [&](const std::vector<Vec2c> &p) {
                    Design y = x;
                    y.U = p;
                    return y;
                };
                const bool ok = block_update<CircleManifold>(
                    st.U,
                    [&](const std::vector<Vec2c> &p) { return smooth_objective(with(p), st.W, scene, pen, Block::rx_pol); },
                    [&](const std::vector<Vec2c> &p) {
                        std::vector<Vec2c> g = euclid_grad_U(with(p), st.W, scene, pen);
                        for (Vec2c &gi : g)
                            gi *= 2.0;
                        return g;
                    },
                    [](const std::vector<Vec2c> &p) { return p; },
                    [](const std::vector<Vec2c> &) { return false; },
                    [&](const std::vector<Vec2c> &p) { return feasible_with(with(p)); },
                    &pen.lambda4, nullptr, pen.tau, cfg, iters[2]);
                reverts += ok ? 0 : 1;
            }

            update_beamformers(scene, cfg, st);
            const double prev = st.power_trace.back();
            const double P = st.W.squaredNorm();
            st.power_trace.push_back(P);
            st.inner_iterations.push_back(iters);
            st.trace.push_back(row_for(st, it, reverts));
            if (std::abs(P - prev) <= cfg.rel_tol * prev)
            {
                st.converged = true;
                break;
            }
        }
        return st;
    }

    AoConfig configure_scheme(AoConfig cfg, Scheme scheme)
    {
        cfg.boresight_only = false;
        switch (scheme)
        {
        case Scheme::proposed:
            break;
        case Scheme::rotation_only:
            cfg.update_V = cfg.update_U = false;
            break;
        case Scheme::boresight_only:
            cfg.update_V = cfg.update_U = false;
            cfg.boresight_only = true;
            break;
        case Scheme::fixed_upa:
            cfg.update_R = cfg.update_V = cfg.update_U = false;
            break;
        }
        return cfg;
    }

    SolutionState scheme_variant(const Scene &scene, const AoConfig &cfg, Scheme scheme, const InitialStates &init)
    {
        const AoConfig c = configure_scheme(cfg, scheme);
        return run(scene, c, scheme == Scheme::fixed_upa ? init.identity : init.common);
    }

    SolutionState scheme_variant(const Scene &scene, const AoConfig &cfg, Scheme scheme)
    {
        return scheme_variant(scene, cfg, scheme, initialize(scene, cfg));
    }

    SolutionState resume(const Scene &scene, const AoConfig &cfg, Scheme scheme, const SolutionState &prev)
    {
        const AoConfig c = configure_scheme(cfg, scheme);
        if (!prev.feasible)
            throw std::invalid_argument("resume: previous state is infeasible");
        for (const Rotation &R : prev.R)
            if (R(2, 2) < std::cos(scene.theta_max()) - 1e-12)
                throw std::invalid_argument("resume: previous rotations leave the cone");
        if (!meets_targets(prev.W, assemble_channels(prev.R, prev.V, prev.U, scene).H, scene, c.sinr_rtol))
            throw std::invalid_argument("resume: previous state misses a target on this scene");

        SolutionState st = prev;
        st.converged = false;
        st.power_trace.assign(1, st.W.squaredNorm());
        st.inner_iterations.clear();
        st.trace.assign(1, row_for(st, 0, 0));
        return run(scene, c, std::move(st));
    }

    void write_trace_csv(std::ostream &os, const SolutionState &st)
    {
        const auto prec = os.precision(17);
        os << "iter,power_w,power_dbm,feasible,block_reverts\n";
        for (const TraceRow &r : st.trace)
            os << r.iter << ',' << r.power_w << ',' << (r.power_w > 0.0 ? watt_to_dbm(r.power_w) : -INFINITY) << ','
               << (r.feasible ? 1 : 0) << ',' << r.block_reverts << '\n';
        os.precision(prec);
    }
}
