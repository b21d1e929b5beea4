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

#include "polara/verify.hpp"

#include "polara/los_analysis.hpp"
#include "polara/manifold.hpp"
#include "polara/scenario.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace polara::verify
{
    namespace
    {
        using Rng = std::mt19937_64;

        cplx cnormal(Rng &rng)
        {
            std::normal_distribution<double> n;
            return {n(rng), n(rng)};
        }

        Mat3 random_mat3(Rng &rng)
        {
            std::normal_distribution<double> n;
            Mat3 X;
            for (int i = 0; i < 9; ++i)
                X(i) = n(rng);
            return X;
        }

        Vec2c random_vec2c(Rng &rng)
        {
            return Vec2c(cnormal(rng), cnormal(rng));
        }

        Rotation random_rotation(Rng &rng)
        {
            return project_so3(random_mat3(rng));
        }

        double rel_error(double fd, double an)
        {
            const double scale = std::max({std::abs(fd), std::abs(an), 1e-10});
            return std::abs(fd - an) / scale;
        }

        template <class F>
        double best_over_steps(const F &directional_fd, double analytic)
        {
            double best = std::numeric_limits<double>::infinity();
            for (double h : {1e-4, 1e-5, 1e-6})
                best = std::min(best, rel_error(directional_fd(h), analytic));
            return best;
        }

        std::string fmt(double v)
        {
            std::ostringstream os;
            os.precision(3);
            os << v;
            return os.str();
        }
    }

    DeskInstance random_desk_instance(std::uint64_t seed, int mx, int my, int users, int scatterers)
    {
        ScenarioConfig cfg;
        cfg.mx = mx;
        cfg.my = my;
        cfg.num_users = users;
        cfg.num_scatterers = scatterers;
        cfg.rate_bps_hz = 1.0;
        Rng rng(derive_seed(seed, 77));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        DeskInstance inst{generate_scene(cfg, seed), {}, {}, {}};
        const int M = mx * my;
        for (int m = 0; m < M; ++m)
        {
            // Mostly upward-facing so that some paths are live and the cone penalty is exercised.
            inst.x.R.push_back(project_so3(Mat3::Identity() + 0.6 * random_mat3(rng)));
            inst.x.V.push_back(random_vec2c(rng).normalized());
            const double th = 0.9 * unif(rng), ph = 2.0 * M_PI * unif(rng);
            inst.boresights.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        }
        for (int k = 0; k < users; ++k)
            inst.x.U.emplace_back(std::polar(1.0, 2.0 * M_PI * unif(rng)), std::polar(1.0, 2.0 * M_PI * unif(rng)));

        inst.W.resize(M, users);
        for (int i = 0; i < inst.W.size(); ++i)
            inst.W(i) = cnormal(rng);
        // Scale so that the mean desired-signal power is a few times the noise.
        const ChannelSet ch = assemble_channels(inst.x.R, inst.x.V, inst.x.U, inst.scene);
        const Eigen::MatrixXcd A = ch.H.adjoint() * inst.W;
        const double sig = A.diagonal().cwiseAbs2().mean();
        if (sig > 0.0)
            inst.W *= std::sqrt(3.0 * inst.scene.noise()[0] / sig);
        return inst;
    }

    GradientCheck check_gradients(const DeskInstance &inst, const SmoothingParams &params, int directions,
                                  std::uint64_t seed, bool flip_sign)
    {
        Rng rng(derive_seed(seed, 91));
        const Scene &sc = inst.scene;
        const Design &x = inst.x;
        const Eigen::MatrixXcd &W = inst.W;
        const double sgn = flip_sign ? -1.0 : 1.0;
        GradientCheck out;

        const std::vector<Mat3> GR = euclid_grad_R(x, W, sc, params);
        const std::vector<Vec2c> GV = euclid_grad_V(x, W, sc, params);
        const std::vector<Vec2c> GU = euclid_grad_U(x, W, sc, params);
        const std::vector<Vec3> GB = euclid_grad_boresight(inst.boresights, x, W, sc, params);

        for (int d = 0; d < directions; ++d)
        {
            std::vector<Mat3> dR;
            for (size_t m = 0; m < x.R.size(); ++m)
                dR.push_back(random_mat3(rng));
            out.worst_R = std::max(out.worst_R, best_over_steps(
                                                    [&](double h) {
                                                        Design p = x, q = x;
                                                        for (size_t m = 0; m < x.R.size(); ++m)
                                                        {
                                                            p.R[m] += h * dR[m];
                                                            q.R[m] -= h * dR[m];
                                                        }
                                                        return (smooth_objective(p, W, sc, params, Block::rotation) -
                                                                smooth_objective(q, W, sc, params, Block::rotation)) /
                                                               (2.0 * h);
                                                    },
                                                    sgn * inner(GR, dR)));

            std::vector<Vec2c> dV, dU;
            for (size_t m = 0; m < x.V.size(); ++m)
                dV.push_back(random_vec2c(rng));
            for (size_t k = 0; k < x.U.size(); ++k)
                dU.push_back(random_vec2c(rng));
            out.worst_V = std::max(out.worst_V, best_over_steps(
                                                    [&](double h) {
                                                        Design p = x, q = x;
                                                        for (size_t m = 0; m < x.V.size(); ++m)
                                                        {
                                                            p.V[m] += h * dV[m];
                                                            q.V[m] -= h * dV[m];
                                                        }
                                                        return (smooth_objective(p, W, sc, params, Block::tx_pol) -
                                                                smooth_objective(q, W, sc, params, Block::tx_pol)) /
                                                               (2.0 * h);
                                                    },
                                                    sgn * 2.0 * inner(GV, dV)));
            out.worst_U = std::max(out.worst_U, best_over_steps(
                                                    [&](double h) {
                                                        Design p = x, q = x;
                                                        for (size_t k = 0; k < x.U.size(); ++k)
                                                        {
                                                            p.U[k] += h * dU[k];
                                                            q.U[k] -= h * dU[k];
                                                        }
                                                        return (smooth_objective(p, W, sc, params, Block::rx_pol) -
                                                                smooth_objective(q, W, sc, params, Block::rx_pol)) /
                                                               (2.0 * h);
                                                    },
                                                    sgn * 2.0 * inner(GU, dU)));

            std::vector<Vec3> dB;
            for (size_t m = 0; m < inst.boresights.size(); ++m)
                dB.push_back(random_mat3(rng).col(0));
            out.worst_boresight = std::max(out.worst_boresight,
                                           best_over_steps(
                                               [&](double h) {
                                                   std::vector<Vec3> p = inst.boresights, q = inst.boresights;
                                                   for (size_t m = 0; m < p.size(); ++m)
                                                   {
                                                       p[m] += h * dB[m];
                                                       q[m] -= h * dB[m];
                                                   }
                                                   return (boresight_objective(p, x, W, sc, params) -
                                                           boresight_objective(q, x, W, sc, params)) /
                                                          (2.0 * h);
                                               },
                                               sgn * inner(GB, dB)));
        }
        return out;
    }

    BeamformingProblem random_beamforming_problem(std::uint64_t seed, int M, int K)
    {
        Rng rng(derive_seed(seed, 5));
        std::uniform_real_distribution<double> rate(0.5, 2.5);
        BeamformingProblem pb;
        pb.H.resize(M, K);
        for (int i = 0; i < pb.H.size(); ++i)
            pb.H(i) = 1e-4 * cnormal(rng);
        pb.targets.resize(K);
        for (int k = 0; k < K; ++k)
            pb.targets(k) = std::exp2(rate(rng)) - 1.0;
        pb.noise.assign(K, 1e-11);
        return pb;
    }

    BeamformingCheck check_beamforming(const BeamformingProblem &pb)
    {
        BeamformingCheck c;
        const DcResult dc = dc_rank_one_loop(pb);
        const OracleResult orc = duality_oracle(pb);
        c.feasible = dc.status == BeamformingStatus::optimal;
        c.oracle_power = orc.power;
        if (!c.feasible || !orc.feasible)
        {
            c.feasible = false;
            return c;
        }
        c.sdr_power = dc.power;
        c.rank_residual = dc.rank_residual;
        c.relative_difference = std::abs(dc.power - orc.power) / orc.power;
        const Eigen::MatrixXcd W = recover_beamformers(dc.D, pb);
        const LinkQuality q = sinr_and_rate(W, pb.H, pb.noise);
        for (int k = 0; k < pb.num_users(); ++k)
            c.worst_sinr_shortfall = std::max(c.worst_sinr_shortfall, 1.0 - q.sinr(k) / pb.targets(k));
        return c;
    }

    double ManifoldCheck::worst() const
    {
        return std::max({so3, sphere, circle, boresight});
    }

    ManifoldCheck check_retractions(int steps, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, 13));
        std::uniform_real_distribution<double> logstep(-8.0, 3.0);
        ManifoldCheck c;

        RotationManifold::Point R{random_rotation(rng), random_rotation(rng)};
        SphereManifold::Point V{random_vec2c(rng).normalized(), random_vec2c(rng).normalized()};
        CircleManifold::Point U{Vec2c(1.0, 1.0), Vec2c(std::polar(1.0, 0.3), std::polar(1.0, -2.0))};
        BoresightManifold::Point B{unit_z(), Vec3(0.6, 0.0, 0.8)};

        for (int s = 0; s < steps; ++s)
        {
            const double scale = std::pow(10.0, logstep(rng));

            RotationManifold::Point gR{random_mat3(rng), random_mat3(rng)};
            const auto xiR = RotationManifold::riem_grad(R, gR);
            R = RotationManifold::retract(R, xiR, scale / std::max(norm(xiR), 1e-300));
            for (const Mat3 &r : R)
                c.so3 = std::max({c.so3, orthogonality_residual(r), std::abs(r.determinant() - 1.0)});

            SphereManifold::Point gV{random_vec2c(rng), random_vec2c(rng)};
            const auto xiV = SphereManifold::riem_grad(V, gV);
            V = SphereManifold::retract(V, xiV, scale / std::max(norm(xiV), 1e-300));
            for (const Vec2c &v : V)
                c.sphere = std::max(c.sphere, std::abs(v.norm() - 1.0));

            CircleManifold::Point gU{random_vec2c(rng), random_vec2c(rng)};
            const auto xiU = CircleManifold::riem_grad(U, gU);
            U = CircleManifold::retract(U, xiU, scale / std::max(norm(xiU), 1e-300));
            for (const Vec2c &u : U)
                c.circle = std::max({c.circle, std::abs(std::abs(u(0)) - 1.0), std::abs(std::abs(u(1)) - 1.0)});

            BoresightManifold::Point gB{random_mat3(rng).col(0), random_mat3(rng).col(1)};
            const auto xiB = BoresightManifold::riem_grad(B, gB);
            B = BoresightManifold::retract(B, xiB, scale / std::max(norm(xiB), 1e-300));
            for (const Vec3 &b : B)
                c.boresight = std::max(c.boresight, std::abs(b.norm() - 1.0));
        }
        return c;
    }

    double eta_fixed_grid(const Vec3 &f, int phases)
    {
        const Vec2c t = los::received_field(f, Rotation::Identity());
        double best = 0.0;
        for (int i = 0; i < phases; ++i)
        {
            const cplx u2 = std::polar(1.0, 2.0 * M_PI * i / phases);
            best = std::max(best, std::norm(t(0) + std::conj(u2) * t(1)));
        }
        return best;
    }

    double eta_rot_grid(const Vec3 &f, int rolls)
    {
        const Rotation base = geodesic_from_z(f);
        double best = 0.0;
        for (int i = 0; i < rolls; ++i)
        {
            const Rotation R = rotation_from_axis_angle(f, 2.0 * M_PI * i / rolls) * base;
            best = std::max(best, los::eta_star(los::received_field(f, R)));
        }
        return best;
    }

    LosCheck check_los(int directions, int phases, int rolls, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, 17));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        LosCheck c;
        for (int d = 0; d < directions; ++d)
        {
            // Upper hemisphere, uniform in solid angle.
            const double z = u(rng), ph = 2.0 * M_PI * u(rng), r = std::sqrt(1.0 - z * z);
            const Vec3 f(r * std::cos(ph), r * std::sin(ph), z);
            c.worst_fixed = std::max(c.worst_fixed, std::abs(los::eta_fixed(f) - eta_fixed_grid(f, phases)));
            c.worst_rot = std::max(c.worst_rot, std::abs(los::eta_rot(f) - eta_rot_grid(f, rolls)));
        }
        return c;
    }

    std::vector<SuiteReport> run_all(const Options &opt)
    {
        const bool full = opt.level == Level::full;
        std::vector<SuiteReport> out;
        auto timed = [&](const std::string &name, auto body) {
            const auto t0 = std::chrono::steady_clock::now();
            SuiteReport r;
            r.name = name;
            try
            {
                body(r);
            }
            catch (const std::exception &e)
            {
                r.passed = false;
                r.detail = std::string("exception: ") + e.what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out.push_back(r);
        };

        timed("los_closed_form", [&](SuiteReport &r) {
            const Vec3 f(std::sqrt(3.0 / 8.0), std::sqrt(3.0 / 8.0), 0.5);
            const los::GainRatio g = los::gain_ratio(f, 2.0);
            const double expect = 10.0 * std::log10(32.0);
            const double err_example = std::abs(g.total_db - expect);
            const LosCheck c = check_los(full ? 200 : 40, 10000, full ? 100000 : 10000, 1);
            r.passed = err_example <= 1e-9 && c.worst_fixed <= 1e-4 && c.worst_rot <= 1e-4;
            r.detail = "worked example " + fmt(g.total_db) + " dB, grid errors fixed " + fmt(c.worst_fixed) +
                       " rot " + fmt(c.worst_rot);
        });

        timed("gradient_fd", [&](SuiteReport &r) {
            const int n = full ? 20 : 5;
            GradientCheck worst;
            for (int i = 0; i < n; ++i)
            {
                const DeskInstance inst = random_desk_instance(100 + i);
                const GradientCheck g = check_gradients(inst, SmoothingParams{}, 3, 200 + i, opt.flip_gradient_sign);
                worst.worst_R = std::max(worst.worst_R, g.worst_R);
                worst.worst_V = std::max(worst.worst_V, g.worst_V);
                worst.worst_U = std::max(worst.worst_U, g.worst_U);
                worst.worst_boresight = std::max(worst.worst_boresight, g.worst_boresight);
            }
            r.passed = std::max({worst.worst_R, worst.worst_V, worst.worst_U, worst.worst_boresight}) <= 1e-5;
            r.detail = "max relative error R " + fmt(worst.worst_R) + " V " + fmt(worst.worst_V) + " U " +
                       fmt(worst.worst_U) + " boresight " + fmt(worst.worst_boresight);
        });

        timed("manifold_invariants", [&](SuiteReport &r) {
            const ManifoldCheck c = check_retractions(full ? 10000 : 2000, 3);
            // Model problem: nearest rotation to a target.
            Rng rng(4);
            const Rotation target = random_rotation(rng);
            const Rotation start = project_so3(target + 0.3 * random_mat3(rng));
            RcgOptions ro;
            ro.grad_tol = 1e-10;
            ro.max_iters = 500;
            const auto res = rcg_minimize<RotationManifold>(
                [&](const std::vector<Mat3> &p) { return (p[0] - target).squaredNorm(); },
                [&](const std::vector<Mat3> &p) { return std::vector<Mat3>{2.0 * (p[0] - target)}; },
                std::vector<Mat3>{start}, ro);
            const double dist = (res.point[0] - target).norm();
            r.passed = c.worst() <= 1e-9 && dist <= 1e-6;
            r.detail = "residuals so3 " + fmt(c.so3) + " sphere " + fmt(c.sphere) + " circle " + fmt(c.circle) +
                       " boresight " + fmt(c.boresight) + ", model problem distance " + fmt(dist);
        });

        timed("sdp_vs_oracle", [&](SuiteReport &r) {
            const int n = full ? 50 : 8;
            double worst_rel = 0.0, worst_rank = 0.0, worst_short = 0.0;
            int failures = 0;
            for (int i = 0; i < n; ++i)
            {
                const int K = 1 + i % (full ? 3 : 2);
                const int M = K + (i / 3) % ((full ? 8 : 4) - K + 1);
                const BeamformingCheck c = check_beamforming(random_beamforming_problem(300 + i, M, K));
                if (!c.feasible)
                {
                    ++failures;
                    continue;
                }
                worst_rel = std::max(worst_rel, c.relative_difference);
                worst_rank = std::max(worst_rank, c.rank_residual);
                worst_short = std::max(worst_short, c.worst_sinr_shortfall);
            }
            r.passed = failures == 0 && worst_rel <= 0.01 && worst_rank <= 1e-6 && worst_short <= 1e-6;
            r.detail = std::to_string(n) + " instances, power mismatch " + fmt(worst_rel) + ", rank residual " +
                       fmt(worst_rank) + ", SINR shortfall " + fmt(worst_short) +
                       (failures ? ", " + std::to_string(failures) + " solver failures" : "");
        });
        return out;
    }
}
