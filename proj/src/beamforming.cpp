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

#include "polara/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polara
{
    namespace
    {
        using Eigen::MatrixXcd;
        using Eigen::MatrixXd;
        using Eigen::VectorXcd;
        using Eigen::VectorXd;

        // Channels rescaled so that the noise is one and the mean channel gain is one.
        // A covariance D' of the scaled problem corresponds to D = scale * D'.
        struct Normalized
        {
            MatrixXcd G;
            double scale = 1.0;
        };

        Normalized normalize(const BeamformingProblem &pb)
        {
            const int K = pb.num_users();
            double mean_gain = 0.0;
            for (int k = 0; k < K; ++k)
                mean_gain += pb.H.col(k).squaredNorm() / pb.noise[k];
            mean_gain /= K;

            Normalized n;
            n.scale = 1.0 / mean_gain;
            n.G = pb.H;
            for (int k = 0; k < K; ++k)
                n.G.col(k) *= std::sqrt(n.scale / pb.noise[k]);
            return n;
        }

        VectorXd sinr_of(const MatrixXcd &W, const BeamformingProblem &pb)
        {
            const int K = pb.num_users();
            const MatrixXcd A = pb.H.adjoint() * W;
            VectorXd g(K);
            for (int k = 0; k < K; ++k)
            {
                double interf = pb.noise[k];
                for (int j = 0; j < K; ++j)
                    if (j != k)
                        interf += std::norm(A(k, j));
                g(k) = std::norm(A(k, k)) / interf;
            }
            return g;
        }

        // Shared constraint rows: <G_k, D_k> - iota_k sum_{i != k} <G_k, D_i>.
        void add_sinr_rows(sdp::Problem &sp, const Normalized &n, const VectorXd &targets)
        {
            const int K = static_cast<int>(n.G.cols());
            for (int k = 0; k < K; ++k)
            {
                const MatrixXd Gk = 0.5 * real_embedding(n.G.col(k) * n.G.col(k).adjoint());
                std::vector<MatrixXd> row(sp.block_sizes.size());
                for (int j = 0; j < K; ++j)
                    row[j] = j == k ? Gk : MatrixXd(-targets(k) * Gk);
                sp.A.push_back(std::move(row));
            }
        }

        std::pair<double, VectorXcd> top_eigenpair(const MatrixXcd &D)
        {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (D + D.adjoint()));
            const Eigen::Index n = D.rows();
            return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
        }
    }

    std::string to_string(BeamformingStatus s)
    {
        switch (s)
        {
        case BeamformingStatus::optimal:
            return "optimal";
        case BeamformingStatus::infeasible:
            return "infeasible";
        case BeamformingStatus::not_rank_one:
            return "not_rank_one";
        case BeamformingStatus::numerical_failure:
            return "numerical_failure";
        }
        return "unknown";
    }

    void BeamformingProblem::validate() const
    {
        const int K = num_users();
        if (K < 1 || num_antennas() < 1)
            throw std::invalid_argument("BeamformingProblem: empty channel matrix");
        if (targets.size() != K || static_cast<int>(noise.size()) != K)
            throw std::invalid_argument("BeamformingProblem: targets and noise need one entry per user");
        for (int k = 0; k < K; ++k)
        {
            if (!(targets(k) > 0.0))
                throw std::invalid_argument("BeamformingProblem: SINR targets must be positive");
            if (!(noise[k] > 0.0))
                throw std::invalid_argument("BeamformingProblem: noise powers must be positive");
            if (!(H.col(k).squaredNorm() > 0.0))
                throw std::invalid_argument("BeamformingProblem: zero channel for user " + std::to_string(k));
        }
    }

    MatrixXd real_embedding(const MatrixXcd &A)
    {
        const Eigen::Index n = A.rows();
        MatrixXd X(2 * n, 2 * n);
        X.topLeftCorner(n, n) = A.real();
        X.topRightCorner(n, n) = -A.imag();
        X.bottomLeftCorner(n, n) = A.imag();
        X.bottomRightCorner(n, n) = A.real();
        return X;
    }

    MatrixXcd complex_from_embedding(const MatrixXd &X)
    {
        const Eigen::Index n = X.rows() / 2;
        const MatrixXd re = 0.5 * (X.topLeftCorner(n, n) + X.bottomRightCorner(n, n));
        const MatrixXd im = 0.5 * (X.bottomLeftCorner(n, n) - X.topRightCorner(n, n));
        MatrixXcd D(n, n);
        D.real() = re;
        D.imag() = im;
        return 0.5 * (D + D.adjoint());
    }

    double feasibility_margin(const BeamformingProblem &pb, double budget_factor)
    {
        pb.validate();
        const int K = pb.num_users(), M = pb.num_antennas();
        const Normalized n = normalize(pb);
        const double shift = pb.targets.maxCoeff() + 1.0;

        // LP variables: [t', s_1..s_K, s_budget], slack t = t' - shift.
        sdp::Problem sp;
        sp.block_sizes.assign(K, 2 * M);
        sp.lp_size = K + 2;
        sp.C.assign(K, MatrixXd::Zero(2 * M, 2 * M));
        sp.c_lp = VectorXd::Zero(K + 2);
        sp.c_lp(0) = -1.0;

        add_sinr_rows(sp, n, pb.targets);
        sp.b.resize(K + 1);
        for (int k = 0; k < K; ++k)
        {
            VectorXd a = VectorXd::Zero(K + 2);
            a(0) = -1.0;
            a(1 + k) = -1.0;
            sp.a_lp.push_back(a);
            sp.b(k) = pb.targets(k) - shift;
        }
        sp.A.emplace_back(K, 0.5 * MatrixXd::Identity(2 * M, 2 * M));
        VectorXd a = VectorXd::Zero(K + 2);
        a(K + 1) = 1.0;
        sp.a_lp.push_back(a);
        sp.b(K) = budget_factor * K * pb.targets.maxCoeff();

        sdp::Options opt;
        opt.gap_tol = 1e-9;
        opt.feas_tol = 1e-9;
        const sdp::Solution sol = sdp::solve(sp, opt);
        return sol.x_lp(0) - shift;
    }

    CovarianceIterate solve_sdp(const BeamformingProblem &pb, double lambda0, const std::vector<VectorXcd> &prev,
                                const sdp::Options &options)
    {
        pb.validate();
        const int K = pb.num_users(), M = pb.num_antennas();
        if (!prev.empty() && static_cast<int>(prev.size()) != K)
            throw std::invalid_argument("solve_sdp: need one previous eigenvector per user");
        if (lambda0 < 0.0)
            throw std::invalid_argument("solve_sdp: penalty weight must be nonnegative");

        const Normalized n = normalize(pb);

        sdp::Problem sp;
        sp.block_sizes.assign(K, 2 * M);
        sp.lp_size = K;
        sp.c_lp = VectorXd::Zero(K);
        for (int k = 0; k < K; ++k)
        {
            MatrixXcd Ck = MatrixXcd::Identity(M, M);
            if (!prev.empty())
            {
                const VectorXcd d = prev[k].normalized();
                Ck = (1.0 + lambda0) * MatrixXcd::Identity(M, M) - lambda0 * d * d.adjoint();
            }
            sp.C.push_back(0.5 * real_embedding(Ck));
        }
        add_sinr_rows(sp, n, pb.targets);
        sp.b = pb.targets;
        for (int k = 0; k < K; ++k)
        {
            VectorXd a = VectorXd::Zero(K);
            a(k) = -1.0;
            sp.a_lp.push_back(a);
        }

        const sdp::Solution sol = sdp::solve(sp, options);

        CovarianceIterate out;
        out.iterations = sol.iterations;
        out.relative_gap = sol.relative_gap;
        if (sol.status != sdp::Status::optimal)
        {
            out.status = feasibility_margin(pb) < -1e-9 ? BeamformingStatus::infeasible : BeamformingStatus::numerical_failure;
            return out;
        }

        out.status = BeamformingStatus::optimal;
        for (int k = 0; k < K; ++k)
        {
            out.D.push_back(n.scale * complex_from_embedding(sol.X[k]));
            out.power += out.D.back().trace().real();
        }
        return out;
    }

    double rank_one_residual(const std::vector<MatrixXcd> &D)
    {
        double excess = 0.0, total = 0.0;
        for (const MatrixXcd &Dk : D)
        {
            const double tr = Dk.trace().real();
            excess += tr - top_eigenpair(Dk).first;
            total += tr;
        }
        return total > 0.0 ? std::max(excess, 0.0) / total : 0.0;
    }

    DcResult dc_rank_one_loop(const BeamformingProblem &pb, const DcOptions &opt)
    {
        if (!(opt.tau > 1.0))
            throw std::invalid_argument("dc_rank_one_loop: tau must exceed 1");

        DcResult res;
        auto record = [&](const CovarianceIterate &it, double lambda, const std::vector<VectorXcd> &prev)
        {
            res.D = it.D;
            res.power = it.power;
            res.rank_residual = rank_one_residual(it.D);
            double obj = it.power;
            for (size_t k = 0; k < prev.size(); ++k)
                obj += lambda * (it.D[k].trace().real() - prev[k].dot(it.D[k] * prev[k]).real());
            res.penalty_trace.push_back(lambda);
            res.residual_trace.push_back(res.rank_residual);
            res.objective_trace.push_back(obj);
        };

        CovarianceIterate it = solve_sdp(pb, 0.0, {});
        if (it.status != BeamformingStatus::optimal)
        {
            res.status = it.status;
            return res;
        }
        record(it, 0.0, {});

        double lambda = opt.lambda0;
        for (int e = 0; e <= opt.max_escalations && res.rank_residual > opt.rank_tol; ++e)
        {
            std::vector<VectorXcd> prev;
            for (const MatrixXcd &Dk : res.D)
                prev.push_back(top_eigenpair(Dk).second);
            it = solve_sdp(pb, lambda, prev);
            if (it.status != BeamformingStatus::optimal)
            {
                res.status = it.status;
                return res;
            }
            record(it, lambda, prev);
            lambda *= opt.tau;
        }

        res.status = res.rank_residual <= opt.rank_tol ? BeamformingStatus::optimal : BeamformingStatus::not_rank_one;
        return res;
    }

    bool power_for_directions(const MatrixXcd &dirs, const BeamformingProblem &pb, VectorXd &powers)
    {
        const int K = pb.num_users();
        MatrixXcd U = dirs;
        for (int k = 0; k < K; ++k)
        {
            const double nk = U.col(k).norm();
            if (!(nk > 0.0))
                return false;
            U.col(k) /= nk;
        }
        const MatrixXcd A = pb.H.adjoint() * U;
        MatrixXd F(K, K);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < K; ++j)
                F(k, j) = (j == k ? std::norm(A(k, k)) / pb.targets(k) : -std::norm(A(k, j))) / pb.noise[k];

        powers = F.fullPivLu().solve(VectorXd::Ones(K));
        return powers.allFinite() && (powers.array() > 0.0).all();
    }

    MatrixXcd recover_beamformers(const std::vector<MatrixXcd> &D, const BeamformingProblem &pb, double rank_tol)
    {
        pb.validate();
        const int K = pb.num_users();
        if (static_cast<int>(D.size()) != K)
            throw std::invalid_argument("recover_beamformers: need one covariance per user");
        const double residual = rank_one_residual(D);
        if (residual > rank_tol)
            throw std::runtime_error("recover_beamformers: rank-one residual " + std::to_string(residual) + " exceeds tolerance");

        MatrixXcd W(pb.num_antennas(), K);
        for (int k = 0; k < K; ++k)
        {
            const auto [lmax, q] = top_eigenpair(D[k]);
            W.col(k) = std::sqrt(std::max(lmax, 0.0)) * q;
        }

        const VectorXd g = sinr_of(W, pb);
        bool short_fall = false;
        for (int k = 0; k < K; ++k)
            short_fall |= g(k) < pb.targets(k) * (1.0 - 1e-9);
        if (short_fall)
        {
            VectorXd p;
            if (power_for_directions(W, pb, p))
                for (int k = 0; k < K; ++k)
                    W.col(k) = std::sqrt(p(k)) * W.col(k).normalized();
        }
        return W;
    }

    OracleResult duality_oracle(const BeamformingProblem &pb, int max_iterations, double tol)
    {
        pb.validate();
        const int K = pb.num_users(), M = pb.num_antennas();
        const Normalized n = normalize(pb);
        const MatrixXcd &G = n.G;

        auto interference_cov = [&](const VectorXd &q, int k)
        {
            MatrixXcd S = MatrixXcd::Identity(M, M);
            for (int i = 0; i < K; ++i)
                if (i != k)
                    S.noalias() += q(i) * G.col(i) * G.col(i).adjoint();
            return S;
        };

        OracleResult out;
        VectorXd q = VectorXd::Zero(K);
        double first_total = 0.0;
        for (int it = 1; it <= max_iterations; ++it)
        {
            VectorXd next(K);
            for (int k = 0; k < K; ++k)
            {
                Eigen::LLT<MatrixXcd> llt(interference_cov(q, k));
                next(k) = pb.targets(k) / G.col(k).dot(llt.solve(G.col(k))).real();
            }
            out.iterations = it;
            if (it == 1)
                first_total = next.sum();
            if (!next.allFinite() || next.sum() > 1e12 * first_total)
                return out; // diverging: targets not simultaneously achievable
            const double change = ((next - q).cwiseAbs().array() / next.array()).maxCoeff();
            q = next;
            if (change <= tol)
                break;
        }

        MatrixXcd dirs(M, K);
        for (int k = 0; k < K; ++k)
            dirs.col(k) = interference_cov(q, k).llt().solve(G.col(k));

        VectorXd p;
        if (!power_for_directions(dirs, pb, p))
            return out;
        out.W.resize(M, K);
        for (int k = 0; k < K; ++k)
            out.W.col(k) = std::sqrt(p(k)) * dirs.col(k).normalized();
        out.power = p.sum();
        out.feasible = true;
        return out;
    }
}
