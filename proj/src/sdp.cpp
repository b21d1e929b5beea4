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

#include "polara/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polara::sdp
{
    namespace
    {
        using Eigen::MatrixXd;
        using Eigen::VectorXd;
        using Blocks = std::vector<MatrixXd>;

        double inner(const MatrixXd &A, const MatrixXd &B) { return A.cwiseProduct(B).sum(); }

        MatrixXd sym(const MatrixXd &A) { return 0.5 * (A + A.transpose()); }

        // Largest alpha with X + alpha dX still PSD (infinity if dX keeps it PSD).
        double max_step(const MatrixXd &X, const MatrixXd &dX)
        {
            Eigen::LLT<MatrixXd> llt(X);
            if (llt.info() != Eigen::Success)
                return 0.0;
            const MatrixXd Linv_dX = llt.matrixL().solve(dX);
            const MatrixXd G = llt.matrixL().solve(Linv_dX.transpose());
            const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(sym(G), Eigen::EigenvaluesOnly).eigenvalues()(0);
            return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
        }

        double max_step(const VectorXd &x, const VectorXd &dx)
        {
            double a = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (dx(i) < 0.0)
                    a = std::min(a, -x(i) / dx(i));
            return a;
        }

        struct Direction
        {
            Blocks dX, dS;
            VectorXd dx, ds, dy;
        };
    }

    std::string to_string(Status s)
    {
        switch (s)
        {
        case Status::optimal:
            return "optimal";
        case Status::iteration_limit:
            return "iteration_limit";
        case Status::numerical_failure:
            return "numerical_failure";
        }
        return "unknown";
    }

    void Problem::validate() const
    {
        const size_t nb = block_sizes.size();
        if (C.size() != nb)
            throw std::invalid_argument("sdp: one cost matrix per block required");
        for (size_t j = 0; j < nb; ++j)
            if (C[j].rows() != block_sizes[j] || C[j].cols() != block_sizes[j])
                throw std::invalid_argument("sdp: cost block has wrong size");
        if (c_lp.size() != lp_size)
            throw std::invalid_argument("sdp: LP cost has wrong size");
        const int m = num_constraints();
        if (static_cast<int>(A.size()) != m || static_cast<int>(a_lp.size()) != m)
            throw std::invalid_argument("sdp: constraint count mismatch");
        for (int i = 0; i < m; ++i)
        {
            if (A[i].size() != nb || a_lp[i].size() != lp_size)
                throw std::invalid_argument("sdp: constraint block layout mismatch");
            for (size_t j = 0; j < nb; ++j)
                if (A[i][j].size() != 0 && (A[i][j].rows() != block_sizes[j] || A[i][j].cols() != block_sizes[j]))
                    throw std::invalid_argument("sdp: constraint block has wrong size");
        }
    }

    Solution solve(const Problem &pb, const Options &opt)
    {
        pb.validate();
        const size_t nb = pb.block_sizes.size();
        const int m = pb.num_constraints();
        const int nlp = pb.lp_size;

        double n_total = nlp;
        for (int s : pb.block_sizes)
            n_total += s;

        auto has = [&](int i, size_t j) { return pb.A[i][j].size() != 0; };

        auto apply_A = [&](const Blocks &Y, const VectorXd &ylp)
        {
            VectorXd r = VectorXd::Zero(m);
            for (int i = 0; i < m; ++i)
            {
                for (size_t j = 0; j < nb; ++j)
                    if (has(i, j))
                        r(i) += inner(pb.A[i][j], Y[j]);
                if (nlp > 0)
                    r(i) += pb.a_lp[i].dot(ylp);
            }
            return r;
        };

        auto apply_At = [&](const VectorXd &y, Blocks &Z, VectorXd &zlp)
        {
            Z.resize(nb);
            for (size_t j = 0; j < nb; ++j)
                Z[j] = MatrixXd::Zero(pb.block_sizes[j], pb.block_sizes[j]);
            zlp = VectorXd::Zero(nlp);
            for (int i = 0; i < m; ++i)
            {
                for (size_t j = 0; j < nb; ++j)
                    if (has(i, j))
                        Z[j] += y(i) * pb.A[i][j];
                if (nlp > 0)
                    zlp += y(i) * pb.a_lp[i];
            }
        };

        // Starting point scaled to the data.
        double a_norm = 0.0, c_norm = pb.c_lp.norm();
        for (size_t j = 0; j < nb; ++j)
            c_norm = std::max(c_norm, pb.C[j].norm());
        double xi = std::max(10.0, std::sqrt(n_total));
        for (int i = 0; i < m; ++i)
        {
            double ni = pb.a_lp[i].norm();
            for (size_t j = 0; j < nb; ++j)
                if (has(i, j))
                    ni = std::max(ni, pb.A[i][j].norm());
            a_norm = std::max(a_norm, ni);
            xi = std::max(xi, n_total * (1.0 + std::abs(pb.b(i))) / (1.0 + ni));
        }
        const double eta = std::max({10.0, std::sqrt(n_total), c_norm, a_norm});

        Solution sol;
        Blocks &X = sol.X, &S = sol.S;
        VectorXd &x = sol.x_lp, &s = sol.s_lp, &y = sol.y;
        X.resize(nb);
        S.resize(nb);
        for (size_t j = 0; j < nb; ++j)
        {
            X[j] = xi * MatrixXd::Identity(pb.block_sizes[j], pb.block_sizes[j]);
            S[j] = eta * MatrixXd::Identity(pb.block_sizes[j], pb.block_sizes[j]);
        }
        x = VectorXd::Constant(nlp, xi);
        s = VectorXd::Constant(nlp, eta);
        y = VectorXd::Zero(m);

        const double b_norm = pb.b.norm();
        Blocks Sinv(nb), Rd(nb), XRdSinv(nb), AtY;
        VectorXd rd_lp, AtY_lp;

        for (int iter = 0; iter <= opt.max_iterations; ++iter)
        {
            sol.iterations = iter;

            // Residuals and stopping test.
            const VectorXd rp = pb.b - apply_A(X, x);
            apply_At(y, AtY, AtY_lp);
            double rd_norm2 = 0.0, comp = 0.0, pobj = 0.0;
            for (size_t j = 0; j < nb; ++j)
            {
                Rd[j] = pb.C[j] - AtY[j] - S[j];
                rd_norm2 += Rd[j].squaredNorm();
                comp += inner(X[j], S[j]);
                pobj += inner(pb.C[j], X[j]);
            }
            rd_lp = pb.c_lp - AtY_lp - s;
            rd_norm2 += rd_lp.squaredNorm();
            comp += x.dot(s);
            pobj += pb.c_lp.dot(x);
            const double dobj = pb.b.dot(y);
            const double mu = comp / n_total;

            const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
            sol.primal_objective = pobj;
            sol.dual_objective = dobj;
            sol.relative_gap = std::max(std::abs(pobj - dobj), comp) / scale;
            sol.primal_infeasibility = rp.norm() / (1.0 + b_norm);
            sol.dual_infeasibility = std::sqrt(rd_norm2) / (1.0 + c_norm);

            if (sol.relative_gap <= opt.gap_tol && sol.primal_infeasibility <= opt.feas_tol && sol.dual_infeasibility <= opt.feas_tol)
            {
                sol.status = Status::optimal;
                return sol;
            }
            if (iter == opt.max_iterations)
                break;

            for (size_t j = 0; j < nb; ++j)
            {
                Eigen::LLT<MatrixXd> llt(S[j]);
                if (llt.info() != Eigen::Success)
                {
                    sol.status = Status::numerical_failure;
                    return sol;
                }
                Sinv[j] = llt.solve(MatrixXd::Identity(S[j].rows(), S[j].cols()));
                XRdSinv[j] = X[j] * Rd[j] * Sinv[j];
            }
            const VectorXd x_over_s = x.cwiseQuotient(s);

            // Schur complement M_ik = sum_j tr(A_ij X_j A_kj S_j^-1) + LP part.
            MatrixXd schur = MatrixXd::Zero(m, m);
            for (size_t j = 0; j < nb; ++j)
                for (int k = 0; k < m; ++k)
                {
                    if (!has(k, j))
                        continue;
                    const MatrixXd B = X[j] * pb.A[k][j] * Sinv[j];
                    for (int i = 0; i < m; ++i)
                        if (has(i, j))
                            schur(i, k) += pb.A[i][j].cwiseProduct(B.transpose()).sum();
                }
            if (nlp > 0)
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < m; ++k)
                        schur(i, k) += (pb.a_lp[i].cwiseProduct(x_over_s)).dot(pb.a_lp[k]);
            schur = 0.5 * (schur + schur.transpose()).eval();

            Eigen::LDLT<MatrixXd> fact(schur);
            if (fact.info() != Eigen::Success || !fact.isPositive())
            {
                sol.status = Status::numerical_failure;
                return sol;
            }

            // Direction for a complementarity target T (blocks) / t (LP).
            auto direction = [&](const Blocks &T, const VectorXd &t)
            {
                Direction d;
                VectorXd lp_term = t - x_over_s.cwiseProduct(rd_lp);
                Blocks Tm(nb);
                for (size_t j = 0; j < nb; ++j)
                    Tm[j] = T[j] - XRdSinv[j];
                const VectorXd rhs = rp - apply_A(Tm, lp_term);
                d.dy = fact.solve(rhs);

                Blocks AtDy;
                VectorXd AtDy_lp;
                apply_At(d.dy, AtDy, AtDy_lp);
                d.dS.resize(nb);
                d.dX.resize(nb);
                for (size_t j = 0; j < nb; ++j)
                {
                    d.dS[j] = Rd[j] - AtDy[j];
                    d.dX[j] = T[j] - sym(X[j] * d.dS[j] * Sinv[j]);
                }
                d.ds = rd_lp - AtDy_lp;
                d.dx = t - x_over_s.cwiseProduct(d.ds);
                return d;
            };

            auto step_lengths = [&](const Direction &d, double &ap, double &ad)
            {
                ap = max_step(x, d.dx);
                ad = max_step(s, d.ds);
                for (size_t j = 0; j < nb; ++j)
                {
                    ap = std::min(ap, max_step(X[j], d.dX[j]));
                    ad = std::min(ad, max_step(S[j], d.dS[j]));
                }
            };

            // Predictor.
            Blocks T(nb);
            for (size_t j = 0; j < nb; ++j)
                T[j] = -X[j];
            const Direction aff = direction(T, -x);
            double ap, ad;
            step_lengths(aff, ap, ad);
            ap = std::min(1.0, ap);
            ad = std::min(1.0, ad);

            double comp_aff = (x + ap * aff.dx).dot(s + ad * aff.ds);
            for (size_t j = 0; j < nb; ++j)
                comp_aff += inner(X[j] + ap * aff.dX[j], S[j] + ad * aff.dS[j]);
            const double sigma = std::clamp(std::pow(std::max(comp_aff, 0.0) / comp, 3.0), 0.0, 1.0);

            // Corrector.
            for (size_t j = 0; j < nb; ++j)
                T[j] = sigma * mu * Sinv[j] - X[j] - sym(aff.dX[j] * aff.dS[j] * Sinv[j]);
            const VectorXd t = (sigma * mu) * s.cwiseInverse() - x - aff.dx.cwiseProduct(aff.ds).cwiseQuotient(s);
            const Direction dir = direction(T, t);
            step_lengths(dir, ap, ad);
            ap = std::min(1.0, opt.step_fraction * ap);
            ad = std::min(1.0, opt.step_fraction * ad);
            if (ap < 1e-12 && ad < 1e-12)
            {
                sol.status = Status::numerical_failure;
                return sol;
            }

            for (size_t j = 0; j < nb; ++j)
            {
                X[j] = sym(X[j] + ap * dir.dX[j]);
                S[j] = sym(S[j] + ad * dir.dS[j]);
            }
            x += ap * dir.dx;
            s += ad * dir.ds;
            y += ad * dir.dy;
        }

        sol.status = Status::iteration_limit;
        return sol;
    }
}
