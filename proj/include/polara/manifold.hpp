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

#include "polara/channel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace polara
{
    // Product manifolds used by the rotation and polarization subproblems. Tangent vectors and
    // Euclidean gradients share the point's storage type; gradients are with respect to the real
    // inner product Re tr(A^H B).

    struct RotationManifold // SO(3)^M
    {
        using Point = std::vector<Mat3>;
        static Point riem_grad(const Point &x, const Point &G);
        static Point retract(const Point &x, const Point &xi, double t);
    };

    struct SphereManifold // product of unit spheres in C^2
    {
        using Point = std::vector<Vec2c>;
        static Point riem_grad(const Point &x, const Point &G);
        static Point retract(const Point &x, const Point &xi, double t);
    };

    struct CircleManifold // product of unit-modulus pairs in C^2
    {
        using Point = std::vector<Vec2c>;
        static Point riem_grad(const Point &x, const Point &G);
        static Point retract(const Point &x, const Point &xi, double t);
    };

    struct BoresightManifold // product of unit spheres in R^3
    {
        using Point = std::vector<Vec3>;
        static Point riem_grad(const Point &x, const Point &G);
        static Point retract(const Point &x, const Point &xi, double t);
    };

    template <class T>
    double inner(const std::vector<T> &a, const std::vector<T> &b)
    {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i)
            s += std::real((a[i].array().conjugate() * b[i].array()).sum());
        return s;
    }

    template <class T>
    double norm(const std::vector<T> &a)
    {
        return std::sqrt(inner(a, a));
    }

    // y <- a x + b y
    template <class T>
    void axpby(double a, const std::vector<T> &x, double b, std::vector<T> &y)
    {
        for (size_t i = 0; i < x.size(); ++i)
            y[i] = a * x[i] + b * y[i];
    }

    // Projection transport.
    template <class Mf>
    typename Mf::Point vector_transport(const typename Mf::Point &, const typename Mf::Point &x_new,
                                        const typename Mf::Point &xi)
    {
        return Mf::riem_grad(x_new, xi);
    }

    struct RcgOptions
    {
        int max_iters = 200;
        double grad_tol = 1e-8;
        double f_tol = 1e-12;  // relative decrease below which the run counts as stalled
        int max_backtracks = 50;
        double armijo = 1e-4;
        double shrink = 0.5;
        double max_step = 0.5; // cap on the first trial step length
    };

    template <class Point>
    struct RcgResult
    {
        Point point;
        double value = 0.0;
        double grad_norm = 0.0;
        int iterations = 0;
        bool converged = false;
        bool degraded = false; // line search failed
        std::vector<double> trace;
    };

    template <class Mf>
    RcgResult<typename Mf::Point> rcg_minimize(const std::function<double(const typename Mf::Point &)> &objective,
                                               const std::function<typename Mf::Point(const typename Mf::Point &)> &grad,
                                               typename Mf::Point x0, const RcgOptions &opts = {})
    {
        using Point = typename Mf::Point;
        RcgResult<Point> res;
        Point x = std::move(x0);
        double fx = objective(x);
        Point g = Mf::riem_grad(x, grad(x));
        Point d = g;
        axpby(0.0, g, -1.0, d);
        double t_prev = std::numeric_limits<double>::infinity();
        res.trace.push_back(fx);

        int it = 0;
        for (; it < opts.max_iters; ++it)
        {
            const double gg = inner(g, g);
            if (std::sqrt(gg) <= opts.grad_tol)
            {
                res.converged = true;
                break;
            }
            double slope = inner(g, d);
            if (!(slope < 0.0))
            {
                d = g;
                axpby(0.0, g, -1.0, d);
                slope = -gg;
            }

            double t = std::min(opts.max_step / norm(d), 2.0 * t_prev);
            Point xn;
            double fn = fx;
            bool accepted = false;
            for (int b = 0; b < opts.max_backtracks; ++b)
            {
                xn = Mf::retract(x, d, t);
                fn = objective(xn);
                if (fn <= fx + opts.armijo * t * slope)
                {
                    accepted = true;
                    break;
                }
                t *= opts.shrink;
            }
            if (!accepted)
            {
                res.degraded = true;
                break;
            }

            Point gn = Mf::riem_grad(xn, grad(xn));
            const Point g_old = vector_transport<Mf>(x, xn, g);
            Point d_old = vector_transport<Mf>(x, xn, d);

            // Polak-Ribiere+
            Point diff = gn;
            axpby(-1.0, g_old, 1.0, diff);
            const double beta = std::max(0.0, inner(gn, diff) / gg);
            axpby(-1.0, gn, beta, d_old);

            const double decrease = fx - fn;
            x = std::move(xn);
            g = std::move(gn);
            d = std::move(d_old);
            t_prev = t;
            fx = fn;
            res.trace.push_back(fx);
            if (decrease <= opts.f_tol * std::max(1.0, std::abs(fx)))
            {
                ++it;
                res.converged = true;
                break;
            }
        }
        res.point = std::move(x);
        res.value = fx;
        res.grad_norm = norm(g);
        res.iterations = it;
        return res;
    }
}
