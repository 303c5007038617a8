// SPDX-License-Identifier: Apache-2.0
//
// irsap - codebook design and evaluation for IRS-integrated access points
// Copyright (C) 2026 The irsap authors
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


#include "irsap/sdp.hpp"
#include "irsap/random.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace irsap
{
    LiftedProblem lift(const CMatrix &B, const CVector &c)
    {
        if (B.rows() != c.size())
            throw ConfigError("lift: B has " + std::to_string(B.rows()) + " rows but c has " + std::to_string(c.size()));
        const Eigen::Index n = B.cols();
        LiftedProblem p;
        p.matrix = CMatrix::Zero(n + 1, n + 1);
        p.matrix.topLeftCorner(n, n) = B.adjoint() * B;
        p.matrix.topRightCorner(n, 1) = B.adjoint() * c;
        p.matrix.bottomLeftCorner(1, n) = p.matrix.topRightCorner(n, 1).adjoint();
        return p;
    }

    double lifted_value(const LiftedProblem &p, const CVector &theta)
    {
        const Eigen::Index n = p.matrix.rows() - 1;
        assert(theta.size() == n);
        CVector t(n + 1);
        t.head(n) = theta;
        t[n] = 1.0;
        return std::real(t.dot(p.matrix * t));
    }

    namespace
    {
        // Largest alpha with M + alpha dM still positive definite, given the Cholesky factor of M
        double max_step(const Eigen::LLT<CMatrix> &llt, const CMatrix &dM)
        {
            const auto &L = llt.matrixL();
            CMatrix W = L.solve(dM);
            W = L.solve(W.adjoint()).adjoint();
            W = 0.5 * (W + W.adjoint());
            const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(W, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
            return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
        }

        CMatrix hermitian_part(const CMatrix &M) { return 0.5 * (M + M.adjoint()); }
    }

    // Primal-dual path following (HKM direction) for
    //   max trace(C X)  s.t. diag(X) = 1, X >= 0       and its dual
    //   min sum(y)      s.t. Z = Diag(y) - C >= 0
    // Both iterates stay strictly feasible; the gap is trace(Z X).
    SdpSolution solve_relaxation(const LiftedProblem &p, const SdpOptions &opt)
    {
        const Eigen::Index n = p.matrix.rows();
        if (n == 0)
            throw ConfigError("empty lifted problem");
        const CMatrix Bt = hermitian_part(p.matrix);
        if ((Bt - p.matrix).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, p.matrix.cwiseAbs().maxCoeff()))
            throw ConfigError("lifted matrix is not Hermitian");

        SdpSolution sol;
        const double scale = Bt.cwiseAbs().maxCoeff();
        if (scale == 0.0)
        {
            sol.matrix = CMatrix::Identity(n, n);
            return sol;
        }
        const CMatrix C = Bt / scale;

        CMatrix X = CMatrix::Identity(n, n);
        RVector y(n);
        for (Eigen::Index i = 0; i < n; ++i)
            y[i] = C.row(i).cwiseAbs().sum() + 1.0;
        CMatrix Z = -C;
        Z.diagonal() += y.cast<cplx>();

        double sigma = 0.3;
        double gap = 0.0, primal = 0.0;
        for (int it = 0; it < opt.max_iterations; ++it)
        {
            gap = std::real((Z * X).trace());
            primal = std::real((C * X).trace());
            sol.iterations = it;
            if (gap <= opt.tolerance * std::max(1.0, std::abs(primal)))
                break;

            Eigen::LLT<CMatrix> zllt(Z);
            Eigen::LLT<CMatrix> xllt(X);
            if (zllt.info() != Eigen::Success || xllt.info() != Eigen::Success)
                throw SolverError("SDP iterate lost positive definiteness", X, gap / std::max(1.0, std::abs(primal)));
            const CMatrix Zinv = hermitian_part(zllt.solve(CMatrix::Identity(n, n)));

            const double mu = sigma * gap / static_cast<double>(n);
            RMatrix schur(n, n);
            RVector rhs(n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                for (Eigen::Index k = 0; k < n; ++k)
                    schur(i, k) = std::real(X(i, k) * Zinv(k, i));
                rhs[i] = mu * std::real(Zinv(i, i)) - 1.0;
            }
            const RVector dy = schur.llt().solve(rhs);

            CMatrix dX = mu * Zinv - X - X * dy.cast<cplx>().asDiagonal() * Zinv;
            dX = hermitian_part(dX);
            CMatrix dZ = CMatrix::Zero(n, n);
            dZ.diagonal() = dy.cast<cplx>();

            const double ap = std::min(1.0, 0.95 * max_step(xllt, dX));
            const double ad = std::min(1.0, 0.95 * max_step(zllt, dZ));
            X = hermitian_part(X + ap * dX);
            y += ad * dy;
            Z = -C;
            Z.diagonal() += y.cast<cplx>();

            sigma = std::min(ap, ad) > 0.9 ? 0.1 : (std::min(ap, ad) > 0.5 ? 0.25 : 0.5);
            sol.iterations = it + 1;
        }

        gap = std::real((Z * X).trace());
        primal = std::real((C * X).trace());
        sol.relative_gap = gap / std::max(1.0, std::abs(primal));
        if (sol.relative_gap > opt.tolerance)
            throw SolverError("SDP relaxation did not converge in " + std::to_string(opt.max_iterations) +
                                  " iterations (relative gap " + std::to_string(sol.relative_gap) + ")",
                              X, sol.relative_gap);

        sol.matrix = X;
        sol.value = scale * primal;
        sol.upper_bound = scale * y.sum();
        return sol;
    }

    namespace
    {
        CVector decode(const CVector &v)
        {
            const Eigen::Index n = v.size() - 1;
            const double ref = std::arg(v[n]);
            CVector theta(n);
            for (Eigen::Index i = 0; i < n; ++i)
                theta[i] = std::polar(1.0, std::arg(v[i]) - ref);
            return theta;
        }
    }

    RandomizedSolution randomize(const SdpSolution &sol, const LiftedProblem &p, int count, std::mt19937_64 &rng)
    {
        if (count < 1)
            throw ConfigError("randomization count must be >= 1");
        const Eigen::Index n1 = sol.matrix.rows();
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(sol.matrix));
        RVector lambda = eig.eigenvalues();
        assert(lambda.minCoeff() >= -1e-8 * std::max(1.0, lambda.maxCoeff()));
        lambda = lambda.cwiseMax(0.0);
        const double top = lambda[n1 - 1];
        const double second = n1 > 1 ? lambda[n1 - 2] : 0.0;

        RandomizedSolution best;
        best.value = -std::numeric_limits<double>::infinity();
        const auto consider = [&](const CVector &v) {
            const CVector theta = decode(v);
            const double val = lifted_value(p, theta);
            if (val > best.value)
            {
                best.value = val;
                best.theta = theta;
            }
        };

        if (second <= 1e-8 * top)
        {
            best.rank_one = true;
            consider(eig.eigenvectors().col(n1 - 1));
        }
        else
        {
            const CMatrix factor = eig.eigenvectors() * lambda.cwiseSqrt().cast<cplx>().asDiagonal();
            CVector r(n1);
            for (int k = 0; k < count; ++k)
            {
                CVector v;
                do
                {
                    for (Eigen::Index i = 0; i < n1; ++i)
                        r[i] = complex_gaussian(rng);
                    v = factor * r;
                } while (std::abs(v[n1 - 1]) == 0.0);
                consider(v);
            }
        }

        best.phases.resize(best.theta.size());
        for (Eigen::Index i = 0; i < best.theta.size(); ++i)
            best.phases[i] = std::arg(best.theta[i]);
        assert(best.value <= sol.upper_bound + 1e-7 * std::abs(sol.upper_bound));
        return best;
    }
}
