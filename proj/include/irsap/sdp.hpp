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


#ifndef IRSAP_SDP_HPP
#define IRSAP_SDP_HPP

#include "irsap/types.hpp"

#include <random>

namespace irsap
{
    // Hermitian (N+1) x (N+1) matrix [[B^H B, B^H c], [c^H B, 0]] of the lifted unit-modulus quadratic program
    struct LiftedProblem
    {
        CMatrix matrix;
        int dim() const { return static_cast<int>(matrix.rows()) - 1; }
    };

    // For unit-modulus theta: lifted_value(lift(B, c), theta) = |B theta + c|^2 - |c|^2
    LiftedProblem lift(const CMatrix &B, const CVector &c);

    // [theta; 1]^H B~ [theta; 1]
    double lifted_value(const LiftedProblem &p, const CVector &theta);

    struct SdpOptions
    {
        double tolerance = 1e-9; // relative duality gap target
        int max_iterations = 200;
    };

    // Optimum of max trace(B~ X) s.t. diag(X) = 1, X >= 0
    struct SdpSolution
    {
        CMatrix matrix;           // X*, Hermitian PSD with unit diagonal
        double value = 0.0;       // primal objective trace(B~ X*)
        double upper_bound = 0.0; // dual objective; every feasible point of the relaxation is below it
        double relative_gap = 0.0;
        int iterations = 0;
    };

    class SolverError : public std::runtime_error
    {
    public:
        SolverError(const std::string &what, CMatrix last_iterate, double gap)
            : std::runtime_error(what), last_iterate_(std::move(last_iterate)), gap_(gap) {}

        const CMatrix &last_iterate() const { return last_iterate_; }
        double gap() const { return gap_; }

    private:
        CMatrix last_iterate_;
        double gap_;
    };

    SdpSolution solve_relaxation(const LiftedProblem &p, const SdpOptions &opt = {});

    struct RandomizedSolution
    {
        CVector theta;      // unit-modulus N-vector
        RVector phases;     // arg(theta)
        double value = 0.0; // lifted_value(p, theta)
        bool rank_one = false;
    };

    // Gaussian randomization. A rank-one X* (second eigenvalue <= 1e-8 of the first) is decoded directly.
    RandomizedSolution randomize(const SdpSolution &sol, const LiftedProblem &p, int count, std::mt19937_64 &rng);
}

#endif
