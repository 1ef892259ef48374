#pragma once

#include <Eigen/Dense>

namespace tensecert::lp {

/// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0.
struct Problem {
    Eigen::MatrixXd constraints;  ///< A, m x n
    Eigen::VectorXd bounds;       ///< b, nonnegative
    Eigen::VectorXd objective;    ///< c
};

enum class Status { Optimal, Unbounded, IterationLimit };

struct Result {
    Status status = Status::Optimal;
    double objective = 0.0;
    Eigen::VectorXd solution;
    int iterations = 0;
};

/// Dense tableau simplex with Bland's rule for anti-cycling. `tol` is the
/// reduced-cost threshold for entering variables. Problems here are tiny
/// (tens of variables), so no effort is spent on sparsity or revised forms.
Result solve(const Problem& problem, double tol);

}  // namespace tensecert::lp
