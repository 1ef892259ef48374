#include "tensecert/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace tensecert::lp {

Result solve(const Problem& problem, double tol) {
    const int m = static_cast<int>(problem.constraints.rows());
    const int n = static_cast<int>(problem.constraints.cols());
    if (problem.bounds.size() != m || problem.objective.size() != n)
        throw std::invalid_argument("lp::solve: inconsistent problem sizes");
    if (m > 0 && problem.bounds.minCoeff() < 0.0)
        throw std::invalid_argument("lp::solve: bounds must be nonnegative");

    constexpr double kPivotEps = 1e-11;

    // tableau: [A I b], last row is the reduced-cost row (starts at -c).
    Eigen::MatrixXd t(m + 1, n + m + 1);
    t.setZero();
    t.block(0, 0, m, n) = problem.constraints;
    t.block(0, n, m, m).setIdentity();
    t.block(0, n + m, m, 1) = problem.bounds;
    t.block(m, 0, 1, n) = -problem.objective.transpose();

    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    Result res;
    const int max_iter = 2000 + 200 * (n + m);
    while (res.iterations < max_iter) {
        // Bland: first column with an improving reduced cost.
        int enter = -1;
        for (int j = 0; j < n + m; ++j) {
            if (t(m, j) < -tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;  // optimal

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (t(i, enter) <= kPivotEps) continue;
            const double ratio = t(i, n + m) / t(i, enter);
            if (leave < 0 || ratio < best_ratio - kPivotEps ||
                (ratio < best_ratio + kPivotEps &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            res.status = Status::Unbounded;
            return res;
        }

        t.row(leave) /= t(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t(i, enter);
            if (f != 0.0) t.row(i) -= f * t.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
        ++res.iterations;
    }
    if (res.iterations >= max_iter) {
        res.status = Status::IterationLimit;
        return res;
    }

    res.solution = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < n) res.solution(basis[static_cast<std::size_t>(i)]) = t(i, n + m);
    res.objective = problem.objective.dot(res.solution);
    return res;
}

}  // namespace tensecert::lp
