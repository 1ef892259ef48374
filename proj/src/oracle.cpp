#include "tensecert/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "tensecert/affine.hpp"

namespace tensecert {

bool is_congruent(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q, double tol) {
    if (p.rows() != q.rows()) throw std::invalid_argument("is_congruent: point count mismatch");
    const double slack = tol * (1.0 + p.squaredNorm());
    for (int i = 0; i < p.rows(); ++i)
        for (int j = i + 1; j < p.rows(); ++j) {
            const double dp = (p.row(i) - p.row(j)).squaredNorm();
            const double dq = (q.row(i) - q.row(j)).squaredNorm();
            if (std::abs(dp - dq) > slack) return false;
        }
    return true;
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    state = mix(state, 0x2545f4914f6cdd1dULL);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
}

double standard_normal(std::uint64_t& state) {
    double u1 = uniform01(state);
    const double u2 = uniform01(state);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Penalty on violated member constraints with a capped reward for moving
// pair distances away from the reference, to escape the congruence orbit.
double descent_objective(const TensegrityFramework& fw, const Eigen::MatrixXd& q, double diam2,
                         double repulsion_weight, Eigen::MatrixXd& grad) {
    grad.setZero();
    double value = 0.0;
    for (const Edge& e : fw.edges) {
        const Eigen::RowVectorXd d = q.row(e.i) - q.row(e.j);
        const double ref = (fw.points.row(e.i) - fw.points.row(e.j)).squaredNorm();
        double res = d.squaredNorm() - ref;
        if (e.kind == MemberKind::Cable && res < 0.0) res = 0.0;
        if (e.kind == MemberKind::Strut && res > 0.0) res = 0.0;
        value += res * res / (diam2 * diam2);
        if (res != 0.0) {
            grad.row(e.i) += 4.0 * res * d / (diam2 * diam2);
            grad.row(e.j) -= 4.0 * res * d / (diam2 * diam2);
        }
    }
    double gaps = 0.0;
    Eigen::MatrixXd gap_grad = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    for (int i = 0; i < fw.n; ++i)
        for (int j = i + 1; j < fw.n; ++j) {
            const Eigen::RowVectorXd d = q.row(i) - q.row(j);
            const double gap = d.squaredNorm() - (fw.points.row(i) - fw.points.row(j)).squaredNorm();
            gaps += std::abs(gap) / diam2;
            if (gap != 0.0) {
                const double sgn = gap > 0.0 ? 1.0 : -1.0;
                gap_grad.row(i) += sgn * 2.0 * d / diam2;
                gap_grad.row(j) -= sgn * 2.0 * d / diam2;
            }
        }
    if (gaps < 1.0) {  // reward saturates once clearly non-congruent
        value -= repulsion_weight * gaps;
        grad -= repulsion_weight * gap_grad;
    } else {
        value -= repulsion_weight;
    }
    return value;
}

// Gauss-Seidel sweeps projecting violated members back to feasible lengths.
// Returns the max squared-length violation after the last sweep.
double project_members(const TensegrityFramework& fw, Eigen::MatrixXd& q, int sweeps) {
    double worst = 0.0;
    for (int s = 0; s < sweeps; ++s) {
        worst = 0.0;
        for (const Edge& e : fw.edges) {
            Eigen::RowVectorXd d = q.row(e.i) - q.row(e.j);
            const double ref = (fw.points.row(e.i) - fw.points.row(e.j)).squaredNorm();
            const double len2 = d.squaredNorm();
            const bool violated = (e.kind == MemberKind::Bar && len2 != ref) ||
                                  (e.kind == MemberKind::Cable && len2 > ref) ||
                                  (e.kind == MemberKind::Strut && len2 < ref);
            if (!violated) continue;
            const double len = std::sqrt(len2);
            if (len < 1e-14) {  // coincident endpoints: nudge apart deterministically
                d.setZero();
                d(0) = 1e-7;
            }
            const double target = std::sqrt(ref);
            const double scale = len < 1e-14 ? target : (len - target) / len;
            q.row(e.i) -= 0.5 * scale * d;
            q.row(e.j) += 0.5 * scale * d;
            worst = std::max(worst, std::abs(len2 - ref));
        }
        if (worst == 0.0) break;
    }
    // recompute the true violation after the final sweep
    worst = 0.0;
    for (const Edge& e : fw.edges) {
        const double ref = (fw.points.row(e.i) - fw.points.row(e.j)).squaredNorm();
        const double res = (q.row(e.i) - q.row(e.j)).squaredNorm() - ref;
        if (e.kind == MemberKind::Bar) worst = std::max(worst, std::abs(res));
        if (e.kind == MemberKind::Cable) worst = std::max(worst, std::max(0.0, res));
        if (e.kind == MemberKind::Strut) worst = std::max(worst, std::max(0.0, -res));
    }
    return worst;
}

}  // namespace

std::optional<Eigen::MatrixXd> search_dominated_noncongruent(const TensegrityFramework& fw,
                                                             int target_dim,
                                                             const SearchBudget& budget,
                                                             const Tolerances& tol) {
    if (target_dim < 1 || target_dim >= fw.n)
        throw std::invalid_argument("search_dominated_noncongruent: need 1 <= s <= n-1");

    double diam2 = 0.0;
    for (int i = 0; i < fw.n; ++i)
        for (int j = i + 1; j < fw.n; ++j)
            diam2 = std::max(diam2, (fw.points.row(i) - fw.points.row(j)).squaredNorm());
    diam2 += 1.0;

    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(fw.n, target_dim);
    const int copy = std::min(target_dim, fw.r);
    base.leftCols(copy) = fw.points.leftCols(copy);

    Eigen::MatrixXd grad(fw.n, target_dim);
    for (int restart = 0; restart < budget.restarts; ++restart) {
        std::uint64_t state = mix(budget.seed, static_cast<std::uint64_t>(restart) * 12289 + 7);
        Eigen::MatrixXd q = base;
        const double sigma = 0.3 * std::sqrt(diam2) * (0.2 + uniform01(state));
        for (int i = 0; i < q.rows(); ++i)
            for (int c = 0; c < q.cols(); ++c) q(i, c) += sigma * standard_normal(state);

        const int explore = std::max(1, budget.iterations / 4);
        for (int it = 0; it < explore; ++it) {
            descent_objective(fw, q, diam2, 0.25, grad);
            const double gnorm = grad.norm();
            if (gnorm < 1e-14) break;
            const double step = budget.initial_step * std::sqrt(diam2) / (1.0 + 8.0 * it / explore);
            q -= (step / gnorm) * grad;
        }
        const double violation = project_members(fw, q, budget.iterations);
        if (violation > 1e-12 * diam2) continue;
        if (!is_congruent(fw.points, q, tol.feas_tol) && domination_check(fw, q, tol).dominated)
            return q;
    }
    return std::nullopt;
}

}  // namespace tensecert
