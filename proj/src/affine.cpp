#include "tensecert/affine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tensecert/oracle.hpp"
#include "tensecert/simplex.hpp"

namespace tensecert {

EdgeSupport edge_support(const TensegrityFramework& fw) {
    EdgeSupport s;
    for (const auto& [i, j] : fw.missing_edges()) s.entries.push_back({i, j, SignClass::Free});
    for (const Edge& e : fw.edges) {
        if (e.kind == MemberKind::Cable) s.entries.push_back({e.i, e.j, SignClass::NonNeg});
        if (e.kind == MemberKind::Strut) s.entries.push_back({e.i, e.j, SignClass::NonPos});
    }
    std::sort(s.entries.begin(), s.entries.end(), [](const SupportEntry& a, const SupportEntry& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return s;
}

EdgeSupport edge_support(const TensegrityFramework& fw, const EdgePartition& partition) {
    EdgeSupport s;
    for (const auto& [i, j] : fw.missing_edges()) s.entries.push_back({i, j, SignClass::Free});
    for (int k : partition.cables_slack) {
        const Edge& e = fw.edges[static_cast<std::size_t>(k)];
        s.entries.push_back({e.i, e.j, SignClass::NonNeg});
    }
    for (int k : partition.struts_slack) {
        const Edge& e = fw.edges[static_cast<std::size_t>(k)];
        s.entries.push_back({e.i, e.j, SignClass::NonPos});
    }
    std::sort(s.entries.begin(), s.entries.end(), [](const SupportEntry& a, const SupportEntry& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return s;
}

Eigen::MatrixXd support_matrix(int n, const EdgeSupport& support, const Eigen::VectorXd& y) {
    if (y.size() != support.size())
        throw std::invalid_argument("support_matrix: weight count does not match support");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < support.size(); ++k) {
        const SupportEntry& e = support.entries[static_cast<std::size_t>(k)];
        m(e.i, e.j) += y(k);
        m(e.j, e.i) += y(k);
    }
    return m;
}

namespace {

// One column of the constraint system per support entry: the flattened
// matrix E^{ij} Z, centered by the projector I - ee^T/n in the general
// regime (that projection eliminates xi).
Eigen::MatrixXd constraint_columns(const TensegrityFramework& fw, const GaleMatrix& gale,
                                   const EdgeSupport& support, FlexRegime regime) {
    const int n = fw.n;
    const int bar = gale.bar_dim();
    Eigen::MatrixXd m(n * bar, support.size());
    for (int k = 0; k < support.size(); ++k) {
        const SupportEntry& e = support.entries[static_cast<std::size_t>(k)];
        Eigen::MatrixXd col = Eigen::MatrixXd::Zero(n, bar);
        col.row(e.i) = gale.basis.row(e.j);
        col.row(e.j) = gale.basis.row(e.i);
        if (regime == FlexRegime::General) col.rowwise() -= col.colwise().mean();
        m.col(k) = Eigen::Map<Eigen::VectorXd>(col.data(), col.size());
    }
    return m;
}

// Gauss-Jordan reduction with partial pivoting; rows below the working
// tolerance are dropped. Used for transcripts and to feed the LP a clean
// equality system.
Eigen::MatrixXd row_reduce(Eigen::MatrixXd m, double tol) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    int lead = 0;
    for (int col = 0; col < cols && lead < rows; ++col) {
        int pivot = -1;
        double best = tol * scale;
        for (int i = lead; i < rows; ++i) {
            if (std::abs(m(i, col)) > best) {
                best = std::abs(m(i, col));
                pivot = i;
            }
        }
        if (pivot < 0) continue;
        m.row(pivot).swap(m.row(lead));
        m.row(lead) /= m(lead, col);
        for (int i = 0; i < rows; ++i) {
            if (i == lead) continue;
            const double f = m(i, col);
            if (f != 0.0) m.row(i) -= f * m.row(lead);
        }
        ++lead;
    }
    Eigen::MatrixXd reduced = m.topRows(lead);
    for (int i = 0; i < lead; ++i)
        for (int j = 0; j < cols; ++j)
            if (std::abs(reduced(i, j)) < 1e-13) reduced(i, j) = 0.0;
    return reduced;
}

}  // namespace

std::optional<FlexSolution> affine_flex_feasibility(const TensegrityFramework& fw,
                                                    const GaleMatrix& gale,
                                                    const EdgeSupport& support, FlexRegime regime,
                                                    const Tolerances& tol,
                                                    FeasibilityTranscript* transcript) {
    FeasibilityTranscript local;
    FeasibilityTranscript& tr = transcript ? *transcript : local;
    tr = FeasibilityTranscript{};
    tr.regime = regime;
    if (support.size() == 0) {
        tr.empty_support = true;
        return std::nullopt;
    }

    const Eigen::MatrixXd columns = constraint_columns(fw, gale, support, regime);
    const Eigen::MatrixXd reduced = row_reduce(columns, 1e-11);
    for (int i = 0; i < reduced.rows(); ++i) {
        std::vector<ReducedConstraintTerm> row;
        for (int k = 0; k < support.size(); ++k)
            if (reduced(i, k) != 0.0) row.push_back({k, reduced(i, k)});
        tr.reduced_constraints.push_back(std::move(row));
    }

    auto finish = [&](Eigen::VectorXd y) -> std::optional<FlexSolution> {
        y /= y.cwiseAbs().maxCoeff();
        FlexSolution sol;
        sol.y = y;
        if (regime == FlexRegime::RankFull) {
            sol.xi = Eigen::VectorXd::Zero(gale.bar_dim());
        } else {
            const Eigen::MatrixXd ey = support_matrix(fw.n, support, y);
            sol.xi = gale.basis.transpose() * ey * Eigen::VectorXd::Ones(fw.n) / fw.n;
        }
        // Sanity: the normalized solution must satisfy the original system.
        const Eigen::MatrixXd ey = support_matrix(fw.n, support, sol.y);
        const Eigen::MatrixXd residual =
            ey * gale.basis - Eigen::VectorXd::Ones(fw.n) * sol.xi.transpose();
        if (residual.norm() > tol.feas_tol * fw.n)
            throw std::runtime_error("affine_flex_feasibility: solution residual exceeds tolerance");
        tr.feasible = true;
        return sol;
    };

    // Step 1: flexes supported entirely on free coordinates carry no sign
    // constraints, so any kernel vector of the free-column block works.
    std::vector<int> free_idx;
    for (int k = 0; k < support.size(); ++k)
        if (support.entries[static_cast<std::size_t>(k)].sign == SignClass::Free)
            free_idx.push_back(k);
    if (!free_idx.empty()) {
        Eigen::MatrixXd free_cols(columns.rows(), static_cast<int>(free_idx.size()));
        for (std::size_t t = 0; t < free_idx.size(); ++t)
            free_cols.col(static_cast<int>(t)) = columns.col(free_idx[t]);
        const Eigen::MatrixXd kernel = kernel_basis(free_cols, tol);
        tr.free_probe_dim = static_cast<int>(kernel.cols());
        if (kernel.cols() > 0) {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(support.size());
            for (std::size_t t = 0; t < free_idx.size(); ++t)
                y(free_idx[t]) = kernel(static_cast<int>(t), 0);
            return finish(std::move(y));
        }
    }

    // Step 2: bounded LP over the sign cone. Signed coordinates enter the
    // objective, so a maximum above the tolerance exhibits a nonzero point.
    int var_count = 0;
    std::vector<std::pair<int, double>> var_map;  // (support index, sign of contribution)
    for (int k = 0; k < support.size(); ++k) {
        switch (support.entries[static_cast<std::size_t>(k)].sign) {
            case SignClass::NonNeg:
                var_map.emplace_back(k, 1.0);
                break;
            case SignClass::NonPos:
                var_map.emplace_back(k, -1.0);
                break;
            case SignClass::Free:
                var_map.emplace_back(k, 1.0);
                var_map.emplace_back(k, -1.0);
                break;
        }
    }
    var_count = static_cast<int>(var_map.size());

    const int eq = static_cast<int>(reduced.rows());
    lp::Problem prob;
    prob.constraints.setZero(2 * eq + var_count, var_count);
    prob.bounds.setZero(2 * eq + var_count);
    prob.objective.setZero(var_count);
    for (int v = 0; v < var_count; ++v) {
        const auto& [k, sgn] = var_map[static_cast<std::size_t>(v)];
        for (int i = 0; i < eq; ++i) {
            prob.constraints(i, v) = sgn * reduced(i, k);
            prob.constraints(eq + i, v) = -sgn * reduced(i, k);
        }
        prob.constraints(2 * eq + v, v) = 1.0;  // box
        prob.bounds(2 * eq + v) = 1.0;
        if (support.entries[static_cast<std::size_t>(k)].sign != SignClass::Free)
            prob.objective(v) = 1.0;
    }
    const lp::Result res = lp::solve(prob, tol.feas_tol);
    tr.lp_objective = res.objective;
    tr.lp_iterations = res.iterations;
    if (res.status == lp::Status::Unbounded)
        throw std::runtime_error("affine_flex_feasibility: boxed LP reported unbounded");
    if (res.objective > tol.feas_tol) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(support.size());
        for (int v = 0; v < var_count; ++v) {
            const auto& [k, sgn] = var_map[static_cast<std::size_t>(v)];
            y(k) += sgn * res.solution(v);
        }
        return finish(std::move(y));
    }
    return std::nullopt;
}

Eigen::VectorXd x_from_y(const TensegrityFramework& fw, const EdgeSupport& support,
                         const Eigen::VectorXd& y) {
    const Eigen::MatrixXd ey = support_matrix(fw.n, support, y);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fw.n);
    const Eigen::VectorXd eye = ey * ones;
    const double total = ones.dot(eye);
    const double n = fw.n;
    return -eye / n + (total / (2.0 * n * n)) * ones;
}

Eigen::MatrixXd phi_from_y(const TensegrityFramework& fw, const EdgeSupport& support,
                           const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Tolerances& tol) {
    const Eigen::MatrixXd& p = fw.points;
    const double coord_scale = 1.0 + p.cwiseAbs().maxCoeff();
    if ((p.colwise().sum()).norm() > 1e-9 * coord_scale * fw.n)
        throw std::invalid_argument("phi_from_y: framework must be centered");

    const Eigen::MatrixXd ey = support_matrix(fw.n, support, y);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fw.n);
    const Eigen::MatrixXd target = ey + x * ones.transpose() + ones * x.transpose();

    const Eigen::MatrixXd pinv = (p.transpose() * p).inverse() * p.transpose();
    Eigen::MatrixXd phi = pinv * target * pinv.transpose();
    phi = 0.5 * (phi + phi.transpose());

    const double residual = (p * phi * p.transpose() - target).norm();
    if (residual > tol.feas_tol * (1.0 + ey.norm()) * (1.0 + coord_scale * coord_scale))
        throw std::runtime_error("phi_from_y: residual " + std::to_string(residual) +
                                 " too large; weights are not a feasible flex");
    if (phi.norm() < 1e-12)
        throw std::invalid_argument("phi_from_y: recovered matrix is zero; weights must be nonzero");
    return phi;
}

DominatedBuild build_dominated_framework(const TensegrityFramework& fw, const Eigen::MatrixXd& phi,
                                         const Tolerances& tol) {
    if (phi.rows() != fw.r || phi.cols() != fw.r)
        throw std::invalid_argument("build_dominated_framework: shape mismatch");
    if (phi.norm() < 1e-12)
        throw std::invalid_argument("build_dominated_framework: zero direction");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (phi + phi.transpose()));
    const double min_eig = es.eigenvalues()(0);
    DominatedBuild out;
    out.epsilon = min_eig < 0.0 ? std::min(1.0, 1.0 / (2.0 * std::abs(min_eig))) : 1.0;

    Eigen::VectorXd sqrt_eigs = (Eigen::VectorXd::Ones(fw.r) + out.epsilon * es.eigenvalues()).array().sqrt();
    out.transform = es.eigenvectors() * sqrt_eigs.asDiagonal() * es.eigenvectors().transpose();
    out.configuration = fw.points * out.transform;  // rows q_i = A p_i with A symmetric

    if (!domination_check(fw, out.configuration, tol).dominated)
        throw std::runtime_error("build_dominated_framework: constructed configuration not dominated");
    if (is_congruent(fw.points, out.configuration, tol.feas_tol))
        throw std::runtime_error(
            "build_dominated_framework: constructed configuration is congruent; tolerance breach");
    return out;
}

DominationReport domination_check(const TensegrityFramework& fw, const Eigen::MatrixXd& q,
                                  const Tolerances& tol) {
    if (q.rows() != fw.n) throw std::invalid_argument("domination_check: point count mismatch");
    DominationReport rep;
    rep.dominated = true;
    for (const Edge& e : fw.edges) {
        const double ref = (fw.points.row(e.i) - fw.points.row(e.j)).squaredNorm();
        const double got = (q.row(e.i) - q.row(e.j)).squaredNorm();
        EdgeResidualEntry entry{e.i, e.j, e.kind, got - ref, false};
        const double slack = tol.feas_tol * (1.0 + ref);
        switch (e.kind) {
            case MemberKind::Bar: entry.ok = std::abs(entry.residual) <= slack; break;
            case MemberKind::Cable: entry.ok = entry.residual <= slack; break;
            case MemberKind::Strut: entry.ok = entry.residual >= -slack; break;
        }
        rep.dominated = rep.dominated && entry.ok;
        rep.edges.push_back(entry);
    }
    return rep;
}

AffineFlexWitness build_flex_witness(const TensegrityFramework& fw, const EdgeSupport& support,
                                     const FlexSolution& solution, const Tolerances& tol) {
    AffineFlexWitness w;
    w.support = support;
    w.y = solution.y;
    w.xi = solution.xi;
    w.x = x_from_y(fw, support, solution.y);
    w.phi = phi_from_y(fw, support, solution.y, w.x, tol);
    DominatedBuild build = build_dominated_framework(fw, w.phi, tol);
    w.epsilon = build.epsilon;
    w.transform = std::move(build.transform);
    w.configuration = std::move(build.configuration);
    return w;
}

}  // namespace tensecert
