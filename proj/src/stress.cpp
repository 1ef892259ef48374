#include "tensecert/stress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "tensecert/gale.hpp"

namespace tensecert {

double StressAssignment::infinity_norm() const {
    double m = 0.0;
    for (double w : weights) m = std::max(m, std::abs(w));
    return m;
}

namespace {

// n*r x |E| matrix of the equilibrium conditions sum_j w_ij (p_i - p_j) = 0.
Eigen::MatrixXd equilibrium_operator(const TensegrityFramework& fw) {
    const int r = fw.r;
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(fw.n * r, static_cast<int>(fw.edges.size()));
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        const Edge& e = fw.edges[k];
        const Eigen::RowVectorXd d = fw.points.row(e.i) - fw.points.row(e.j);
        op.block(e.i * r, static_cast<int>(k), r, 1) = d.transpose();
        op.block(e.j * r, static_cast<int>(k), r, 1) = -d.transpose();
    }
    return op;
}

double edge_scale(const TensegrityFramework& fw) {
    double m = 0.0;
    for (const Edge& e : fw.edges)
        m = std::max(m, (fw.points.row(e.i) - fw.points.row(e.j)).norm());
    return 1.0 + m;
}

}  // namespace

std::vector<StressAssignment> stress_space_basis(const TensegrityFramework& fw,
                                                 const Tolerances& tol) {
    if (fw.edges.empty()) return {};
    const Eigen::MatrixXd kernel = kernel_basis(equilibrium_operator(fw), tol);
    std::vector<StressAssignment> basis;
    basis.reserve(static_cast<std::size_t>(kernel.cols()));
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        StressAssignment w;
        w.weights.assign(kernel.col(c).data(), kernel.col(c).data() + kernel.rows());
        basis.push_back(std::move(w));
    }
    return basis;
}

double equilibrium_residual(const TensegrityFramework& fw, const StressAssignment& w) {
    if (w.weights.size() != fw.edges.size())
        throw std::invalid_argument("stress assignment does not match edge count");
    Eigen::MatrixXd residual = Eigen::MatrixXd::Zero(fw.n, fw.r);
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        const Edge& e = fw.edges[k];
        const Eigen::RowVectorXd d = w.weights[k] * (fw.points.row(e.i) - fw.points.row(e.j));
        residual.row(e.i) += d;
        residual.row(e.j) -= d;
    }
    return residual.rowwise().norm().maxCoeff();
}

StressMatrix assemble_stress_matrix(const TensegrityFramework& fw, const StressAssignment& w,
                                    const Tolerances& tol) {
    const double res = equilibrium_residual(fw, w);
    const double allowed = tol.feas_tol * (1.0 + w.infinity_norm()) * edge_scale(fw);
    if (res > allowed)
        throw std::invalid_argument("equilibrium residual " + std::to_string(res) +
                                    " too large for a stress assignment");
    StressMatrix sm;
    sm.source = w;
    sm.matrix = Eigen::MatrixXd::Zero(fw.n, fw.n);
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        const Edge& e = fw.edges[k];
        sm.matrix(e.i, e.j) = -w.weights[k];
        sm.matrix(e.j, e.i) = -w.weights[k];
        sm.matrix(e.i, e.i) += w.weights[k];
        sm.matrix(e.j, e.j) += w.weights[k];
    }
    return sm;
}

ProperReport is_proper(const TensegrityFramework& fw, const StressAssignment& w,
                       const Tolerances& tol) {
    ProperReport rep;
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        const MemberKind kind = fw.edges[k].kind;
        const double wk = w.weights[k];
        const bool bad = (kind == MemberKind::Cable && wk < -tol.feas_tol) ||
                         (kind == MemberKind::Strut && wk > tol.feas_tol);
        if (bad) {
            rep.proper = false;
            rep.violations.push_back(static_cast<int>(k));
        }
    }
    return rep;
}

EdgePartition edge_partition(const TensegrityFramework& fw, const StressAssignment& w,
                             const Tolerances& tol) {
    EdgePartition part;
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        const bool stressed = std::abs(w.weights[k]) > tol.feas_tol;
        switch (fw.edges[k].kind) {
            case MemberKind::Cable:
                (stressed ? part.cables_stressed : part.cables_slack).push_back(static_cast<int>(k));
                break;
            case MemberKind::Strut:
                (stressed ? part.struts_stressed : part.struts_slack).push_back(static_cast<int>(k));
                break;
            case MemberKind::Bar:
                break;
        }
    }
    return part;
}

namespace {

// splitmix64; keeps restart streams deterministic and independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    state = mix_seed(state, 0x2545f4914f6cdd1dULL);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
}

double standard_normal(std::uint64_t& state) {
    // Box-Muller on the deterministic uniform stream.
    double u1 = uniform01(state);
    double u2 = uniform01(state);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

struct Candidate {
    StressAssignment stress;
    StressMatrix matrix;
    PsdReport psd;
};

std::optional<Candidate> evaluate_candidate(const TensegrityFramework& fw,
                                            const std::vector<StressAssignment>& basis,
                                            const Eigen::VectorXd& coeffs, const Tolerances& tol) {
    StressAssignment w;
    w.weights.assign(fw.edges.size(), 0.0);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        for (std::size_t e = 0; e < w.weights.size(); ++e)
            w.weights[e] += coeffs(k) * basis[static_cast<std::size_t>(k)].weights[e];
    if (!is_proper(fw, w, tol).proper) return std::nullopt;
    StressMatrix sm = assemble_stress_matrix(fw, w, tol);
    PsdReport psd = psd_check(sm.matrix, tol);
    if (!psd.is_psd || psd.rank == 0) return std::nullopt;
    return Candidate{std::move(w), std::move(sm), psd};
}

}  // namespace

std::optional<StressSearchResult> find_proper_psd_stress(const TensegrityFramework& fw,
                                                         const Tolerances& tol,
                                                         const StressSearchBudget& budget) {
    const std::vector<StressAssignment> basis = stress_space_basis(fw, tol);
    const int dim = static_cast<int>(basis.size());
    if (dim == 0) return std::nullopt;

    const TensegrityFramework centered = center_configuration(fw);
    Eigen::MatrixXd stacked(fw.r + 1, fw.n);
    stacked.topRows(fw.r) = centered.points.transpose();
    stacked.bottomRows(1).setOnes();
    const Eigen::MatrixXd gale = kernel_basis(stacked, tol);  // n x r_bar, orthonormal

    auto finish = [&](const Candidate& c) {
        StressSearchResult out;
        out.stress = c.stress;
        out.matrix = c.matrix;
        out.rank = c.psd.rank;
        const Eigen::MatrixXd restricted = gale.transpose() * c.matrix.matrix * gale;
        out.min_restricted_eigenvalue =
            restricted.size() == 0
                ? 0.0
                : Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(restricted, Eigen::EigenvaluesOnly)
                      .eigenvalues()(0);
        return out;
    };

    if (dim == 1) {
        for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd c(1);
            c << sign;
            if (auto cand = evaluate_candidate(fw, basis, c, tol)) return finish(*cand);
        }
        return std::nullopt;
    }

    // Gale-frame representation of each basis stress matrix; PSD of the
    // assembled matrix is equivalent to PSD of its restriction here.
    std::vector<Eigen::MatrixXd> restricted_basis;
    restricted_basis.reserve(static_cast<std::size_t>(dim));
    for (const StressAssignment& bw : basis) {
        Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(fw.n, fw.n);
        for (std::size_t k = 0; k < fw.edges.size(); ++k) {
            const Edge& e = fw.edges[k];
            omega(e.i, e.j) = -bw.weights[k];
            omega(e.j, e.i) = -bw.weights[k];
            omega(e.i, e.i) += bw.weights[k];
            omega(e.j, e.j) += bw.weights[k];
        }
        restricted_basis.push_back(gale.transpose() * omega * gale);
    }

    // Sign constraints on coefficient space: cable rows want >= 0, struts <= 0.
    std::vector<std::pair<Eigen::VectorXd, double>> cone;  // (a, s): need s * a.c >= 0
    for (std::size_t k = 0; k < fw.edges.size(); ++k) {
        if (fw.edges[k].kind == MemberKind::Bar) continue;
        Eigen::VectorXd a(dim);
        for (int b = 0; b < dim; ++b) a(b) = basis[static_cast<std::size_t>(b)].weights[k];
        if (a.norm() == 0.0) continue;
        cone.emplace_back(a, fw.edges[k].kind == MemberKind::Cable ? 1.0 : -1.0);
    }
    auto project_cone = [&](Eigen::VectorXd& c) {
        for (int sweep = 0; sweep < 8; ++sweep) {
            bool clean = true;
            for (const auto& [a, s] : cone) {
                const double v = s * a.dot(c);
                if (v < 0.0) {
                    c -= (s * v / a.squaredNorm()) * a;
                    clean = false;
                }
            }
            if (clean) break;
        }
    };

    std::optional<Candidate> best;
    double best_min_eig = 0.0;
    auto consider = [&](const Eigen::VectorXd& c) {
        auto cand = evaluate_candidate(fw, basis, c, tol);
        if (!cand) return;
        const Eigen::MatrixXd psi = [&] {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(gale.cols(), gale.cols());
            for (int b = 0; b < dim; ++b) acc += c(b) * restricted_basis[static_cast<std::size_t>(b)];
            return acc;
        }();
        const double min_eig =
            psi.size() == 0 ? 0.0
                            : Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(psi, Eigen::EigenvaluesOnly)
                                  .eigenvalues()(0);
        if (!best || cand->psd.rank > best->psd.rank ||
            (cand->psd.rank == best->psd.rank && min_eig > best_min_eig)) {
            best = std::move(cand);
            best_min_eig = min_eig;
        }
    };

    // Deterministic coordinate starts first, then seeded random restarts.
    std::vector<Eigen::VectorXd> starts;
    for (int b = 0; b < dim; ++b) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
        c(b) = 1.0;
        starts.push_back(c);
        starts.push_back(-c);
    }
    for (int rs = 0; rs < budget.restarts; ++rs) {
        std::uint64_t state = mix_seed(budget.seed, static_cast<std::uint64_t>(rs));
        Eigen::VectorXd c(dim);
        for (int b = 0; b < dim; ++b) c(b) = standard_normal(state);
        starts.push_back(c);
    }

    for (Eigen::VectorXd c : starts) {
        if (c.norm() == 0.0) continue;
        c.normalize();
        project_cone(c);
        for (int it = 0; it < budget.iterations; ++it) {
            if (c.norm() < 1e-12) break;
            c /= c.norm();
            Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(gale.cols(), gale.cols());
            for (int b = 0; b < dim; ++b) psi += c(b) * restricted_basis[static_cast<std::size_t>(b)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psi);
            const Eigen::VectorXd v = es.eigenvectors().col(0);
            Eigen::VectorXd grad(dim);
            for (int b = 0; b < dim; ++b)
                grad(b) = v.dot(restricted_basis[static_cast<std::size_t>(b)] * v);
            const double step = 0.5 / (1.0 + 0.05 * it);
            c += step * grad;
            project_cone(c);
        }
        if (c.norm() > 1e-12) {
            c /= c.norm();
            consider(c);
        }
    }
    if (!best) return std::nullopt;
    return finish(*best);
}

StressDecomposition psi_factor(const StressMatrix& stress, const GaleMatrix& gale,
                               const Tolerances& tol) {
    const Eigen::MatrixXd& z = gale.basis;
    const Eigen::MatrixXd& omega = stress.matrix;
    if (z.rows() != omega.rows())
        throw std::invalid_argument("psi_factor: Gale matrix size mismatch");
    const Eigen::MatrixXd gram_inv = (z.transpose() * z).inverse();
    Eigen::MatrixXd psi = gram_inv * z.transpose() * omega * z * gram_inv;
    psi = 0.5 * (psi + psi.transpose());
    const double residual = (z * psi * z.transpose() - omega).norm();
    if (residual > tol.feas_tol * (1.0 + omega.norm()))
        throw std::invalid_argument(
            "psi_factor: residual " + std::to_string(residual) +
            " indicates the input is not a stress matrix of this framework");
    return StressDecomposition{std::move(psi)};
}

}  // namespace tensecert
