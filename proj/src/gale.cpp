#include "tensecert/gale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tensecert {

bool NodeSpanReport::all_pass() const {
    for (const auto& e : nodes)
        if (!e.pass) return false;
    return true;
}

GaleMatrix gale_matrix(const TensegrityFramework& fw, const Tolerances& tol) {
    Eigen::MatrixXd stacked(fw.r + 1, fw.n);
    stacked.topRows(fw.r) = fw.points.transpose();
    stacked.bottomRows(1).setOnes();
    GaleMatrix g{kernel_basis(stacked, tol)};
    if (g.bar_dim() != fw.n - fw.r - 1)
        throw std::invalid_argument("gale_matrix: kernel dimension " + std::to_string(g.bar_dim()) +
                                    " != n-r-1; configuration is not " + std::to_string(fw.r) +
                                    "-dimensional");
    return g;
}

SpecialGaleMatrix special_gale_from_stress(const TensegrityFramework& fw,
                                           const Eigen::MatrixXd& stress, const Tolerances& tol) {
    const int bar = fw.n - fw.r - 1;
    if (stress.rows() != fw.n || stress.cols() != fw.n)
        throw std::invalid_argument("special_gale_from_stress: matrix size mismatch");
    if (numeric_rank(stress, tol) != bar)
        throw std::invalid_argument("special_gale_from_stress: stress matrix rank != n-r-1");

    // Greedy pivoted-QR column selection; deterministic and numerically stable.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stress);
    const auto perm = qr.colsPermutation().indices();
    std::vector<int> nodes_chosen(perm.data(), perm.data() + bar);
    std::sort(nodes_chosen.begin(), nodes_chosen.end());

    SpecialGaleMatrix sg;
    sg.column_nodes = nodes_chosen;
    sg.basis.resize(fw.n, bar);
    for (int k = 0; k < bar; ++k) sg.basis.col(k) = stress.col(nodes_chosen[static_cast<std::size_t>(k)]);

    // Lemma-style zero pattern: missing edges against chosen columns vanish.
    for (int k = 0; k < bar; ++k) {
        const int jk = nodes_chosen[static_cast<std::size_t>(k)];
        for (int i = 0; i < fw.n; ++i) {
            if (i == jk || fw.has_edge(i, jk)) continue;
            if (std::abs(sg.basis(i, k)) > 1e-12)
                throw std::invalid_argument("special_gale_from_stress: nonzero entry at missing edge {" +
                                            std::to_string(i + 1) + "," + std::to_string(jk + 1) + "}");
        }
    }
    const Eigen::MatrixXd centered = fw.points.rowwise() - fw.points.colwise().mean();
    const double slack = tol.feas_tol * (1.0 + stress.norm());
    if ((centered.transpose() * sg.basis).norm() > slack ||
        (Eigen::RowVectorXd::Ones(fw.n) * sg.basis).norm() > slack)
        throw std::invalid_argument("special_gale_from_stress: kernel conditions fail");
    return sg;
}

NodeSpanReport node_span_condition(const TensegrityFramework& fw, const EdgePartition& partition,
                                   const Tolerances& tol) {
    std::vector<bool> counted(fw.edges.size(), false);
    for (std::size_t k = 0; k < fw.edges.size(); ++k)
        counted[k] = fw.edges[k].kind == MemberKind::Bar;
    for (int k : partition.cables_stressed) counted[static_cast<std::size_t>(k)] = true;
    for (int k : partition.struts_stressed) counted[static_cast<std::size_t>(k)] = true;

    NodeSpanReport report;
    for (int i = 0; i < fw.n; ++i) {
        NodeSpanEntry entry;
        entry.node = i;
        entry.point_set.push_back(i);
        for (std::size_t k = 0; k < fw.edges.size(); ++k) {
            if (!counted[k]) continue;
            if (fw.edges[k].i == i) entry.point_set.push_back(fw.edges[k].j);
            if (fw.edges[k].j == i) entry.point_set.push_back(fw.edges[k].i);
        }
        std::sort(entry.point_set.begin(), entry.point_set.end());
        Eigen::MatrixXd pts(static_cast<int>(entry.point_set.size()), fw.r);
        for (std::size_t t = 0; t < entry.point_set.size(); ++t)
            pts.row(static_cast<int>(t)) = fw.points.row(entry.point_set[t]);
        entry.span_dim = affine_dimension(pts, tol);
        entry.pass = entry.span_dim == fw.r;
        report.nodes.push_back(std::move(entry));
    }
    return report;
}

namespace {

bool affinely_independent(const Eigen::MatrixXd& points, const std::vector<int>& idx,
                          const Tolerances& tol) {
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd diff(m - 1, points.cols());
    for (int t = 1; t < m; ++t) diff.row(t - 1) = points.row(idx[static_cast<std::size_t>(t)]) -
                                                  points.row(idx[0]);
    return numeric_rank(diff, tol) == m - 1;
}

std::uint64_t gp_mix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

GeneralPositionReport general_position_check(const Eigen::MatrixXd& points,
                                             const std::vector<int>& subset, const Tolerances& tol,
                                             std::uint64_t seed) {
    const int r = static_cast<int>(points.cols());
    const int m = static_cast<int>(subset.size());
    GeneralPositionReport rep;
    rep.in_general_position = true;
    rep.seed = seed;
    if (m < r + 1) return rep;  // no (r+1)-subsets to violate

    if (m <= 16) {
        // exhaustive over all C(m, r+1) subsets
        std::vector<int> pick(static_cast<std::size_t>(r + 1));
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<int> idx;
            idx.reserve(pick.size());
            for (int t : pick) idx.push_back(subset[static_cast<std::size_t>(t)]);
            ++rep.subsets_checked;
            if (!affinely_independent(points, idx, tol)) {
                rep.in_general_position = false;
                rep.witness_subset = idx;
                return rep;
            }
            int pos = r;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == m - (r + 1) + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int t = pos + 1; t <= r; ++t)
                pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
        }
        return rep;
    }

    rep.exhaustive = false;
    std::uint64_t state = seed ^ 0xa02bdbf7bb3c0a7ULL;
    const long samples = 20000;
    for (long s = 0; s < samples; ++s) {
        // Floyd-style distinct sample of r+1 indices
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < r + 1) {
            const int cand = subset[static_cast<std::size_t>(gp_mix(state) % static_cast<std::uint64_t>(m))];
            if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
        }
        ++rep.subsets_checked;
        if (!affinely_independent(points, idx, tol)) {
            rep.in_general_position = false;
            rep.witness_subset = idx;
            return rep;
        }
    }
    return rep;
}

bool gale_independence(const GaleMatrix& gale, const std::vector<int>& j_set,
                       const Tolerances& tol) {
    const int n = static_cast<int>(gale.basis.rows());
    std::vector<bool> in_j(static_cast<std::size_t>(n), false);
    for (int v : j_set) {
        if (v < 0 || v >= n) throw std::invalid_argument("gale_independence: node index out of range");
        in_j[static_cast<std::size_t>(v)] = true;
    }
    std::vector<int> complement;
    for (int i = 0; i < n; ++i)
        if (!in_j[static_cast<std::size_t>(i)]) complement.push_back(i);
    if (complement.empty()) return true;
    Eigen::MatrixXd rows(static_cast<int>(complement.size()), gale.basis.cols());
    for (std::size_t t = 0; t < complement.size(); ++t)
        rows.row(static_cast<int>(t)) = gale.basis.row(complement[t]);
    return numeric_rank(rows, tol) == static_cast<int>(complement.size());
}

}  // namespace tensecert
