#include "tensecert/framework.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include <json.hpp>

namespace tensecert {

using nlohmann::json;

const char* to_string(MemberKind k) {
    switch (k) {
        case MemberKind::Bar: return "bar";
        case MemberKind::Cable: return "cable";
        case MemberKind::Strut: return "strut";
    }
    return "?";
}

MemberKind member_kind_from_string(const std::string& s) {
    if (s == "bar") return MemberKind::Bar;
    if (s == "cable") return MemberKind::Cable;
    if (s == "strut") return MemberKind::Strut;
    throw ParseError("unknown member kind \"" + s + "\" (expected bar/cable/strut)");
}

bool TensegrityFramework::has_edge(int i, int j) const { return find_edge(i, j) != nullptr; }

const Edge* TensegrityFramework::find_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (const Edge& e : edges)
        if (e.i == i && e.j == j) return &e;
    return nullptr;
}

std::vector<int> TensegrityFramework::neighbors(int node) const {
    std::vector<int> out;
    for (const Edge& e : edges) {
        if (e.i == node) out.push_back(e.j);
        if (e.j == node) out.push_back(e.i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> TensegrityFramework::missing_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!has_edge(i, j)) out.emplace_back(i, j);
    return out;
}

int TensegrityFramework::count(MemberKind k) const {
    int c = 0;
    for (const Edge& e : edges) c += e.kind == k;
    return c;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    std::size_t c = 0;
    for (const auto& f : findings) c += f.severity == Finding::Severity::Error;
    return c;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ParseError("unknown key \"" + item.key() + "\" in " + where);
    }
}

}  // namespace

TensegrityFramework parse_framework(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("framework file must be a JSON object");
    reject_unknown_keys(doc, {"dimension", "nodes", "edges"}, "framework");
    if (!doc.contains("dimension") || !doc.contains("nodes") || !doc.contains("edges"))
        throw ParseError("framework requires keys dimension, nodes, edges");

    TensegrityFramework fw;
    if (!doc["dimension"].is_number_integer() || doc["dimension"].get<int>() < 1)
        throw ParseError("dimension must be a positive integer");
    fw.r = doc["dimension"].get<int>();

    const json& nodes = doc["nodes"];
    if (!nodes.is_array() || nodes.empty()) throw ParseError("nodes must be a non-empty array");
    fw.n = static_cast<int>(nodes.size());
    fw.points.resize(fw.n, fw.r);
    for (int i = 0; i < fw.n; ++i) {
        const json& row = nodes[i];
        if (!row.is_array() || static_cast<int>(row.size()) != fw.r)
            throw ParseError("nodes[" + std::to_string(i + 1) + "]: expected " +
                             std::to_string(fw.r) + " coordinates");
        for (int k = 0; k < fw.r; ++k) {
            if (!row[k].is_number())
                throw ParseError("nodes[" + std::to_string(i + 1) + "]: coordinate not a number");
            fw.points(i, k) = row[k].get<double>();
        }
    }

    const json& edges = doc["edges"];
    if (!edges.is_array()) throw ParseError("edges must be an array");
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const json& ej = edges[k];
        const std::string where = "edges[" + std::to_string(k + 1) + "]";
        if (!ej.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(ej, {"i", "j", "kind"}, where);
        if (!ej.contains("i") || !ej.contains("j") || !ej.contains("kind"))
            throw ParseError(where + ": requires keys i, j, kind");
        if (!ej["i"].is_number_integer() || !ej["j"].is_number_integer())
            throw ParseError(where + ": i and j must be integers");
        int i = ej["i"].get<int>();
        int j = ej["j"].get<int>();
        if (i < 1 || i > fw.n || j < 1 || j > fw.n)
            throw ParseError(where + ": node index out of range 1.." + std::to_string(fw.n));
        if (i == j) throw ParseError(where + ": self-loop at node " + std::to_string(i));
        Edge e;
        e.i = std::min(i, j) - 1;
        e.j = std::max(i, j) - 1;
        e.kind = member_kind_from_string(ej["kind"].get<std::string>());
        if (!seen.insert({e.i, e.j}).second)
            throw ParseError(where + ": duplicate edge {" + std::to_string(e.i + 1) + "," +
                             std::to_string(e.j + 1) + "}");
        fw.edges.push_back(e);
    }
    std::sort(fw.edges.begin(), fw.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return fw;
}

std::string serialize_framework(const TensegrityFramework& fw) {
    json doc;
    doc["dimension"] = fw.r;
    json nodes = json::array();
    for (int i = 0; i < fw.n; ++i) {
        json row = json::array();
        for (int k = 0; k < fw.r; ++k) row.push_back(fw.points(i, k));
        nodes.push_back(row);
    }
    doc["nodes"] = nodes;
    json edges = json::array();
    for (const Edge& e : fw.edges)
        edges.push_back({{"i", e.i + 1}, {"j", e.j + 1}, {"kind", to_string(e.kind)}});
    doc["edges"] = edges;
    return doc.dump(2);
}

TensegrityFramework center_configuration(const TensegrityFramework& fw) {
    TensegrityFramework out = fw;
    out.points.rowwise() -= fw.points.colwise().mean();
    return out;
}

int affine_dimension(const Eigen::MatrixXd& points, const Tolerances& tol) {
    if (points.rows() <= 1) return 0;
    Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
    return numeric_rank(centered, tol);
}

ValidationReport validate(const TensegrityFramework& fw, const Tolerances& tol) {
    ValidationReport rep;
    auto error = [&](std::string code, std::string msg, std::string loc = {}) {
        rep.findings.push_back({Finding::Severity::Error, std::move(code), std::move(msg), std::move(loc)});
    };
    auto warn = [&](std::string code, std::string msg, std::string loc = {}) {
        rep.findings.push_back({Finding::Severity::Warning, std::move(code), std::move(msg), std::move(loc)});
    };

    if (fw.n < fw.r + 2) {
        error("node-count", "need n >= r+2 nodes, got n=" + std::to_string(fw.n) +
                                " with r=" + std::to_string(fw.r));
    }

    // connectivity by union-find
    std::vector<int> parent(fw.n);
    for (int i = 0; i < fw.n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (const Edge& e : fw.edges) parent[find(e.i)] = find(e.j);
    int components = 0;
    for (int i = 0; i < fw.n; ++i) components += find(i) == i;
    if (components > 1)
        error("disconnected", "graph has " + std::to_string(components) + " components");

    const int dim = affine_dimension(fw.points, tol);
    if (dim != fw.r)
        error("affine-dimension", "affine dimension " + std::to_string(dim) +
                                      " != r=" + std::to_string(fw.r));

    const double scale = 1.0 + fw.points.cwiseAbs().maxCoeff();
    for (int i = 0; i < fw.n; ++i)
        for (int j = i + 1; j < fw.n; ++j)
            if ((fw.points.row(i) - fw.points.row(j)).norm() <= 1e-12 * scale)
                warn("coincident-points", "nodes " + std::to_string(i + 1) + " and " +
                                              std::to_string(j + 1) + " coincide",
                     "nodes[" + std::to_string(i + 1) + "]");
    return rep;
}

}  // namespace tensecert
