#include "qcx/builders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "qcx/errors.hpp"

namespace qcx {

namespace {

std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

} // namespace

SurfaceMesh make_mesh(std::vector<std::array<double, 3>> vertices,
                      std::vector<std::array<int, 3>> faces) {
    const int nv = static_cast<int>(vertices.size());
    for (const auto& f : faces) {
        for (int v : f)
            if (v < 0 || v >= nv) throw ParseError("face references vertex " + std::to_string(v));
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw ParseError("degenerate face with a repeated vertex");
    }

    // Count directed traversals per undirected edge. A closed surface has
    // exactly two, and a consistently oriented one traverses them in
    // opposite directions, so the direction counter stays at zero.
    std::map<std::pair<int, int>, int> sides, flux;
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            sides[sorted_pair(a, b)] += 1;
            flux[sorted_pair(a, b)] += (a < b) ? 1 : -1;
        }
    for (const auto& [edge, count] : sides) {
        if (count != 2)
            throw NotClosedSurface("edge (" + std::to_string(edge.first) + "," +
                                   std::to_string(edge.second) + ") lies on " +
                                   std::to_string(count) + " face(s)");
        if (flux[edge] != 0)
            throw NotOrientable("edge (" + std::to_string(edge.first) + "," +
                                std::to_string(edge.second) +
                                ") is traversed twice in the same direction");
    }

    SurfaceMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.faces = std::move(faces);
    mesh.edges.reserve(sides.size());
    for (const auto& [edge, count] : sides) mesh.edges.push_back(edge); // map order = lexicographic
    return mesh;
}

namespace {

std::string strip_comments(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_comment = false;
    for (char c : text) {
        if (c == '#') in_comment = true;
        if (c == '\n') in_comment = false;
        out.push_back(in_comment ? ' ' : c);
    }
    return out;
}

SurfaceMesh parse_off(const std::string& text) {
    std::istringstream in(strip_comments(text));
    std::string token;
    if (!(in >> token) || token != "OFF") throw ParseError("missing OFF header");
    long nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw ParseError("missing element counts");
    if (nv < 0 || nf < 0) throw ParseError("negative element count");
    std::vector<std::array<double, 3>> vertices(static_cast<std::size_t>(nv));
    for (auto& v : vertices)
        if (!(in >> v[0] >> v[1] >> v[2])) throw ParseError("truncated vertex list");
    std::vector<std::array<int, 3>> faces(static_cast<std::size_t>(nf));
    for (auto& f : faces) {
        int k = 0;
        if (!(in >> k)) throw ParseError("truncated face list");
        if (k != 3) throw ParseError("only triangular faces are supported");
        if (!(in >> f[0] >> f[1] >> f[2])) throw ParseError("truncated face list");
    }
    return make_mesh(std::move(vertices), std::move(faces));
}

SurfaceMesh parse_mesh_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("faces"))
        throw ParseError("mesh JSON must carry 'vertices' and 'faces'");
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;
    try {
        for (const auto& v : doc.at("vertices")) {
            if (!v.is_array() || v.size() != 3) throw ParseError("vertex is not a 3-vector");
            vertices.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
        }
        for (const auto& f : doc.at("faces")) {
            if (!f.is_array() || f.size() != 3) throw ParseError("face is not a vertex triple");
            faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    return make_mesh(std::move(vertices), std::move(faces));
}

} // namespace

SurfaceMesh parse_mesh(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return parse_mesh_json(text);
        break;
    }
    return parse_off(text);
}

SurfaceMesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mesh(buf.str());
}

SurfaceMesh torus_grid(int n) {
    if (n < 3) throw InvalidInput("periodic grid needs n >= 3");
    auto at = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    std::vector<std::array<double, 3>> vertices;
    vertices.reserve(static_cast<std::size_t>(n) * n);
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double th = tau * i / n, ph = tau * j / n;
            vertices.push_back({(2.0 + std::cos(th)) * std::cos(ph),
                                (2.0 + std::cos(th)) * std::sin(ph), std::sin(th)});
        }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(2u * static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    return make_mesh(std::move(vertices), std::move(faces));
}

QuasiComplex derham_complex(const SurfaceMesh& mesh) {
    const int nv = mesh.n_vertices(), ne = mesh.n_edges(), nf = mesh.n_faces();
    std::map<std::pair<int, int>, int> edge_index;
    for (int e = 0; e < ne; ++e) edge_index[mesh.edges[static_cast<std::size_t>(e)]] = e;

    std::vector<std::vector<int>> d0(static_cast<std::size_t>(ne), std::vector<int>(nv, 0));
    for (int e = 0; e < ne; ++e) {
        const auto [a, b] = mesh.edges[static_cast<std::size_t>(e)];
        d0[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)] = -1;
        d0[static_cast<std::size_t>(e)][static_cast<std::size_t>(b)] = 1;
    }
    std::vector<std::vector<int>> d1(static_cast<std::size_t>(nf), std::vector<int>(ne, 0));
    for (int f = 0; f < nf; ++f)
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)];
            const int b = mesh.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>((k + 1) % 3)];
            d1[static_cast<std::size_t>(f)][static_cast<std::size_t>(edge_index.at(sorted_pair(a, b)))] =
                (a < b) ? 1 : -1;
        }
    // Composite in integer arithmetic; zero by construction for a validated
    // mesh, so the float embedding is exact.
    for (int f = 0; f < nf; ++f)
        for (int v = 0; v < nv; ++v) {
            long long s = 0;
            for (int e = 0; e < ne; ++e)
                s += static_cast<long long>(d1[static_cast<std::size_t>(f)][static_cast<std::size_t>(e)]) *
                     d0[static_cast<std::size_t>(e)][static_cast<std::size_t>(v)];
            if (s != 0) throw InvalidInput("incidence matrices fail to compose to zero");
        }

    Mat m0 = Mat::Zero(ne, nv), m1 = Mat::Zero(nf, ne);
    for (int e = 0; e < ne; ++e)
        for (int v = 0; v < nv; ++v) m0(e, v) = static_cast<double>(d0[static_cast<std::size_t>(e)][static_cast<std::size_t>(v)]);
    for (int f = 0; f < nf; ++f)
        for (int e = 0; e < ne; ++e) m1(f, e) = static_cast<double>(d1[static_cast<std::size_t>(f)][static_cast<std::size_t>(e)]);
    return QuasiComplex({InnerProductSpace(nv), InnerProductSpace(ne), InnerProductSpace(nf)},
                        {std::move(m0), std::move(m1)}, std::vector<double>{1.0, 1.0});
}

QuasiComplex perturb(const QuasiComplex& qc, const PerturbationSpec& spec) {
    if (spec.eps < 0.0) throw InvalidInput("perturbation size must be non-negative");
    if (spec.rank_limit && *spec.rank_limit <= 0)
        throw InvalidInput("rank limit must be positive when set");
    if (spec.eps == 0.0) return qc;
    Rng rng(spec.seed);
    std::vector<Mat> mats;
    mats.reserve(static_cast<std::size_t>(qc.length()));
    for (int i = 0; i < qc.length(); ++i) {
        const LinearOp& d = qc.diff(i);
        const int rows = static_cast<int>(d.mat.rows());
        const int cols = static_cast<int>(d.mat.cols());
        if (rows == 0 || cols == 0) {
            mats.push_back(d.mat);
            continue;
        }
        Mat noise;
        if (spec.rank_limit && *spec.rank_limit < std::min(rows, cols)) {
            const int r = *spec.rank_limit;
            noise = rng.gaussian_matrix(rows, r) * rng.gaussian_matrix(r, cols);
        } else {
            noise = rng.gaussian_matrix(rows, cols);
        }
        const double norm = op_norm(LinearOp(d.domain, d.codomain, noise));
        if (norm > 0.0) noise *= spec.eps / norm;
        mats.push_back(d.mat + noise);
    }
    return QuasiComplex(qc.spaces(), std::move(mats), qc.orders());
}

namespace {

// k-subsets of {0..n-1} in lexicographic order; their positions give the
// basis indexing of the exterior algebra.
std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

SymbolComplexSample koszul_from_covector(const Eigen::VectorXd& xi, std::string point_id) {
    const int n = static_cast<int>(xi.size());
    if (n < 2 || n > 4)
        throw UnsupportedDimension("exterior algebra generator supports n in {2,3,4}, got " +
                                   std::to_string(n));
    const double norm = xi.norm();
    if (norm == 0.0) throw ZeroCovector("covector is zero");

    SymbolComplexSample sample;
    sample.point_id = std::move(point_id);
    sample.xi_norm = norm;
    std::vector<std::vector<std::vector<int>>> bases;
    for (int k = 0; k <= n; ++k) bases.push_back(subsets_of_size(n, k));
    for (int k = 0; k <= n; ++k)
        sample.fiber_dims.push_back(static_cast<int>(bases[static_cast<std::size_t>(k)].size()));

    for (int k = 0; k < n; ++k) {
        const auto& dom = bases[static_cast<std::size_t>(k)];
        const auto& cod = bases[static_cast<std::size_t>(k + 1)];
        std::map<std::vector<int>, int> cod_index;
        for (int c = 0; c < static_cast<int>(cod.size()); ++c) cod_index[cod[static_cast<std::size_t>(c)]] = c;
        Mat m = Mat::Zero(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
        for (int s = 0; s < static_cast<int>(dom.size()); ++s) {
            const auto& subset = dom[static_cast<std::size_t>(s)];
            for (int j = 0; j < n; ++j) {
                if (std::find(subset.begin(), subset.end(), j) != subset.end()) continue;
                // moving the new generator into sorted position costs one
                // sign flip per smaller element already present
                int below = 0;
                for (int v : subset) below += (v < j) ? 1 : 0;
                std::vector<int> target = subset;
                target.insert(std::upper_bound(target.begin(), target.end(), j), j);
                const double sign = (below % 2 == 0) ? 1.0 : -1.0;
                m(cod_index.at(target), s) += sign * xi[j];
            }
        }
        sample.mats.push_back(std::move(m));
        sample.orders.push_back(1.0);
    }
    return sample;
}

SymbolComplexSample koszul_sample(int n, std::uint64_t seed, int index) {
    if (n < 2 || n > 4)
        throw UnsupportedDimension("exterior algebra generator supports n in {2,3,4}, got " +
                                   std::to_string(n));
    if (index < 0) throw InvalidInput("sample index must be non-negative");
    // one stream per seed; sample k owns draws [k*n, (k+1)*n)
    Rng rng(seed);
    for (long skip = 0; skip < static_cast<long>(index) * n; ++skip) rng.normal();
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi[i] = rng.normal();
    if (xi.norm() == 0.0) xi[0] = 1.0; // unreachable in practice
    xi /= xi.norm();
    std::string id = "koszul-n" + std::to_string(n) + "-seed" + std::to_string(seed) + "-k" +
                     std::to_string(index);
    return koszul_from_covector(xi, std::move(id));
}

SampleGenerator koszul_generator(int n) {
    if (n < 2 || n > 4)
        throw UnsupportedDimension("exterior algebra generator supports n in {2,3,4}, got " +
                                   std::to_string(n));
    return [n](std::uint64_t seed, int index) { return koszul_sample(n, seed, index); };
}

} // namespace qcx
