#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcx/quasicomplex.hpp"
#include "qcx/rng.hpp"
#include "qcx/symbolcx.hpp"

namespace qcx {

/* Triangulated closed orientable surface. Faces keep their input cyclic
 * orientation; edges are derived as sorted endpoint pairs listed in
 * lexicographic order, so incidence matrices are format independent. */
struct SurfaceMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<std::pair<int, int>> edges;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
};

// Validates closedness (every edge on exactly two faces) and global
// orientation (the two incident faces traverse the edge in opposite
// directions), then derives the edge list.
SurfaceMesh make_mesh(std::vector<std::array<double, 3>> vertices,
                      std::vector<std::array<int, 3>> faces);

// Sniffs the format: a leading "OFF" token selects the OFF parser, a
// leading '{' the JSON schema {"vertices":[[x,y,z]...],"faces":[[i,j,k]...]}.
SurfaceMesh parse_mesh(const std::string& text);
SurfaceMesh load_mesh(const std::string& path);

// n x n periodic grid with each square split along one diagonal:
// n^2 vertices, 3n^2 edges, 2n^2 faces. Requires n >= 3 so that no two
// triangles share more than one edge after wrapping.
SurfaceMesh torus_grid(int n);

// Vertex/edge/face cochain chain with incidence differentials. Entries are
// formed in integer arithmetic, so the composite is exactly zero; spaces
// carry identity metrics and both differentials are tagged order 1.
QuasiComplex derham_complex(const SurfaceMesh& mesh);

struct PerturbationSpec {
    double eps = 0.0;
    std::optional<int> rank_limit;
    std::uint64_t seed = 0;
};

// diffs[i] + C_i with seeded Gaussian C_i rescaled so its operator norm is
// exactly eps (up to roundoff); rank(C_i) <= rank_limit when set. eps == 0
// returns the input unchanged, and equal (qc, spec) arguments give
// bitwise-equal outputs.
QuasiComplex perturb(const QuasiComplex& qc, const PerturbationSpec& spec);

// Exterior multiplication by a covector on the exterior algebra of R^n in
// the lexicographic multi-index basis; orders are all 1. Throws
// UnsupportedDimension unless 2 <= n <= 4, ZeroCovector on xi = 0.
SymbolComplexSample koszul_from_covector(const Eigen::VectorXd& xi, std::string point_id);

// Sample index k of the stream for `seed`: a random unit covector drawn
// from the documented generator, pure per (seed, k).
SymbolComplexSample koszul_sample(int n, std::uint64_t seed, int index);
SampleGenerator koszul_generator(int n);

} // namespace qcx
