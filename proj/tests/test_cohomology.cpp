#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qcx/builders.hpp>
#include <qcx/cohomology.hpp>
#include <qcx/errors.hpp>
#include <qcx/hodge.hpp>

#include "lefschetz_oracle.hpp"
#include "test_util.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace qcx;
using qcxtest::oracle_lefschetz;
using qcxtest::pullback_maps;

namespace {

std::vector<Mat> identity_maps(const QuasiComplex& qc, double scale_by = 1.0) {
  std::vector<Mat> maps;
  for (int i = 0; i <= qc.length(); ++i)
    maps.push_back(scale_by * Mat::Identity(qc.space(i).dim(), qc.space(i).dim()));
  return maps;
}

}  // namespace

TEST_CASE("betti numbers of the surface fixtures") {
  struct Case { const char* file; std::vector<int> betti; long long chi; };
  std::vector<Case> cases = {
      {"tetrahedron.off", {1, 0, 1}, 2},
      {"icosahedron.off", {1, 0, 1}, 2},
      {"torus3.off", {1, 2, 1}, 0},
      {"genus2.off", {1, 4, 1}, -2},
  };
  for (const Case& c : cases) {
    QuasiComplex qc = qcxtest::derham_fixture(c.file);
    BettiReport rn = betti(qc, BettiRoute::rank_nullity);
    BettiReport hm = betti(qc, BettiRoute::harmonic);
    CHECK(rn.betti == c.betti);
    CHECK(hm.betti == c.betti);
    CHECK(rn.chi == c.chi);
    CHECK(hm.chi == c.chi);
  }
}

TEST_CASE("betti of a two-term diagonal chain") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  QuasiComplex qc({InnerProductSpace(2), InnerProductSpace(2)}, {a});
  BettiReport b = betti(qc);
  CHECK(b.betti == std::vector<int>{1, 1});
  CHECK(b.chi == 0);
}

TEST_CASE("alternating dimension sum equals chi on every exact fixture") {
  for (const char* name : {"tetrahedron.off", "icosahedron.off", "torus3.off", "genus2.off"}) {
    QuasiComplex qc = qcxtest::derham_fixture(name);
    long long dim_sum = 0;
    for (int i = 0; i <= qc.length(); ++i)
      dim_sum += (i % 2 == 0 ? 1 : -1) * qc.space(i).dim();
    CHECK(betti(qc).chi == dim_sum);
  }
}

TEST_CASE("curved input is refused by both cohomology entry points") {
  PerturbationSpec spec;
  spec.eps = 1e-3;
  spec.seed = 7;
  QuasiComplex p = perturb(qcxtest::tetra_complex(), spec);
  CHECK_THROWS_AS(betti(p), NotAComplex);
  Endomorphism id_endo = make_endomorphism(p, identity_maps(p));
  CHECK_THROWS_AS(lefschetz(p, id_endo), NotAComplex);
}

TEST_CASE("euler characteristic survives perturbation across seeds and sizes") {
  struct Case { const char* file; long long chi; };
  for (const Case& c : {Case{"tetrahedron.off", 2}, Case{"torus3.off", 0}}) {
    QuasiComplex base = qcxtest::derham_fixture(c.file);
    CHECK(euler_quasi(base).chi == c.chi);
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 3ULL}) {
      for (double eps : {1e-3, 1e-6}) {
        PerturbationSpec spec;
        spec.eps = eps;
        spec.seed = seed;
        EulerReport rep = euler_quasi(perturb(base, spec));
        CHECK(rep.chi == c.chi);
        CHECK(rep.consistent);
        CHECK(rep.certified);
      }
    }
  }
}

TEST_CASE("multi-trial euler runs re-perturb and must agree") {
  PerturbationSpec spec;
  spec.eps = 1e-3;
  spec.seed = 9;
  QuasiComplex p = perturb(qcxtest::tetra_complex(), spec);
  EulerReport rep = euler_quasi(p, 3, 123);
  CHECK(rep.chi == 2);
  CHECK(rep.consistent);
  CHECK(rep.certified);
  CHECK(rep.trials == 3);
  CHECK(rep.trial_chis.size() == 4); // base run plus three re-perturbed runs
  for (long long c : rep.trial_chis) CHECK(c == 2);
  CHECK(rep.seed == 123);
}

TEST_CASE("identity self-map recovers chi on every fixture") {
  for (const char* name : {"tetrahedron.off", "torus3.off", "genus2.off"}) {
    QuasiComplex qc = qcxtest::derham_fixture(name);
    Endomorphism endo = make_endomorphism(qc, identity_maps(qc));
    for (double d : endo.commute_defect) CHECK(d == 0.0);
    cxd val = lefschetz(qc, endo);
    CHECK(std::abs(val.real() - static_cast<double>(betti(qc).chi)) <= 1e-10);
    CHECK(std::abs(val.imag()) <= 1e-12);
  }
}

TEST_CASE("scaled identity scales the invariant") {
  QuasiComplex qc = qcxtest::tetra_complex();
  Endomorphism endo = make_endomorphism(qc, identity_maps(qc, 2.0));
  cxd val = lefschetz(qc, endo);
  CHECK(std::abs(val.real() - 4.0) <= 1e-10);
  CHECK(std::abs(val.imag()) <= 1e-12);
}

TEST_CASE("vertex rotation of the tetrahedron: invariant and oracle agree") {
  SurfaceMesh m = load_mesh(qcxtest::data_path("tetrahedron.off"));
  QuasiComplex qc = derham_complex(m);
  std::vector<int> rho = {0, 2, 3, 1}; // fixes vertex 0, cycles 1 -> 2 -> 3 -> 1
  std::vector<Mat> maps = pullback_maps(m, rho);

  Endomorphism endo = make_endomorphism(qc, maps);
  for (double d : endo.commute_defect) CHECK(d == 0.0);

  cxd via_harmonic = lefschetz(qc, endo);
  cxd via_quotient = oracle_lefschetz(qc, maps);
  CHECK(std::abs(via_harmonic.real() - 2.0) <= 1e-10);
  CHECK(std::abs(via_harmonic.imag()) <= 1e-12);
  CHECK(std::abs(via_harmonic.real() - via_quotient.real()) <= 1e-8);
  CHECK(std::abs(via_harmonic.imag() - via_quotient.imag()) <= 1e-8);
}

TEST_CASE("harmonic route matches the quotient oracle on a torus rotation") {
  SurfaceMesh m = torus_grid(3);
  QuasiComplex qc = derham_complex(m);
  // Shift the 3x3 periodic grid one step along the second axis:
  // vertex (i, j) at index 3i + j moves to (i, j + 1).
  std::vector<int> rho(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rho[3 * i + j] = 3 * i + (j + 1) % 3;
  std::vector<Mat> maps = pullback_maps(m, rho);

  Endomorphism endo = make_endomorphism(qc, maps);
  for (double d : endo.commute_defect) CHECK(d == 0.0);

  cxd via_harmonic = lefschetz(qc, endo);
  cxd via_quotient = oracle_lefschetz(qc, maps);
  CHECK(std::abs(via_harmonic.real() - via_quotient.real()) <= 1e-8);
  CHECK(std::abs(via_harmonic.imag() - via_quotient.imag()) <= 1e-8);
  // A translation is homotopic to the identity, so the invariant is chi = 0.
  CHECK(std::abs(via_harmonic.real()) <= 1e-10);
}

TEST_CASE("the invariant is linear in the self-map") {
  SurfaceMesh m = load_mesh(qcxtest::data_path("tetrahedron.off"));
  QuasiComplex qc = derham_complex(m);
  std::vector<Mat> rot = pullback_maps(m, {0, 2, 3, 1});
  std::vector<Mat> ident = identity_maps(qc);

  std::vector<Mat> combo;
  for (size_t i = 0; i < rot.size(); ++i) combo.push_back(2.0 * ident[i] + 3.0 * rot[i]);

  cxd l_combo = lefschetz(qc, make_endomorphism(qc, combo));
  cxd l_id = lefschetz(qc, make_endomorphism(qc, ident));
  cxd l_rot = lefschetz(qc, make_endomorphism(qc, rot));
  CHECK(std::abs(l_combo - (2.0 * l_id + 3.0 * l_rot)) <= 1e-10);
}

TEST_CASE("non-commuting self-maps are rejected") {
  QuasiComplex qc = qcxtest::tetra_complex();
  Rng rng(5);
  std::vector<Mat> maps;
  for (int i = 0; i <= qc.length(); ++i)
    maps.push_back(rng.gaussian_matrix(qc.space(i).dim(), qc.space(i).dim()));
  Endomorphism endo = make_endomorphism(qc, maps);
  CHECK(endo.commute_defect_rel[0] > 1e-10);
  CHECK_THROWS_AS(lefschetz(qc, endo), NotAnEndomorphism);

  CHECK_THROWS_AS(make_endomorphism(qc, {Mat::Identity(4, 4)}), ShapeMismatch);
  CHECK_THROWS_AS(
      make_endomorphism(qc, {Mat::Identity(3, 3), Mat::Identity(6, 6), Mat::Identity(4, 4)}),
      ShapeMismatch);
}
