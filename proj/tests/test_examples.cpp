#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpdk/examples.hpp"
#include "cpdk/index.hpp"
#include "oracles.hpp"

using namespace cpdk;

namespace {

const AlgebraDescriptor kScalar({1});
const AlgebraDescriptor kM2({2});
const AlgebraDescriptor kM3({3});
const AlgebraDescriptor kMixed({2, 1});

FockUnit zero_unit(const AlgebraDescriptor& desc, int fock_dim, const std::string& name) {
  FockUnit u;
  u.name = name;
  u.beta = zero_element(desc);
  u.zeta.assign(fock_dim, zero_element(desc));
  return u;
}

// Columns of stacked module vectors over a single matrix block; the rank of
// the module span equals the column rank of this matrix.
Matrix stacked_vectors(const FockSpec& spec) {
  const int n = spec.algebra.block_sizes[0];
  Matrix w = Matrix::Zero(spec.fock_dim * n, static_cast<int>(spec.units.size()) * n);
  for (size_t p = 0; p < spec.units.size(); ++p)
    for (int k = 0; k < spec.fock_dim; ++k)
      w.block(k * n, static_cast<int>(p) * n, n, n) = spec.units[p].zeta[k].blocks[0];
  return w;
}

std::vector<UnitExprPtr> all_bases(const KernelSystem& sys) {
  std::vector<UnitExprPtr> out;
  for (const std::string& l : sys.labels) out.push_back(base(l));
  return out;
}

}  // namespace

TEST_CASE("one scalar module component gives the identity kernel") {
  FockSpec spec;
  spec.algebra = kScalar;
  spec.fock_dim = 1;
  spec.units.push_back(zero_unit(kScalar, 1, "w"));
  FockUnit u = zero_unit(kScalar, 1, "u");
  u.zeta[0] = unit(kScalar);
  spec.units.push_back(std::move(u));

  const KernelSystem sys = fock_system(spec);
  CHECK((sys.kernel("u", "u").mat - Matrix::Identity(1, 1)).norm() == doctest::Approx(0.0));
  CHECK(super_norm(sys.kernel("u", "w")) == doctest::Approx(0.0));
  const AlgebraElement b = Complex(0.3, -0.4) * unit(kScalar);
  const AlgebraElement evolved = semigroup_eval(sys, "u", "u", 2.0, b);
  CHECK(std::abs(evolved.blocks[0](0, 0) - std::exp(2.0) * b.blocks[0](0, 0)) <= 1e-12);
}

TEST_CASE("module-family table matches its closed form") {
  const FockSpec spec = random_fock_spec(kMixed, 3, 4, 41);
  const KernelSystem sys = fock_system(spec);
  Rng rng(42);
  double worst = 0;
  for (size_t x = 0; x < spec.units.size(); ++x)
    for (size_t y = 0; y < spec.units.size(); ++y) {
      const AlgebraElement b = random_element(kMixed, rng);
      const AlgebraElement got = apply(sys.kernel(spec.units[x].name, spec.units[y].name), b);
      const AlgebraElement want = oracles::fock_action(spec.units[x].zeta, spec.units[x].beta,
                                                       spec.units[y].zeta, spec.units[y].beta, b);
      worst = std::max(worst, oracles::elem_norm(got - want));
    }
  CHECK(worst <= 1e-12);

  // Reference row and column reduce to one-sided multiplications.
  Rng rng2(43);
  const AlgebraElement b = random_element(kMixed, rng2);
  const AlgebraElement b1 = apply(sys.kernel("w", "u1"), b);
  CHECK(oracles::elem_norm(b1 - b * spec.units[1].beta) <= 1e-13);
  const AlgebraElement b2 = apply(sys.kernel("u1", "w"), b);
  CHECK(oracles::elem_norm(b2 - adjoint(spec.units[1].beta) * b) <= 1e-13);
}

TEST_CASE("rank counts independent module vectors") {
  SUBCASE("planted dependency over a matrix block") {
    FockSpec spec = random_fock_spec(kM2, 3, 3, 47);
    FockUnit dep = zero_unit(kM2, 3, "u3");
    for (int k = 0; k < 3; ++k) dep.zeta[k] = spec.units[1].zeta[k] + spec.units[2].zeta[k];
    spec.units.push_back(std::move(dep));

    const KernelSystem sys = fock_system(spec);
    const IndexReport rep = index_report(sys, all_bases(sys));
    const int oracle = oracles::svd_rank(stacked_vectors(spec), 1e-9);
    CHECK(rep.numerical_rank == oracle);
    CHECK(rep.numerical_rank == 4);  // two independent 6x2 column groups
    CHECK(rep.null_mask == std::vector<bool>{true, false, false, false});
  }

  SUBCASE("scalar case counts the span of plain vectors") {
    FockSpec spec;
    spec.algebra = kScalar;
    spec.fock_dim = 2;
    spec.units.push_back(zero_unit(kScalar, 2, "w"));
    auto with_vec = [](const std::string& name, Complex c0, Complex c1) {
      FockUnit u = zero_unit(kScalar, 2, name);
      u.zeta[0] = c0 * unit(kScalar);
      u.zeta[1] = c1 * unit(kScalar);
      return u;
    };
    spec.units.push_back(with_vec("u1", 1, 0));
    spec.units.push_back(with_vec("u2", 0, 1));
    spec.units.push_back(with_vec("u3", 1, 1));
    const KernelSystem sys = fock_system(spec);
    const IndexReport rep = index_report(sys, all_bases(sys));
    CHECK(rep.numerical_rank == 2);
    CHECK(rep.numerical_rank == oracles::svd_rank(stacked_vectors(spec), 1e-9));
  }
}

TEST_CASE("exponents shift nothing observable by the inner product") {
  FockSpec spec = random_fock_spec(kM2, 2, 3, 53);
  FockSpec other = spec;
  Rng rng(54);
  for (size_t i = 1; i < other.units.size(); ++i)
    other.units[i].beta = random_contraction(kM2, rng);

  const KernelSystem sa = fock_system(spec);
  const KernelSystem sb = fock_system(other);
  for (const std::string& x : sa.labels)
    for (const std::string& y : sa.labels) {
      const AlgebraElement d = inner(sa, base(x), base(y)) - inner(sb, base(x), base(y));
      CHECK(cstar_norm(d) <= 1e-12);
    }
  CHECK(index_report(sa, all_bases(sa)).numerical_rank ==
        index_report(sb, all_bases(sb)).numerical_rank);
}

TEST_CASE("scalar module vectors reproduce the complex dot product") {
  FockSpec spec;
  spec.algebra = kScalar;
  spec.fock_dim = 4;
  spec.units.push_back(zero_unit(kScalar, 4, "w"));
  Rng rng(59);
  std::vector<Complex> z1, z2;
  for (const char* name : {"u1", "u2"}) {
    FockUnit u = zero_unit(kScalar, 4, name);
    for (int k = 0; k < 4; ++k) {
      const Complex c = 0.4 * rng.cnormal();
      u.zeta[k] = c * unit(kScalar);
      (u.name == "u1" ? z1 : z2).push_back(c);
    }
    spec.units.push_back(std::move(u));
  }
  const KernelSystem sys = fock_system(spec);
  Complex dot = 0;
  for (int k = 0; k < 4; ++k) dot += std::conj(z1[k]) * z2[k];
  CHECK(std::abs(inner(sys, base("u1"), base("u2")).blocks[0](0, 0) - dot) <= 1e-13);
}

TEST_CASE("twisted table matches its closed form and collapses") {
  Rng rng(61);
  TwistedSpec spec;
  spec.algebra = kM3;
  spec.h = random_hermitian(kM3, rng);
  spec.units.push_back({"w", zero_element(kM3)});
  for (int i = 1; i <= 3; ++i)
    spec.units.push_back({"x" + std::to_string(i), random_element(kM3, rng)});
  const KernelSystem sys = twisted_system(spec);

  double worst = 0;
  for (const TwistedUnit& ux : spec.units)
    for (const TwistedUnit& uy : spec.units) {
      const AlgebraElement b = random_element(kM3, rng);
      const AlgebraElement got = apply(sys.kernel(ux.name, uy.name), b);
      const AlgebraElement want = oracles::twisted_action(ux.a, uy.a, spec.h, b);
      worst = std::max(worst, oracles::elem_norm(got - want));
    }
  CHECK(worst <= 1e-12);

  for (const std::string& x : sys.labels)
    for (const std::string& y : sys.labels)
      CHECK(cstar_norm(inner(sys, base(x), base(y))) <= 1e-12);

  const IndexReport rep = index_report(sys, all_bases(sys));
  CHECK(rep.numerical_rank == 0);
  CHECK(rep.quotient_dim == 0);
  for (size_t i = 0; i < rep.null_mask.size(); ++i) CHECK(rep.null_mask[i]);

  const CentralityReport c = central_check(sys, "w");
  CHECK(c.unital);
  CHECK_FALSE(c.central);
}

TEST_CASE("family constructors reject malformed specs") {
  SUBCASE("module family") {
    FockSpec spec;
    spec.algebra = kM2;
    spec.fock_dim = 2;
    CHECK_THROWS_AS(fock_system(spec), InputError);  // no units at all

    spec.units.push_back(zero_unit(kM2, 1, "w"));  // wrong vector length
    CHECK_THROWS_AS(fock_system(spec), ShapeError);

    spec.units[0] = zero_unit(kM2, 2, "w");
    spec.units[0].beta = unit(kM2);  // no zero unit left
    CHECK_THROWS_AS(fock_system(spec), InputError);

    spec.units[0].beta = zero_element(kMixed);  // block structure mismatch
    CHECK_THROWS_AS(fock_system(spec), ShapeError);
  }

  SUBCASE("twisted family") {
    Rng rng(67);
    TwistedSpec spec;
    spec.algebra = kMixed;
    spec.h = zero_element(kMixed);
    spec.units.push_back({"w", zero_element(kMixed)});
    CHECK_THROWS_AS(twisted_system(spec), InputError);  // needs one block

    spec.algebra = kM2;
    spec.h = random_element(kM2, rng);
    spec.h.blocks[0](0, 1) += Complex(0, 1);  // break self-adjointness
    spec.units[0] = {"w", zero_element(kM2)};
    CHECK_THROWS_AS(twisted_system(spec), InputError);

    spec.h = random_hermitian(kM2, rng);
    spec.units[0] = {"w", unit(kM2)};
    CHECK_THROWS_AS(twisted_system(spec), InputError);  // no zero unit
  }

  SUBCASE("random generator") {
    CHECK_THROWS_AS(random_ce_system(kM2, 0, 3, 1), InputError);
    CHECK_THROWS_AS(random_ce_system(kM2, 2, 0, 1), InputError);
  }
}

TEST_CASE("random generator is deterministic and well formed") {
  const KernelSystem a = random_ce_system(kMixed, 2, 4, 71);
  const KernelSystem b = random_ce_system(kMixed, 2, 4, 71);
  REQUIRE(a.labels == b.labels);
  for (size_t i = 0; i < a.table.size(); ++i) {
    const bool identical = a.table[i].mat == b.table[i].mat;
    CHECK(identical);
  }
  const KernelSystem c = random_ce_system(kMixed, 2, 4, 72);
  double diff = 0;
  for (size_t i = 0; i < a.table.size(); ++i) diff += (a.table[i].mat - c.table[i].mat).norm();
  CHECK(diff > 1e-6);

  for (std::uint64_t seed : {81u, 82u}) {
    const KernelSystem sys = random_ce_system(kM2, 2, 3, seed);
    CHECK(check_symmetry(sys).pass);
    CHECK(check_ccpd(sys, 60, 1e-8, seed + 1).pass);
    const CentralityReport cen = central_check(sys, "w");
    CHECK(cen.central);
    CHECK(cen.unital);
  }

  const KernelSystem lone = random_ce_system(kM2, 2, 1, 83);
  CHECK(lone.label_count() == 1);
  CHECK(index_report(lone, all_bases(lone)).numerical_rank == 0);
}
