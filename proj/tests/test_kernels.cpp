#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpdk/examples.hpp"
#include "cpdk/kernels.hpp"
#include "oracles.hpp"

using namespace cpdk;

namespace {

const AlgebraDescriptor kM2({2});
const AlgebraDescriptor kScalar({1});

KernelSystem zero_system(const AlgebraDescriptor& desc, const std::vector<std::string>& labels) {
  std::vector<SuperOperator> table(labels.size() * labels.size(), super_zero(desc));
  return make_kernel_system(desc, labels, table, labels.front());
}

}  // namespace

TEST_CASE("construction validates the table") {
  const KernelSystem lone = zero_system(kM2, {"w"});
  CHECK(lone.label_count() == 1);
  CHECK(lone.reference_label() == "w");

  // b ↦ i·b on both sides of a pair breaks swap symmetry: (i b*)* = -i b.
  const SuperOperator ib = Complex(0, 1) * super_identity(kM2);
  const std::vector<SuperOperator> bad = {super_zero(kM2), ib, ib, super_zero(kM2)};
  CHECK_THROWS_AS(make_kernel_system(kM2, {"x", "y"}, bad, "x"), SymmetryError);

  CHECK_THROWS_AS(zero_system(kM2, {"x", "x"}), InputError);
  CHECK_THROWS_AS(
      make_kernel_system(kM2, {"x", "y"}, {super_zero(kM2), super_zero(kM2)}, "x"),
      IncompleteTableError);
  CHECK_THROWS_AS(
      make_kernel_system(kM2, {"x"}, {super_zero(kM2)}, "nope"), ReferenceError);
}

TEST_CASE("inner-product-form tables satisfy swap symmetry on the basis") {
  const KernelSystem sys = random_ce_system(kM2, 2, 4, 101);
  const std::vector<AlgebraElement> basis = basis_elements(kM2);
  double worst = 0;
  for (int i = 0; i < sys.label_count(); ++i)
    for (int j = 0; j < sys.label_count(); ++j)
      for (const AlgebraElement& b : basis) {
        const AlgebraElement lhs = apply(sys.kernel(j, i), b);
        const AlgebraElement rhs = adjoint(apply(sys.kernel(i, j), adjoint(b)));
        worst = std::max(worst, oracles::elem_norm(lhs - rhs));
      }
  CHECK(worst <= 1e-10);
  CHECK(check_symmetry(sys).pass);
}

TEST_CASE("kernel lookup rejects unknown labels") {
  const KernelSystem sys = zero_system(kM2, {"w", "x"});
  CHECK_THROWS_AS(sys.label_index("z"), LookupError);
  CHECK_THROWS_AS(semigroup_eval(sys, "w", "z", 0.5, unit(kM2)), LookupError);
}

TEST_CASE("semigroup evaluation") {
  const KernelSystem sys = random_ce_system(kM2, 2, 3, 7);
  Rng rng(21);
  const AlgebraElement b = random_element(kM2, rng);

  SUBCASE("time zero is the identity") {
    CHECK(oracles::elem_norm(semigroup_eval(sys, "u1", "u2", 0.0, b) - b) == doctest::Approx(0.0));
  }

  SUBCASE("scalar generator exponentiates pointwise") {
    const SuperOperator lam = 0.3 * super_identity(kScalar);
    const KernelSystem s1 =
        make_kernel_system(kScalar, {"x"}, {lam}, "x");
    const AlgebraElement one = unit(kScalar);
    const AlgebraElement v = semigroup_eval(s1, "x", "x", 2.0, one);
    CHECK(std::abs(v.blocks[0](0, 0) - std::exp(0.6)) <= 1e-12);
  }

  SUBCASE("two-sided multiplier generator conjugates by block exponentials") {
    const AlgebraElement beta = random_element(kM2, rng);
    const SuperOperator gen = left_mult_op(adjoint(beta)) + right_mult_op(beta);
    const KernelSystem s2 = make_kernel_system(kM2, {"x"}, {gen}, "x");
    for (double t : {0.2, 0.9}) {
      const AlgebraElement got = semigroup_eval(s2, "x", "x", t, b);
      const Matrix el = oracles::taylor_exp(t * beta.blocks[0].adjoint());
      const Matrix er = oracles::taylor_exp(t * beta.blocks[0]);
      CHECK((got.blocks[0] - el * b.blocks[0] * er).norm() <= 1e-11);
    }
  }

  SUBCASE("negative time is rejected") {
    CHECK_THROWS_AS(semigroup_eval(sys, "u1", "u1", -0.1, b), NumericInputError);
  }
}

TEST_CASE("semigroup law and generator recovery hold on stored kernels") {
  const KernelSystem sys = random_ce_system(kM2, 2, 3, 33);
  Rng rng(34);
  for (int i = 0; i < 10; ++i) {
    const std::string& x = sys.labels[rng.uniform_int(0, sys.label_count() - 1)];
    const std::string& y = sys.labels[rng.uniform_int(0, sys.label_count() - 1)];
    const AlgebraElement b = random_contraction(kM2, rng);
    const double s = rng.uniform(), t = rng.uniform();
    const AlgebraElement once = semigroup_eval(sys, x, y, s + t, b);
    const AlgebraElement twice = semigroup_eval(sys, x, y, s, semigroup_eval(sys, x, y, t, b));
    CHECK(oracles::elem_norm(once - twice) <= 1e-9);

    const SuperOperator gen = sys.kernel(x, y);
    auto err = [&](double tau) {
      const AlgebraElement q = (1.0 / tau) * (semigroup_eval(sys, x, y, tau, b) - b);
      return cstar_norm(q - apply(gen, b));
    };
    const double coarse = err(1e-3);
    CHECK(coarse <= 1e-2);
    if (coarse > 1e-12) CHECK(err(5e-4) <= coarse);
  }
}

TEST_CASE("conditional positivity check passes on a zero table") {
  const KernelSystem sys = zero_system(kM2, {"w", "x"});
  const CcpdReport rep = check_ccpd(sys, 50, 1e-8, 1);
  CHECK(rep.pass);
  CHECK(rep.min_eigenvalue >= -1e-15);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("conditional positivity check flags a planted violation") {
  // L(b) = -c* b c with c = e_12 is swap symmetric but not conditionally
  // positive: the tuple a = e_11, b = e_22 gives the sum -e_22.
  const AlgebraElement c = matrix_unit(kM2, 0, 0, 1);
  const Matrix gen = -(left_mult_op(adjoint(c)).mat * right_mult_op(c).mat);
  const KernelSystem sys =
      make_kernel_system(kM2, {"x"}, {SuperOperator(kM2, gen)}, "x");

  const AlgebraElement value =
      ccpd_sum(sys, {0}, {matrix_unit(kM2, 0, 0, 0)}, {matrix_unit(kM2, 0, 1, 1)});
  CHECK(oracles::elem_norm(value - (-matrix_unit(kM2, 0, 1, 1))) == doctest::Approx(0.0));
  CHECK(min_eigenvalue(value) == doctest::Approx(-1.0));

  const CcpdReport rep = check_ccpd(sys, 50, 1e-8, 2);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->min_eig == doctest::Approx(rep.min_eigenvalue));
  CHECK(min_eigenvalue(ccpd_sum(sys, [&] {
          std::vector<int> idx;
          for (const std::string& l : rep.witness->labels) idx.push_back(sys.label_index(l));
          return idx;
        }(), rep.witness->a, rep.witness->b)) == doctest::Approx(rep.min_eigenvalue));
}

TEST_CASE("conditional positivity holds on inner-product-form systems") {
  const KernelSystem sys = random_ce_system(kM2, 2, 4, 55);
  const CcpdReport rep = check_ccpd(sys, 200, 1e-8, 3);
  CHECK(rep.pass);
  CHECK(rep.min_eigenvalue >= -1e-8);

  const CcpdReport again = check_ccpd(sys, 200, 1e-8, 3);
  const bool deterministic = again.min_eigenvalue == rep.min_eigenvalue;
  CHECK(deterministic);
}
