#include <catch2/catch_amalgamated.hpp>

#include <framelab/measure.hpp>
#include <framelab/rng.hpp>

using namespace framelab;

TEST_CASE("measure space validates its weights") {
  CHECK_THROWS_AS(DiscreteMeasureSpace(VecR()), dimension_error);

  VecR bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(DiscreteMeasureSpace(bad), contract_error);

  bad << 1.0, -0.5;
  CHECK_THROWS_AS(DiscreteMeasureSpace(bad), contract_error);

  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DiscreteMeasureSpace(bad), contract_error);

  DiscreteMeasureSpace sp = DiscreteMeasureSpace::counting(3);
  CHECK(sp.size() == 3);
  CHECK(sp.total() == Catch::Approx(3.0));
  CHECK(sp.is_counting());

  VecR w(2);
  w << 0.5, 2.0;
  DiscreteMeasureSpace sp2{w};
  CHECK(sp2.total() == Catch::Approx(2.5));
  CHECK_FALSE(sp2.is_counting());
  CHECK(sp2 == sp2);
  CHECK_FALSE(sp == sp2);
}

TEST_CASE("l2_inner hand value") {
  // weights (1, 1/2), f = (1, 2), g = (1, 1):  1*1*1 + 0.5*2*1 = 2.
  VecR w(2);
  w << 1.0, 0.5;
  DiscreteMeasureSpace sp{w};
  VecR f(2), g(2);
  f << 1, 2;
  g << 1, 1;
  CHECK(l2_inner<double>(f, g, sp) == Catch::Approx(2.0));
  CHECK(l2_norm_sq<double>(f, sp) == Catch::Approx(1.0 + 0.5 * 4.0));
}

TEST_CASE("l2_inner is linear in the first argument and conjugate-symmetric") {
  DiscreteMeasureSpace sp = DiscreteMeasureSpace::random(99, 6);
  SplitMix64 g = substream(99, 5);
  VecC f(6), h(6), k(6);
  for (int i = 0; i < 6; ++i) {
    f[i] = gaussian<cplx>(g);
    h[i] = gaussian<cplx>(g);
    k[i] = gaussian<cplx>(g);
  }
  cplx alpha(0.7, -1.3);

  // <alpha f + h, k> = alpha <f, k> + <h, k>
  VecC combo = alpha * f + h;
  cplx lhs = l2_inner<cplx>(combo, k, sp);
  cplx rhs = alpha * l2_inner<cplx>(f, k, sp) + l2_inner<cplx>(h, k, sp);
  CHECK(std::abs(lhs - rhs) < 1e-12);

  // <f, h> = conj(<h, f>)
  CHECK(std::abs(l2_inner<cplx>(f, h, sp) - std::conj(l2_inner<cplx>(h, f, sp))) < 1e-14);

  // <f, f> = ||f||^2 >= 0
  cplx self = l2_inner<cplx>(f, f, sp);
  CHECK(self.real() == Catch::Approx(l2_norm_sq<cplx>(f, sp)));
  CHECK(std::abs(self.imag()) < 1e-14);
}

TEST_CASE("l2_inner rejects mismatched lengths") {
  DiscreteMeasureSpace sp = DiscreteMeasureSpace::counting(3);
  VecR f(3), g(2);
  f << 1, 2, 3;
  g << 1, 2;
  CHECK_THROWS_AS(l2_inner<double>(f, g, sp), dimension_error);
  CHECK_THROWS_AS(l2_norm_sq<double>(g, sp), dimension_error);
}

TEST_CASE("random spaces are reproducible and positive") {
  DiscreteMeasureSpace a = DiscreteMeasureSpace::random(5, 10);
  DiscreteMeasureSpace b = DiscreteMeasureSpace::random(5, 10);
  CHECK(a == b);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.weight(i) >= 0.1);
    CHECK(a.weight(i) < 2.0);
  }
  CHECK_FALSE(a == DiscreteMeasureSpace::random(6, 10));
}
