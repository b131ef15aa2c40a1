#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "perfect/spectrum.hpp"

using namespace perfect;

TEST_CASE("from_values clusters and sorts") {
  const std::vector<Complex> v{2.0, -1.0, 0.0, -1.0 + 1e-9, 0.0};
  const Spectrum s = Spectrum::from_values(v);
  REQUIRE(s.entries().size() == 3);
  CHECK(s.entries()[0].multiplicity == 2);
  CHECK(s.entries()[1].value == Complex(0.0));
  CHECK(s.entries()[2].multiplicity == 1);
  CHECK(s.size() == 5);
  CHECK(s.multiplicity_of(-1.0) == 2);
  CHECK(s.multiplicity_of(7.0) == 0);
  CHECK(s.values().size() == 5);
}

TEST_CASE("from_terms keeps exact values and sources") {
  const std::vector<Spectrum::Term> terms{{Complex(1.0), Rational(1), {1}},
                                          {Complex(1.0), Rational(1), {2}},
                                          {Complex(-0.5), make_rational(-1, 2), {3}}};
  const Spectrum s = Spectrum::from_terms(terms);
  REQUIRE(s.entries().size() == 2);
  CHECK(*s.entries()[0].exact == make_rational(-1, 2));
  CHECK(s.entries()[1].multiplicity == 2);
  CHECK(s.entries()[1].sources.size() == 2);
}

TEST_CASE("multiset comparisons") {
  const std::vector<Complex> a{-2.0, 0.0, 0.0, 2.0};
  const std::vector<Complex> b{2.0 + 1e-10, 0.0, -2.0, 0.0};
  const std::vector<Complex> c{-2.0, 0.0, 2.0};
  const std::vector<Complex> d{-2.0, 0.0, 2.0, 2.0};
  const Spectrum sa = Spectrum::from_values(a), sb = Spectrum::from_values(b);
  const Spectrum sc = Spectrum::from_values(c), sd = Spectrum::from_values(d);
  CHECK(multiset_equal(sa, sb));
  CHECK(max_discrepancy(sa, sb) < 1e-9);
  CHECK_FALSE(multiset_equal(sa, sd));
  CHECK(max_discrepancy(sa, sc) == std::numeric_limits<double>::infinity());
  CHECK(is_submultiset(sc, sa));
  CHECK_FALSE(is_submultiset(sd, sa));
}
