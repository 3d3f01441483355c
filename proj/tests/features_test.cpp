#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "ntarp/features.hpp"
#include "ntarp/rng.hpp"
#include "ntarp/search.hpp"

using namespace ntarp;

namespace {

// Every exponent vector over p variables with total degree 1..degree, by
// brute-force counting in base (degree + 1).
std::set<std::vector<unsigned>> enumerate_terms(std::size_t p, unsigned degree) {
  std::set<std::vector<unsigned>> out;
  std::vector<unsigned> e(p, 0);
  for (;;) {
    unsigned total = 0;
    for (unsigned x : e) total += x;
    if (total >= 1 && total <= degree) out.insert(e);
    std::size_t i = 0;
    while (i < p && e[i] == degree) e[i++] = 0;
    if (i == p) break;
    ++e[i];
  }
  return out;
}

}  // namespace

TEST(MonomialExtend, TwoVariablesDegreeTwo) {
  const Matrix x{{2, 3}};
  const auto ext = monomial_extend(x, 2);
  ASSERT_EQ(ext.map.output_dim, 5u);
  const std::vector<std::vector<unsigned>> expected{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(ext.map.terms, expected);
  EXPECT_EQ(ext.data, (Matrix{{2, 3, 4, 6, 9}}));
}

TEST(MonomialExtend, DegreeOneIsIdentity) {
  const Matrix x{{1.5, -2, 3}, {0, 1, 7}};
  const auto ext = monomial_extend(x, 1);
  EXPECT_EQ(ext.data, x);
  EXPECT_EQ(ext.map.output_dim, 3u);
  EXPECT_EQ(ext.map.apply(x), x);
}

TEST(MonomialExtend, CountMatchesEnumeration) {
  for (std::size_t p = 1; p <= 10; ++p) {
    for (unsigned degree = 1; degree <= 4; ++degree) {
      const auto map = make_feature_map(p, degree);
      const auto brute = enumerate_terms(p, degree);
      ASSERT_EQ(map.output_dim, brute.size()) << "p=" << p << " degree=" << degree;
      EXPECT_EQ(std::set<std::vector<unsigned>>(map.terms.begin(), map.terms.end()), brute);
      // Graded, then descending lexicographic inside a degree.
      for (std::size_t j = 1; j < map.terms.size(); ++j) {
        unsigned da = 0, db = 0;
        for (unsigned e : map.terms[j - 1]) da += e;
        for (unsigned e : map.terms[j]) db += e;
        EXPECT_TRUE(da < db || (da == db && map.terms[j - 1] > map.terms[j]));
      }
    }
  }
}

TEST(MonomialExtend, CapIsEnforced) {
  try {
    make_feature_map(100, 3);  // C(103, 3) - 1 = 176850
    FAIL() << "expected cap error";
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p = 100"), std::string::npos) << msg;
    EXPECT_NE(msg.find("degree = 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("176850"), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(make_feature_map(100, 3, 200000));
  EXPECT_THROW(make_feature_map(3, 0), InvalidArgument);
}

TEST(MonomialExtend, ProjectionEqualsPolynomialEvaluation) {
  Rng rng(4);
  const std::size_t p = 3;
  Matrix x(20, p);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < p; ++c) x(r, c) = rng.normal();
  }
  const auto ext = monomial_extend(x, 3);
  const auto v = random_direction(ext.map.output_dim, rng);
  const auto projected = project(ext.data, v);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    // sum_j v_j * prod_i x_i^{e_ji}, evaluated with std::pow.
    double poly = 0;
    for (std::size_t j = 0; j < ext.map.terms.size(); ++j) {
      double term = v.components[j];
      for (std::size_t i = 0; i < p; ++i) term *= std::pow(x(r, i), ext.map.terms[j][i]);
      poly += term;
    }
    EXPECT_NEAR(projected[r], poly, 1e-12);
  }
}

TEST(OneHot, SingleAttribute) {
  const std::vector<std::vector<std::string>> t{{"a"}, {"b"}, {"a"}};
  const auto enc = one_hot(t);
  EXPECT_EQ(enc.data, (Matrix{{1, 0}, {0, 1}, {1, 0}}));
  ASSERT_EQ(enc.dictionary.columns.size(), 2u);
  EXPECT_EQ(enc.dictionary.columns[0].category, "a");
  EXPECT_EQ(enc.dictionary.columns[1].category, "b");
}

TEST(OneHot, RowSumsAndInvertibility) {
  const std::vector<std::vector<std::string>> t{
      {"x", "s", "?"}, {"b", "y", "n"}, {"x", "s", "t"}, {"f", "?", "n"}, {"b", "y", "?"}};
  const auto enc = one_hot(t);
  // 3 + 3 + 3 observed categories.
  EXPECT_EQ(enc.data.cols(), 9u);
  for (std::size_t r = 0; r < t.size(); ++r) {
    double sum = 0;
    for (double v : enc.data.row(r)) sum += v;
    EXPECT_EQ(sum, 3.0);
  }
  EXPECT_EQ(enc.dictionary.decode(enc.data), t);
  // Attribute order, then first appearance.
  EXPECT_EQ(enc.dictionary.columns[0].category, "x");
  EXPECT_EQ(enc.dictionary.columns[1].category, "b");
  EXPECT_EQ(enc.dictionary.columns[2].category, "f");
  EXPECT_EQ(enc.dictionary.columns[3].attribute, 1u);
}

TEST(OneHot, FixedDictionary) {
  const std::vector<std::vector<std::string>> t{{"a", "x"}, {"b", "y"}};
  const auto enc = one_hot(t);
  const std::vector<std::vector<std::string>> fresh{{"b", "x"}};
  EXPECT_EQ(one_hot_encode(fresh, enc.dictionary), (Matrix{{0, 1, 1, 0}}));
  EXPECT_THROW(one_hot_encode({{"c", "x"}}, enc.dictionary), ParseError);
}

TEST(OneHot, Errors) {
  EXPECT_THROW(one_hot({}), InvalidArgument);
  EXPECT_THROW(one_hot({{"a", "b"}, {"c"}}), ParseError);
}

TEST(Standardize, Examples) {
  const auto s = standardize(Matrix{{1, 5}, {2, 5}, {3, 5}});
  const double z = 1.0 / std::sqrt(2.0 / 3.0);  // 1.2247...
  EXPECT_NEAR(s.data(0, 0), -z, 1e-15);
  EXPECT_NEAR(s.data(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.data(2, 0), z, 1e-15);
  EXPECT_NEAR(z, 1.224744871391589049, 1e-15);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(s.data(r, 1), 0.0);
  EXPECT_FALSE(s.transform.constant[0]);
  EXPECT_TRUE(s.transform.constant[1]);
  EXPECT_TRUE(s.transform.any_constant());
  EXPECT_EQ(s.transform.scale[1], 1.0);
  EXPECT_THROW(standardize(Matrix{{1, 2}}), InvalidArgument);
}

TEST(Standardize, Idempotent) {
  Rng rng(8);
  Matrix x(30, 4);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = 10.0 * c + (c + 1) * rng.normal();
  }
  const auto once = standardize(x);
  const auto twice = standardize(once.data);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(once.data(r, c), twice.data(r, c), 1e-12);
  }
  // The stored transform reproduces the result on the same rows.
  EXPECT_EQ(once.transform.apply(x), once.data);
}
