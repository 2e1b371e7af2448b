#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "sampdisc/decimal.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/rng.hpp"
#include "sampdisc/sampled_system.hpp"

using namespace sampdisc;

TEST_SUITE("support_types") {

TEST_CASE("decimal strings round-trip exactly") {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = std::ldexp(rng.normal(), static_cast<int>(rng.below(200)) - 100);
    CHECK(parse_decimal(format_decimal(x)) == x);
  }
  CHECK(format_decimal(0.5) == "0.5");
  CHECK(format_decimal(1.0) == "1");
  CHECK(parse_decimal("+2.5") == 2.5);
  CHECK_THROWS_AS(parse_decimal("1.5x"), Error);
  CHECK_THROWS_AS(parse_decimal(""), Error);
}

TEST_CASE("generator streams are reproducible") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("uniform, below and normal stay in range") {
  Rng rng(3);
  double sum = 0.0;
  double sq = 0.0;
  std::set<std::size_t> seen;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const std::size_t k = rng.below(7);
    CHECK(k < 7);
    seen.insert(k);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(seen.size() == 7);
  CHECK(std::abs(sum / 20000.0) < 0.05);
  CHECK(std::abs(sq / 20000.0 - 1.0) < 0.05);
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(4);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(std::span<int>(v));
  std::multiset<int> s(v.begin(), v.end());
  CHECK(s == std::multiset<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("errors carry their stage") {
  const Error e(ErrorCode::parse, "inner", "bad token");
  CHECK(std::string(e.what()) == "[inner] parse: bad token");
  const Error outer = e.within("outer");
  CHECK(outer.stage() == "outer/inner");
  CHECK(outer.code() == ErrorCode::parse);
}

TEST_CASE("sampled system validation") {
  const Eigen::MatrixXcd v = Eigen::MatrixXcd::Ones(2, 3);
  const Eigen::MatrixXd p = Eigen::MatrixXd::Zero(1, 3);
  CHECK_NOTHROW(make_sampled_system(v, p, Field::real));
  CHECK_THROWS_AS(make_sampled_system(v, Eigen::MatrixXd::Zero(1, 2), Field::real), Error);
  Eigen::VectorXd w(3);
  w << 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(make_sampled_system(v, p, w, Field::real), Error);
  w << 1.5, -0.5, 0.0;
  CHECK_THROWS_AS(make_sampled_system(v, p, w, Field::real), Error);
  Eigen::MatrixXcd imag = v;
  imag(1, 1) = Complex(1.0, 1.0);
  CHECK_THROWS_AS(make_sampled_system(imag, p, Field::real), Error);
  CHECK_NOTHROW(make_sampled_system(imag, p, Field::complex));
}

TEST_CASE("Gram matrix and residual") {
  Eigen::MatrixXcd v(2, 2);
  v << 1, 1, 1, -1;
  const SampledSystem s = make_sampled_system(v, Eigen::MatrixXd::Zero(1, 2), Field::real);
  CHECK((gram_matrix(s).entries() - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
  CHECK(orthonormality_residual(s) < 1e-15);
  SampledSystem scaled = s;
  scaled.values *= 2.0;
  CHECK(orthonormality_residual(scaled) == doctest::Approx(3.0));
}

TEST_CASE("fingerprints see every field") {
  Eigen::MatrixXcd v(1, 2);
  v << 1, 1;
  const SampledSystem s = make_sampled_system(v, Eigen::MatrixXd::Zero(1, 2), Field::real);
  SampledSystem c = s;
  c.field = Field::complex;
  SampledSystem moved = s;
  moved.points(0, 1) = 1.0;
  CHECK(fingerprint(s).size() == 64);
  CHECK(fingerprint(s) != fingerprint(c));
  CHECK(fingerprint(s) != fingerprint(moved));
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // TEST_SUITE
