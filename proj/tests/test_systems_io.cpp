#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "oracles.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/systems_io.hpp"
#include "support.hpp"

using namespace sampdisc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sampdisc_tests";
  fs::create_directories(dir);
  return dir / name;
}

SampledSystem built_in(SystemKind kind, std::size_t n, std::size_t m, std::uint64_t seed = 0,
                       Field field = Field::complex) {
  return make_system({kind, n, m, seed, field, {}});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

TEST_SUITE("systems_io") {

TEST_CASE("DFT N = 4, M = 16 has flat magnitudes") {
  const SampledSystem s = built_in(SystemKind::dft, 4, 16);
  CHECK(s.field == Field::complex);
  CHECK(s.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  CHECK(s.values.cwiseAbs().minCoeff() == doctest::Approx(1.0));
  CHECK(orthonormality_residual(s) <= 1e-10);
}

TEST_CASE("Walsh N = 8, M = 32 is real with unit per-point average") {
  const SampledSystem s = built_in(SystemKind::walsh, 8, 32);
  CHECK(s.field == Field::real);
  for (Eigen::Index j = 0; j < 32; ++j) CHECK(s.values.col(j).squaredNorm() == 8.0);
  CHECK(orthonormality_residual(s) <= 1e-10);
}

TEST_CASE("trig N = 5 on a 64-point grid is orthonormal") {
  const SampledSystem s = built_in(SystemKind::trig, 5, 64);
  // Discrete orthogonality computed entry by entry.
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      double g = 0.0;
      for (std::size_t j = 0; j < 64; ++j) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(j) / 64.0;
        const auto u = oracle::trig_basis(5, x);
        g += u[a] * u[b] / 64.0;
      }
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-12);
      CHECK(std::abs(s.values(static_cast<Eigen::Index>(a), 3).real() -
                     oracle::trig_basis(5, s.points(0, 3))[a]) < 1e-15);
    }
  }
  CHECK(orthonormality_residual(s) <= 1e-12);
}

TEST_CASE("random orthonormal systems") {
  for (const Field f : {Field::real, Field::complex}) {
    const SampledSystem a = built_in(SystemKind::random_orthonormal, 4, 30, 17, f);
    const SampledSystem b = built_in(SystemKind::random_orthonormal, 4, 30, 17, f);
    CHECK(a.field == f);
    CHECK(orthonormality_residual(a) <= 1e-10);
    CHECK(a.values == b.values);
    CHECK(fingerprint(a) == fingerprint(b));
    const SampledSystem c = built_in(SystemKind::random_orthonormal, 4, 30, 18, f);
    CHECK(fingerprint(a) != fingerprint(c));
  }
}

TEST_CASE("invalid descriptors") {
  CHECK_THROWS_AS(built_in(SystemKind::walsh, 2, 24), Error);
  CHECK_THROWS_AS(built_in(SystemKind::walsh, 64, 32), Error);
  CHECK_THROWS_AS(built_in(SystemKind::trig, 4, 32), Error);
  CHECK_THROWS_AS(built_in(SystemKind::trig, 5, 4), Error);
  CHECK_THROWS_AS(built_in(SystemKind::dft, 5, 4), Error);
  CHECK_THROWS_AS(built_in(SystemKind::indicator, 0, 4), Error);
  CHECK_THROWS_AS(parse_system_kind("haar"), Error);
}

TEST_CASE("property: every built-in passes Condition E and tightness") {
  for (const auto kind : {SystemKind::trig, SystemKind::dft, SystemKind::walsh,
                          SystemKind::random_orthonormal, SystemKind::indicator}) {
    const SampledSystem s = built_in(kind, 3, 32, 5);
    const NikolskiiReport r = condition_e_constant(s);
    CHECK(std::isfinite(r.t));
    CHECK(verify_tight(build_frame_from_samples(s), 1e-10));
  }
}

TEST_CASE("system files round-trip") {
  for (const auto& s : {built_in(SystemKind::dft, 4, 16), built_in(SystemKind::walsh, 2, 8),
                        built_in(SystemKind::random_orthonormal, 3, 10, 2, Field::real)}) {
    const fs::path p = scratch("roundtrip.csv");
    save_system(s, p);
    const SampledSystem back = load_system(p);
    CHECK(back.field == s.field);
    CHECK((back.values - s.values).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(back.points == s.points);
    CHECK(back.weights == s.weights);
    CHECK(fingerprint(back) == fingerprint(s));
  }
}

TEST_CASE("non-uniform weights survive the sidecar") {
  Eigen::VectorXd w(4);
  w << 0.1, 0.2, 0.3, 0.4;
  const SampledSystem s =
      make_sampled_system(Eigen::MatrixXcd::Ones(1, 4), Eigen::MatrixXd::Zero(2, 4), w, Field::real);
  const fs::path p = scratch("weighted.csv");
  save_system(s, p);
  const SampledSystem back = load_system(p);
  CHECK(back.weights == s.weights);
  CHECK(back.points.rows() == 2);
}

TEST_CASE("malformed system files") {
  const fs::path p = scratch("broken.csv");
  save_system(built_in(SystemKind::dft, 2, 4), p);
  const std::string good = slurp(p);

  SUBCASE("missing column names the row") {
    std::string bad = good;
    const auto third_line = bad.find('\n', bad.find('\n', bad.find('\n') + 1) + 1);
    const auto last_comma = bad.rfind(',', third_line);
    bad.erase(last_comma, third_line - last_comma);
    spit(p, bad);
    try {
      load_system(p);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  SUBCASE("bad number names row and column") {
    std::string bad = good;
    const auto second_line = bad.find('\n') + 1;
    bad.replace(second_line, 1, "z");
    spit(p, bad);
    try {
      load_system(p);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      CHECK(std::string(e.what()).find("row 2, column 1") != std::string::npos);
    }
  }
  SUBCASE("row count disagrees with the sidecar") {
    spit(p, good.substr(0, good.rfind('\n', good.size() - 2) + 1));
    CHECK_THROWS_AS(load_system(p), Error);
  }
  SUBCASE("missing sidecar") {
    fs::remove(sidecar_path(p));
    CHECK_THROWS_AS(load_system(p), Error);
  }
}

TEST_CASE("certificate documents") {
  const SampledSystem s = built_in(SystemKind::dft, 2, 256);
  const DiscretizationCertificate c =
      discretize_equal_weight(s, {Strategy::randomized, 10000, 21});
  const std::string text = certificate_to_string(c);
  CHECK(text.find("\"schema_version\": \"1\"") != std::string::npos);

  const DiscretizationCertificate back = certificate_from_string(text);
  CHECK(certificate_to_string(back) == text);
  CHECK(back.point_indices == c.point_indices);
  CHECK(back.constants.lower == c.constants.lower);
  CHECK(back.constants.upper == c.constants.upper);
  CHECK(back.points == c.points);
  CHECK(back.log.size() == c.log.size());

  const fs::path p = scratch("cert.json");
  save_certificate(c, p);
  CHECK(verify_certificate(load_certificate(p), s).passed);

  // Same inputs and seed, same bytes.
  const DiscretizationCertificate again =
      discretize_equal_weight(s, {Strategy::randomized, 10000, 21});
  CHECK(certificate_to_string(again) == text);

  CHECK_THROWS_AS(certificate_from_string("{"), Error);
  CHECK_THROWS_AS(certificate_from_string("{\"schema_version\": \"2\"}"), Error);
  std::string tampered = text;
  tampered.replace(tampered.find("\"c\": \""), 6, "\"c\": 0.5, \"x\": \"");
  CHECK_THROWS_AS(certificate_from_string(tampered), Error);
}

TEST_CASE("weighted and continuous certificates round-trip") {
  const SampledSystem s = built_in(SystemKind::random_orthonormal, 2, 40, 3);
  const DiscretizationCertificate w = discretize_weighted(s, {});
  const DiscretizationCertificate wb = certificate_from_string(certificate_to_string(w));
  CHECK_FALSE(wb.uniform_weights);
  CHECK(wb.weights == w.weights);
  CHECK(verify_certificate(wb, s).passed);

  ContinuousOptions options;
  options.oracle.seed = 4;
  const DiscretizationCertificate c = discretize_continuous(trig_continuous(3), options);
  const DiscretizationCertificate cb = certificate_from_string(certificate_to_string(c));
  CHECK(cb.basis.family == "trig:3");
  CHECK(verify_certificate(cb, continuous_from_family(cb.basis.family)).passed);
  CHECK_THROWS_AS(continuous_from_family("trig:x"), Error);
  CHECK_THROWS_AS(continuous_from_family("legendre:3"), Error);
}

}  // TEST_SUITE
