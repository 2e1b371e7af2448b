#include "sampdisc/systems_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "sampdisc/decimal.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/rng.hpp"

namespace sampdisc {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";

[[noreturn]] void invalid(std::string_view stage, const std::string& message) {
  throw Error(ErrorCode::precondition, std::string(stage), message);
}

Eigen::MatrixXd grid_points(std::size_t M) {
  Eigen::MatrixXd points(1, static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < M; ++j) {
    points(0, static_cast<Eigen::Index>(j)) =
        2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
  }
  return points;
}

Eigen::MatrixXd index_points(std::size_t M) {
  Eigen::MatrixXd points(1, static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < M; ++j) points(0, static_cast<Eigen::Index>(j)) = static_cast<double>(j);
  return points;
}

Eigen::VectorXcd trig_values(std::size_t N, double x) {
  Eigen::VectorXcd u(static_cast<Eigen::Index>(N));
  u(0) = 1.0;
  for (std::size_t k = 1; 2 * k <= N - 1; ++k) {
    const double kx = static_cast<double>(k) * x;
    u(static_cast<Eigen::Index>(2 * k - 1)) = std::numbers::sqrt2 * std::cos(kx);
    u(static_cast<Eigen::Index>(2 * k)) = std::numbers::sqrt2 * std::sin(kx);
  }
  return u;
}

void check_trig_dim(std::size_t N, std::string_view stage) {
  if (N < 1 || N % 2 == 0) invalid(stage, "trig needs an odd N = 2n+1");
}

SampledSystem make_trig(std::size_t N, std::size_t M) {
  check_trig_dim(N, "make_system/trig");
  if (M < N) invalid("make_system/trig", "trig needs M >= N grid points");
  const Eigen::MatrixXd points = grid_points(M);
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  for (Eigen::Index j = 0; j < points.cols(); ++j) values.col(j) = trig_values(N, points(0, j));
  return make_sampled_system(std::move(values), points, Field::real);
}

SampledSystem make_dft(std::size_t N, std::size_t M) {
  if (N < 1 || M < N) invalid("make_system/dft", "dft needs 1 <= N <= M");
  const Eigen::MatrixXd points = grid_points(M);
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t k = 0; k < N; ++k) {
      // Reduce k*j mod M first so the phase is exact for large products.
      const double phase =
          2.0 * std::numbers::pi * static_cast<double>((k * j) % M) / static_cast<double>(M);
      values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = std::polar(1.0, phase);
    }
  }
  return make_sampled_system(std::move(values), points, Field::complex);
}

SampledSystem make_walsh(std::size_t N, std::size_t M) {
  if (M < 1 || (M & (M - 1)) != 0) invalid("make_system/walsh", "walsh needs M a power of 2");
  if (N < 1 || N > M) invalid("make_system/walsh", "walsh needs 1 <= N <= M");
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const bool odd = std::popcount(i & j) % 2 == 1;
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = odd ? -1.0 : 1.0;
    }
  }
  return make_sampled_system(std::move(values), index_points(M), Field::real);
}

SampledSystem make_random_orthonormal(std::size_t N, std::size_t M, std::uint64_t seed,
                                      Field field) {
  if (N < 1 || M < N) invalid("make_system/random_orthonormal", "need 1 <= N <= M");
  Rng rng(seed);
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double re = rng.normal();
      const double im = field == Field::complex ? rng.normal() : 0.0;
      values(i, j) = Complex(re, im);
    }
  }
  const SampledSystem raw = make_sampled_system(std::move(values), index_points(M), field);
  Reorthonormalized out = reorthonormalize(raw);
  if (out.rank != N) {
    throw Error(ErrorCode::internal, "make_system/random_orthonormal", "Gaussian draw lost rank");
  }
  return std::move(out.system);
}

SampledSystem make_indicator(std::size_t N, std::size_t M) {
  if (N < 1 || M < N) invalid("make_system/indicator", "indicator needs 1 <= N <= M");
  Eigen::MatrixXcd values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N),
                                                   static_cast<Eigen::Index>(M));
  const double height = std::sqrt(static_cast<double>(M));
  for (Eigen::Index i = 0; i < values.rows(); ++i) values(i, i) = height;
  return make_sampled_system(std::move(values), index_points(M), Field::real);
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(std::string text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(const std::filesystem::path& path, const std::string& message) {
  throw Error(ErrorCode::parse, "load_system", path.string() + ": " + message);
}

std::string read_file(const std::filesystem::path& path, std::string_view stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::input, std::string(stage), "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text,
                std::string_view stage) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::input, std::string(stage), "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::input, std::string(stage), "write failed for " + path.string());
}

std::size_t json_size(const Json& doc, const char* key, const std::filesystem::path& path) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    parse_error(path, std::string("sidecar field '") + key + "' must be a nonnegative integer");
  }
  return doc[key].get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Certificate JSON

Json decimal(double value) { return format_decimal(value); }

double read_decimal(const Json& value, std::string_view what) {
  if (!value.is_string()) {
    throw Error(ErrorCode::parse, "load_certificate",
                std::string(what) + " must be a decimal string");
  }
  try {
    return parse_decimal(value.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, "load_certificate", std::string(what) + ": " + e.message());
  }
}

const Json& member(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(ErrorCode::parse, "load_certificate", std::string("missing field '") + key + "'");
  }
  return object.at(key);
}

std::string member_string(const Json& object, const char* key) {
  const Json& value = member(object, key);
  if (!value.is_string()) {
    throw Error(ErrorCode::parse, "load_certificate",
                std::string("field '") + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::uint64_t member_unsigned(const Json& object, const char* key) {
  const Json& value = member(object, key);
  if (!value.is_number_unsigned()) {
    throw Error(ErrorCode::parse, "load_certificate",
                std::string("field '") + key + "' must be a nonnegative integer");
  }
  return value.get<std::uint64_t>();
}

CertificateKind parse_kind(const std::string& name) {
  for (const auto kind :
       {CertificateKind::equal_weight, CertificateKind::weighted, CertificateKind::transferred}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::parse, "load_certificate", "unknown certificate kind '" + name + "'");
}

BasisSource parse_source(const std::string& name) {
  if (name == "sampled") return BasisSource::sampled;
  if (name == "continuous") return BasisSource::continuous;
  throw Error(ErrorCode::parse, "load_certificate", "unknown basis source '" + name + "'");
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(SystemKind kind) noexcept {
  switch (kind) {
    case SystemKind::trig: return "trig";
    case SystemKind::dft: return "dft";
    case SystemKind::walsh: return "walsh";
    case SystemKind::random_orthonormal: return "random_orthonormal";
    case SystemKind::indicator: return "indicator";
    case SystemKind::file: return "file";
  }
  return "unknown";
}

SystemKind parse_system_kind(std::string_view name) {
  for (const auto kind : {SystemKind::trig, SystemKind::dft, SystemKind::walsh,
                          SystemKind::random_orthonormal, SystemKind::indicator,
                          SystemKind::file}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::domain, "parse_system_kind",
              "unknown system kind '" + std::string(name) + "'");
}

Field parse_field(std::string_view name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::complex;
  throw Error(ErrorCode::domain, "parse_field", "unknown field '" + std::string(name) + "'");
}

SampledSystem make_system(const SystemDescriptor& d) {
  switch (d.kind) {
    case SystemKind::trig: return make_trig(d.N, d.M);
    case SystemKind::dft: return make_dft(d.N, d.M);
    case SystemKind::walsh: return make_walsh(d.N, d.M);
    case SystemKind::random_orthonormal: return make_random_orthonormal(d.N, d.M, d.seed, d.field);
    case SystemKind::indicator: return make_indicator(d.N, d.M);
    case SystemKind::file: return load_system(d.path);
  }
  throw Error(ErrorCode::internal, "make_system", "unhandled system kind");
}

ContinuousSystem trig_continuous(std::size_t N) {
  check_trig_dim(N, "trig_continuous");
  ContinuousSystem system;
  system.family = "trig:" + std::to_string(N);
  system.dim = N;
  system.field = Field::real;
  system.point_dim = 1;
  system.sampler = [](Rng& rng) {
    return Eigen::VectorXd::Constant(1, 2.0 * std::numbers::pi * rng.uniform());
  };
  system.evaluator = [N](const Eigen::VectorXd& x) { return trig_values(N, x(0)); };
  system.nikolskii_t = 1.0;
  return system;
}

ContinuousSystem continuous_from_family(std::string_view family) {
  constexpr std::string_view kTrig = "trig:";
  if (family.starts_with(kTrig)) {
    const std::string digits(family.substr(kTrig.size()));
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == digits.size() && used > 0) return trig_continuous(static_cast<std::size_t>(n));
  }
  throw Error(ErrorCode::domain, "continuous_from_family",
              "unknown continuous family '" + std::string(family) + "'");
}

// ---------------------------------------------------------------------------

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".json");
}

void save_system(const SampledSystem& system, const std::filesystem::path& path) {
  validate(system);
  const bool complex = system.field == Field::complex;
  std::string csv;
  for (Eigen::Index r = 0; r < system.points.rows(); ++r) {
    csv += (r ? ",x" : "x") + std::to_string(r);
  }
  for (std::size_t i = 0; i < system.dim(); ++i) {
    const std::string name = "u" + std::to_string(i);
    csv += complex ? "," + name + "_re," + name + "_im" : "," + name;
  }
  csv += '\n';
  for (Eigen::Index j = 0; j < system.values.cols(); ++j) {
    for (Eigen::Index r = 0; r < system.points.rows(); ++r) {
      if (r) csv += ',';
      csv += format_decimal(system.points(r, j));
    }
    for (Eigen::Index i = 0; i < system.values.rows(); ++i) {
      csv += ',' + format_decimal(system.values(i, j).real());
      if (complex) csv += ',' + format_decimal(system.values(i, j).imag());
    }
    csv += '\n';
  }

  Json sidecar;
  sidecar["schema_version"] = kSchemaVersion;
  sidecar["N"] = system.dim();
  sidecar["M"] = system.count();
  sidecar["field"] = to_string(system.field);
  sidecar["point_dim"] = static_cast<std::size_t>(system.points.rows());
  if (system.uniform_weights()) {
    sidecar["weights"] = "uniform";
  } else {
    Json weights = Json::array();
    for (Eigen::Index j = 0; j < system.weights.size(); ++j) weights.push_back(decimal(system.weights(j)));
    sidecar["weights"] = std::move(weights);
  }
  write_file(path, csv, "save_system");
  write_file(sidecar_path(path), sidecar.dump(2) + "\n", "save_system");
}

SampledSystem load_system(const std::filesystem::path& path) {
  const std::filesystem::path meta_path = sidecar_path(path);
  Json meta;
  try {
    meta = Json::parse(read_file(meta_path, "load_system"));
  } catch (const Json::parse_error& e) {
    parse_error(meta_path, e.what());
  }
  if (!meta.is_object() || meta.value("schema_version", "") != kSchemaVersion) {
    parse_error(meta_path, "sidecar must be an object with schema_version \"1\"");
  }
  const std::size_t n = json_size(meta, "N", meta_path);
  const std::size_t m = json_size(meta, "M", meta_path);
  const std::size_t d = json_size(meta, "point_dim", meta_path);
  if (!meta.contains("field") || !meta["field"].is_string()) {
    parse_error(meta_path, "sidecar field 'field' must be \"real\" or \"complex\"");
  }
  Field field;
  try {
    field = parse_field(meta["field"].get<std::string>());
  } catch (const Error& e) {
    parse_error(meta_path, e.message());
  }
  if (n < 1 || m < 1) parse_error(meta_path, "N and M must be positive");

  const std::size_t per_value = field == Field::complex ? 2 : 1;
  const std::size_t columns = d + per_value * n;

  std::istringstream csv(read_file(path, "load_system"));
  std::string line;
  if (!std::getline(csv, line)) parse_error(path, "missing header row");
  if (split_csv(strip(line)).size() != columns) {
    parse_error(path, "header row has " + std::to_string(split_csv(strip(line)).size()) +
                          " columns, expected " + std::to_string(columns));
  }

  Eigen::MatrixXd points(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  std::size_t row = 0;
  std::size_t line_number = 1;
  while (std::getline(csv, line)) {
    ++line_number;
    line = strip(line);
    if (line.empty()) continue;
    if (row >= m) parse_error(path, "row " + std::to_string(line_number) + ": more than M rows");
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != columns) {
      parse_error(path, "row " + std::to_string(line_number) + ": has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(columns));
    }
    std::vector<double> numbers(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      try {
        numbers[c] = parse_decimal(strip(cells[c]));
      } catch (const Error& e) {
        parse_error(path, "row " + std::to_string(line_number) + ", column " +
                              std::to_string(c + 1) + ": " + e.message());
      }
    }
    const auto j = static_cast<Eigen::Index>(row);
    for (std::size_t r = 0; r < d; ++r) points(static_cast<Eigen::Index>(r), j) = numbers[r];
    for (std::size_t i = 0; i < n; ++i) {
      const double re = numbers[d + per_value * i];
      const double im = per_value == 2 ? numbers[d + per_value * i + 1] : 0.0;
      values(static_cast<Eigen::Index>(i), j) = Complex(re, im);
    }
    ++row;
  }
  if (row != m) {
    parse_error(path, "found " + std::to_string(row) + " data rows, sidecar says M = " +
                          std::to_string(m));
  }

  Eigen::VectorXd weights;
  const Json& w = meta.contains("weights") ? meta["weights"] : Json("uniform");
  if (w.is_string() && w.get<std::string>() == "uniform") {
    weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m));
  } else if (w.is_array() && w.size() == m) {
    weights.resize(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      if (!w[j].is_string()) parse_error(meta_path, "weight " + std::to_string(j) + " must be a decimal string");
      try {
        weights(static_cast<Eigen::Index>(j)) = parse_decimal(w[j].get<std::string>());
      } catch (const Error& e) {
        parse_error(meta_path, "weight " + std::to_string(j) + ": " + e.message());
      }
    }
  } else {
    parse_error(meta_path, "weights must be \"uniform\" or an array of M decimal strings");
  }
  try {
    return make_sampled_system(std::move(values), std::move(points), std::move(weights), field);
  } catch (const Error& e) {
    throw e.within("load_system");
  }
}

// ---------------------------------------------------------------------------

std::string certificate_to_string(const DiscretizationCertificate& cert) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = to_string(cert.kind);

  Json basis;
  basis["source"] = to_string(cert.basis.source);
  basis["fingerprint"] = cert.basis.fingerprint;
  basis["family"] = cert.basis.family;
  basis["dim"] = cert.basis.dim;
  basis["count"] = cert.basis.count;
  basis["field"] = to_string(cert.basis.field);
  doc["basis"] = std::move(basis);

  doc["m"] = cert.m;
  doc["point_indices"] = cert.point_indices;
  Json points = Json::array();
  for (Eigen::Index k = 0; k < cert.points.cols(); ++k) {
    Json coords = Json::array();
    for (Eigen::Index r = 0; r < cert.points.rows(); ++r) coords.push_back(decimal(cert.points(r, k)));
    points.push_back(std::move(coords));
  }
  doc["points"] = std::move(points);
  if (cert.uniform_weights) {
    doc["weights"] = "uniform";
  } else {
    Json weights = Json::array();
    for (const double w : cert.weights) weights.push_back(decimal(w));
    doc["weights"] = std::move(weights);
  }
  doc["constants"] = {{"c", decimal(cert.constants.lower)}, {"C", decimal(cert.constants.upper)}};
  doc["size_budget"] = cert.size_budget;
  doc["settings"] = {{"seed", cert.settings.seed},
                     {"strategy", to_string(cert.settings.strategy)},
                     {"budget", cert.settings.budget}};
  Json log = Json::array();
  for (const StageRecord& record : cert.log) {
    Json values = Json::object();
    for (const auto& [key, value] : record.values) values[key] = value;
    log.push_back({{"stage", record.stage}, {"values", std::move(values)}});
  }
  doc["log"] = std::move(log);
  return doc.dump(2) + "\n";
}

DiscretizationCertificate certificate_from_string(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, "load_certificate", e.what());
  }
  if (member_string(doc, "schema_version") != kSchemaVersion) {
    throw Error(ErrorCode::parse, "load_certificate", "unsupported schema_version");
  }

  DiscretizationCertificate cert;
  cert.kind = parse_kind(member_string(doc, "kind"));
  const Json& basis = member(doc, "basis");
  cert.basis.source = parse_source(member_string(basis, "source"));
  cert.basis.fingerprint = member_string(basis, "fingerprint");
  cert.basis.family = member_string(basis, "family");
  cert.basis.dim = member_unsigned(basis, "dim");
  cert.basis.count = member_unsigned(basis, "count");
  try {
    cert.basis.field = parse_field(member_string(basis, "field"));
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, "load_certificate", e.message());
  }

  cert.m = member_unsigned(doc, "m");
  const Json& indices = member(doc, "point_indices");
  if (!indices.is_array()) throw Error(ErrorCode::parse, "load_certificate", "point_indices must be an array");
  for (const Json& index : indices) {
    if (!index.is_number_unsigned()) {
      throw Error(ErrorCode::parse, "load_certificate", "point index must be a nonnegative integer");
    }
    cert.point_indices.push_back(index.get<std::size_t>());
  }

  const Json& points = member(doc, "points");
  if (!points.is_array()) throw Error(ErrorCode::parse, "load_certificate", "points must be an array");
  const std::size_t d = points.empty() ? 0 : points.front().size();
  cert.points.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!points[k].is_array() || points[k].size() != d) {
      throw Error(ErrorCode::parse, "load_certificate",
                  "point " + std::to_string(k) + " has inconsistent dimension");
    }
    for (std::size_t r = 0; r < d; ++r) {
      cert.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          read_decimal(points[k][r], "point coordinate");
    }
  }

  const Json& weights = member(doc, "weights");
  if (weights.is_string() && weights.get<std::string>() == "uniform") {
    cert.uniform_weights = true;
  } else if (weights.is_array()) {
    cert.uniform_weights = false;
    for (const Json& w : weights) cert.weights.push_back(read_decimal(w, "weight"));
  } else {
    throw Error(ErrorCode::parse, "load_certificate", "weights must be \"uniform\" or an array");
  }

  const Json& constants = member(doc, "constants");
  cert.constants.lower = read_decimal(member(constants, "c"), "constant c");
  cert.constants.upper = read_decimal(member(constants, "C"), "constant C");
  cert.size_budget = member_unsigned(doc, "size_budget");

  const Json& settings = member(doc, "settings");
  cert.settings.seed = member_unsigned(settings, "seed");
  try {
    cert.settings.strategy = parse_strategy(member_string(settings, "strategy"));
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, "load_certificate", e.message());
  }
  cert.settings.budget = member_unsigned(settings, "budget");

  const Json& log = member(doc, "log");
  if (!log.is_array()) throw Error(ErrorCode::parse, "load_certificate", "log must be an array");
  for (const Json& entry : log) {
    StageRecord record{member_string(entry, "stage"), {}};
    const Json& values = member(entry, "values");
    if (!values.is_object()) throw Error(ErrorCode::parse, "load_certificate", "log values must be an object");
    for (const auto& [key, value] : values.items()) {
      if (!value.is_string()) {
        throw Error(ErrorCode::parse, "load_certificate", "log value '" + key + "' must be a string");
      }
      record.values.emplace_back(key, value.get<std::string>());
    }
    cert.log.push_back(std::move(record));
  }
  return cert;
}

void save_certificate(const DiscretizationCertificate& cert, const std::filesystem::path& path) {
  write_file(path, certificate_to_string(cert), "save_certificate");
}

DiscretizationCertificate load_certificate(const std::filesystem::path& path) {
  try {
    return certificate_from_string(read_file(path, "load_certificate"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) {
      throw Error(ErrorCode::parse, e.stage(), path.string() + ": " + e.message());
    }
    throw;
  }
}

}  // namespace sampdisc
