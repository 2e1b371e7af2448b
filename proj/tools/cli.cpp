#include "cli.hpp"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sampdisc/decimal.hpp"
#include "sampdisc/discretize.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/systems_io.hpp"

namespace sampdisc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

// Where a command gets its sampled system: a file, or a built-in generator.
struct SystemSource {
  std::string in;
  std::string kind;
  std::size_t N = 0;
  std::size_t M = 0;
  std::string field = "complex";

  void attach(CLI::App& cmd) {
    cmd.add_option("--in", in, "System CSV (sidecar at <file>.json)");
    cmd.add_option("--kind", kind, "Built-in system")
        ->check(CLI::IsMember({"trig", "dft", "walsh", "random_orthonormal", "indicator"}));
    cmd.add_option("--N", N, "Number of functions");
    cmd.add_option("--M", M, "Number of points");
    cmd.add_option("--field", field, "Field of random_orthonormal systems")
        ->check(CLI::IsMember({"real", "complex"}));
  }

  bool given() const { return !in.empty() || !kind.empty(); }

  SampledSystem load(std::uint64_t seed) const {
    if (!in.empty()) return load_system(in);
    if (kind.empty()) {
      throw Error(ErrorCode::input, "cli", "give a system with --in FILE or --kind K --N n --M m");
    }
    SystemDescriptor d;
    d.kind = parse_system_kind(kind);
    d.N = N;
    d.M = M;
    d.seed = seed;
    d.field = parse_field(field);
    return make_system(d);
  }
};

struct OracleOptions {
  std::string strategy = "auto";
  std::size_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;

  void attach(CLI::App& cmd) {
    cmd.add_option("--strategy", strategy, "Partition search: auto, exhaustive, randomized")
        ->check(CLI::IsMember({"auto", "exhaustive", "randomized"}));
    cmd.add_option("--budget", budget, "Candidate splits per randomized search");
    seed_option = cmd.add_option("--seed", seed, "Seed for randomized choices");
  }

  OracleConfig config() const {
    if (strategy == "randomized" && seed_option->count() == 0) {
      throw Error(ErrorCode::input, "cli", "--strategy randomized requires --seed");
    }
    return {parse_strategy(strategy), budget, seed};
  }
};

void print_certificate(std::ostream& out, const DiscretizationCertificate& cert) {
  out << "kind: " << to_string(cert.kind) << "\n"
      << "basis: " << to_string(cert.basis.source) << " N=" << cert.basis.dim
      << " M=" << cert.basis.count << " field=" << to_string(cert.basis.field) << "\n"
      << "m: " << cert.m << " (budget " << cert.size_budget << ")\n"
      << "c: " << format_decimal(cert.constants.lower) << "\n"
      << "C: " << format_decimal(cert.constants.upper) << "\n"
      << "ratio: " << format_decimal(cert.constants.upper / cert.constants.lower) << "\n";
}

void emit_certificate(std::ostream& out, const DiscretizationCertificate& cert,
                      const std::string& path) {
  print_certificate(out, cert);
  if (!path.empty()) {
    save_certificate(cert, path);
    out << "certificate: " << path << "\n";
  }
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw Error(ErrorCode::input, "cli", "bad size list entry '" + item + "'");
    }
    sizes.push_back(static_cast<std::size_t>(value));
    start = comma + 1;
  }
  return sizes;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling discretization of finite-dimensional function systems", "sampdisc"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a built-in system to CSV");
  SystemSource gen_source;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--kind", gen_source.kind, "Built-in system")
      ->required()
      ->check(CLI::IsMember({"trig", "dft", "walsh", "random_orthonormal", "indicator"}));
  gen->add_option("--N", gen_source.N, "Number of functions")->required();
  gen->add_option("--M", gen_source.M, "Number of points")->required();
  gen->add_option("--field", gen_source.field, "Field of random_orthonormal systems")
      ->check(CLI::IsMember({"real", "complex"}));
  gen->add_option("--seed", gen_seed, "Seed for random_orthonormal");
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  // nikolskii
  auto* nik = app.add_subcommand("nikolskii", "Report the Nikol'skii constant t of a system");
  SystemSource nik_source;
  std::uint64_t nik_seed = 0;
  nik_source.attach(*nik);
  nik->add_option("--seed", nik_seed, "Seed for random_orthonormal");

  // select
  auto* sel = app.add_subcommand("select", "Equal-weight discretization certificate");
  SystemSource sel_source;
  OracleOptions sel_oracle;
  std::string sel_continuous;
  std::optional<double> sel_theta;
  double sel_delta = 0.5;
  std::string sel_out;
  sel_source.attach(*sel);
  sel_oracle.attach(*sel);
  sel->add_option("--continuous", sel_continuous, "Continuous family (trig) sampled by Monte Carlo")
      ->check(CLI::IsMember({"trig"}));
  sel->add_option("--theta", sel_theta, "Override theta (default t^2)");
  sel->add_option("--delta", sel_delta, "Monte Carlo Gram tolerance for --continuous");
  sel->add_option("--out", sel_out, "Certificate JSON path");

  // select-weighted
  auto* wsel = app.add_subcommand("select-weighted", "Weighted discretization certificate");
  SystemSource wsel_source;
  OracleOptions wsel_oracle;
  std::string wsel_out;
  wsel_source.attach(*wsel);
  wsel_oracle.attach(*wsel);
  wsel->add_option("--out", wsel_out, "Certificate JSON path");

  // verify
  auto* ver = app.add_subcommand("verify", "Recompute a certificate's constants");
  SystemSource ver_source;
  std::uint64_t ver_seed = 0;
  std::string ver_cert;
  ver_source.attach(*ver);
  ver->add_option("--seed", ver_seed, "Seed for random_orthonormal");
  ver->add_option("--cert", ver_cert, "Certificate JSON")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Equal-weight selection over several N, as CSV");
  std::string sweep_kind;
  std::string sweep_sizes;
  std::size_t sweep_M = 0;
  std::string sweep_field = "complex";
  OracleOptions sweep_oracle;
  std::string sweep_out;
  sweep->add_option("--kind", sweep_kind, "Built-in system")
      ->required()
      ->check(CLI::IsMember({"trig", "dft", "walsh", "random_orthonormal", "indicator"}));
  sweep->add_option("--N", sweep_sizes, "Comma-separated list of N")->required();
  sweep->add_option("--M", sweep_M, "Number of points")->required();
  sweep->add_option("--field", sweep_field, "Field of random_orthonormal systems")
      ->check(CLI::IsMember({"real", "complex"}));
  sweep_oracle.attach(*sweep);
  sweep->add_option("--out", sweep_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen) {
      SystemDescriptor d;
      d.kind = parse_system_kind(gen_source.kind);
      d.N = gen_source.N;
      d.M = gen_source.M;
      d.seed = gen_seed;
      d.field = parse_field(gen_source.field);
      const SampledSystem system = make_system(d);
      save_system(system, gen_out);
      out << "system: " << to_string(d.kind) << " N=" << system.dim() << " M=" << system.count()
          << " field=" << to_string(system.field) << "\n"
          << "fingerprint: " << fingerprint(system) << "\n"
          << "wrote: " << gen_out << "\n";
      return kExitOk;
    }

    if (*nik) {
      const SampledSystem system = nik_source.load(nik_seed);
      const NikolskiiReport report = condition_e_constant(system);
      out << "t: " << format_decimal(report.t) << "\n"
          << "t_squared: " << format_decimal(report.t_squared) << "\n"
          << "argmax: " << report.argmax << "\n"
          << "orthonormality_residual: " << format_decimal(report.residual) << "\n";
      return kExitOk;
    }

    if (*sel) {
      const OracleConfig oracle = sel_oracle.config();
      if (!sel_continuous.empty()) {
        if (sel_source.given()) {
          throw Error(ErrorCode::input, "cli", "--continuous excludes --in and --kind");
        }
        ContinuousOptions options;
        options.oracle = oracle;
        options.delta = sel_delta;
        const ContinuousSystem system =
            continuous_from_family(sel_continuous + ":" + std::to_string(sel_source.N));
        emit_certificate(out, discretize_continuous(system, options), sel_out);
        return kExitOk;
      }
      const SampledSystem system = sel_source.load(oracle.seed);
      emit_certificate(out, discretize_equal_weight(system, oracle, sel_theta), sel_out);
      return kExitOk;
    }

    if (*wsel) {
      const OracleConfig oracle = wsel_oracle.config();
      const SampledSystem system = wsel_source.load(oracle.seed);
      emit_certificate(out, discretize_weighted(system, oracle), wsel_out);
      return kExitOk;
    }

    if (*ver) {
      const DiscretizationCertificate cert = load_certificate(ver_cert);
      VerificationReport report;
      if (cert.basis.source == BasisSource::continuous) {
        report = verify_certificate(cert, continuous_from_family(cert.basis.family));
      } else {
        report = verify_certificate(cert, ver_source.load(ver_seed));
      }
      out << (report.passed ? "PASS" : "FAIL") << "\n"
          << "recomputed c: " << format_decimal(report.recomputed.lower) << "\n"
          << "recomputed C: " << format_decimal(report.recomputed.upper) << "\n";
      for (const std::string& issue : report.issues) out << "issue: " << issue << "\n";
      return report.passed ? kExitOk : kExitRejected;
    }

    if (*sweep) {
      const OracleConfig oracle = sweep_oracle.config();
      std::ofstream csv(sweep_out, std::ios::binary | std::ios::trunc);
      if (!csv) throw Error(ErrorCode::input, "cli", "cannot write " + sweep_out);
      csv << "N,M,t,m,m_over_N,c,C,ratio,seed\n";
      for (const std::size_t n : parse_sizes(sweep_sizes)) {
        SystemDescriptor d;
        d.kind = parse_system_kind(sweep_kind);
        d.N = n;
        d.M = sweep_M;
        d.seed = oracle.seed;
        d.field = parse_field(sweep_field);
        const SampledSystem system = make_system(d);
        const EqualWeightSelection result = select_equal_weight(system, oracle);
        const DiscretizationCertificate& cert = result.certificate;
        const double m_over_n = static_cast<double>(cert.m) / static_cast<double>(n);
        const double ratio = cert.constants.upper / cert.constants.lower;
        csv << n << ',' << sweep_M << ',' << format_decimal(result.nikolskii.t) << ',' << cert.m
            << ',' << format_decimal(m_over_n) << ',' << format_decimal(cert.constants.lower)
            << ',' << format_decimal(cert.constants.upper) << ',' << format_decimal(ratio) << ','
            << oracle.seed << '\n';
        out << "N=" << n << " m=" << cert.m << " C/c=" << format_decimal(ratio) << "\n";
      }
      if (!csv) throw Error(ErrorCode::input, "cli", "write failed for " + sweep_out);
      out << "wrote: " << sweep_out << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: [cli] internal: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace sampdisc::cli
