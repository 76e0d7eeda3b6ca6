#include "spectrace/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spectrace/counterexamples.hpp"
#include "spectrace/errors.hpp"
#include "spectrace/finop.hpp"
#include "spectrace/lattice.hpp"
#include "spectrace/records.hpp"
#include "spectrace/special_fn.hpp"
#include "spectrace/torus_spectral.hpp"

#ifndef SPECTRACE_VERSION
#define SPECTRACE_VERSION "0.0.0"
#endif

namespace spectrace::cli {

namespace {

using records::Json;

enum class Format { Json, Csv, Plain };

struct CommonOptions {
  double tol = 1e-10;
  std::string format = "json";
  std::string output;
  int threads = 1;
  bool timing = false;
};

// What a subcommand produces: the JSON body plus an optional CSV writer.
struct Report {
  Json body;
  std::function<void(std::ostream&)> csv;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--tol", common.tol, "absolute tolerance")->check(CLI::Range(1e-13, 1e-2));
  sub->add_option("--format", common.format, "json, csv or plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  sub->add_option("--output,-o", common.output, "write the report to this file");
  sub->add_option("--threads", common.threads, "worker threads for shell sums")->check(CLI::Range(1, 256));
  sub->add_flag("--timing", common.timing, "record runtime_ms (output is then not reproducible)");
}

// Assembles the documented top-level layout; body keys not in the fixed list
// follow in their original order.
Json assemble(const std::string& subcommand, const Json& params, const Json& body,
              std::optional<double> runtime_ms) {
  Json rec;
  rec["tool_version"] = tool_version();
  rec["subcommand"] = subcommand;
  rec["params"] = params;
  rec["status"] = body.value("status", "ok");
  for (const char* key : {"value", "error_bound", "certificate"}) {
    rec[key] = body.contains(key) ? body[key] : Json(nullptr);
  }
  rec["terms"] = body.value("terms", Json(0));
  rec["runtime_ms"] = runtime_ms ? Json(*runtime_ms) : Json(nullptr);
  rec["extension_flag"] = body.value("extension_flag", false);
  for (const auto& [key, val] : body.items()) {
    if (!rec.contains(key)) rec[key] = val;
  }
  return rec;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_plain(std::ostream& os, const Json& j, const std::string& prefix = "") {
  for (const auto& [key, val] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (val.is_object()) {
      write_plain(os, val, name);
    } else if (val.is_number_float()) {
      os << name << ": " << format_double(val.get<double>()) << "\n";
    } else {
      os << name << ": " << val.dump() << "\n";
    }
  }
}

void write_growth_csv(std::ostream& os, const torus::GrowthCertificate& cert) {
  std::vector<torus::PartialSumRow> rows;
  for (std::size_t i = 0; i < cert.radii.size(); ++i) {
    rows.push_back({cert.radii[i], cert.partial_abs_sums[i]});
  }
  torus::write_partial_sum_csv(os, rows, "radius");
}

Report trace_report(const torus::TraceClassification& result) {
  Report report;
  report.body = records::trace_record(result);
  if (const auto* nt = std::get_if<torus::NotTraceClass>(&result.status)) {
    if (const auto* g = std::get_if<torus::GrowthCertificate>(&nt->certificate)) {
      report.csv = [cert = *g](std::ostream& os) { write_growth_csv(os, cert); };
    } else {
      const int target = std::get<torus::DivergenceCertificate>(nt->certificate).target;
      report.csv = [target](std::ostream& os) {
        torus::write_partial_sum_csv(os, torus::p2_block_trajectory(target), "block");
      };
    }
  }
  return report;
}

Report finop_demo(std::size_t dim, std::uint64_t seed, double tol) {
  using namespace finop;
  const DenseOperator a = random_operator(dim, seed);
  const double norm = op_norm(a);
  const auto standard = OrthonormalBasis::standard(dim);
  const auto rotated = random_orthonormal_basis(dim, seed + 1);
  const DenseOperator abs_a = abs_op(a, tol);
  const auto [decomposition, trace_norm] = canonical_and_trace_norm(a);
  const auto lidskii = lidskii_report(a, 1e-8);

  double spread = 0.0;
  const double reference = trace_diag(abs_a, standard).real();
  for (std::uint64_t b = 0; b < 5; ++b) {
    const auto basis = random_orthonormal_basis(dim, seed + 100 + b);
    spread = std::max(spread, std::abs(trace_diag(abs_a, basis).real() - reference));
  }
  const DenseOperator root = sqrt_psd(adjoint(a) * a, tol);
  const double sqrt_residual = (root.matrix() * root.matrix() - (adjoint(a) * a).matrix()).norm();

  Report report;
  Json& b = report.body;
  b["value"] = records::complex_value(trace_diag(a, standard));
  b["terms"] = static_cast<std::int64_t>(dim);
  b["operator_norm"] = norm;
  b["trace_rotated_basis"] = records::complex_value(trace_diag(a, rotated));
  b["trace_norm"] = trace_norm;
  b["rank"] = static_cast<std::int64_t>(decomposition.rank());
  b["abs_trace"] = reference;
  b["abs_trace_basis_spread"] = spread;
  b["sqrt_residual"] = sqrt_residual;
  b["is_psd_abs"] = is_psd(abs_a, 1e-9);
  b["lidskii"] = Json{{"trace", records::complex_value(lidskii.trace)},
                      {"eigenvalue_sum", records::complex_value(lidskii.eigenvalue_sum)},
                      {"discrepancy", lidskii.discrepancy},
                      {"passed", lidskii.passed}};
  return report;
}

const char* example_limit(counterexamples::Example e) {
  switch (e) {
    case counterexamples::Example::Identity: return "diverges to +infinity";
    case counterexamples::Example::Alternating: return "oscillates between -1 and 0";
    case counterexamples::Example::LeftShiftStandard: return "0";
    case counterexamples::Example::LeftShiftPsi: return "-1";
  }
  return "";
}

}  // namespace

const char* tool_version() { return SPECTRACE_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Traces of spectrally defined operators on the circle and the flat torus"};
  app.name("spectrace");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(tool_version()));
  CommonOptions common;

  // trace
  int power = 1;
  std::int64_t max_radius = 2000;
  int cert_target = 5;
  auto* trace = app.add_subcommand("trace", "trace of D^-n or (d* D^-1)^n");
  trace->require_subcommand(1, 1);
  auto* trace_s1 = trace->add_subcommand("s1", "D^-n on the circle");
  auto* trace_t2 = trace->add_subcommand("t2", "D^-n on the flat torus");
  auto* trace_p = trace->add_subcommand("p", "(d* D^-1)^n on the flat torus");
  for (auto* sub : {trace_s1, trace_t2, trace_p}) {
    sub->add_option("--power,-n", power, "operator power n")->required()->check(CLI::Range(1, 64));
    add_common(sub, common);
  }
  trace_t2->add_option("--max-radius", max_radius, "radius cap for the direct cross-check")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));
  trace_p->add_option("--max-radius", max_radius, "radius cap for the shell summation")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));
  trace_p->add_option("--target", cert_target, "dyadic certificate target for n = 2")
      ->check(CLI::Range(1, 12));

  // lattice-sum
  double lattice_n = 2.0;
  std::int64_t radius = 1;
  auto* lattice_cmd = app.add_subcommand("lattice-sum", "direct shell sum of (k^2+m^2)^-n");
  lattice_cmd->add_option("--n", lattice_n, "exponent n >= 2")->required()->check(CLI::Range(2.0, 64.0));
  lattice_cmd->add_option("--radius,-R", radius, "sup-norm radius R")
      ->required()
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));
  add_common(lattice_cmd, common);

  // mellin
  int mellin_n = 2;
  auto* mellin_cmd = app.add_subcommand("mellin", "Mellin transform of theta_3^2 - 1");
  mellin_cmd->add_option("--n", mellin_n, "order n >= 2")->required()->check(CLI::Range(2, 170));
  add_common(mellin_cmd, common);

  // diverge
  int target = 1;
  auto* diverge = app.add_subcommand("diverge", "divergence certificates");
  diverge->require_subcommand(1, 1);
  auto* diverge_p2 = diverge->add_subcommand("p2", "dyadic blocks for (k+m)^2/(k^2+m^2)^2");
  diverge_p2->add_option("--target", target, "target N")->required()->check(CLI::Range(1, 12));
  add_common(diverge_p2, common);

  // counterexample
  std::string example;
  std::int64_t terms = 1;
  auto* counter = app.add_subcommand("counterexample", "diagonal partial sums of the l^2 examples");
  counter->add_option("name", example, "identity, alternating, left-shift-standard, left-shift-psi")
      ->required()
      ->check(CLI::IsMember({"identity", "alternating", "left-shift-standard", "left-shift-psi"}));
  counter->add_option("--terms,-N", terms, "number of partial sums")
      ->required()
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));
  add_common(counter, common);

  // finop
  std::size_t dim = 4;
  std::uint64_t seed = 0;
  auto* finop_cmd = app.add_subcommand("finop", "finite-dimensional operator checks");
  finop_cmd->require_subcommand(1, 1);
  auto* finop_demo_cmd = finop_cmd->add_subcommand("demo", "trace, |A|, trace norm and Lidskii for a random A");
  finop_demo_cmd->add_option("--dim", dim, "dimension d")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  finop_demo_cmd->add_option("--seed", seed, "random seed");
  add_common(finop_demo_cmd, common);

  // special
  double s_arg = 2.0;
  auto* special_cmd = app.add_subcommand("special", "zeta and Dirichlet beta");
  special_cmd->require_subcommand(1, 1);
  auto* zeta_cmd = special_cmd->add_subcommand("zeta", "Riemann zeta, s > 1");
  auto* beta_cmd = special_cmd->add_subcommand("beta", "Dirichlet beta, s > 0");
  for (auto* sub : {zeta_cmd, beta_cmd}) {
    sub->add_option("--s", s_arg, "argument s")->required();
    add_common(sub, common);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spectrace: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  std::string subcommand;
  Json params;
  Report report;
  try {
    if (trace_s1->parsed() || trace_t2->parsed() || trace_p->parsed()) {
      params["power"] = power;
      params["tol"] = common.tol;
      if (trace_s1->parsed()) {
        subcommand = "trace s1";
        report = trace_report(torus::trace_inv_laplacian_s1(power, common.tol));
      } else if (trace_t2->parsed()) {
        subcommand = "trace t2";
        params["max_radius"] = max_radius;
        report = trace_report(torus::trace_inv_laplacian_t2(power, common.tol, max_radius, common.threads));
      } else {
        subcommand = "trace p";
        params["max_radius"] = max_radius;
        params["target"] = cert_target;
        report = trace_report(
            torus::trace_p_power_t2(power, common.tol, max_radius, common.threads, cert_target));
      }
    } else if (lattice_cmd->parsed()) {
      subcommand = "lattice-sum";
      params["n"] = lattice_n;
      params["radius"] = radius;
      lattice::SumOptions options;
      options.threads = common.threads;
      const auto direct = lattice::lattice_sum_direct(lattice_n, radius, options);
      Json& b = report.body;
      b["value"] = records::complex_value(direct.value);
      b["error_bound"] = direct.tail_bound;
      b["terms"] = direct.terms;
      b["radius"] = direct.radius;
      b["abs_sum"] = direct.abs_sum;
      if (lattice_n == std::floor(lattice_n)) {
        b["closed_form"] = records::bounded_value(
            lattice::lattice_sum_closed(static_cast<int>(lattice_n), std::max(common.tol, kMinTolerance)));
      }
      report.csv = [lattice_n, radius](std::ostream& os) {
        lattice::write_shell_csv(os, lattice::shell_partial_sums(lattice_n, radius));
      };
    } else if (mellin_cmd->parsed()) {
      subcommand = "mellin";
      params["n"] = mellin_n;
      params["tol"] = common.tol;
      const auto m = special::mellin_theta(mellin_n, common.tol);
      Json& b = report.body;
      b["value"] = records::complex_value({m.value, 0.0});
      b["error_bound"] = m.error_bound;
      b["terms"] = m.terms_used;
      b["closed_form"] = records::bounded_value(lattice::lattice_sum_closed(mellin_n, common.tol));
    } else if (diverge_p2->parsed()) {
      subcommand = "diverge p2";
      params["target"] = target;
      const auto cert = torus::p2_divergence_certificate(target);
      report.body["certificate"] = records::certificate(cert);
      report.body["terms"] = cert.terms;
      report.body["radius"] = cert.radius;
      report.csv = [target](std::ostream& os) {
        torus::write_partial_sum_csv(os, torus::p2_block_trajectory(target), "block");
      };
    } else if (counter->parsed()) {
      subcommand = "counterexample";
      params["name"] = example;
      params["terms"] = terms;
      const auto which = *counterexamples::parse_example(example);
      auto sums = counterexamples::diag_partial_sums(which, terms);
      report.body["terms"] = terms;
      report.body["final_partial_sum"] = sums.back();
      report.body["limit"] = example_limit(which);
      report.csv = [sums = std::move(sums)](std::ostream& os) {
        counterexamples::write_trajectory_csv(os, sums);
      };
    } else if (finop_demo_cmd->parsed()) {
      subcommand = "finop demo";
      params["dim"] = static_cast<std::int64_t>(dim);
      params["seed"] = seed;
      params["tol"] = common.tol;
      report = finop_demo(dim, seed, common.tol);
    } else if (zeta_cmd->parsed() || beta_cmd->parsed()) {
      const bool is_zeta = zeta_cmd->parsed();
      subcommand = is_zeta ? "special zeta" : "special beta";
      params["s"] = s_arg;
      params["tol"] = common.tol;
      const auto v = is_zeta ? special::zeta(s_arg, common.tol) : special::dirichlet_beta(s_arg, common.tol);
      report.body["value"] = records::complex_value({v.value, 0.0});
      report.body["error_bound"] = v.error_bound;
      report.body["terms"] = v.terms_used;
    } else {
      throw UsageError("no subcommand given");
    }
  } catch (const ConvergenceError& e) {
    err << "spectrace: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "spectrace: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "spectrace: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    err << "spectrace: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "spectrace: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::optional<double> runtime;
  if (common.timing) {
    runtime = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  const Json record = assemble(subcommand, params, report.body, runtime);

  std::ostringstream text;
  if (common.format == "json") {
    text << record.dump(2) << "\n";
  } else if (common.format == "plain") {
    write_plain(text, record);
  } else {
    if (!report.csv) {
      err << "spectrace: csv output is not available for '" << subcommand << "'\n";
      return kExitUsage;
    }
    report.csv(text);
  }

  if (common.output.empty()) {
    out << text.str();
  } else {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) {
      err << "spectrace: cannot open output file " << common.output << "\n";
      return kExitUsage;
    }
    file << text.str();
  }
  return kExitOk;
}

}  // namespace spectrace::cli
