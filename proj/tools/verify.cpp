// Command-line runner for the property suites.
//
// Exit status: 0 when every property passes, 1 on a property failure,
// 2 on a configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rigidity/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::optional<double> tol_from_env() {
  const char* raw = std::getenv("FRAME_RIGIDITY_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw rigidity::Error(rigidity::ErrorKind::ConfigError,
                          std::string("FRAME_RIGIDITY_TOL is not a number: ") + raw);
  }
}

void print_summary(const rigidity::verify::VerificationReport& r, std::ostream& os) {
  for (const auto& p : r.properties) {
    os << (p.passed() ? "PASS " : "FAIL ") << r.config.suite << "/" << p.name << "  trials=" << p.trials
       << " failures=" << p.failures << " worst_residual=" << p.worst_residual;
    if (p.rate) os << " rate=" << *p.rate;
    if (p.first_failing_seed) os << " first_failing_seed=" << *p.first_failing_seed;
    os << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rigidity;

  CLI::App app{"Seeded property suites for subspace lattices, frames and induced maps"};
  std::string suite;
  std::string field = "real";
  verify::SuiteConfig cfg;
  std::optional<double> tol;
  std::string report;
  bool list = false;
  app.add_option("--suite", suite, "Suite name (see --list-suites)");
  app.add_option("--ambient", cfg.ambient, "Ambient dimension, 2..8")->capture_default_str();
  app.add_option("--field", field, "real or complex")->check(CLI::IsMember({"real", "complex"}))
      ->capture_default_str();
  app.add_option("--trials", cfg.trials, "Trials per property")->capture_default_str();
  app.add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  app.add_option("--tol", tol, "Numerical tolerance (overrides FRAME_RIGIDITY_TOL)");
  app.add_option("--epsilon", cfg.epsilon, "Distortion strength for the falsify suite")
      ->capture_default_str();
  app.add_option("--report", report, "Write the JSON report to this path");
  app.add_flag("--list-suites", list, "List registered suites and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  if (list) {
    for (const auto& s : verify::suite_registry()) {
      std::cout << s.name << "\t(ambient >= " << s.min_ambient << ")\t" << s.summary << "\n";
    }
    return kExitPass;
  }

  try {
    if (suite.empty()) throw Error(ErrorKind::ConfigError, "--suite is required");
    cfg.suite = suite;
    cfg.field = field == "complex" ? Field::Complex : Field::Real;
    if (tol) {
      cfg.tol = *tol;
    } else if (const auto env = tol_from_env()) {
      cfg.tol = *env;
    }
    if (!report.empty()) cfg.report_path = report;

    const verify::VerificationReport r = verify::run_suite(cfg);
    const std::string text = verify::to_json(r).dump(2) + "\n";
    if (cfg.report_path) {
      std::ofstream out(*cfg.report_path, std::ios::binary);
      if (!out) throw Error(ErrorKind::ConfigError, "cannot write report to " + *cfg.report_path);
      out << text;
    } else {
      std::cout << text;
    }
    print_summary(r, std::cerr);
    return r.passed() ? kExitPass : kExitFail;
  } catch (const Error& e) {
    std::cerr << "verify: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitFail;
  }
}
