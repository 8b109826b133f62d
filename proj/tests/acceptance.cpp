// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rigidity/verify.hpp"

namespace {

using namespace rigidity;
using verify::SuiteConfig;
using verify::VerificationReport;

struct Verdict {
  bool ok;
  std::string detail;
};

SuiteConfig config(std::string suite, Index ambient, Field field, std::uint64_t trials, std::uint64_t seed = 0) {
  SuiteConfig c;
  c.suite = std::move(suite);
  c.ambient = ambient;
  c.field = field;
  c.trials = trials;
  c.seed = seed;
  return c;
}

std::uint64_t failures(const VerificationReport& r) {
  std::uint64_t f = 0;
  for (const auto& p : r.properties) f += p.failures;
  return f;
}

const verify::PropertyRecord& property(const VerificationReport& r, const std::string& name) {
  for (const auto& p : r.properties) {
    if (p.name == name) return p;
  }
  throw Error(ErrorKind::InternalInconsistency, "missing property " + name);
}

std::string fields_label(Field f) { return to_string(f); }

/// Runs `suite` over the given ambients and both fields; every property must pass.
Verdict all_pass(const std::string& suite, const std::vector<Index>& ambients,
                 const std::function<std::uint64_t(Index)>& trials) {
  std::uint64_t total_trials = 0;
  std::uint64_t total_failures = 0;
  double worst = 0.0;
  std::string failing;
  for (Index n : ambients) {
    for (const Field f : {Field::Real, Field::Complex}) {
      const VerificationReport r = verify::run_suite(config(suite, n, f, trials(n)));
      for (const auto& p : r.properties) {
        total_trials += p.trials;
        total_failures += p.failures;
        worst = std::max(worst, p.worst_residual);
        if (!p.passed() && failing.empty()) {
          failing = " first failure " + p.name + " n=" + std::to_string(n) + " " + fields_label(f);
        }
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu trials, %llu failures, worst residual %.2e",
                static_cast<unsigned long long>(total_trials), static_cast<unsigned long long>(total_failures), worst);
  return {total_failures == 0, buf + failing};
}

std::uint64_t bell(Index n) { return all_tableaux(static_cast<int>(n)).size(); }

// 1: projector commutator and relative-complement tests agree.
Verdict commeasurability_equivalence() {
  constexpr double kTol = 1e-8;
  constexpr std::uint64_t kPairs = 10000;
  constexpr double kBands[] = {1e-12, 1e-6, 1e-3};
  std::uint64_t disagreements = 0;
  std::uint64_t misbanded = 0;
  std::uint64_t pairs = 0;
  for (Index n = 2; n <= 6; ++n) {
    for (const Field f : {Field::Real, Field::Complex}) {
      for (std::uint64_t t = 0; t < kPairs; ++t) {
        Rng rng = trial_stream(0, "acceptance", "commeasurability", (static_cast<std::uint64_t>(n) << 40) ^
                                                                         (f == Field::Complex ? 1ULL << 32 : 0) ^ t);
        std::pair<Subspace, Subspace> p = [&] {
          switch (t % 4) {
            case 0: return std::pair{verify::gen::random_dim_subspace(n, f, rng), verify::gen::random_dim_subspace(n, f, rng)};
            case 1: return verify::gen::commeasurable_pair(n, f, rng);
            case 2: return verify::gen::nested_pair(n, f, rng);
            default: return verify::gen::perturbed_pair(n, f, kBands[(t / 4) % 3], rng);
          }
        }();
        const bool by_projectors = commeasurable(p.first, p.second, kTol);
        const bool by_complements = commeasurable_by_complements(p.first, p.second, kTol);
        ++pairs;
        if (by_projectors != by_complements) ++disagreements;
        if (t % 4 == 3) {
          const double eps = kBands[(t / 4) % 3];
          if (by_projectors != (std::sin(eps) * std::cos(eps) <= kTol)) ++misbanded;
        } else if (t % 4 != 0 && !by_projectors) {
          ++misbanded;
        }
      }
    }
  }
  return {disagreements == 0 && misbanded == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(disagreements) + " disagreements, " +
              std::to_string(misbanded) + " band misclassifications"};
}

Verdict pfr_eversion_branch() {
  // Involution on at least 10000 frames per (n, field); linkage for all π ⊢ n, 500 each.
  return all_pass("pfr", {3, 4, 5}, [](Index n) { return std::max<std::uint64_t>(10000, 500 * bell(n)); });
}

Verdict falsification() {
  SuiteConfig c = config("falsify", 3, Field::Real, 500);
  c.epsilon = 0.1;
  const VerificationReport r = verify::run_suite(c);
  const auto& broken = property(r, "distortion-breaks-linkage");
  const auto& control = property(r, "identity-control");
  SuiteConfig zero = c;
  zero.epsilon = 0.0;
  const VerificationReport rz = verify::run_suite(zero);
  const auto& control_zero = property(rz, "identity-control");
  char buf[200];
  std::snprintf(buf, sizeof buf, "violation rate %.3f over %llu trials (need >= %.2f); control violations %llu + %llu",
                *broken.rate, static_cast<unsigned long long>(broken.trials), verify::kFalsifyMinRate,
                static_cast<unsigned long long>(control.failures),
                static_cast<unsigned long long>(control_zero.failures));
  return {broken.passed() && control.failures == 0 && control_zero.failures == 0 && rz.passed(), buf};
}

Verdict reconstruction() {
  std::uint64_t round_trips = 0;
  std::uint64_t rejected = 0;
  std::uint64_t miss = 0;
  for (Index n : {3, 4}) {
    for (const Field f : {Field::Real, Field::Complex}) {
      const VerificationReport r = verify::run_suite(config("reconstruction", n, f, 200));
      const auto& rt = property(r, "round-trip");
      const auto& dist = property(r, "distorted-oracle-rejected");
      round_trips += rt.trials;
      rejected += dist.trials;
      miss += rt.failures + dist.failures;
      if (rt.trials != 200 || dist.trials != 50) ++miss;
    }
  }
  return {miss == 0, std::to_string(round_trips) + " round trips, " + std::to_string(rejected) +
                         " distorted oracles, " + std::to_string(miss) + " misclassifications"};
}

Verdict combinatorics() {
  std::uint64_t trials = 0;
  std::uint64_t fails = 0;
  const VerificationReport p = verify::run_suite(config("partitions", 2, Field::Real, 1));
  trials += p.properties.size();
  fails += failures(p);
  for (Index n = 2; n <= 5; ++n) {
    for (const Field f : {Field::Real, Field::Complex}) {
      const VerificationReport r = verify::run_suite(config("refinement", n, f, 1000));
      for (const auto& q : r.properties) trials += q.trials;
      fails += failures(r);
    }
  }
  return {fails == 0, std::to_string(trials) + " checks, " + std::to_string(fails) + " failures"};
}

Verdict determinism() {
  std::size_t mismatched = 0;
  std::string first;
  for (const auto& info : verify::suite_registry()) {
    for (const Field f : {Field::Real, Field::Complex}) {
      const SuiteConfig c = config(std::string(info.name), 3, f, 1000, 20241016);
      const std::string a = verify::to_json(verify::run_suite(c), false).dump(2);
      const std::string b = verify::to_json(verify::run_suite(c), false).dump(2);
      if (a != b) {
        ++mismatched;
        if (first.empty()) first = std::string(" first mismatch ") + std::string(info.name);
      }
    }
  }
  return {mismatched == 0, std::to_string(2 * verify::suite_registry().size()) + " configs run twice, " +
                               std::to_string(mismatched) + " mismatches" + first};
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 for none
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "commeasurability equivalence", 10.0, commeasurability_equivalence},
      {2, "induced maps preserve dims, meets and joins", 0.0,
       [] { return all_pass("clr", {3, 4, 5, 6}, [](Index) { return 1000; }); }},
      {3, "pi-linkage preserved by induced maps on orthogonal frames", 0.0,
       [] { return all_pass("pfr-perp", {3, 4, 5}, [](Index n) { return 500 * bell(n); }); }},
      {4, "eversion involution, fixes orthogonal frames, preserves linkage", 0.0, pfr_eversion_branch},
      {5, "eversion commutes past T via T' = U P^-1", 0.0,
       [] { return all_pass("eversion-order", {3, 4}, [](Index) { return 1000; }); }},
      {6, "reconstruction up to scale; distorted oracles rejected", 0.0, reconstruction},
      {7, "partition combinatorics and refinement functoriality", 30.0, combinatorics},
      {8, "nonlinear distortion breaks pi-linkage", 0.0, falsification},
      {9, "byte-identical reports across runs", 0.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = v.ok;
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      ok = false;
      v.detail += "; exceeded " + std::to_string(static_cast<int>(c.time_limit_s)) + " s";
    }
    std::printf("%s AC%d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
