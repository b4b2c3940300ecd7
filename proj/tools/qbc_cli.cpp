#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "qbc/json_io.hpp"
#include "qbc/version.hpp"

namespace {

// Exit codes: 0 all assertions pass, 1 an inequality assertion failed,
// 2 bad input, 3 malformed strategy.
constexpr int kOk = 0;
constexpr int kAssertFail = 1;
constexpr int kBadInput = 2;
constexpr int kBadStrategy = 3;

void maybe_write(const std::string& path, const qbc::json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

int run_verify_lemmas(int n, std::uint64_t samples, std::uint64_t seed,
                      const std::string& json_path) {
  const qbc::json report = qbc::build_lemma_report(n, samples, seed);
  for (const auto& c : report.at("checks")) {
    std::printf("%-28s %s  max_dev=%.3e  cases=%llu%s%s\n",
                c.at("name").get<std::string>().c_str(),
                !c.at("applicable").get<bool>()
                    ? "N/A "
                    : (c.at("pass").get<bool>() ? "PASS" : "FAIL"),
                c.at("max_deviation").get<double>(),
                static_cast<unsigned long long>(c.at("cases").get<std::uint64_t>()),
                c.at("note").get<std::string>().empty() ? "" : "  ",
                c.at("note").get<std::string>().c_str());
  }
  maybe_write(json_path, report);
  return report.at("all_pass").get<bool>() ? kOk : kAssertFail;
}

int run_simulate(int n, int bit, std::size_t key_index, const std::string& mode,
                 std::uint64_t seed, const std::string& json_path,
                 bool dump_state) {
  const qbc::json report =
      qbc::build_simulate_report(n, bit, key_index, mode, seed, dump_state);
  const auto& t = report.at("transcript");
  std::printf("committed bit %d under key %s (index %zu)\n", bit,
              report.at("key").dump().c_str(), key_index);
  std::printf("transfer ledger: commit phase %d qubits, opening phase %d "
              "qubits, total %d\n",
              t.at("commit_phase_qubits").get<int>(),
              t.at("opening_phase_qubits").get<int>(),
              t.at("total_transferred_qubits").get<int>());
  const auto& res = report.at("result");
  std::printf("verdict: %s", res.at("verdict").get<std::string>().c_str());
  if (res.contains("bit")) std::printf("(%d)", res.at("bit").get<int>());
  std::printf("  probability %.9f\n", res.at("probability").get<double>());
  maybe_write(json_path, report);
  return kOk;
}

int run_binding(const qbc::CheatStrategy& s, int n,
                const std::string& json_path) {
  const qbc::json report = qbc::build_binding_json(s, n);
  const auto& r = report.at("report");
  std::printf("strategy %s at n=%d\n", r.at("strategy").get<std::string>().c_str(),
              n);
  std::printf("  T0=%.9f T1=%.9f excess=%.9f\n", r.at("t0").get<double>(),
              r.at("t1").get<double>(), r.at("excess").get<double>());
  std::printf("  norm_sq=%.9f\n", r.at("norm_sq").get<double>());
  auto flag = [&](const char* name, const char* bound, const char* vac) {
    std::printf("  %-10s %s (bound %.9f%s)\n", name,
                r.at(std::string(name) + "_pass").get<bool>() ? "PASS" : "FAIL",
                r.at(bound).get<double>(),
                r.at(vac).get<bool>() ? ", vacuous" : "");
  };
  flag("claim2", "claim2_bound", "claim2_vacuous");
  flag("claim1", "claim1_bound", "claim1_vacuous");
  flag("composed", "composed_bound", "composed_vacuous");
  std::printf("  recovery success: mean %.9f best %.9f\n",
              r.at("recovery_mean_success").get<double>(),
              r.at("recovery_best_success").get<double>());
  std::printf("  sector closed-form deviation: stated %.3e corrected %.3e\n",
              r.at("sector_claimed_form_dev").get<double>(),
              r.at("sector_corrected_form_dev").get<double>());
  maybe_write(json_path, report);
  return r.at("all_passed").get<bool>() ? kOk : kAssertFail;
}

int run_recovery(const qbc::CheatStrategy& s, int n, int key_index,
                 const std::string& json_path) {
  const qbc::json report = qbc::build_recovery_report(s, n, key_index);
  for (const auto& run : report.at("runs")) {
    std::printf("key %2d: success %.9f (distill %.9f, reject %.9f)\n",
                run.at("key_index").get<int>(), run.at("success").get<double>(),
                run.at("distill_probability").get<double>(),
                run.at("reject_probability").get<double>());
  }
  std::printf("mean success %.9f", report.at("mean_success").get<double>());
  if (report.at("bound_applicable").get<bool>()) {
    std::printf("  >= excess^2/8 = %.9f: %s",
                report.at("composed_bound").get<double>(),
                report.at("bound_pass").get<bool>() ? "PASS" : "FAIL");
  } else {
    std::printf("  (no binding excess: bound vacuous)");
  }
  std::printf("\n");
  maybe_write(json_path, report);
  return report.at("bound_pass").get<bool>() ? kOk : kAssertFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commitment-scheme simulator and verification lab"};
  app.set_version_flag("--version", qbc::kSourceRevision);
  app.require_subcommand(1);

  int n = 6;
  int bit = 0;
  std::size_t key_index = 0;
  int recovery_key_index = -1;
  std::string mode = "analysis";
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  std::string strategy_name = "key-swap";
  std::string json_path;
  bool dump_state = false;

  auto* lemmas = app.add_subcommand(
      "verify-lemmas", "Exhaustive/sampled checks of the state identities");
  lemmas->add_option("--n", n, "security parameter (2 or 6)");
  lemmas->add_option("--samples", samples, "sample count at n=6");
  lemmas->add_option("--seed", seed, "sampling seed");
  lemmas->add_option("--json", json_path, "write the JSON report here");

  auto* simulate = app.add_subcommand(
      "simulate", "Run the honest commit/open protocol end to end");
  simulate->add_option("--n", n, "security parameter (2 or 6)");
  simulate->add_option("--bit", bit, "bit to commit")->check(CLI::Range(0, 1));
  simulate->add_option("--key-index", key_index, "index into the key set");
  simulate->add_option("--mode", mode, "analysis | sample")
      ->check(CLI::IsMember({"analysis", "sample"}));
  simulate->add_option("--seed", seed, "sampling seed");
  simulate->add_option("--json", json_path, "write the JSON report here");
  simulate->add_flag("--dump-state", dump_state,
                     "embed the full joint state in the report");

  auto* binding = app.add_subcommand(
      "binding", "Evaluate a cheating strategy against the binding bounds");
  binding->add_option("--n", n, "security parameter (2 or 6)");
  binding->add_option("--strategy", strategy_name,
                      "builtin name or JSON file path");
  binding->add_option("--json", json_path, "write the JSON report here");

  auto* recovery = app.add_subcommand(
      "key-recovery",
      "Recover the hidden key of an unopened commitment using a strategy");
  recovery->add_option("--n", n, "security parameter (2 or 6)");
  recovery->add_option("--strategy", strategy_name,
                       "builtin name or JSON file path");
  recovery->add_option("--key-index", recovery_key_index,
                       "hidden key index; omit to sweep all keys");
  recovery->add_option("--json", json_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (n != 2 && n != 6) {
      std::fprintf(stderr, "error: --n must be 2 or 6 at desk scale\n");
      return kBadInput;
    }
    if (*lemmas) return run_verify_lemmas(n, samples, seed, json_path);
    if (*simulate) {
      return run_simulate(n, bit, key_index, mode, seed, json_path, dump_state);
    }
    if (*binding || *recovery) {
      qbc::CheatStrategy s;
      try {
        s = qbc::load_strategy(strategy_name, n);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "strategy error: %s\n", e.what());
        return kBadStrategy;
      }
      if (*binding) return run_binding(s, n, json_path);
      return run_recovery(s, n, recovery_key_index, json_path);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kBadInput;
  }
  return kBadInput;
}
