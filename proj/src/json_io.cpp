#include "qbc/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "qbc/version.hpp"

namespace qbc {

json perm_to_json(const Perm& p) {
  json a = json::array();
  for (int i = 0; i < p.size(); ++i) a.push_back(p(i) + 1);
  return a;
}

Perm perm_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("perm: expected a non-empty array");
  }
  std::vector<int> m;
  m.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw std::invalid_argument("perm: entries must be integers");
    }
    m.push_back(v.get<int>() - 1);
  }
  return Perm(std::move(m));
}

json state_to_json(const PureState& st) {
  json layout = json::array();
  for (const auto& r : st.layout().registers()) {
    layout.push_back({{"name", r.name},
                      {"dim", r.dim},
                      {"kind", r.kind == RegKind::Qubit ? "qubit" : "perm"}});
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(st.term_count());
  for (const auto& [k, v] : st.amps()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  json amps = json::array();
  for (std::uint64_t k : keys) {
    const cplx v = st.amp(k);
    json entry = json::array();
    entry.push_back(st.layout().unpack(k));
    entry.push_back(v.real());
    entry.push_back(v.imag());
    amps.push_back(std::move(entry));
  }
  return json{{"layout", layout},
              {"norm_sq", st.norm_sq()},
              {"amplitudes", amps}};
}

namespace {

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("matrix: expected an array of rows");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw std::invalid_argument("matrix: ragged rows");
    }
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      m(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

json gate_to_json(const GateSpec& g) {
  json j{{"kind", g.kind_name()}};
  if (g.inverted) j["inverted"] = true;
  if (g.kind == GateSpec::Kind::CtrlRightMultFixed) {
    j["key"] = perm_to_json(g.fixed);
  }
  if (g.kind == GateSpec::Kind::Dense) j["matrix"] = matrix_to_json(g.matrix);
  return j;
}

json program_to_json(const UnitaryProgram& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    json j;
    switch (s.type) {
      case ProgramStep::Type::Gate:
        j = gate_to_json(s.gate);
        j["type"] = "gate";
        j["targets"] = s.targets;
        break;
      case ProgramStep::Type::ControlledGate:
        j = gate_to_json(s.gate);
        j["type"] = "controlled";
        j["control"] = s.control;
        j["targets"] = s.targets;
        break;
      case ProgramStep::Type::Subspace:
        j["type"] = "subspace";
        j["regs"] = s.regs;
        j["basis"] = s.basis_list;
        j["matrix"] = matrix_to_json(s.block);
        break;
    }
    steps.push_back(std::move(j));
  }
  return steps;
}

UnitaryProgram program_from_json(const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("program: expected an array of steps");
  }
  UnitaryProgram p;
  for (const auto& s : j) {
    const std::string type = s.value("type", "gate");
    if (type == "subspace") {
      std::vector<BasisTuple> basis;
      for (const auto& b : s.at("basis")) {
        basis.push_back(b.get<BasisTuple>());
      }
      // GateSpec::dense would reject non-square blocks; validate() rejects
      // non-unitary ones later, but fail fast here for clearer diagnostics.
      Eigen::MatrixXcd block = matrix_from_json(s.at("matrix"));
      p.steps.push_back(ProgramStep::subspace(
          s.at("regs").get<std::vector<std::string>>(), std::move(basis),
          std::move(block)));
      continue;
    }
    const std::string kind = s.at("kind").get<std::string>();
    GateSpec g = kind == "dense"
                     ? GateSpec::dense(matrix_from_json(s.at("matrix")))
                     : from_kind_name(kind);
    if (kind == "ctrl_right_mult_fixed" ||
        (s.contains("key") && kind == "ctrl_right_mult_fixed")) {
      g = GateSpec::ctrl_right_mult_fixed(perm_from_json(s.at("key")));
    }
    if (s.value("inverted", false)) g = g.adjoint();
    auto targets = s.at("targets").get<std::vector<std::string>>();
    if (type == "controlled") {
      p.steps.push_back(ProgramStep::controlled(
          s.at("control").get<std::string>(), std::move(g), std::move(targets)));
    } else if (type == "gate") {
      p.steps.push_back(ProgramStep::gate_step(std::move(g), std::move(targets)));
    } else {
      throw std::invalid_argument("program: unknown step type " + type);
    }
  }
  p.validate();
  return p;
}

json strategy_to_json(const CheatStrategy& s) {
  return json{{"name", s.name},
              {"n", s.n},
              {"u1", program_to_json(s.u1)},
              {"u2_0", program_to_json(s.u2_0)},
              {"u2_1", program_to_json(s.u2_1)}};
}

CheatStrategy strategy_from_json(const json& j) {
  CheatStrategy s;
  s.name = j.value("name", "unnamed");
  s.n = j.at("n").get<int>();
  if (!valid_security_param(s.n)) {
    throw std::invalid_argument("strategy: invalid n");
  }
  s.u1 = program_from_json(j.at("u1"));
  if (j.contains("u2_0")) s.u2_0 = program_from_json(j.at("u2_0"));
  if (j.contains("u2_1")) s.u2_1 = program_from_json(j.at("u2_1"));
  s.validate();
  return s;
}

CheatStrategy load_strategy(const std::string& name_or_path, int n) {
  const auto builtins = builtin_strategy_names();
  const bool is_builtin =
      std::any_of(builtins.begin(), builtins.end(),
                  [&](const std::string& b) {
                    return name_or_path == b || name_or_path.rfind(b + ":", 0) == 0;
                  });
  if (is_builtin) return builtin_strategy(name_or_path, n);
  std::ifstream in(name_or_path);
  if (!in) {
    throw std::invalid_argument("cannot open strategy file: " + name_or_path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("strategy JSON parse error: ") +
                                e.what());
  }
  CheatStrategy s = strategy_from_json(j);
  if (s.n != n) throw std::invalid_argument("strategy n does not match --n");
  return s;
}

json transcript_to_json(const CommitTranscript& t, bool include_state) {
  json ledger = json::array();
  for (const auto& r : t.ledger) {
    ledger.push_back({{"register", r.reg},
                      {"from", r.from == Party::Alice ? "alice" : "bob"},
                      {"to", r.to == Party::Alice ? "alice" : "bob"},
                      {"qubits", r.qubits},
                      {"step", r.step}});
  }
  json ownership;
  for (const auto& [reg, p] : t.ownership) {
    ownership[reg] = p == Party::Alice ? "alice" : "bob";
  }
  const char* phase = t.phase == Phase::Committed
                          ? "committed"
                          : (t.phase == Phase::Opened ? "opened" : "verified");
  json j{{"n", t.n},
         {"phase", phase},
         {"ownership", ownership},
         {"ledger", ledger},
         {"commit_phase_qubits", t.commit_phase_qubits()},
         {"opening_phase_qubits", t.opening_phase_qubits()},
         {"total_transferred_qubits", t.total_transferred_qubits()}};
  if (include_state) j["state"] = state_to_json(t.joint);
  return j;
}

json verify_result_to_json(const VerifyResult& r) {
  json dist;
  for (const auto& [k, p] : r.distribution) dist[k] = p;
  json j{{"verdict", r.verdict == Verdict::Accept ? "accept" : "reject_deceive"},
         {"probability", r.probability},
         {"distribution", dist}};
  if (r.bit) j["bit"] = *r.bit;
  return j;
}

json lemma_check_to_json(const LemmaCheck& c) {
  return json{{"name", c.name},         {"applicable", c.applicable},
              {"pass", c.pass},         {"max_deviation", c.max_dev},
              {"cases", c.cases},       {"note", c.note}};
}

json binding_report_to_json(const BindingReport& r) {
  return json{
      {"strategy", r.strategy},
      {"n", r.n},
      {"t0", r.t0},
      {"t1", r.t1},
      {"excess", r.excess},
      {"norm_sq", r.norm_sq},
      {"claim2_bound", r.claim2_bound},
      {"claim2_pass", r.claim2_pass},
      {"claim2_vacuous", r.claim2_vacuous},
      {"claim1_bound", r.claim1_bound},
      {"claim1_pass", r.claim1_pass},
      {"claim1_vacuous", r.claim1_vacuous},
      {"recovery_mean_success", r.hpsp_success},
      {"recovery_best_success", r.best_success},
      {"recovery_per_key_success", r.per_key_success},
      {"composed_bound", r.composed_bound},
      {"composed_pass", r.composed_pass},
      {"composed_vacuous", r.composed_vacuous},
      {"distill_probability", r.distill_probability},
      {"sector_claimed_norm_dev", r.sector_claimed_norm_dev},
      {"sector_corrected_norm_dev", r.sector_corrected_norm_dev},
      {"sector_claimed_form_dev", r.sector_claimed_form_dev},
      {"sector_corrected_form_dev", r.sector_corrected_form_dev},
      {"all_passed", r.all_passed()}};
}

json recovery_result_to_json(const RecoveryResult& r) {
  json outputs = json::array();
  for (const auto& [rank, p] : r.outputs) {
    outputs.push_back({{"key_rank", rank}, {"probability", p}});
  }
  return json{{"hidden_key", perm_to_json(r.hidden)},
              {"success", r.success},
              {"distill_probability", r.distill_probability},
              {"reject_probability", r.reject_probability},
              {"outputs", outputs}};
}

json report_envelope(const std::string& command, std::uint64_t seed) {
  return json{{"schema", "qbc-report-v1"},
              {"revision", kSourceRevision},
              {"tolerance", kTol},
              {"prune_threshold", kDefaultPruneTol},
              {"command", command},
              {"seed", seed}};
}

json build_lemma_report(int n, std::uint64_t samples, std::uint64_t seed) {
  json report = report_envelope("verify-lemmas", seed);
  report["n"] = n;
  report["samples"] = samples;
  json checks = json::array();
  bool all_pass = true;
  for (const LemmaCheck& c : run_lemma_suite(n, samples, seed)) {
    checks.push_back(lemma_check_to_json(c));
    if (c.applicable && !c.pass) all_pass = false;
  }
  report["checks"] = checks;
  report["all_pass"] = all_pass;
  return report;
}

json build_simulate_report(int n, int bit, std::size_t key_index,
                           const std::string& mode, std::uint64_t seed,
                           bool include_state) {
  const KeySet keys = KeySet::enumerate(n);
  if (key_index >= keys.size()) {
    throw std::invalid_argument("key index out of range");
  }
  const Perm key = keys[key_index];
  json report = report_envelope("simulate", seed);
  report["n"] = n;
  report["bit"] = bit;
  report["key_index"] = key_index;
  report["key"] = perm_to_json(key);
  report["mode"] = mode;
  CommitTranscript opened = alice_open(alice_commit(n, bit, key));
  const VerifyResult res = mode == "sample" ? bob_verify_sampled(opened, seed)
                                            : bob_verify(opened);
  report["transcript"] = transcript_to_json(opened, include_state);
  report["result"] = verify_result_to_json(res);
  return report;
}

json build_binding_json(const CheatStrategy& s, int n) {
  json report = report_envelope("binding", 0);
  report["report"] = binding_report_to_json(binding_report(s, n));
  return report;
}

json build_recovery_report(const CheatStrategy& s, int n, int key_index) {
  json report = report_envelope("key-recovery", 0);
  report["n"] = n;
  report["strategy"] = s.name;
  const KeySet keys = KeySet::enumerate(n);
  json runs = json::array();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (key_index >= 0 && static_cast<std::size_t>(key_index) != i) continue;
    const RecoveryResult r = recover_hidden_key(s, keys[i]);
    json jr = recovery_result_to_json(r);
    jr["key_index"] = i;
    runs.push_back(std::move(jr));
    sum += r.success;
    ++count;
  }
  report["runs"] = runs;
  report["mean_success"] = count ? sum / static_cast<double>(count) : 0.0;
  const double t0 = unveil_probability(s, 0);
  const double t1 = unveil_probability(s, 1);
  const double excess = t0 + t1 - 1.0;
  report["t0"] = t0;
  report["t1"] = t1;
  report["excess"] = excess;
  report["bound_applicable"] = excess > kTol && key_index < 0;
  report["composed_bound"] = excess > 0 ? excess * excess / 8.0 : 0.0;
  if (report["bound_applicable"].get<bool>()) {
    report["bound_pass"] =
        report["mean_success"].get<double>() >=
        report["composed_bound"].get<double>() - kTol;
  } else {
    report["bound_pass"] = true;
  }
  return report;
}

}  // namespace qbc
