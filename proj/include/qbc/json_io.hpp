#pragma once

#include <string>

#include <json.hpp>

#include "qbc/adversary.hpp"
#include "qbc/hilbert.hpp"
#include "qbc/lemmas.hpp"
#include "qbc/perm.hpp"
#include "qbc/protocol.hpp"

namespace qbc {

using json = nlohmann::ordered_json;

/// 1-indexed one-line array, e.g. [2,1,4,3,6,5].
json perm_to_json(const Perm& p);
Perm perm_from_json(const json& j);

/// Layout descriptor plus (basis tuple, re, im) entries sorted by basis rank.
json state_to_json(const PureState& st);

json gate_to_json(const GateSpec& g);
json program_to_json(const UnitaryProgram& p);
UnitaryProgram program_from_json(const json& j);

json strategy_to_json(const CheatStrategy& s);
/// Throws std::invalid_argument on schema errors or non-unitary blocks.
CheatStrategy strategy_from_json(const json& j);
CheatStrategy load_strategy(const std::string& name_or_path, int n);

json transcript_to_json(const CommitTranscript& t, bool include_state = false);
json verify_result_to_json(const VerifyResult& r);
json lemma_check_to_json(const LemmaCheck& c);
json binding_report_to_json(const BindingReport& r);
json recovery_result_to_json(const RecoveryResult& r);

/// Envelope shared by every CLI report: schema id, source revision, the
/// tolerance constants and the invoking command.
json report_envelope(const std::string& command, std::uint64_t seed);

/// Full CLI report payloads; byte-stable for a fixed seed.
json build_lemma_report(int n, std::uint64_t samples, std::uint64_t seed);
json build_simulate_report(int n, int bit, std::size_t key_index,
                           const std::string& mode, std::uint64_t seed,
                           bool include_state);
json build_binding_json(const CheatStrategy& s, int n);
json build_recovery_report(const CheatStrategy& s, int n, int key_index);

}  // namespace qbc
