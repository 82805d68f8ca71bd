#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rti/biotemplate.hpp"
#include "rti/hex.hpp"

namespace rti {

enum class NodeKind { Verifier, Device, AccompliceDevice, AccompliceChallenger };

struct NodeSpec {
    std::string label;
    NodeKind kind = NodeKind::Device;
    bool has_rot = false;
    bool sensor_wired_to_rot = false;
    bool compromised_os = false;

    bool hardwired() const { return has_rot && sensor_wired_to_rot; }
    bool operator==(const NodeSpec&) const = default;
};

/// The user U. Every sensor touch yields a fresh perturbation of
/// true_template. When cloned_available is set, the adversary's sensor
/// gets one too.
struct HumanActor {
    Template true_template;
    NoiseModel noise;
    bool cloned_available = false;
};

enum class AdversaryStrategy { None, EvilTwinRelay, CuckooRelay, CuckooWithAccompliceChallenger, ClonedBiometric };
enum class ProtocolKind { FvRti, Naive, ProxyRti };

const char* to_string(NodeKind k);
const char* to_string(AdversaryStrategy s);
const char* to_string(ProtocolKind p);

struct Scenario {
    std::vector<NodeSpec> nodes;
    AdversaryStrategy strategy = AdversaryStrategy::None;
    ProtocolKind protocol = ProtocolKind::FvRti;
    std::uint64_t seed = 0;
    HumanActor user;  // an empty template is drawn from the seed
    std::string target = "dev-a";  // the device the verifier wants to reach
    std::string proxy;             // ProxyRti only: the previously identified device
    bool proxy_registered = true;  // ProxyRti only: run the identification first

    const NodeSpec* find(std::string_view label) const;
    const NodeSpec& verifier() const;
};

/// Throws Error(Validation) when the topology cannot carry the strategy.
void validate_scenario(const Scenario& s);

struct TranscriptEntry {
    std::string sender;
    std::string receiver;
    Bytes frame;

    bool operator==(const TranscriptEntry&) const = default;
};
using Transcript = std::vector<TranscriptEntry>;

struct SensorTouch {
    std::string node;
    Template sample;
};

struct ScenarioOutcome {
    bool decision = false;
    Transcript transcript;
    std::vector<std::string> notes;
    std::optional<std::string> rejection;  // set when the verifier refused before deciding
    std::vector<SensorTouch> touches;
};

ScenarioOutcome run_scenario(const Scenario& s);

/// Fresh verifier state machines, regenerated from the scenario seed, are
/// fed the recorded frames. Verifier-sent frames must match byte for byte,
/// otherwise Error(Replay). A transcript that stops before the verifier's
/// final input yields decision 0.
ScenarioOutcome replay_transcript(const Scenario& s, const Transcript& t);

/// Frames that carry a sensor sample to a node without a hardwired sensor,
/// other than the verifier. Empty when routing was sound.
std::vector<std::string> audit_routing(const Scenario& s, const ScenarioOutcome& o);

/// Canonical topology for a protocol/strategy pair.
Scenario standard_scenario(ProtocolKind p, AdversaryStrategy st, std::uint64_t seed);

struct MatrixRow {
    ProtocolKind protocol;
    AdversaryStrategy strategy;
    bool proxy_registered = true;
    std::string expected;  // "1", "0" or "rejection"
    std::string observed;

    bool matches() const { return expected == observed; }
};

std::vector<MatrixRow> scenario_matrix(std::uint64_t seed = 2024);

// Text formats.
std::string format_outcome(const ScenarioOutcome& o);
/// One line per frame: `sender receiver <hex frame>`.
std::string serialize_transcript(const Transcript& t);
Transcript parse_transcript(std::string_view text);

/// `[scenario]`, `[node <label>]` and `[human]` sections of `key = value`
/// lines. A relative `minutiae` path under [human] resolves against
/// base_dir. Errors are Error(Validation) naming the line.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace rti
