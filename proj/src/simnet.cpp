#include "rti/simnet.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rti/cryptoshim.hpp"
#include "rti/error.hpp"
#include "rti/protocol.hpp"
#include "rti/random.hpp"

namespace rti {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Verifier: return "verifier";
        case NodeKind::Device: return "device";
        case NodeKind::AccompliceDevice: return "accomplice-device";
        case NodeKind::AccompliceChallenger: return "accomplice-challenger";
    }
    return "?";
}

const char* to_string(AdversaryStrategy s) {
    switch (s) {
        case AdversaryStrategy::None: return "none";
        case AdversaryStrategy::EvilTwinRelay: return "evil-twin";
        case AdversaryStrategy::CuckooRelay: return "cuckoo";
        case AdversaryStrategy::CuckooWithAccompliceChallenger: return "cuckoo-challenger";
        case AdversaryStrategy::ClonedBiometric: return "cloned-biometric";
    }
    return "?";
}

const char* to_string(ProtocolKind p) {
    switch (p) {
        case ProtocolKind::FvRti: return "fv-rti";
        case ProtocolKind::Naive: return "naive";
        case ProtocolKind::ProxyRti: return "proxy-rti";
    }
    return "?";
}

const NodeSpec* Scenario::find(std::string_view label) const {
    for (const auto& n : nodes) {
        if (n.label == label) return &n;
    }
    return nullptr;
}

const NodeSpec& Scenario::verifier() const {
    for (const auto& n : nodes) {
        if (n.kind == NodeKind::Verifier) return n;
    }
    throw Error(ErrorKind::Validation, "scenario has no verifier node");
}

namespace {

Error invalid(const std::string& why) { return Error(ErrorKind::Validation, why); }

const NodeSpec* first_of(const Scenario& s, NodeKind k) {
    for (const auto& n : s.nodes) {
        if (n.kind == k) return &n;
    }
    return nullptr;
}

bool relays_through_target(AdversaryStrategy st) {
    return st == AdversaryStrategy::CuckooRelay || st == AdversaryStrategy::CuckooWithAccompliceChallenger ||
           st == AdversaryStrategy::ClonedBiometric;
}

void require_rot_device(const Scenario& s, const std::string& label, const char* role) {
    const NodeSpec* n = s.find(label);
    if (!n) throw invalid(std::string(role) + " '" + label + "' is not a node");
    if (n->kind != NodeKind::Device) throw invalid(std::string(role) + " '" + label + "' must be a device");
    if (!n->hardwired()) {
        throw invalid(std::string(role) + " '" + label + "' needs a RoT with a hardwired sensor");
    }
}

}  // namespace

void validate_scenario(const Scenario& s) {
    std::size_t verifiers = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        if (n.label.empty() || n.label.find_first_of(" \t\r\n") != std::string::npos) {
            throw invalid("node label '" + n.label + "' must be non-empty without whitespace");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (s.nodes[j].label == n.label) throw invalid("duplicate node '" + n.label + "'");
        }
        verifiers += n.kind == NodeKind::Verifier;
        if (n.kind == NodeKind::AccompliceChallenger && n.has_rot) {
            throw invalid("accomplice challenger '" + n.label + "' cannot have a RoT");
        }
        if (n.sensor_wired_to_rot && !n.has_rot) throw invalid("node '" + n.label + "' has a sensor wired to no RoT");
    }
    if (verifiers != 1) throw invalid("scenario needs exactly one verifier node");
    s.user.noise.validate();
    if (!s.user.true_template.minutiae.empty() && !has_distinct_encodings(s.user.true_template)) {
        throw invalid("human template has minutiae sharing a lattice cell");
    }

    require_rot_device(s, s.target, "target");
    if (s.protocol == ProtocolKind::ProxyRti) {
        require_rot_device(s, s.proxy, "proxy");
        if (s.proxy == s.target) throw invalid("proxy and target must be different devices");
    } else if (!s.proxy.empty()) {
        throw invalid("a proxy is only meaningful under proxy-rti");
    }

    if (s.strategy == AdversaryStrategy::None) return;
    const NodeSpec* star = first_of(s, NodeKind::AccompliceDevice);
    if (!star || !star->hardwired()) {
        throw invalid(std::string(to_string(s.strategy)) + " needs an accomplice device with a hardwired RoT");
    }
    if (relays_through_target(s.strategy) && !s.find(s.target)->compromised_os) {
        throw invalid(std::string(to_string(s.strategy)) + " needs compromised_os on the target device");
    }
    if (s.strategy == AdversaryStrategy::CuckooWithAccompliceChallenger &&
        !first_of(s, NodeKind::AccompliceChallenger)) {
        throw invalid("cuckoo-challenger needs an accomplice challenger node");
    }
    if (s.strategy == AdversaryStrategy::ClonedBiometric && !s.user.cloned_available) {
        throw invalid("cloned-biometric needs cloned_available under [human]");
    }
}

namespace {

constexpr std::size_t kTemplateSize = 20;

GroupAuthority group_for(const Scenario& s) {
    Rng r = Rng(s.seed).fork("group");
    return GroupAuthority::create(r);
}

Template user_template(const Scenario& s) {
    if (!s.user.true_template.minutiae.empty()) return s.user.true_template;
    Rng r = Rng(s.seed).fork("human");
    return random_impostor_template(kTemplateSize, r);
}

Template accomplice_template(const Scenario& s) {
    Rng r = Rng(s.seed).fork("accomplice");
    return random_impostor_template(kTemplateSize, r);
}

// Vrf's side of every protocol, driven one frame at a time so that a live
// run and a replay go through the same code.
class VerifierAgent {
public:
    enum class Phase { Identify, Attest, Rti, Naive };

    VerifierAgent(const Scenario& s, ScenarioOutcome& out)
        : out_(out), rng_(Rng(s.seed).fork("verifier")), group_pk_(group_for(s).public_key()),
          enrolled_(user_template(s)) {
        switch (s.protocol) {
            case ProtocolKind::Naive: steps_.push_back({Phase::Naive, s.target}); break;
            case ProtocolKind::FvRti: steps_.push_back({Phase::Rti, s.target}); break;
            case ProtocolKind::ProxyRti:
                if (s.proxy_registered) steps_.push_back({Phase::Identify, s.proxy});
                steps_.push_back({Phase::Attest, s.proxy});
                steps_.push_back({Phase::Rti, s.target});
                break;
        }
    }

    bool done() const { return step_ >= steps_.size(); }
    bool awaiting_attestation() const { return !done() && steps_[step_].phase == Phase::Attest; }
    bool pending_send() const { return !done() && steps_[step_].phase != Phase::Attest && !sent_; }

    struct Outbound {
        std::string peer;
        Frame frame;
    };

    std::optional<Outbound> outbound() {
        if (!pending_send()) return std::nullopt;
        const auto& st = steps_[step_];
        sent_ = true;
        if (st.phase == Phase::Naive) {
            auto [session, c] = naive_verifier_start(group_pk_, rng_);
            naive_.emplace(std::move(session));
            return Outbound{st.peer, encode_message(c)};
        }
        const Template& bt = (st.phase == Phase::Rti && attested_) ? *attested_ : enrolled_;
        auto [session, hd] = verifier_start(bt, VaultParams{}, group_pk_, rng_);
        fv_.emplace(std::move(session));
        return Outbound{st.peer, encode_message(hd)};
    }

    void inbound(const std::string& from, const Frame& f) {
        if (done()) throw Error(ErrorKind::State, "verifier already decided");
        if (pending_send()) throw Error(ErrorKind::State, "verifier has not sent its request yet");
        const auto st = steps_[step_];
        try {
            switch (st.phase) {
                case Phase::Identify: {
                    const auto resp = decode_response(f);
                    if (!verifier_finish(*fv_, resp)) {
                        return reject("identification of proxy '" + st.peer + "' failed");
                    }
                    registry_.add(st.peer, resp.pk);
                    note("verifier identified " + st.peer + " and registered its key");
                    break;
                }
                case Phase::Attest:
                    attested_ = verifier_check_proxy(decode_attestation(f), registry_);
                    note("verifier accepted the template attested via " + from);
                    break;
                case Phase::Rti:
                    out_.decision = verifier_finish(*fv_, decode_response(f));
                    note(std::string("verifier decision ") + (out_.decision ? "1" : "0") + " on response from " + from);
                    break;
                case Phase::Naive:
                    out_.decision = naive_verifier_finish(*naive_, decode_naive_response(f));
                    note(std::string("verifier decision ") + (out_.decision ? "1" : "0") + " on response from " + from);
                    break;
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::State) throw;
            return reject(std::string(to_string(e.kind())) + ": " + e.what());
        }
        ++step_;
        sent_ = false;
    }

private:
    struct Step {
        Phase phase;
        std::string peer;
    };

    void note(std::string s) { out_.notes.push_back(std::move(s)); }

    void reject(const std::string& why) {
        out_.decision = false;
        out_.rejection = why;
        note("verifier rejected: " + why);
        step_ = steps_.size();
    }

    ScenarioOutcome& out_;
    Rng rng_;
    PublicKey group_pk_;
    Template enrolled_;
    std::vector<Step> steps_;
    std::size_t step_ = 0;
    bool sent_ = false;
    std::optional<VerifierSession> fv_;
    std::optional<NaiveVerifierSession> naive_;
    std::optional<Template> attested_;
    IdentifiedRegistry registry_;
};

class Network {
public:
    Network(const Scenario& s, ScenarioOutcome& out)
        : s_(s), out_(out), user_(user_template(s)), accomplice_(accomplice_template(s)) {
        const GroupAuthority group = group_for(s);
        const Rng base(s.seed);
        for (const auto& n : s.nodes) {
            if (!n.has_rot) continue;
            Rng r = base.fork("rot:" + n.label);
            keys_.emplace(n.label, rot_gen_keys(group.master.sk, r));
        }
    }

    // Delivers a verifier request to `peer` along whatever path the
    // adversary imposes, and carries the answer back.
    Frame exchange(const std::string& peer, const Frame& request) {
        const auto path = route(peer);
        const Bytes bytes = encode_frame(request);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) send(path[i], path[i + 1], bytes);
        const std::string& responder = path.back();
        if (responder != peer) out_.notes.push_back("request for " + peer + " answered by " + responder);
        const Bytes answer = answer_as(responder, bytes);
        for (std::size_t i = path.size() - 1; i > 0; --i) send(path[i], path[i - 1], answer);
        return decode_frame(answer);
    }

    Frame attest(const std::string& proxy) {
        const Template sample = touch(proxy);
        const Bytes bytes = encode_frame(encode_message(proxy_sample_and_sign(sample, keys_.at(proxy))));
        send(proxy, s_.verifier().label, bytes);
        return decode_frame(bytes);
    }

private:
    std::vector<std::string> route(const std::string& peer) const {
        const std::string vrf = s_.verifier().label;
        if (peer != s_.target || s_.strategy == AdversaryStrategy::None) return {vrf, peer};
        const std::string star = first_of(s_, NodeKind::AccompliceDevice)->label;
        switch (s_.strategy) {
            case AdversaryStrategy::EvilTwinRelay: return {vrf, star};
            case AdversaryStrategy::CuckooWithAccompliceChallenger:
                return {vrf, peer, first_of(s_, NodeKind::AccompliceChallenger)->label, star};
            default: return {vrf, peer, star};
        }
    }

    Bytes answer_as(const std::string& label, const Bytes& request) {
        const Frame f = decode_frame(request);
        const auto& keys = keys_.at(label);
        if (f.type == MessageType::NaiveChallenge) {
            return encode_frame(encode_message(naive_prover_respond(decode_naive_challenge(f), keys)));
        }
        const auto resp = prover_respond(request, touch(label), keys);
        out_.notes.push_back(label + " RoT " + (resp.aborted ? "could not open the vault and aborted" : "opened the vault and signed"));
        return encode_frame(encode_message(resp));
    }

    // The sensor hardwired to `label`'s RoT is touched by whoever stands there.
    Template touch(const std::string& label) {
        const NodeSpec* n = s_.find(label);
        const bool adversary_side = n->kind == NodeKind::AccompliceDevice;
        const Template& who = (adversary_side && !s_.user.cloned_available) ? accomplice_ : user_;
        const int count = touches_[label]++;
        Rng r = Rng(s_.seed).fork("touch:" + label + ":" + std::to_string(count));
        Template sample = perturb_template(who, s_.user.noise, r);
        out_.touches.push_back({label, sample});
        return sample;
    }

    void send(const std::string& from, const std::string& to, const Bytes& frame) {
        out_.transcript.push_back({from, to, frame});
    }

    const Scenario& s_;
    ScenarioOutcome& out_;
    Template user_;
    Template accomplice_;
    std::map<std::string, SessionKeyPair> keys_;
    std::map<std::string, int> touches_;
};

}  // namespace

ScenarioOutcome run_scenario(const Scenario& s) {
    validate_scenario(s);
    ScenarioOutcome out;
    out.notes.push_back(std::string("protocol=") + to_string(s.protocol) + " strategy=" + to_string(s.strategy) +
                        " seed=" + std::to_string(s.seed));
    Network net(s, out);
    VerifierAgent vrf(s, out);
    while (!vrf.done()) {
        if (auto req = vrf.outbound()) {
            vrf.inbound(req->peer, net.exchange(req->peer, req->frame));
        } else if (vrf.awaiting_attestation()) {
            vrf.inbound(s.proxy, net.attest(s.proxy));
        }
    }
    return out;
}

ScenarioOutcome replay_transcript(const Scenario& s, const Transcript& t) {
    validate_scenario(s);
    ScenarioOutcome out;
    out.transcript = t;
    VerifierAgent vrf(s, out);
    const std::string me = s.verifier().label;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& e = t[i];
        const std::string where = "transcript frame " + std::to_string(i + 1);
        if (e.sender == me) {
            const auto expected = vrf.outbound();
            if (!expected) throw Error(ErrorKind::Replay, where + ": verifier had nothing to send");
            if (encode_frame(expected->frame) != e.frame) {
                throw Error(ErrorKind::Replay, where + ": differs from the regenerated verifier frame");
            }
        } else if (e.receiver == me) {
            if (vrf.done()) throw Error(ErrorKind::Replay, where + ": arrives after the decision");
            if (vrf.pending_send()) throw Error(ErrorKind::Replay, where + ": arrives before the verifier's request");
            Frame f;
            try {
                f = decode_frame(e.frame);
            } catch (const Error& err) {
                throw Error(ErrorKind::Replay, where + ": " + err.what());
            }
            vrf.inbound(e.sender, f);
        }
    }
    if (!vrf.done()) {
        out.decision = false;
        out.notes.push_back("transcript ends before the verifier decided");
    }
    return out;
}

std::vector<std::string> audit_routing(const Scenario& s, const ScenarioOutcome& o) {
    std::vector<std::string> violations;
    const std::string me = s.verifier().label;
    std::vector<std::string> samples;
    for (const auto& t : o.touches) samples.push_back(serialize_template(t.sample));
    for (std::size_t i = 0; i < o.transcript.size(); ++i) {
        const auto& e = o.transcript[i];
        if (e.receiver == me) continue;
        const NodeSpec* n = s.find(e.receiver);
        if (n && n->hardwired()) continue;
        const std::string where = "frame " + std::to_string(i + 1) + " to " + e.receiver;
        if (!e.frame.empty() && e.frame[0] == static_cast<std::uint8_t>(MessageType::ProxyAttestation)) {
            violations.push_back(where + " carries an attested sample");
        }
        for (const auto& text : samples) {
            if (std::search(e.frame.begin(), e.frame.end(), text.begin(), text.end()) != e.frame.end()) {
                violations.push_back(where + " carries a raw sensor sample");
            }
        }
    }
    return violations;
}

Scenario standard_scenario(ProtocolKind p, AdversaryStrategy st, std::uint64_t seed) {
    Scenario s;
    s.protocol = p;
    s.strategy = st;
    s.seed = seed;
    s.nodes.push_back({"vrf", NodeKind::Verifier});
    if (p == ProtocolKind::ProxyRti) {
        s.proxy = "proxy-a";
        s.target = "dev-b";
        s.nodes.push_back({s.proxy, NodeKind::Device, true, true, false});
    }
    s.nodes.push_back({s.target, NodeKind::Device, true, true, relays_through_target(st)});
    if (st != AdversaryStrategy::None) s.nodes.push_back({"dev-star", NodeKind::AccompliceDevice, true, true, true});
    if (st == AdversaryStrategy::CuckooWithAccompliceChallenger) {
        s.nodes.push_back({"chal-star", NodeKind::AccompliceChallenger, false, false, true});
    }
    s.user.cloned_available = st == AdversaryStrategy::ClonedBiometric;
    return s;
}

std::vector<MatrixRow> scenario_matrix(std::uint64_t seed) {
    using P = ProtocolKind;
    using A = AdversaryStrategy;
    std::vector<MatrixRow> rows = {
        {P::Naive, A::None, true, "1", ""},
        {P::Naive, A::EvilTwinRelay, true, "1", ""},
        {P::Naive, A::CuckooRelay, true, "1", ""},
        {P::FvRti, A::None, true, "1", ""},
        {P::FvRti, A::EvilTwinRelay, true, "0", ""},
        {P::FvRti, A::CuckooRelay, true, "0", ""},
        {P::FvRti, A::CuckooWithAccompliceChallenger, true, "0", ""},
        {P::FvRti, A::ClonedBiometric, true, "1", ""},
        {P::ProxyRti, A::None, true, "1", ""},
        {P::ProxyRti, A::None, false, "rejection", ""},
    };
    for (auto& r : rows) {
        Scenario s = standard_scenario(r.protocol, r.strategy, seed);
        s.proxy_registered = r.proxy_registered;
        const auto o = run_scenario(s);
        r.observed = o.rejection ? "rejection" : (o.decision ? "1" : "0");
    }
    return rows;
}

std::string format_outcome(const ScenarioOutcome& o) {
    std::string s = std::string("decision=") + (o.decision ? "1" : "0") + "\n";
    if (o.rejection) s += "rejection=" + *o.rejection + "\n";
    s += "frames=" + std::to_string(o.transcript.size()) + "\n";
    for (const auto& n : o.notes) s += "note: " + n + "\n";
    return s;
}

std::string serialize_transcript(const Transcript& t) {
    std::string s;
    for (const auto& e : t) s += e.sender + " " + e.receiver + " " + to_hex(e.frame) + "\n";
    return s;
}

Transcript parse_transcript(std::string_view text) {
    Transcript t;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        TranscriptEntry e;
        std::string hex, extra;
        if (!(ls >> e.sender >> e.receiver >> hex) || (ls >> extra)) {
            throw Error(ErrorKind::Parse, "transcript line " + std::to_string(lineno) + ": expected 3 fields");
        }
        auto bytes = from_hex(hex);
        if (!bytes) throw Error(ErrorKind::Parse, "transcript line " + std::to_string(lineno) + ": bad hex");
        e.frame = std::move(*bytes);
        t.push_back(std::move(e));
    }
    return t;
}

namespace {

std::string trim(std::string_view v) {
    const auto b = v.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = v.find_last_not_of(" \t\r");
    return std::string(v.substr(b, e - b + 1));
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw invalid(where + "expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& where) {
    double d = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc{} || p != v.data() + v.size()) throw invalid(where + "expected a number, got '" + v + "'");
    return d;
}

std::uint64_t parse_seed(const std::string& v, const std::string& where) {
    std::optional<std::uint64_t> out;
    if (v.rfind("0x", 0) == 0) {
        out = parse_hex_u64(std::string_view(v).substr(2));
    } else {
        std::uint64_t d = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec == std::errc{} && p == v.data() + v.size()) out = d;
    }
    if (!out) throw invalid(where + "bad seed '" + v + "'");
    return *out;
}

template <typename E, std::size_t N>
E parse_enum(const std::string& v, const E (&all)[N], const std::string& where) {
    for (E e : all) {
        if (v == to_string(e)) return e;
    }
    throw invalid(where + "unknown value '" + v + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    static constexpr NodeKind kKinds[] = {NodeKind::Verifier, NodeKind::Device, NodeKind::AccompliceDevice,
                                          NodeKind::AccompliceChallenger};
    static constexpr AdversaryStrategy kStrategies[] = {
        AdversaryStrategy::None, AdversaryStrategy::EvilTwinRelay, AdversaryStrategy::CuckooRelay,
        AdversaryStrategy::CuckooWithAccompliceChallenger, AdversaryStrategy::ClonedBiometric};
    static constexpr ProtocolKind kProtocols[] = {ProtocolKind::FvRti, ProtocolKind::Naive, ProtocolKind::ProxyRti};

    Scenario s;
    s.target.clear();
    enum class Section { None, Scenario, Node, Human } section = Section::None;
    bool saw_scenario = false, saw_human = false;
    std::string minutiae_path;
    std::size_t minutiae_count = kTemplateSize;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = "scenario line " + std::to_string(lineno) + ": ";
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw invalid(where + "unterminated section header");
            const std::string head = trim(std::string_view(line).substr(1, line.size() - 2));
            if (head == "scenario") {
                if (saw_scenario) throw invalid(where + "duplicate [scenario] section");
                saw_scenario = true;
                section = Section::Scenario;
            } else if (head == "human") {
                if (saw_human) throw invalid(where + "duplicate [human] section");
                saw_human = true;
                section = Section::Human;
            } else if (head.rfind("node ", 0) == 0) {
                const std::string label = trim(std::string_view(head).substr(5));
                if (label.empty() || label.find_first_of(" \t") != std::string::npos) {
                    throw invalid(where + "bad node label");
                }
                if (s.find(label)) throw invalid(where + "duplicate node '" + label + "'");
                s.nodes.push_back({label, NodeKind::Device});
                section = Section::Node;
            } else {
                throw invalid(where + "unknown section [" + head + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw invalid(where + "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string val = trim(std::string_view(line).substr(eq + 1));
        auto unknown = [&] { return invalid(where + "unknown key '" + key + "'"); };

        switch (section) {
            case Section::None: throw invalid(where + "key outside any section");
            case Section::Scenario:
                if (key == "protocol") s.protocol = parse_enum(val, kProtocols, where);
                else if (key == "strategy") s.strategy = parse_enum(val, kStrategies, where);
                else if (key == "seed") {
                    s.seed = parse_seed(val, where);
                } else if (key == "target") s.target = val;
                else if (key == "proxy") s.proxy = val;
                else if (key == "proxy_registered") s.proxy_registered = parse_bool(val, where);
                else throw unknown();
                break;
            case Section::Node: {
                auto& n = s.nodes.back();
                if (key == "kind") n.kind = parse_enum(val, kKinds, where);
                else if (key == "has_rot") n.has_rot = parse_bool(val, where);
                else if (key == "sensor_wired_to_rot") n.sensor_wired_to_rot = parse_bool(val, where);
                else if (key == "compromised_os") n.compromised_os = parse_bool(val, where);
                else throw unknown();
                break;
            }
            case Section::Human:
                if (key == "sigma_xy") s.user.noise.sigma_xy = parse_double(val, where);
                else if (key == "sigma_theta") s.user.noise.sigma_theta = parse_double(val, where);
                else if (key == "drop_rate") s.user.noise.drop_rate = parse_double(val, where);
                else if (key == "cloned_available") s.user.cloned_available = parse_bool(val, where);
                else if (key == "minutiae") minutiae_path = val;
                else if (key == "count") minutiae_count = static_cast<std::size_t>(parse_double(val, where));
                else throw unknown();
                break;
        }
    }
    if (!saw_scenario) throw invalid("scenario file has no [scenario] section");
    if (s.target.empty()) {
        const NodeSpec* dev = first_of(s, NodeKind::Device);
        for (const auto& n : s.nodes) {
            if (n.kind == NodeKind::Device && n.label != s.proxy) {
                dev = &n;
                break;
            }
        }
        if (!dev) throw invalid("scenario names no target and has no device node");
        s.target = dev->label;
    }
    if (!minutiae_path.empty()) {
        std::filesystem::path p(minutiae_path);
        if (p.is_relative()) p = base_dir / p;
        s.user.true_template = load_template(p, minutiae_count);
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read scenario " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace rti
