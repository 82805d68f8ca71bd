#include "rti/protocol.hpp"

#include <string_view>
#include <vector>

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

namespace {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string_view as_text(const Bytes& b) { return {reinterpret_cast<const char*>(b.data()), b.size()}; }

Error protocol_error(const std::string& why) { return Error(ErrorKind::Protocol, why); }

void expect_type(const Frame& f, MessageType want) {
    if (f.type != want) {
        throw protocol_error(std::string("expected ") + to_string(want) + " frame, got " + to_string(f.type));
    }
}

// Reads `key=<hex>\n` lines in a fixed order from the front of `text`.
class FieldReader {
public:
    explicit FieldReader(std::string_view text) : rest_(text) {}

    std::string_view line(std::string_view key) {
        const auto nl = rest_.find('\n');
        if (nl == std::string_view::npos) throw protocol_error("missing '" + std::string(key) + "' line");
        const std::string_view ln = rest_.substr(0, nl);
        rest_.remove_prefix(nl + 1);
        if (ln.size() <= key.size() || ln.substr(0, key.size()) != key || ln[key.size()] != '=') {
            throw protocol_error("expected '" + std::string(key) + "=' line");
        }
        return ln.substr(key.size() + 1);
    }

    Bytes hex(std::string_view key) {
        auto b = from_hex(line(key));
        if (!b) throw protocol_error("'" + std::string(key) + "' is not hex");
        return *b;
    }

    std::string_view rest() const { return rest_; }

private:
    std::string_view rest_;
};

}  // namespace

const char* to_string(MessageType t) {
    switch (t) {
        case MessageType::Hd: return "HD";
        case MessageType::Response: return "Response";
        case MessageType::ProxyAttestation: return "ProxyAttestation";
        case MessageType::NaiveChallenge: return "NaiveChallenge";
        case MessageType::NaiveResponse: return "NaiveResponse";
    }
    return "unknown";
}

Bytes encode_frame(const Frame& f) {
    Bytes out;
    out.reserve(5 + f.payload.size());
    out.push_back(static_cast<std::uint8_t>(f.type));
    const auto n = static_cast<std::uint32_t>(f.payload.size());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 5) throw protocol_error("frame shorter than its 5-byte header");
    Frame f;
    switch (bytes[0]) {
        case 0x01: case 0x02: case 0x03: case 0x10: case 0x11:
            f.type = static_cast<MessageType>(bytes[0]);
            break;
        default:
            throw protocol_error("unknown message tag 0x" + to_hex_fixed(bytes[0], 2));
    }
    std::uint32_t n = 0;
    for (int i = 1; i <= 4; ++i) n = (n << 8) | bytes[static_cast<std::size_t>(i)];
    if (bytes.size() - 5 != n) {
        throw protocol_error("frame declares " + std::to_string(n) + " payload bytes, carries " +
                             std::to_string(bytes.size() - 5));
    }
    f.payload.assign(bytes.begin() + 5, bytes.end());
    return f;
}

Frame encode_message(const HdMessage& m) { return {MessageType::Hd, to_bytes(serialize_vault(m.hd))}; }

Frame encode_message(const ResponseMessage& m) {
    std::string s = "aborted=" + std::string(m.aborted ? "1" : "0") + "\n";
    s += "pk=" + to_hex(m.pk.bytes) + "\n";
    s += "cred=" + to_hex(m.group_cred.bytes) + "\n";
    s += "sig=" + to_hex(m.sigma.bytes) + "\n";
    return {MessageType::Response, to_bytes(s)};
}

Frame encode_message(const ProxyAttestation& m) {
    std::string s = "pk=" + to_hex(m.proxy_pk.bytes) + "\n";
    s += "sig=" + to_hex(m.sigma_bt.bytes) + "\n";
    s += serialize_template(m.bt);
    return {MessageType::ProxyAttestation, to_bytes(s)};
}

Frame encode_message(const NaiveChallenge& m) {
    return {MessageType::NaiveChallenge, to_bytes("c=" + to_hex(m.c) + "\n")};
}

Frame encode_message(const NaiveResponse& m) {
    std::string s = "pk=" + to_hex(m.pk.bytes) + "\n";
    s += "cred=" + to_hex(m.group_cred.bytes) + "\n";
    s += "sig=" + to_hex(m.sigma.bytes) + "\n";
    return {MessageType::NaiveResponse, to_bytes(s)};
}

HdMessage decode_hd(const Frame& f) {
    expect_type(f, MessageType::Hd);
    try {
        return HdMessage{deserialize_vault(as_text(f.payload))};
    } catch (const Error& e) {
        throw protocol_error(std::string("malformed helper data: ") + e.what());
    }
}

ResponseMessage decode_response(const Frame& f) {
    expect_type(f, MessageType::Response);
    FieldReader r(as_text(f.payload));
    ResponseMessage m;
    const auto ab = r.line("aborted");
    if (ab != "0" && ab != "1") throw protocol_error("aborted must be 0 or 1");
    m.aborted = ab == "1";
    m.pk.bytes = r.hex("pk");
    m.group_cred.bytes = r.hex("cred");
    m.sigma.bytes = r.hex("sig");
    if (!r.rest().empty()) throw protocol_error("trailing bytes in response");
    if (m.aborted && m.sigma != aborted_sentinel()) throw protocol_error("aborted response must carry the sentinel");
    return m;
}

ProxyAttestation decode_attestation(const Frame& f) {
    expect_type(f, MessageType::ProxyAttestation);
    FieldReader r(as_text(f.payload));
    ProxyAttestation m;
    m.proxy_pk.bytes = r.hex("pk");
    m.sigma_bt.bytes = r.hex("sig");
    try {
        m.bt = deserialize_template(r.rest());
    } catch (const Error& e) {
        throw protocol_error(std::string("malformed template: ") + e.what());
    }
    return m;
}

NaiveChallenge decode_naive_challenge(const Frame& f) {
    expect_type(f, MessageType::NaiveChallenge);
    FieldReader r(as_text(f.payload));
    NaiveChallenge m{r.hex("c")};
    if (!r.rest().empty()) throw protocol_error("trailing bytes in challenge");
    return m;
}

NaiveResponse decode_naive_response(const Frame& f) {
    expect_type(f, MessageType::NaiveResponse);
    FieldReader r(as_text(f.payload));
    NaiveResponse m;
    m.pk.bytes = r.hex("pk");
    m.group_cred.bytes = r.hex("cred");
    m.sigma.bytes = r.hex("sig");
    if (!r.rest().empty()) throw protocol_error("trailing bytes in response");
    return m;
}

std::pair<VerifierSession, HdMessage> verifier_start(const Template& bt, const VaultParams& params,
                                                     const PublicKey& group_pk, Rng& rng) {
    if (bt.size() < params.d + 1) {
        throw Error(ErrorKind::InsufficientMinutiae, "verifier sample has " + std::to_string(bt.size()) +
                                                         " minutiae, need " + std::to_string(params.d + 1));
    }
    VerifierSession s;
    s.chal_ = Challenge::random(params.secret_bits(), rng);
    HdMessage msg{fv_gen(s.chal_, bt, params, rng)};
    s.bt_ = bt;
    s.params_ = msg.hd.params;
    s.params_.combo_cap = params.combo_cap;
    s.group_pk_ = group_pk;
    s.state_ = VerifierState::AwaitingResponse;
    return {std::move(s), std::move(msg)};
}

ResponseMessage prover_respond(const HdMessage& msg, const Template& bt2, const SessionKeyPair& keys) {
    ResponseMessage resp;
    resp.pk = keys.pk;
    resp.group_cred = keys.group_cred;
    const OpenResult opened = fv_open(msg.hd, bt2);
    if (opened.recovered()) {
        resp.sigma = sign(keys.sk, opened.secret->bytes());
    } else {
        resp.aborted = true;
        resp.sigma = aborted_sentinel();
    }
    return resp;
}

ResponseMessage prover_respond(std::span<const std::uint8_t> hd_frame, const Template& bt2,
                               const SessionKeyPair& keys) {
    return prover_respond(decode_hd(decode_frame(hd_frame)), bt2, keys);
}

bool verifier_finish(VerifierSession& session, const ResponseMessage& resp) {
    if (session.state_ != VerifierState::AwaitingResponse) {
        throw Error(ErrorKind::State, "verifier_finish called outside AwaitingResponse");
    }
    bool ok = group_verify(session.group_pk_, resp.pk, resp.group_cred) && !resp.aborted;
    if (ok) {
        try {
            ok = verify(resp.pk, resp.sigma, session.chal_.bytes());
        } catch (const Error&) {
            ok = false;
        }
    }
    session.state_ = VerifierState::Done;
    session.decision_ = ok;
    return ok;
}

bool IdentifiedRegistry::contains(const PublicKey& pk) const {
    for (const auto& [label, key] : entries) {
        if (key == pk) return true;
    }
    return false;
}

ProxyAttestation proxy_sample_and_sign(const Template& bt, const SessionKeyPair& proxy_keys) {
    const std::string canonical = serialize_template(bt);
    return ProxyAttestation{deserialize_template(canonical), sign(proxy_keys.sk, canonical), proxy_keys.pk};
}

Template verifier_check_proxy(const ProxyAttestation& att, const IdentifiedRegistry& registry) {
    if (!registry.contains(att.proxy_pk)) {
        throw Error(ErrorKind::UnidentifiedProxy, "proxy key " + to_hex(att.proxy_pk.bytes).substr(0, 16) +
                                                      "... was never identified");
    }
    if (!verify(att.proxy_pk, att.sigma_bt, serialize_template(att.bt))) {
        throw Error(ErrorKind::Integrity, "proxy signature does not cover the delivered template");
    }
    return att.bt;
}

std::pair<NaiveVerifierSession, NaiveChallenge> naive_verifier_start(const PublicKey& group_pk, Rng& rng) {
    NaiveVerifierSession s;
    s.c_.resize(kNaiveChallengeBytes);
    for (auto& b : s.c_) b = static_cast<std::uint8_t>(rng.uniform(256));
    s.group_pk_ = group_pk;
    s.state_ = VerifierState::AwaitingResponse;
    NaiveChallenge c{s.c_};
    return {std::move(s), std::move(c)};
}

NaiveResponse naive_prover_respond(const NaiveChallenge& c, const SessionKeyPair& keys) {
    return NaiveResponse{sign(keys.sk, c.c), keys.pk, keys.group_cred};
}

bool naive_verifier_finish(NaiveVerifierSession& session, const NaiveResponse& resp) {
    if (session.state_ != VerifierState::AwaitingResponse) {
        throw Error(ErrorKind::State, "naive_verifier_finish called outside AwaitingResponse");
    }
    bool ok = group_verify(session.group_pk_, resp.pk, resp.group_cred);
    if (ok) {
        try {
            ok = verify(resp.pk, resp.sigma, session.c_);
        } catch (const Error&) {
            ok = false;
        }
    }
    session.state_ = VerifierState::Done;
    session.decision_ = ok;
    return ok;
}

}  // namespace rti
