#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "rti/biotemplate.hpp"
#include "rti/cryptoshim.hpp"
#include "rti/hex.hpp"
#include "rti/vault.hpp"

namespace rti {

class Rng;

// ---------------------------------------------------------------------------
// Wire framing: 1-byte tag, 4-byte big-endian payload length, payload.

enum class MessageType : std::uint8_t {
    Hd = 0x01,
    Response = 0x02,
    ProxyAttestation = 0x03,
    NaiveChallenge = 0x10,
    NaiveResponse = 0x11,
};

const char* to_string(MessageType t);

struct Frame {
    MessageType type{};
    Bytes payload;

    bool operator==(const Frame&) const = default;
};

Bytes encode_frame(const Frame& f);
/// Exactly one frame; trailing or missing bytes and unknown tags are Error(Protocol).
Frame decode_frame(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Messages

struct HdMessage {
    HelperData hd;
};

inline const Signature& aborted_sentinel() {
    static const Signature s{Bytes(64, 0)};
    return s;
}

struct ResponseMessage {
    Signature sigma;
    PublicKey pk;
    Signature group_cred;
    bool aborted = false;

    bool operator==(const ResponseMessage&) const = default;
};

struct ProxyAttestation {
    Template bt;
    Signature sigma_bt;
    PublicKey proxy_pk;
};

struct NaiveChallenge {
    Bytes c;
};

struct NaiveResponse {
    Signature sigma;
    PublicKey pk;
    Signature group_cred;
};

Frame encode_message(const HdMessage& m);
Frame encode_message(const ResponseMessage& m);
Frame encode_message(const ProxyAttestation& m);
Frame encode_message(const NaiveChallenge& m);
Frame encode_message(const NaiveResponse& m);

// All decoders throw Error(Protocol) on a wrong tag or malformed payload.
HdMessage decode_hd(const Frame& f);
ResponseMessage decode_response(const Frame& f);
ProxyAttestation decode_attestation(const Frame& f);
NaiveChallenge decode_naive_challenge(const Frame& f);
NaiveResponse decode_naive_response(const Frame& f);

// ---------------------------------------------------------------------------
// FV-based RTI

enum class VerifierState { Started, AwaitingResponse, Done };

/// Verifier side of one RTI run. Holds the challenge, which never leaves
/// this object.
class VerifierSession {
public:
    VerifierState state() const { return state_; }
    std::optional<bool> decision() const { return decision_; }
    const Template& bt() const { return bt_; }
    const VaultParams& params() const { return params_; }

    // Test hook: lets a test check the transcript never carries it.
    const Challenge& challenge_for_testing() const { return chal_; }

private:
    friend std::pair<VerifierSession, HdMessage> verifier_start(const Template&, const VaultParams&,
                                                                const PublicKey&, Rng&);
    friend bool verifier_finish(VerifierSession&, const ResponseMessage&);

    Challenge chal_;
    Template bt_;
    VaultParams params_;
    PublicKey group_pk_;
    VerifierState state_ = VerifierState::Started;
    std::optional<bool> decision_;
};

/// Samples a (d+1)*tau-bit challenge and locks it under bt. Throws
/// Error(InsufficientMinutiae) before producing any message if |bt| < d+1.
std::pair<VerifierSession, HdMessage> verifier_start(const Template& bt, const VaultParams& params,
                                                     const PublicKey& group_pk, Rng& rng);

/// Opens the vault with the RoT's own sensor sample and signs the result.
/// A failed opening yields an aborted response with the sentinel signature.
ResponseMessage prover_respond(const HdMessage& msg, const Template& bt2, const SessionKeyPair& keys);
/// Wire variant: a frame that does not decode to a well-formed vault is
/// Error(Protocol).
ResponseMessage prover_respond(std::span<const std::uint8_t> hd_frame, const Template& bt2,
                               const SessionKeyPair& keys);

/// 1 iff the group credential verifies, the response is not aborted, and
/// sigma verifies against the session's challenge. Error(State) unless the
/// session is awaiting a response.
bool verifier_finish(VerifierSession& session, const ResponseMessage& resp);

// ---------------------------------------------------------------------------
// Proxy RTI

/// Public keys that earlier RTI runs identified, by device label.
struct IdentifiedRegistry {
    std::map<std::string, PublicKey> entries;

    void add(const std::string& label, const PublicKey& pk) { entries[label] = pk; }
    bool contains(const PublicKey& pk) const;
};

/// The attestation carries the template in canonical (sorted) order.
ProxyAttestation proxy_sample_and_sign(const Template& bt, const SessionKeyPair& proxy_keys);

/// Error(UnidentifiedProxy) when the proxy key is not registered,
/// Error(Integrity) when the signature does not cover the template.
Template verifier_check_proxy(const ProxyAttestation& att, const IdentifiedRegistry& registry);

// ---------------------------------------------------------------------------
// Naive challenge-response baseline: no device binding at all.

class NaiveVerifierSession {
public:
    VerifierState state() const { return state_; }
    std::optional<bool> decision() const { return decision_; }

private:
    friend std::pair<NaiveVerifierSession, NaiveChallenge> naive_verifier_start(const PublicKey&, Rng&);
    friend bool naive_verifier_finish(NaiveVerifierSession&, const NaiveResponse&);

    Bytes c_;
    PublicKey group_pk_;
    VerifierState state_ = VerifierState::Started;
    std::optional<bool> decision_;
};

inline constexpr std::size_t kNaiveChallengeBytes = 32;

std::pair<NaiveVerifierSession, NaiveChallenge> naive_verifier_start(const PublicKey& group_pk, Rng& rng);
NaiveResponse naive_prover_respond(const NaiveChallenge& c, const SessionKeyPair& keys);
/// Accepts whatever pk came with the response once its group credential
/// and the signature over c check out.
bool naive_verifier_finish(NaiveVerifierSession& session, const NaiveResponse& resp);

}  // namespace rti
