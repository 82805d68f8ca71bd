#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "rti/hex.hpp"

namespace rti {

class Rng;

struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    std::string to_hex() const { return rti::to_hex(bytes); }
    static Digest from_hex(std::string_view hex);  // Error(Parse) unless 64 hex digits
    bool operator==(const Digest&) const = default;
};

/// SHA-256.
Digest hash(std::span<const std::uint8_t> message);
Digest hash(std::string_view message);

inline constexpr std::string_view kSignatureAlgorithm = "ed25519";

struct PublicKey {
    Bytes bytes;
    bool operator==(const PublicKey&) const = default;
};

struct SecretKey {
    Bytes bytes;
};

struct Signature {
    Bytes bytes;
    bool operator==(const Signature&) const = default;
};

struct SigningKeyPair {
    PublicKey pk;
    SecretKey sk;
};

SigningKeyPair generate_signing_keys(Rng& rng);

/// Signs hash(message). The message itself is not recoverable from the
/// signature; verification needs the caller's expected message.
Signature sign(const SecretKey& sk, std::span<const std::uint8_t> message);
Signature sign(const SecretKey& sk, std::string_view message);
bool verify(const PublicKey& pk, const Signature& sig, std::span<const std::uint8_t> expected_message);
bool verify(const PublicKey& pk, const Signature& sig, std::string_view expected_message);

/// Simulated group credential: a signature over pk under one master key
/// shared by every legitimate RoT. Any RoT's credential verifies, and
/// nothing in it identifies which RoT issued it.
struct GroupAuthority {
    SigningKeyPair master;

    static GroupAuthority create(Rng& rng);
    const PublicKey& public_key() const { return master.pk; }
};

struct SessionKeyPair {
    PublicKey pk;
    SecretKey sk;
    Signature group_cred;
};

SessionKeyPair rot_gen_keys(const SecretKey& group_master_sk, Rng& rng);
bool group_verify(const PublicKey& group_master_pk, const PublicKey& pk, const Signature& group_cred);

// Key files: `alg=ed25519` then `pk=<hex>` or `sk=<hex>`.
std::string serialize_public_key(const PublicKey& pk);
std::string serialize_secret_key(const SecretKey& sk);
PublicKey parse_public_key(std::string_view text);
SecretKey parse_secret_key(std::string_view text);

}  // namespace rti
