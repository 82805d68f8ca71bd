#include "rti/cryptoshim.hpp"

#include <sodium.h>

#include <cstring>

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw Error(ErrorKind::Key, "libsodium initialisation failed");
}

std::span<const std::uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void check_len(const Bytes& b, std::size_t want, const char* what) {
    if (b.size() != want) {
        throw Error(ErrorKind::Key, std::string(what) + " must be " + std::to_string(want) + " bytes, got " +
                                        std::to_string(b.size()));
    }
}

Bytes parse_key_file(std::string_view text, std::string_view field) {
    const std::string header = "alg=" + std::string(kSignatureAlgorithm) + "\n";
    if (text.substr(0, header.size()) != header) throw Error(ErrorKind::Key, "key file must start with " + header);
    text.remove_prefix(header.size());
    const std::string prefix = std::string(field) + "=";
    if (text.substr(0, prefix.size()) != prefix) throw Error(ErrorKind::Key, "key file lacks a " + prefix + " line");
    text.remove_prefix(prefix.size());
    if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
    auto bytes = from_hex(text);
    if (!bytes) throw Error(ErrorKind::Key, "key material is not hex");
    return *bytes;
}

}  // namespace

Digest Digest::from_hex(std::string_view hex) {
    const auto b = rti::from_hex(hex);
    if (!b || b->size() != 32) throw Error(ErrorKind::Parse, "digest must be 64 hex digits");
    Digest d;
    std::memcpy(d.bytes.data(), b->data(), 32);
    return d;
}

Digest hash(std::span<const std::uint8_t> message) {
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), message.data(), message.size());
    return d;
}

Digest hash(std::string_view message) { return hash(as_bytes(message)); }

SigningKeyPair generate_signing_keys(Rng& rng) {
    ensure_sodium();
    std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
    for (std::size_t i = 0; i < seed.size(); i += 8) {
        const std::uint64_t r = rng.next_u64();
        for (std::size_t j = 0; j < 8; ++j) seed[i + j] = static_cast<std::uint8_t>(r >> (8 * j));
    }
    SigningKeyPair kp;
    kp.pk.bytes.resize(crypto_sign_PUBLICKEYBYTES);
    kp.sk.bytes.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.pk.bytes.data(), kp.sk.bytes.data(), seed.data());
    sodium_memzero(seed.data(), seed.size());
    return kp;
}

Signature sign(const SecretKey& sk, std::span<const std::uint8_t> message) {
    ensure_sodium();
    check_len(sk.bytes, crypto_sign_SECRETKEYBYTES, "secret key");
    const Digest d = hash(message);
    Signature sig;
    sig.bytes.resize(crypto_sign_BYTES);
    crypto_sign_detached(sig.bytes.data(), nullptr, d.bytes.data(), d.bytes.size(), sk.bytes.data());
    return sig;
}

Signature sign(const SecretKey& sk, std::string_view message) { return sign(sk, as_bytes(message)); }

bool verify(const PublicKey& pk, const Signature& sig, std::span<const std::uint8_t> expected_message) {
    ensure_sodium();
    check_len(pk.bytes, crypto_sign_PUBLICKEYBYTES, "public key");
    if (sig.bytes.size() != crypto_sign_BYTES) return false;
    const Digest d = hash(expected_message);
    return crypto_sign_verify_detached(sig.bytes.data(), d.bytes.data(), d.bytes.size(), pk.bytes.data()) == 0;
}

bool verify(const PublicKey& pk, const Signature& sig, std::string_view expected_message) {
    return verify(pk, sig, as_bytes(expected_message));
}

GroupAuthority GroupAuthority::create(Rng& rng) { return GroupAuthority{generate_signing_keys(rng)}; }

SessionKeyPair rot_gen_keys(const SecretKey& group_master_sk, Rng& rng) {
    auto kp = generate_signing_keys(rng);
    SessionKeyPair out;
    out.group_cred = sign(group_master_sk, kp.pk.bytes);
    out.pk = std::move(kp.pk);
    out.sk = std::move(kp.sk);
    return out;
}

bool group_verify(const PublicKey& group_master_pk, const PublicKey& pk, const Signature& group_cred) {
    if (pk.bytes.size() != crypto_sign_PUBLICKEYBYTES) return false;
    return verify(group_master_pk, group_cred, pk.bytes);
}

std::string serialize_public_key(const PublicKey& pk) {
    return "alg=" + std::string(kSignatureAlgorithm) + "\npk=" + to_hex(pk.bytes) + "\n";
}

std::string serialize_secret_key(const SecretKey& sk) {
    return "alg=" + std::string(kSignatureAlgorithm) + "\nsk=" + to_hex(sk.bytes) + "\n";
}

PublicKey parse_public_key(std::string_view text) {
    PublicKey pk{parse_key_file(text, "pk")};
    check_len(pk.bytes, crypto_sign_PUBLICKEYBYTES, "public key");
    return pk;
}

SecretKey parse_secret_key(std::string_view text) {
    SecretKey sk{parse_key_file(text, "sk")};
    check_len(sk.bytes, crypto_sign_SECRETKEYBYTES, "secret key");
    return sk;
}

}  // namespace rti
