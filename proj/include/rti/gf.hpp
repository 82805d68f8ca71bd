#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rti {

/// Binary field GF(2^tau) described by its degree-tau modulus.
/// Bit i of `modulus` is the coefficient of x^i.
struct FieldSpec {
    int tau = 24;
    std::uint64_t modulus = 0x100001B;  // x^24 + x^4 + x^3 + x + 1

    static constexpr int kMaxTau = 31;

    bool operator==(const FieldSpec&) const = default;

    std::uint32_t order_mask() const { return static_cast<std::uint32_t>((std::uint64_t{1} << tau) - 1); }
    int hex_digits() const { return (tau + 3) / 4; }
};

/// Element of GF(2^tau) as a GF(2)[x] polynomial of degree < tau.
struct FieldElement {
    std::uint32_t value = 0;

    auto operator<=>(const FieldElement&) const = default;
};

constexpr FieldElement fe(std::uint32_t v) { return FieldElement{v}; }

/// Field arithmetic bound to one FieldSpec. Construction validates the
/// modulus (degree, constant term, irreducibility) and throws
/// Error(Parameter) if it is unusable.
class GaloisField {
public:
    explicit GaloisField(FieldSpec spec = {});

    const FieldSpec& spec() const { return spec_; }
    int tau() const { return spec_.tau; }

    bool contains(FieldElement a) const { return (a.value & ~spec_.order_mask()) == 0; }

    FieldElement add(FieldElement a, FieldElement b) const { return fe(a.value ^ b.value); }
    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, b); }
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
    FieldElement pow(FieldElement a, std::uint64_t e) const;

    std::string to_hex(FieldElement a) const;
    // Exactly hex_digits() hex characters; throws Error(Parse) otherwise.
    FieldElement from_hex(std::string_view hex) const;

private:
    FieldSpec spec_;
};

// Trial division by every polynomial of degree 1..floor(deg/2).
bool is_irreducible(std::uint64_t poly);

// Carry-less product and remainder in GF(2)[x]; exposed for tests and
// the irreducibility check.
std::uint64_t clmul(std::uint64_t a, std::uint64_t b);
std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t m);
int gf2_degree(std::uint64_t a);

}  // namespace rti
