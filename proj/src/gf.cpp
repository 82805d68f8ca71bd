#include "rti/gf.hpp"

#include <bit>
#include <utility>

#include "rti/error.hpp"
#include "rti/hex.hpp"

namespace rti {

int gf2_degree(std::uint64_t a) {
    return a == 0 ? -1 : std::bit_width(a) - 1;
}

std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b != 0) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t m) {
    const int dm = gf2_degree(m);
    for (int da = gf2_degree(a); da >= dm; da = gf2_degree(a)) {
        a ^= m << (da - dm);
    }
    return a;
}

bool is_irreducible(std::uint64_t poly) {
    const int deg = gf2_degree(poly);
    if (deg < 1) return false;
    for (int d = 1; d <= deg / 2; ++d) {
        for (std::uint64_t f = std::uint64_t{1} << d; f < (std::uint64_t{1} << (d + 1)); ++f) {
            if (gf2_mod(poly, f) == 0) return false;
        }
    }
    return true;
}

GaloisField::GaloisField(FieldSpec spec) : spec_(spec) {
    if (spec.tau < 1 || spec.tau > FieldSpec::kMaxTau) {
        throw Error(ErrorKind::Parameter, "field width tau must be in [1, 31], got " + std::to_string(spec.tau));
    }
    if (gf2_degree(spec.modulus) != spec.tau || (spec.modulus & 1) == 0) {
        throw Error(ErrorKind::Parameter, "modulus must have degree tau and a nonzero constant term");
    }
    if (!is_irreducible(spec.modulus)) {
        throw Error(ErrorKind::Parameter, "modulus 0x" + to_hex_fixed(spec.modulus, 0) + " is reducible");
    }
}

FieldElement GaloisField::mul(FieldElement a, FieldElement b) const {
    std::uint64_t r = 0;
    const std::uint64_t av = a.value;
    for (int i = 0; i < spec_.tau; ++i) r ^= (av << i) & (std::uint64_t{0} - ((b.value >> i) & 1));
    // Fold the high half back with x^tau = low(modulus).
    const std::uint64_t low = spec_.modulus ^ (std::uint64_t{1} << spec_.tau);
    const std::uint64_t mask = spec_.order_mask();
    while (const std::uint64_t hi = r >> spec_.tau) r = (r & mask) ^ clmul(hi, low);
    return fe(static_cast<std::uint32_t>(r));
}

FieldElement GaloisField::inv(FieldElement a) const {
    if (a.value == 0) {
        throw Error(ErrorKind::NonInvertible, "zero has no multiplicative inverse");
    }
    // Extended Euclid in GF(2)[x]: invariants u = g1*a, v = g2*a (mod modulus).
    std::uint64_t u = a.value, v = spec_.modulus;
    std::uint64_t g1 = 1, g2 = 0;
    while (u != 1) {
        int j = gf2_degree(u) - gf2_degree(v);
        if (j < 0) {
            std::swap(u, v);
            std::swap(g1, g2);
            j = -j;
        }
        u ^= v << j;
        g1 ^= g2 << j;
    }
    return fe(static_cast<std::uint32_t>(gf2_mod(g1, spec_.modulus)));
}

FieldElement GaloisField::pow(FieldElement a, std::uint64_t e) const {
    FieldElement r = fe(1);
    while (e != 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::string GaloisField::to_hex(FieldElement a) const {
    return to_hex_fixed(a.value, spec_.hex_digits());
}

FieldElement GaloisField::from_hex(std::string_view hex) const {
    if (static_cast<int>(hex.size()) != spec_.hex_digits()) {
        throw Error(ErrorKind::Parse, "field element '" + std::string(hex) + "' must have exactly " +
                                          std::to_string(spec_.hex_digits()) + " hex digits");
    }
    const auto v = parse_hex_u64(hex);
    if (!v || !contains(fe(static_cast<std::uint32_t>(*v)))) {
        throw Error(ErrorKind::Parse, "invalid field element '" + std::string(hex) + "'");
    }
    return fe(static_cast<std::uint32_t>(*v));
}

}  // namespace rti
