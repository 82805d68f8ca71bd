#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rti/gf.hpp"
#include "rti/hex.hpp"

namespace rti {

class Rng;

/// Coefficients a_0..a_d, index = power of x. The degree bound is
/// structural: trailing zero coefficients are kept.
struct Polynomial {
    std::vector<FieldElement> coefficients;

    std::size_t degree_bound() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    bool operator==(const Polynomial&) const = default;
};

/// Bit string, most-significant bit first, packed into bytes with the
/// final byte zero-padded on the right.
class SecretBits {
public:
    SecretBits() = default;
    explicit SecretBits(std::size_t bit_length);
    SecretBits(Bytes packed, std::size_t bit_length);

    static SecretBits random(std::size_t bit_length, Rng& rng);
    // ceil(bit_length/4) hex digits, MSB first.
    static SecretBits from_hex(std::string_view hex, std::size_t bit_length);

    std::size_t size() const { return bit_length_; }
    bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1; }
    void set_bit(std::size_t i, bool v);

    const Bytes& bytes() const { return bytes_; }
    std::string to_hex() const;

    bool operator==(const SecretBits&) const = default;

private:
    Bytes bytes_;
    std::size_t bit_length_ = 0;
};

FieldElement poly_eval(const GaloisField& field, const Polynomial& p, FieldElement x);

using Point = std::pair<FieldElement, FieldElement>;

/// Unique polynomial of degree <= d through exactly d+1 points with
/// distinct x. Throws Error(Arity) on a wrong point count and
/// Error(DegenerateInput) on a repeated x.
Polynomial lagrange_interpolate(const GaloisField& field, std::span<const Point> points, std::size_t d);

/// Splits k into d+1 tau-bit coefficients, a_i = bits [i*tau, (i+1)*tau).
Polynomial encode_secret(const SecretBits& k, std::size_t d, const GaloisField& field);
SecretBits decode_secret(const Polynomial& p, const GaloisField& field);

}  // namespace rti
