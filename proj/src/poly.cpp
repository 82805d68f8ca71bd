#include "rti/poly.hpp"

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

SecretBits::SecretBits(std::size_t bit_length) : bytes_((bit_length + 7) / 8, 0), bit_length_(bit_length) {}

SecretBits::SecretBits(Bytes packed, std::size_t bit_length) : bytes_(std::move(packed)), bit_length_(bit_length) {
    if (bytes_.size() != (bit_length + 7) / 8) {
        throw Error(ErrorKind::Length, "packed secret has " + std::to_string(bytes_.size()) + " bytes, expected " +
                                           std::to_string((bit_length + 7) / 8));
    }
    if (bit_length % 8 != 0) {
        const auto pad_mask = static_cast<std::uint8_t>(0xff >> (bit_length % 8));
        if (bytes_.back() & pad_mask) throw Error(ErrorKind::Length, "secret padding bits must be zero");
    }
}

SecretBits SecretBits::random(std::size_t bit_length, Rng& rng) {
    SecretBits s(bit_length);
    for (std::size_t i = 0; i < bit_length; ++i) s.set_bit(i, rng.next_u64() >> 63);
    return s;
}

SecretBits SecretBits::from_hex(std::string_view hex, std::size_t bit_length) {
    const std::size_t digits = (bit_length + 3) / 4;
    if (hex.size() != digits) {
        throw Error(ErrorKind::Length, "secret hex must have " + std::to_string(digits) + " digits, got " +
                                           std::to_string(hex.size()));
    }
    std::string padded(hex);
    if (padded.size() % 2) padded.push_back('0');
    auto bytes = rti::from_hex(padded);
    if (!bytes) throw Error(ErrorKind::Parse, "secret is not valid hex");
    return SecretBits(std::move(*bytes), bit_length);
}

void SecretBits::set_bit(std::size_t i, bool v) {
    const auto mask = static_cast<std::uint8_t>(0x80 >> (i % 8));
    if (v) {
        bytes_[i / 8] |= mask;
    } else {
        bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
    }
}

std::string SecretBits::to_hex() const {
    auto s = rti::to_hex(bytes_);
    s.resize((bit_length_ + 3) / 4);
    return s;
}

FieldElement poly_eval(const GaloisField& field, const Polynomial& p, FieldElement x) {
    FieldElement acc{};
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
        acc = field.add(field.mul(acc, x), *it);
    }
    return acc;
}

Polynomial lagrange_interpolate(const GaloisField& field, std::span<const Point> points, std::size_t d) {
    const std::size_t n = d + 1;
    if (points.size() != n) {
        throw Error(ErrorKind::Arity, "interpolation of degree " + std::to_string(d) + " needs " +
                                          std::to_string(n) + " points, got " + std::to_string(points.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (points[i].first == points[j].first) {
                throw Error(ErrorKind::DegenerateInput, "repeated x-coordinate " + field.to_hex(points[i].first));
            }
        }
    }

    // master(x) = prod (x - x_i), degree n.
    std::vector<FieldElement> master(n + 1);
    master[0] = fe(1);
    for (std::size_t i = 0; i < n; ++i) {
        const FieldElement xi = points[i].first;
        for (std::size_t k = i + 1; k > 0; --k) {
            master[k] = field.add(master[k - 1], field.mul(master[k], xi));
        }
        master[0] = field.mul(master[0], xi);
    }

    std::vector<FieldElement> out(n);
    std::vector<FieldElement> basis(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FieldElement xi = points[i].first;
        // basis = master / (x - x_i) by synthetic division.
        FieldElement carry = master[n];
        for (std::size_t k = n; k-- > 0;) {
            basis[k] = carry;
            carry = field.add(master[k], field.mul(carry, xi));
        }
        // basis(x_i) = prod_{j != i} (x_i - x_j)
        FieldElement denom = fe(0);
        for (std::size_t k = n; k-- > 0;) denom = field.add(field.mul(denom, xi), basis[k]);
        const FieldElement scale = field.mul(points[i].second, field.inv(denom));
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = field.add(out[k], field.mul(scale, basis[k]));
        }
    }
    return Polynomial{std::move(out)};
}

Polynomial encode_secret(const SecretBits& k, std::size_t d, const GaloisField& field) {
    const std::size_t tau = static_cast<std::size_t>(field.tau());
    if (k.size() != (d + 1) * tau) {
        throw Error(ErrorKind::Length, "secret has " + std::to_string(k.size()) + " bits, degree " +
                                           std::to_string(d) + " needs " + std::to_string((d + 1) * tau));
    }
    Polynomial p;
    p.coefficients.resize(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        std::uint32_t v = 0;
        for (std::size_t b = 0; b < tau; ++b) v = (v << 1) | static_cast<std::uint32_t>(k.bit(i * tau + b));
        p.coefficients[i] = fe(v);
    }
    return p;
}

SecretBits decode_secret(const Polynomial& p, const GaloisField& field) {
    const std::size_t tau = static_cast<std::size_t>(field.tau());
    SecretBits k(p.coefficients.size() * tau);
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        const std::uint32_t v = p.coefficients[i].value;
        for (std::size_t b = 0; b < tau; ++b) k.set_bit(i * tau + b, (v >> (tau - 1 - b)) & 1);
    }
    return k;
}

}  // namespace rti
