#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rti/gf.hpp"

namespace rti {

class Rng;

inline constexpr int kImageSize = 512;
inline constexpr double kDefaultBeta = 0.2;
inline constexpr double kDefaultW = 20.0;

/// Fingerprint feature point: pixel column, pixel row, orientation in degrees.
struct Minutia {
    int x = 0;
    int y = 0;
    double theta = 0.0;

    bool operator==(const Minutia&) const = default;
};

struct RawMinutia {
    Minutia minutia;
    double confidence = 1.0;
};

struct Template {
    std::vector<Minutia> minutiae;

    std::size_t size() const { return minutiae.size(); }
    bool operator==(const Template&) const = default;
};

struct NoiseModel {
    double sigma_xy = 3.0;
    double sigma_theta = 5.0;
    double drop_rate = 0.1;

    void validate() const;
};

/// Packs a minutia into a tau-bit field element as x | y | theta-bin,
/// most significant first. At tau = 24 the split is 9/9/6 bits (full
/// 512-pixel resolution, 5.625 degree bins). Smaller fields keep the same
/// layout rule with coarser cells; they exist for exhaustive testing.
class MinutiaCodec {
public:
    explicit MinutiaCodec(int tau = 24);

    int tau() const { return tau_; }
    int x_bits() const { return x_bits_; }
    int y_bits() const { return y_bits_; }
    int theta_bits() const { return theta_bits_; }
    double theta_bin_width() const { return 360.0 / static_cast<double>(1u << theta_bits_); }

    // Throws Error(Range) for coordinates outside [0,512) or theta outside [0,360).
    FieldElement encode(const Minutia& m) const;
    // Lower edge of the lattice cell.
    Minutia decode(FieldElement e) const;
    // decode(encode(m)).
    Minutia quantize(const Minutia& m) const { return decode(encode(m)); }

private:
    int tau_;
    int x_bits_;
    int y_bits_;
    int theta_bits_;
};

void validate_minutia(const Minutia& m);

FieldElement encode_minutia(const Minutia& m);
Minutia decode_minutia(FieldElement e);

/// Euclidean distance on (x, y) plus beta times the wrap-around angular
/// difference min(|a-b|, 360-|a-b|).
double minutia_distance(const Minutia& p, const Minutia& q, double beta = kDefaultBeta);

bool has_distinct_encodings(const Template& t, const MinutiaCodec& codec = MinutiaCodec{});

/// Highest-confidence `count` entries (ties keep input order), after
/// dropping any entry whose lattice cell is already taken.
Template select_top_minutiae(std::span<const RawMinutia> raw, std::size_t count,
                             const MinutiaCodec& codec = MinutiaCodec{});

/// Parses the `x y theta [confidence]` text format. Errors carry the
/// 1-based line number.
std::vector<RawMinutia> parse_minutiae(std::string_view text);
Template load_template(const std::filesystem::path& path, std::size_t count);

/// Canonical text form: one `x y theta` line per minutia, sorted by
/// (x, y, theta-bin), theta printed with three decimals.
std::string serialize_template(const Template& t);
Template deserialize_template(std::string_view text);
void save_template(const std::filesystem::path& path, const Template& t);

Template perturb_template(const Template& t, const NoiseModel& noise, Rng& rng);
Template random_impostor_template(std::size_t size, Rng& rng);

// Number of lattice cells (under the default codec) present in both templates.
std::size_t shared_cells(const Template& a, const Template& b);

}  // namespace rti
