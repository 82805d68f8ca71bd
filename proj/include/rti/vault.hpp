#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rti/biotemplate.hpp"
#include "rti/cryptoshim.hpp"
#include "rti/gf.hpp"
#include "rti/poly.hpp"

namespace rti {

class Rng;

/// The vault secret. For the RTI protocols this is the verifier's challenge,
/// so its length is tied to the vault geometry: (d+1)*tau bits.
using Challenge = SecretBits;

inline constexpr std::uint64_t kDefaultComboCap = 1'000'000;
inline constexpr int kChaffRejectLimit = 10'000;

/// Public parameters published with the helper data, plus the opener-side
/// combination budget (which is not serialized).
struct VaultParams {
    FieldSpec field;
    std::size_t d = 9;
    std::size_t lp = 20;
    std::size_t n_chaff = 200;
    double w = kDefaultW;
    double beta = kDefaultBeta;
    Digest khash;
    std::uint64_t combo_cap = kDefaultComboCap;

    std::size_t secret_bits() const { return (d + 1) * static_cast<std::size_t>(field.tau); }
    // Throws Error(Parameter) on an inconsistent geometry.
    void validate() const;
    bool operator==(const VaultParams&) const = default;
};

/// FV helper data: shuffled genuine and chaff points with the public parameters.
struct HelperData {
    VaultParams params;
    std::vector<Point> points;

    bool operator==(const HelperData&) const = default;
};

/// Locks k under the first min(params.lp, |bt|) minutiae of bt. The
/// returned params carry the effective lp and H(k).
///
/// Chaff points are drawn uniformly with rejection: X must be unused, the
/// decoded chaff minutia must lie farther than w from every genuine one,
/// and Y must differ from P_k(X). Ten thousand consecutive rejections
/// raise Error(Saturation).
HelperData fv_gen(const Challenge& k, const Template& bt, const VaultParams& params, Rng& rng);

enum class OpenStatus {
    Recovered,
    TooFewCandidates,  // fewer than d+1 vault points matched the query
    Exhausted,         // every (d+1)-subset tried, none hashed to H(k)
    CapReached,        // combo_cap interpolations without a match
};

const char* to_string(OpenStatus s);

struct OpenResult {
    OpenStatus status = OpenStatus::TooFewCandidates;
    std::optional<Challenge> secret;
    std::size_t candidates = 0;
    std::uint64_t attempts = 0;

    bool recovered() const { return status == OpenStatus::Recovered; }
};

/// Candidate vault indices for a query template: for each query minutia
/// (quantized to its lattice cell), the nearest vault point by
/// minutia_distance on decoded X, kept when the distance is at most w.
/// Ties go to the lower index. Returned sorted and deduplicated.
std::vector<std::size_t> select_candidates(const HelperData& hd, const Template& query);

/// Tries (d+1)-subsets of the candidate set in lexicographic order and
/// returns the first whose interpolated secret hashes to H(k).
OpenResult fv_open(const HelperData& hd, const Template& query);

std::string serialize_vault(const HelperData& hd);
/// Errors are Error(Parse) naming the offending 1-based line.
HelperData deserialize_vault(std::string_view text);

/// Distinct degree-<=d polynomials other than `secret_poly` that agree
/// with at least `min_agreement` vault points, found by interpolating
/// every (d+1)-subset. Toy-scale analysis only.
std::size_t count_spurious_polynomials(const HelperData& hd, const Polynomial& secret_poly,
                                       std::size_t min_agreement);

}  // namespace rti
