#include "rti/vault.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

namespace {

// Field construction runs the irreducibility self-test; do it once per spec.
const GaloisField& field_for(const FieldSpec& spec) {
    static std::mutex mu;
    static std::map<std::pair<int, std::uint64_t>, std::unique_ptr<GaloisField>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{spec.tau, spec.modulus}];
    if (!slot) slot = std::make_unique<GaloisField>(spec);
    return *slot;
}

const MinutiaCodec& codec_for(int tau) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<MinutiaCodec>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[tau];
    if (!slot) slot = std::make_unique<MinutiaCodec>(tau);
    return *slot;
}

std::string format_decimal(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

// Advances idx to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

}  // namespace

void VaultParams::validate() const {
    field_for(field);
    codec_for(field.tau);
    if (lp < d + 1) {
        throw Error(ErrorKind::Parameter, "lp=" + std::to_string(lp) + " is below d+1=" + std::to_string(d + 1));
    }
    if (!(w > 0) || w != std::floor(w)) {
        throw Error(ErrorKind::Parameter, "distance threshold w must be a positive integer");
    }
    if (!(beta >= 0)) throw Error(ErrorKind::Parameter, "angular weight beta must be non-negative");
    if (combo_cap == 0) throw Error(ErrorKind::Parameter, "combo_cap must be positive");
    const std::uint64_t space = std::uint64_t{1} << field.tau;
    if (lp + n_chaff > space) throw Error(ErrorKind::Parameter, "more vault points than field elements");
}

const char* to_string(OpenStatus s) {
    switch (s) {
        case OpenStatus::Recovered: return "recovered";
        case OpenStatus::TooFewCandidates: return "too-few-candidates";
        case OpenStatus::Exhausted: return "exhausted";
        case OpenStatus::CapReached: return "cap-reached";
    }
    return "unknown";
}

HelperData fv_gen(const Challenge& k, const Template& bt, const VaultParams& params, Rng& rng) {
    const GaloisField& field = field_for(params.field);
    const MinutiaCodec& codec = codec_for(params.field.tau);
    if (bt.size() < params.d + 1) {
        throw Error(ErrorKind::InsufficientMinutiae, "template has " + std::to_string(bt.size()) +
                                                         " minutiae, degree " + std::to_string(params.d) +
                                                         " needs at least " + std::to_string(params.d + 1));
    }
    HelperData hd;
    hd.params = params;
    hd.params.lp = std::min(params.lp, bt.size());
    hd.params.validate();

    const Polynomial poly = encode_secret(k, params.d, field);
    hd.params.khash = hash(k.bytes());

    std::unordered_set<std::uint32_t> used;
    std::vector<Minutia> genuine;
    hd.points.reserve(hd.params.lp + params.n_chaff);
    for (std::size_t i = 0; i < hd.params.lp; ++i) {
        const FieldElement x = codec.encode(bt.minutiae[i]);
        if (!used.insert(x.value).second) {
            throw Error(ErrorKind::DegenerateInput, "template minutiae share a lattice cell");
        }
        genuine.push_back(codec.decode(x));
        hd.points.emplace_back(x, poly_eval(field, poly, x));
    }

    const std::uint64_t space = std::uint64_t{1} << params.field.tau;
    for (std::size_t c = 0; c < params.n_chaff; ++c) {
        int rejects = 0;
        const auto reject = [&] {
            if (++rejects >= kChaffRejectLimit) {
                throw Error(ErrorKind::Saturation, "chaff generation failed after " +
                                                       std::to_string(kChaffRejectLimit) + " consecutive draws (" +
                                                       std::to_string(c) + " chaff placed)");
            }
        };
        FieldElement x;
        for (;;) {
            x = fe(static_cast<std::uint32_t>(rng.uniform(space)));
            if (used.count(x.value)) {
                reject();
                continue;
            }
            const Minutia m = codec.decode(x);
            const bool too_close = std::any_of(genuine.begin(), genuine.end(), [&](const Minutia& g) {
                return minutia_distance(m, g, params.beta) <= params.w;
            });
            if (too_close) {
                reject();
                continue;
            }
            break;
        }
        const FieldElement on_poly = poly_eval(field, poly, x);
        FieldElement y;
        do {
            y = fe(static_cast<std::uint32_t>(rng.uniform(space)));
        } while (y == on_poly);
        used.insert(x.value);
        hd.points.emplace_back(x, y);
    }

    // Fisher-Yates.
    for (std::size_t i = hd.points.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform(i));
        std::swap(hd.points[i - 1], hd.points[j]);
    }
    return hd;
}

std::vector<std::size_t> select_candidates(const HelperData& hd, const Template& query) {
    const MinutiaCodec& codec = codec_for(hd.params.field.tau);
    std::vector<Minutia> decoded;
    decoded.reserve(hd.points.size());
    for (const auto& [x, y] : hd.points) decoded.push_back(codec.decode(x));

    std::set<std::size_t> picked;
    for (const auto& q : query.minutiae) {
        const Minutia qq = codec.quantize(q);
        std::size_t best = decoded.size();
        double best_dist = 0;
        for (std::size_t i = 0; i < decoded.size(); ++i) {
            const double dist = minutia_distance(qq, decoded[i], hd.params.beta);
            if (best == decoded.size() || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        if (best < decoded.size() && best_dist <= hd.params.w) picked.insert(best);
    }
    return {picked.begin(), picked.end()};
}

OpenResult fv_open(const HelperData& hd, const Template& query) {
    const GaloisField& field = field_for(hd.params.field);
    const std::size_t need = hd.params.d + 1;

    OpenResult result;
    const auto cand = select_candidates(hd, query);
    result.candidates = cand.size();
    if (cand.size() < need) {
        result.status = OpenStatus::TooFewCandidates;
        return result;
    }

    std::vector<std::size_t> idx(need);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<Point> subset(need);
    do {
        if (result.attempts >= hd.params.combo_cap) {
            result.status = OpenStatus::CapReached;
            return result;
        }
        ++result.attempts;
        for (std::size_t i = 0; i < need; ++i) subset[i] = hd.points[cand[idx[i]]];
        const Polynomial p = lagrange_interpolate(field, subset, hd.params.d);
        SecretBits k = decode_secret(p, field);
        if (hash(k.bytes()) == hd.params.khash) {
            result.status = OpenStatus::Recovered;
            result.secret = std::move(k);
            return result;
        }
    } while (next_combination(idx, cand.size()));
    result.status = OpenStatus::Exhausted;
    return result;
}

std::string serialize_vault(const HelperData& hd) {
    const GaloisField& field = field_for(hd.params.field);
    const auto& p = hd.params;
    std::string out = "FVAULT1\n";
    out += "tau=" + std::to_string(p.field.tau) + " modulus=0x" + to_hex_fixed(p.field.modulus, 0) +
           " d=" + std::to_string(p.d) + " lp=" + std::to_string(p.lp) + " n=" + std::to_string(p.n_chaff) +
           " w=" + format_decimal(p.w) + " beta=" + format_decimal(p.beta) + "\n";
    out += "hk=" + p.khash.to_hex() + "\n";
    for (const auto& [x, y] : hd.points) {
        out += field.to_hex(x);
        out += ' ';
        out += field.to_hex(y);
        out += '\n';
    }
    return out;
}

HelperData deserialize_vault(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) {
            lines.push_back(text);
            break;
        }
        lines.push_back(text.substr(0, nl));
        text.remove_prefix(nl + 1);
    }
    const auto fail = [](std::size_t line, const std::string& why) {
        return Error(ErrorKind::Parse, "vault line " + std::to_string(line) + ": " + why);
    };
    if (lines.empty() || lines[0] != "FVAULT1") throw fail(1, "bad magic, expected FVAULT1");
    if (lines.size() < 3) throw fail(lines.size() + 1, "truncated header");

    HelperData hd;
    auto& p = hd.params;
    {
        // Fixed key order; every token must be present exactly once.
        static constexpr std::string_view keys[] = {"tau", "modulus", "d", "lp", "n", "w", "beta"};
        std::string_view rest = lines[1];
        std::string_view values[7];
        for (std::size_t i = 0; i < 7; ++i) {
            const auto sp = rest.find(' ');
            const std::string_view tok = rest.substr(0, sp);
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
            const std::string prefix = std::string(keys[i]) + "=";
            if (tok.substr(0, prefix.size()) != prefix || tok.size() == prefix.size()) {
                throw fail(2, "expected '" + prefix + "<value>'");
            }
            values[i] = tok.substr(prefix.size());
        }
        if (!rest.empty()) throw fail(2, "unexpected trailing content");

        const auto uint_of = [&](std::string_view s) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail(2, "'" + std::string(s) + "' is not an integer");
            return v;
        };
        p.field.tau = static_cast<int>(uint_of(values[0]));
        if (values[1].substr(0, 2) != "0x") throw fail(2, "modulus must be 0x-prefixed hex");
        const auto mod = parse_hex_u64(values[1].substr(2));
        if (!mod) throw fail(2, "modulus is not hex");
        p.field.modulus = *mod;
        p.d = uint_of(values[2]);
        p.lp = uint_of(values[3]);
        p.n_chaff = uint_of(values[4]);
        p.w = static_cast<double>(uint_of(values[5]));
        double beta = 0;
        auto [ptr, ec] = std::from_chars(values[6].data(), values[6].data() + values[6].size(), beta);
        if (ec != std::errc{} || ptr != values[6].data() + values[6].size()) throw fail(2, "beta is not a decimal");
        p.beta = beta;
        try {
            p.validate();
        } catch (const Error& e) {
            throw fail(2, e.what());
        }
    }

    if (lines[2].substr(0, 3) != "hk=") throw fail(3, "expected hk=<64 hex>");
    try {
        p.khash = Digest::from_hex(lines[2].substr(3));
    } catch (const Error&) {
        throw fail(3, "hk must be 64 hex digits");
    }
    if (to_hex(p.khash.bytes) != lines[2].substr(3)) throw fail(3, "hk must be lowercase");

    const GaloisField& field = field_for(p.field);
    const std::size_t expected = p.lp + p.n_chaff;
    const std::size_t got = lines.size() - 3;
    if (got != expected) {
        throw fail(std::min(lines.size(), 3 + expected) + (got < expected ? 1 : 0),
                   "point count mismatch: header declares " + std::to_string(expected) + ", file has " +
                       std::to_string(got));
    }
    const auto width = static_cast<std::size_t>(p.field.hex_digits());
    std::unordered_set<std::uint32_t> seen;
    hd.points.reserve(expected);
    for (std::size_t i = 3; i < lines.size(); ++i) {
        const std::string_view ln = lines[i];
        if (ln.size() != 2 * width + 1 || ln[width] != ' ') throw fail(i + 1, "expected '<X hex> <Y hex>'");
        FieldElement x, y;
        try {
            x = field.from_hex(ln.substr(0, width));
            y = field.from_hex(ln.substr(width + 1));
        } catch (const Error& e) {
            throw fail(i + 1, e.what());
        }
        if (field.to_hex(x) != ln.substr(0, width) || field.to_hex(y) != ln.substr(width + 1)) {
            throw fail(i + 1, "hex must be lowercase");
        }
        if (!seen.insert(x.value).second) throw fail(i + 1, "duplicate X " + field.to_hex(x));
        hd.points.emplace_back(x, y);
    }
    return hd;
}

std::size_t count_spurious_polynomials(const HelperData& hd, const Polynomial& secret_poly,
                                       std::size_t min_agreement) {
    const GaloisField& field = field_for(hd.params.field);
    const std::size_t need = hd.params.d + 1;
    const std::size_t n = hd.points.size();
    if (n < need) return 0;

    std::set<std::vector<std::uint32_t>> found;
    std::vector<std::size_t> idx(need);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<Point> subset(need);
    do {
        for (std::size_t i = 0; i < need; ++i) subset[i] = hd.points[idx[i]];
        const Polynomial p = lagrange_interpolate(field, subset, hd.params.d);
        if (p == secret_poly) continue;
        std::size_t agree = 0;
        for (const auto& [x, y] : hd.points) agree += poly_eval(field, p, x) == y;
        if (agree >= min_agreement) {
            std::vector<std::uint32_t> key;
            for (auto c : p.coefficients) key.push_back(c.value);
            found.insert(std::move(key));
        }
    } while (next_combination(idx, n));
    return found.size();
}

}  // namespace rti
