#include "rti/biotemplate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

namespace {

constexpr int kCoordBits = 9;  // log2(kImageSize)

std::string describe(const Minutia& m) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%d, %d, %.3f)", m.x, m.y, m.theta);
    return buf;
}

}  // namespace

void NoiseModel::validate() const {
    if (!(sigma_xy >= 0) || !(sigma_theta >= 0) || !(drop_rate >= 0 && drop_rate <= 1)) {
        throw Error(ErrorKind::Parameter, "noise model needs non-negative sigmas and drop_rate in [0,1]");
    }
}

void validate_minutia(const Minutia& m) {
    if (m.x < 0 || m.x >= kImageSize || m.y < 0 || m.y >= kImageSize) {
        throw Error(ErrorKind::Range, "minutia " + describe(m) + " lies outside the 512x512 image");
    }
    if (!(m.theta >= 0.0 && m.theta < 360.0)) {
        throw Error(ErrorKind::Range, "minutia " + describe(m) + " has orientation outside [0, 360)");
    }
}

MinutiaCodec::MinutiaCodec(int tau) : tau_(tau) {
    theta_bits_ = tau / 4;
    x_bits_ = (tau - theta_bits_) / 2;
    y_bits_ = tau - theta_bits_ - x_bits_;
    if (theta_bits_ < 1 || x_bits_ < 1 || y_bits_ > kCoordBits) {
        throw Error(ErrorKind::Parameter, "no minutia packing for a " + std::to_string(tau) + "-bit field");
    }
}

FieldElement MinutiaCodec::encode(const Minutia& m) const {
    validate_minutia(m);
    const auto xc = static_cast<std::uint32_t>(m.x) >> (kCoordBits - x_bits_);
    const auto yc = static_cast<std::uint32_t>(m.y) >> (kCoordBits - y_bits_);
    const std::uint32_t max_bin = (1u << theta_bits_) - 1;
    const auto bin = std::min(static_cast<std::uint32_t>(m.theta / theta_bin_width()), max_bin);
    return fe((xc << (y_bits_ + theta_bits_)) | (yc << theta_bits_) | bin);
}

Minutia MinutiaCodec::decode(FieldElement e) const {
    const std::uint32_t v = e.value;
    const std::uint32_t bin = v & ((1u << theta_bits_) - 1);
    const std::uint32_t yc = (v >> theta_bits_) & ((1u << y_bits_) - 1);
    const std::uint32_t xc = (v >> (theta_bits_ + y_bits_)) & ((1u << x_bits_) - 1);
    return Minutia{static_cast<int>(xc << (kCoordBits - x_bits_)), static_cast<int>(yc << (kCoordBits - y_bits_)),
                   bin * theta_bin_width()};
}

FieldElement encode_minutia(const Minutia& m) {
    static const MinutiaCodec codec(24);
    return codec.encode(m);
}

Minutia decode_minutia(FieldElement e) {
    static const MinutiaCodec codec(24);
    return codec.decode(e);
}

double minutia_distance(const Minutia& p, const Minutia& q, double beta) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dt = std::fabs(p.theta - q.theta);
    return std::sqrt(dx * dx + dy * dy) + beta * std::min(dt, 360.0 - dt);
}

bool has_distinct_encodings(const Template& t, const MinutiaCodec& codec) {
    std::unordered_set<std::uint32_t> seen;
    for (const auto& m : t.minutiae) {
        if (!seen.insert(codec.encode(m).value).second) return false;
    }
    return true;
}

Template select_top_minutiae(std::span<const RawMinutia> raw, std::size_t count, const MinutiaCodec& codec) {
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a].confidence > raw[b].confidence; });

    Template out;
    std::unordered_set<std::uint32_t> cells;
    for (std::size_t i : order) {
        if (out.size() == count) break;
        if (cells.insert(codec.encode(raw[i].minutia).value).second) out.minutiae.push_back(raw[i].minutia);
    }
    return out;
}

std::vector<RawMinutia> parse_minutiae(std::string_view text) {
    std::vector<RawMinutia> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }

        std::istringstream in(line);
        std::vector<std::string> cols;
        for (std::string tok; in >> tok;) cols.push_back(tok);
        const auto fail = [&](const std::string& why) {
            return Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + why);
        };
        if (cols.size() < 3 || cols.size() > 4) throw fail("expected 'x y theta [confidence]'");

        const auto parse_int = [&](const std::string& s) {
            int v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size()) throw fail("'" + s + "' is not an integer");
            return v;
        };
        const auto parse_real = [&](const std::string& s) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || !std::isfinite(v)) throw fail("'" + s + "' is not a number");
            return v;
        };

        RawMinutia r;
        r.minutia = Minutia{parse_int(cols[0]), parse_int(cols[1]), parse_real(cols[2])};
        if (cols.size() == 4) r.confidence = parse_real(cols[3]);
        try {
            validate_minutia(r.minutia);
        } catch (const Error& e) {
            throw Error(ErrorKind::Range, "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (r.confidence < 0) throw Error(ErrorKind::Range, "line " + std::to_string(line_no) + ": negative confidence");
        out.push_back(r);
        if (end == text.size()) break;
    }
    return out;
}

Template load_template(const std::filesystem::path& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open minutiae file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto raw = parse_minutiae(buf.str());
    return select_top_minutiae(raw, count);
}

std::string serialize_template(const Template& t) {
    static const MinutiaCodec codec(24);
    std::vector<Minutia> sorted = t.minutiae;
    std::sort(sorted.begin(), sorted.end(), [](const Minutia& a, const Minutia& b) {
        return codec.encode(a).value < codec.encode(b).value;
    });
    std::string out;
    char buf[64];
    for (const auto& m : sorted) {
        std::snprintf(buf, sizeof buf, "%d %d %.3f\n", m.x, m.y, m.theta);
        out += buf;
    }
    return out;
}

Template deserialize_template(std::string_view text) {
    Template t;
    for (const auto& r : parse_minutiae(text)) t.minutiae.push_back(r.minutia);
    return t;
}

void save_template(const std::filesystem::path& path, const Template& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << serialize_template(t);
}

Template perturb_template(const Template& t, const NoiseModel& noise, Rng& rng) {
    noise.validate();
    static const MinutiaCodec codec(24);
    Template out;
    std::unordered_set<std::uint32_t> cells;
    for (const auto& m : t.minutiae) {
        // Every draw is consumed regardless of outcome so that the stream
        // position does not depend on which minutiae survive.
        const bool dropped = rng.bernoulli(noise.drop_rate);
        const double nx = rng.normal(0.0, 1.0) * noise.sigma_xy;
        const double ny = rng.normal(0.0, 1.0) * noise.sigma_xy;
        const double nt = rng.normal(0.0, 1.0) * noise.sigma_theta;
        if (dropped) continue;

        Minutia p;
        p.x = std::clamp(static_cast<int>(std::lround(m.x + nx)), 0, kImageSize - 1);
        p.y = std::clamp(static_cast<int>(std::lround(m.y + ny)), 0, kImageSize - 1);
        double th = std::fmod(m.theta + nt, 360.0);
        if (th < 0) th += 360.0;
        if (th >= 360.0) th = 0.0;
        p.theta = th;
        if (cells.insert(codec.encode(p).value).second) out.minutiae.push_back(p);
    }
    return out;
}

Template random_impostor_template(std::size_t size, Rng& rng) {
    if (size < 1) throw Error(ErrorKind::Parameter, "template size must be at least 1");
    static const MinutiaCodec codec(24);
    Template out;
    std::unordered_set<std::uint32_t> cells;
    while (out.size() < size) {
        const auto v = static_cast<std::uint32_t>(rng.uniform(std::uint64_t{1} << 24));
        if (cells.insert(v).second) out.minutiae.push_back(codec.decode(fe(v)));
    }
    return out;
}

std::size_t shared_cells(const Template& a, const Template& b) {
    static const MinutiaCodec codec(24);
    std::set<std::uint32_t> ca;
    for (const auto& m : a.minutiae) ca.insert(codec.encode(m).value);
    std::size_t n = 0;
    for (const auto& m : b.minutiae) n += ca.count(codec.encode(m).value);
    return n;
}

}  // namespace rti
