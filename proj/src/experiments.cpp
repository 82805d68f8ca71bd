#include "rti/experiments.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <regex>
#include <thread>

#include "rti/cryptoshim.hpp"
#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {

std::size_t Dataset::template_count() const {
    std::size_t n = 0;
    for (const auto& s : subjects) n += s.samples.size();
    return n;
}

void Dataset::validate() const {
    if (subjects.size() < 2) throw Error(ErrorKind::Parameter, "dataset needs at least 2 subjects");
    for (const auto& s : subjects) {
        if (s.samples.size() < 2) {
            throw Error(ErrorKind::Parameter, "subject '" + s.id + "' has fewer than 2 samples");
        }
    }
}

Dataset synth_dataset(std::size_t subjects, std::size_t samples_per, const NoiseModel& noise, Rng& rng,
                      std::size_t minutiae) {
    if (subjects == 0 || samples_per == 0) throw Error(ErrorKind::Parameter, "dataset counts must be >= 1");
    noise.validate();
    Dataset d;
    for (std::size_t i = 0; i < subjects; ++i) {
        Subject s;
        char id[32];
        std::snprintf(id, sizeof id, "s%03zu", i + 1);
        s.id = id;
        const Template base = random_impostor_template(minutiae, rng);
        for (std::size_t j = 0; j < samples_per; ++j) s.samples.push_back(perturb_template(base, noise, rng));
        d.subjects.push_back(std::move(s));
    }
    return d;
}

Dataset load_dataset(const std::filesystem::path& dir, std::size_t count) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::Io, "dataset directory " + dir.string() + " not found");
    static const std::regex name(R"(^(.+)_(\d+)\.[A-Za-z0-9]+$)");
    std::map<std::string, std::map<long, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string fname = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(fname, m, name)) continue;
        files[m[1]][std::stol(m[2])] = entry.path();
    }
    if (files.empty()) throw Error(ErrorKind::Io, "no <subject>_<sample> files in " + dir.string());
    Dataset d;
    for (const auto& [id, samples] : files) {
        Subject s{id, {}};
        for (const auto& [n, path] : samples) s.samples.push_back(load_template(path, count));
        d.subjects.push_back(std::move(s));
    }
    d.validate();
    return d;
}

void save_dataset(const Dataset& data, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& s : data.subjects) {
        for (std::size_t j = 0; j < s.samples.size(); ++j) {
            save_template(dir / (s.id + "_" + std::to_string(j + 1) + ".txt"), s.samples[j]);
        }
    }
}

namespace {

struct Pair {
    const Template* enroll;
    const Template* query;
};

// One vault per trial: lock a fresh challenge under `enroll`, open with
// `query`. Streams are keyed by trial seed alone.
bool run_trial(const Pair& p, const VaultParams& params, std::uint64_t seed) {
    if (p.enroll->size() < params.d + 1) return false;
    const Rng base(seed);
    Rng chal_rng = base.fork("challenge");
    Rng vault_rng = base.fork("vault");
    const Challenge k = Challenge::random(params.secret_bits(), chal_rng);
    const HelperData hd = fv_gen(k, *p.enroll, params, vault_rng);
    const OpenResult r = fv_open(hd, *p.query);
    return r.recovered() && *r.secret == k;
}

std::size_t count_accepts(const std::vector<Pair>& pairs, const VaultParams& params, std::uint64_t stream,
                          unsigned threads) {
    std::vector<char> ok(pairs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pairs.size(); i = next++) {
            ok[i] = run_trial(pairs[i], params, Rng::derive_seed(stream, static_cast<std::uint64_t>(i)));
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
}

}  // namespace

std::vector<AccuracyRow> sweep_accuracy(const Dataset& data, std::size_t min_degree, std::size_t max_degree,
                                        const VaultParams& base, Rng& rng, const SweepOptions& opts) {
    data.validate();
    if (min_degree < 1 || min_degree > max_degree) {
        throw Error(ErrorKind::Parameter, "degree range must satisfy 1 <= min <= max");
    }
    if (max_degree >= base.lp) {
        throw Error(ErrorKind::Parameter,
                    "degree " + std::to_string(max_degree) + " must be below lp=" + std::to_string(base.lp));
    }
    if (opts.impostor_pairs == 0) throw Error(ErrorKind::Parameter, "impostor_pairs must be >= 1");

    std::vector<Pair> genuine;
    for (const auto& s : data.subjects) {
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
            for (std::size_t j = 0; j < s.samples.size(); ++j) {
                if (i != j) genuine.push_back({&s.samples[i], &s.samples[j]});
            }
        }
    }
    std::vector<Pair> impostor;
    const auto nsub = data.subjects.size();
    for (std::size_t t = 0; t < opts.impostor_pairs; ++t) {
        const std::size_t a = rng.uniform(nsub);
        std::size_t b = rng.uniform(nsub - 1);
        if (b >= a) ++b;
        const auto& sa = data.subjects[a].samples;
        const auto& sb = data.subjects[b].samples;
        const std::size_t ia = rng.uniform(sa.size());
        const std::size_t ib = rng.uniform(sb.size());
        impostor.push_back({&sa[ia], &sb[ib]});
    }
    const std::uint64_t genuine_stream = rng.next_u64();
    const std::uint64_t impostor_stream = rng.next_u64();
    const unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<AccuracyRow> rows;
    for (std::size_t d = min_degree; d <= max_degree; ++d) {
        VaultParams params = base;
        params.d = d;
        params.validate();
        AccuracyRow row;
        row.degree = d;
        row.genuine_trials = genuine.size();
        row.impostor_trials = impostor.size();
        row.genuine_accepts = count_accepts(genuine, params, genuine_stream, threads);
        row.impostor_accepts = count_accepts(impostor, params, impostor_stream, threads);
        row.gar = static_cast<double>(row.genuine_accepts) / static_cast<double>(row.genuine_trials);
        row.far = static_cast<double>(row.impostor_accepts) / static_cast<double>(row.impostor_trials);
        rows.push_back(row);
    }
    return rows;
}

std::string accuracy_csv(const std::vector<AccuracyRow>& rows) {
    std::string out = "degree,gar,far,genuine_trials,impostor_trials\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.4f,%.4f,%zu,%zu\n", r.degree, r.gar, r.far, r.genuine_trials,
                      r.impostor_trials);
        out += buf;
    }
    return out;
}

std::string host_identifier() {
    char name[256] = {};
    if (gethostname(name, sizeof name - 1) != 0) std::snprintf(name, sizeof name, "unknown");
    std::string id = name;
    utsname u{};
    if (uname(&u) == 0) id += std::string(" (") + u.sysname + " " + u.release + " " + u.machine + ")";
    id += " threads=" + std::to_string(std::thread::hardware_concurrency());
    return id;
}

namespace {

OpTiming summarize(std::string op, std::vector<double> ms) {
    OpTiming t;
    t.op = std::move(op);
    t.samples = ms.size();
    std::sort(ms.begin(), ms.end());
    const std::size_t n = ms.size();
    t.median_ms = n % 2 ? ms[n / 2] : (ms[n / 2 - 1] + ms[n / 2]) / 2;
    t.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(n);
    t.min_ms = ms.front();
    t.max_ms = ms.back();
    return t;
}

template <typename F>
double time_ms(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchReport bench_fv(const VaultParams& params, std::size_t trials, Rng& rng) {
    if (trials == 0) throw Error(ErrorKind::Parameter, "bench needs at least one trial");
    params.validate();
    std::vector<double> gen, open, sig, ver;
    const GroupAuthority group = GroupAuthority::create(rng);
    const SessionKeyPair keys = rot_gen_keys(group.master.sk, rng);
    for (std::size_t t = 0; t < trials; ++t) {
        const Template bt = random_impostor_template(params.lp, rng);
        const Challenge k = Challenge::random(params.secret_bits(), rng);
        HelperData hd;
        OpenResult r;
        Signature s;
        bool ok = false;
        gen.push_back(time_ms([&] { hd = fv_gen(k, bt, params, rng); }));
        open.push_back(time_ms([&] { r = fv_open(hd, bt); }));
        if (!r.recovered()) throw Error(ErrorKind::State, "bench: zero-noise opening failed");
        sig.push_back(time_ms([&] { s = sign(keys.sk, r.secret->bytes()); }));
        ver.push_back(time_ms([&] { ok = verify(keys.pk, s, k.bytes()); }));
        if (!ok) throw Error(ErrorKind::State, "bench: signature did not verify");
    }
    BenchReport rep;
    rep.host = host_identifier();
    rep.trials = trials;
    rep.ops = {summarize("fv_gen", gen), summarize("fv_open", open), summarize("sign", sig),
               summarize("verify", ver)};
    return rep;
}

std::string format_bench(const BenchReport& r) {
    std::string out = "host=" + r.host + "\ntrials=" + std::to_string(r.trials) + "\n";
    out += "op,samples,median_ms,mean_ms,min_ms,max_ms\n";
    char buf[160];
    for (const auto& t : r.ops) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%.4f,%.4f,%.4f\n", t.op.c_str(), t.samples, t.median_ms,
                      t.mean_ms, t.min_ms, t.max_ms);
        out += buf;
    }
    return out;
}

}  // namespace rti
