#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rti/error.hpp"
#include "rti/experiments.hpp"
#include "rti/random.hpp"
#include "rti/simnet.hpp"
#include "rti/vault.hpp"

namespace {

using namespace rti;

enum Exit { kOk = 0, kInput = 1, kParameter = 2, kNoRecovery = 3 };

// Global settings; defaults mirror VaultParams.
struct CliConfig {
    std::uint64_t seed = 1;
    int tau = 24;
    std::string modulus = "0x100001B";
    std::size_t degree = 9;
    std::size_t lp = 20;
    std::size_t chaff = 200;
    double w = kDefaultW;
    double beta = kDefaultBeta;

    VaultParams params() const {
        VaultParams p;
        std::string_view m = modulus;
        if (m.rfind("0x", 0) == 0 || m.rfind("0X", 0) == 0) m.remove_prefix(2);
        const auto mod = parse_hex_u64(m);
        if (!mod) throw Error(ErrorKind::Parameter, "modulus must be hex, got '" + modulus + "'");
        p.field = FieldSpec{tau, *mod};
        p.d = degree;
        p.lp = lp;
        p.n_chaff = chaff;
        p.w = w;
        p.beta = beta;
        p.validate();
        return p;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error(ErrorKind::Io, "cannot write " + path);
}

// Input problems are 1, inconsistent parameters are 2.
int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parameter:
        case ErrorKind::InsufficientMinutiae:
        case ErrorKind::Length:
        case ErrorKind::Saturation:
        case ErrorKind::DegenerateInput:
        case ErrorKind::Arity:
            return kParameter;
        default:
            return kInput;
    }
}

int vault_gen(const CliConfig& cfg, const std::string& template_path, const std::string& secret_hex, bool random,
              const std::string& out_path) {
    const VaultParams params = cfg.params();
    const Template bt = load_template(template_path, params.lp);
    const Rng base(cfg.seed);
    Challenge k;
    if (random) {
        Rng r = base.fork("secret");
        k = Challenge::random(params.secret_bits(), r);
    } else {
        k = Challenge::from_hex(secret_hex, params.secret_bits());
    }
    Rng vault_rng = base.fork("vault");
    const HelperData hd = fv_gen(k, bt, params, vault_rng);
    write_file(out_path, serialize_vault(hd));
    std::cout << "hk=" << hd.params.khash.to_hex() << "\n";
    if (random) std::cout << "secret=" << k.to_hex() << "\n";
    return kOk;
}

int vault_open(const std::string& vault_path, const std::string& template_path) {
    const HelperData hd = deserialize_vault(read_file(vault_path));
    const Template query = load_template(template_path, hd.params.lp);
    const OpenResult r = fv_open(hd, query);
    if (!r.recovered()) {
        std::cerr << "no recovery: " << to_string(r.status) << " (" << r.candidates << " candidates, " << r.attempts
                  << " attempts)\n";
        return kNoRecovery;
    }
    std::cout << "secret=" << r.secret->to_hex() << "\n";
    return kOk;
}

int scenario_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& transcript_path) {
    Scenario s = load_scenario(path);
    if (seed) s.seed = *seed;
    const ScenarioOutcome o = run_scenario(s);
    if (!transcript_path.empty()) write_file(transcript_path, serialize_transcript(o.transcript));
    std::cout << format_outcome(o);
    return kOk;
}

std::pair<std::size_t, std::size_t> parse_degrees(const std::string& spec) {
    const auto colon = spec.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const auto d = std::stoul(spec, &used);
            if (used == spec.size()) return {d, d};
        } else {
            const std::string a = spec.substr(0, colon), b = spec.substr(colon + 1);
            std::size_t ua = 0, ub = 0;
            const auto lo = std::stoul(a, &ua), hi = std::stoul(b, &ub);
            if (ua == a.size() && ub == b.size()) return {lo, hi};
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Parse, "degrees must look like 7:12, got '" + spec + "'");
}

struct SweepArgs {
    std::string dataset;
    bool synthetic = false;
    std::string degrees = "7:12";
    std::string out;
    std::size_t subjects = 10;
    std::size_t samples = 5;
    std::size_t impostors = 1000;
    unsigned threads = 0;
};

int sweep(const CliConfig& cfg, const SweepArgs& a) {
    if (a.synthetic == !a.dataset.empty()) throw Error(ErrorKind::Parse, "give either --synthetic or a dataset directory");
    const auto [lo, hi] = parse_degrees(a.degrees);
    Rng rng(cfg.seed);
    Rng data_rng = rng.fork("dataset");
    const Dataset data = a.synthetic ? synth_dataset(a.subjects, a.samples, NoiseModel{}, data_rng)
                                     : load_dataset(a.dataset, cfg.lp);
    VaultParams base = cfg.params();
    Rng sweep_rng = rng.fork("sweep");
    const auto rows = sweep_accuracy(data, lo, hi, base, sweep_rng, SweepOptions{a.impostors, a.threads});
    const std::string csv = accuracy_csv(rows);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        write_file(a.out, csv);
        std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
    }
    return kOk;
}

int bench(const CliConfig& cfg, std::size_t trials, const std::string& out) {
    Rng rng(cfg.seed);
    const std::string report = format_bench(bench_fv(cfg.params(), trials, rng));
    if (!out.empty()) write_file(out, report);
    std::cout << report;
    return kOk;
}

int dataset_synth(const CliConfig& cfg, std::size_t subjects, std::size_t samples, const std::string& out) {
    Rng rng = Rng(cfg.seed).fork("dataset");
    const Dataset d = synth_dataset(subjects, samples, NoiseModel{}, rng);
    save_dataset(d, out);
    std::cout << "wrote " << d.template_count() << " templates to " << out << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Remote trust via fuzzy-vault biometric binding: vaults, protocol scenarios, experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CliConfig cfg;
    auto* seed_opt = app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--tau", cfg.tau, "field width in bits")->capture_default_str();
    app.add_option("--modulus", cfg.modulus, "field modulus, hex")->capture_default_str();
    app.add_option("--degree", cfg.degree, "polynomial degree d")->capture_default_str();
    app.add_option("--lp", cfg.lp, "genuine points per vault")->capture_default_str();
    app.add_option("--chaff", cfg.chaff, "chaff points per vault")->capture_default_str();
    app.add_option("--w", cfg.w, "matching threshold")->capture_default_str();
    app.add_option("--beta", cfg.beta, "orientation weight in the distance")->capture_default_str();

    std::function<int()> action;

    auto* vault = app.add_subcommand("vault", "lock or unlock a secret")->require_subcommand(1);
    vault->fallthrough();

    std::string gen_template, gen_secret, gen_out;
    bool gen_random = false;
    auto* gen = vault->add_subcommand("gen", "lock a secret under a minutiae file");
    gen->fallthrough();
    gen->add_option("--template", gen_template, "minutiae file")->required();
    auto* secret_opt = gen->add_option("--secret", gen_secret, "secret as (d+1)*tau/4 hex digits");
    gen->add_flag("--random", gen_random, "draw the secret from the seed")->excludes(secret_opt);
    gen->add_option("--out", gen_out, "vault file to write")->required();
    gen->callback([&] {
        if (!gen_random && gen_secret.empty()) throw CLI::ValidationError("--secret", "give --secret or --random");
        action = [&] { return vault_gen(cfg, gen_template, gen_secret, gen_random, gen_out); };
    });

    std::string open_vault, open_template;
    auto* open = vault->add_subcommand("open", "recover a secret with a minutiae file");
    open->fallthrough();
    open->add_option("--vault", open_vault, "vault file")->required();
    open->add_option("--template", open_template, "minutiae file")->required();
    open->callback([&] { action = [&] { return vault_open(open_vault, open_template); }; });

    std::string scen_file, scen_transcript;
    auto* scenario = app.add_subcommand("scenario", "simulate a protocol run")->require_subcommand(1);
    scenario->fallthrough();
    auto* run = scenario->add_subcommand("run", "run a scenario file and print the decision");
    run->fallthrough();
    run->add_option("file", scen_file, "scenario file")->required();
    run->add_option("--transcript", scen_transcript, "write the frame transcript here");
    run->callback([&] {
        action = [&] {
            std::optional<std::uint64_t> seed;
            if (seed_opt->count() > 0) seed = cfg.seed;
            return scenario_run(scen_file, seed, scen_transcript);
        };
    });

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "GAR/FAR against polynomial degree, as CSV");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("dataset", sw.dataset, "directory of <subject>_<sample> minutiae files");
    sweep_cmd->add_flag("--synthetic", sw.synthetic, "use a synthetic dataset instead");
    sweep_cmd->add_option("--degrees", sw.degrees, "degree range lo:hi")->capture_default_str();
    sweep_cmd->add_option("--out", sw.out, "CSV file (default: standard output)");
    sweep_cmd->add_option("--subjects", sw.subjects, "synthetic subjects")->capture_default_str();
    sweep_cmd->add_option("--samples", sw.samples, "synthetic samples per subject")->capture_default_str();
    sweep_cmd->add_option("--impostors", sw.impostors, "cross-subject pairs")->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (0: all cores)")->capture_default_str();
    sweep_cmd->callback([&] { action = [&] { return sweep(cfg, sw); }; });

    std::size_t trials = 1000;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "timing report for vault and signature operations");
    bench_cmd->fallthrough();
    bench_cmd->add_option("--trials", trials, "executions per operation")->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "also write the report here");
    bench_cmd->callback([&] { action = [&] { return bench(cfg, trials, bench_out); }; });

    std::size_t ds_subjects = 10, ds_samples = 5;
    std::string ds_out;
    auto* dataset = app.add_subcommand("dataset", "dataset utilities")->require_subcommand(1);
    dataset->fallthrough();
    auto* synth = dataset->add_subcommand("synth", "write a synthetic dataset");
    synth->fallthrough();
    synth->add_option("--subjects", ds_subjects)->capture_default_str();
    synth->add_option("--samples", ds_samples)->capture_default_str();
    synth->add_option("--out", ds_out, "output directory")->required();
    synth->callback([&] { action = [&] { return dataset_synth(cfg, ds_subjects, ds_samples, ds_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }

    const bool lenient_params = sweep_cmd->parsed() || bench_cmd->parsed() || dataset->parsed();
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lenient_params ? kInput : exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
}
