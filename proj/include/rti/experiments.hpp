#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rti/biotemplate.hpp"
#include "rti/vault.hpp"

namespace rti {

class Rng;

struct AccuracyRow {
    std::size_t degree = 0;
    double gar = 0;
    double far = 0;
    std::size_t genuine_trials = 0;
    std::size_t impostor_trials = 0;
    std::size_t genuine_accepts = 0;
    std::size_t impostor_accepts = 0;
};

struct Subject {
    std::string id;
    std::vector<Template> samples;
};

struct Dataset {
    std::vector<Subject> subjects;

    std::size_t template_count() const;
    // Error(Parameter) unless there are two subjects with two samples each.
    void validate() const;
};

/// Independent random base template per subject; every sample is a
/// perturbation of it.
Dataset synth_dataset(std::size_t subjects, std::size_t samples_per, const NoiseModel& noise, Rng& rng,
                      std::size_t minutiae = 20);

/// Minutiae files named `<subject>_<sample>.<ext>`, top `count` minutiae each.
Dataset load_dataset(const std::filesystem::path& dir, std::size_t count = 20);
/// Writes `<subject>_<n>.txt` files in canonical template form.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);

struct SweepOptions {
    std::size_t impostor_pairs = 1000;
    unsigned threads = 0;  // 0: one per hardware thread
};

/// Genuine trials: every ordered pair of distinct samples of one subject,
/// vault from the first, opened with the second. Impostor trials: a seeded
/// sample of cross-subject pairs. A trial's challenge and vault randomness
/// depend on the trial index only, so every degree sees the same chaff
/// layout. Error(Parameter) if a degree is 0 or >= base.lp.
std::vector<AccuracyRow> sweep_accuracy(const Dataset& data, std::size_t min_degree, std::size_t max_degree,
                                        const VaultParams& base, Rng& rng, const SweepOptions& opts = {});

/// Header `degree,gar,far,genuine_trials,impostor_trials`, rates to 4 decimals.
std::string accuracy_csv(const std::vector<AccuracyRow>& rows);

struct OpTiming {
    std::string op;
    std::size_t samples = 0;
    double median_ms = 0;
    double mean_ms = 0;
    double min_ms = 0;
    double max_ms = 0;
};

struct BenchReport {
    std::string host;
    std::size_t trials = 0;
    std::vector<OpTiming> ops;  // fv_gen, fv_open, sign, verify
};

/// Wall-clock timings of each operation over `trials` honest runs.
/// Error(Parameter) when trials is 0.
BenchReport bench_fv(const VaultParams& params, std::size_t trials, Rng& rng);
std::string format_bench(const BenchReport& r);
std::string host_identifier();

}  // namespace rti
