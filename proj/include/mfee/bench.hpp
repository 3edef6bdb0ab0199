#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfee/distribution.hpp"

namespace mfee::bench {

enum class Method { ML, ME, MAP, MFEE };

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

/// The four three-state test distributions, by entropy: (a) 1.07, (b) 0.841,
/// (c) 0.498, (d) 0.0621 nats.
std::vector<std::pair<std::string, Distribution>> preset_distributions();

struct BenchmarkConfig {
    std::vector<std::pair<std::string, Distribution>> distributions;  // named
    std::vector<int> sample_sizes;
    int replicates = 100;
    std::uint64_t seed = 42;
    double smoothing = 1e-4;
    std::vector<Method> methods;

    static BenchmarkConfig defaults();
    static BenchmarkConfig from_json_file(const std::filesystem::path& path);
    static BenchmarkConfig from_json_text(const std::string& text);

    void validate() const;  // throws EstimationError on bad values
};

struct BenchmarkRecord {
    Method method;
    std::string dist_id;
    int sample_size = 0;
    int replicate = 0;
    double kl = 0;          // KL(truth || smoothed estimate), nats
    bool available = true;  // false only for MAP
};

struct AggregateRow {
    Method method;
    std::string dist_id;
    int sample_size = 0;
    std::optional<double> mean_kl;  // null when no replicate was available
    double stderr_kl = 0;
    int n_available = 0;

    bool operator==(const AggregateRow&) const = default;
};

/// Runs every (distribution, size, replicate, method) cell. Sampling depends
/// only on (seed, dist_id, size, replicate), so the record sequence is
/// deterministic and independent of the job count.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config, int jobs = 1);

/// Per-cell mean and standard error over available records, ordered by
/// (method, distribution, size).
std::vector<AggregateRow> aggregate(const std::vector<BenchmarkRecord>& records);

/// CSV schema: method,dist,sample_size,mean_kl,stderr_kl,n_available with a
/// header row, LF line endings, 12 significant digits; null means are empty.
void write_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path);
std::vector<AggregateRow> read_csv(const std::filesystem::path& path);

/// One panel per distribution, log-scaled sample-size axis, one polyline per
/// method; rows with a null mean are skipped.
void write_svg_chart(const std::vector<AggregateRow>& rows, const std::filesystem::path& path);

}  // namespace mfee::bench
