#include "mfee/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mfee/baselines.hpp"
#include "mfee/estimator.hpp"
#include "mfee/info.hpp"
#include "mfee/rng.hpp"

namespace mfee::bench {

using nlohmann::json;

const char* method_name(Method m) {
    switch (m) {
        case Method::ML: return "ML";
        case Method::ME: return "ME";
        case Method::MAP: return "MAP";
        case Method::MFEE: return "MFEE";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& name) {
    for (Method m : {Method::ML, Method::ME, Method::MAP, Method::MFEE})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

std::vector<std::pair<std::string, Distribution>> preset_distributions() {
    return {
        {"a", make_distribution({0.431, 0.337, 0.232})},
        {"b", make_distribution({0.677, 0.206, 0.117})},
        {"c", make_distribution({0.851, 0.117, 0.0320})},
        {"d", make_distribution({0.9898, 0.00810, 0.00210})},
    };
}

BenchmarkConfig BenchmarkConfig::defaults() {
    BenchmarkConfig config;
    config.distributions = preset_distributions();
    config.sample_sizes = {2, 5, 10, 20, 50, 100, 200, 500, 1000};
    config.methods = {Method::ML, Method::ME, Method::MAP, Method::MFEE};
    return config;
}

BenchmarkConfig BenchmarkConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("config parse error: ") + e.what());
    }
    BenchmarkConfig config = defaults();
    try {
        if (j.contains("distributions")) {
            config.distributions.clear();
            for (const auto& [name, probs] : j.at("distributions").items())
                config.distributions.emplace_back(
                    name, make_distribution(probs.get<std::vector<double>>()));
        }
        if (j.contains("sample_sizes"))
            config.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
        if (j.contains("replicates")) config.replicates = j.at("replicates").get<int>();
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("smoothing")) config.smoothing = j.at("smoothing").get<double>();
        if (j.contains("methods")) {
            config.methods.clear();
            for (const auto& name : j.at("methods")) {
                const auto m = parse_method(name.get<std::string>());
                if (!m) throw EstimationError("unknown method: " + name.get<std::string>());
                config.methods.push_back(*m);
            }
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("bad config field: ") + e.what());
    } catch (const IoError&) {
        throw;
    } catch (const EstimationError& e) {
        throw IoError(std::string("bad config: ") + e.what());
    }
    try {
        config.validate();
    } catch (const EstimationError& e) {
        throw IoError(std::string("bad config: ") + e.what());
    }
    return config;
}

BenchmarkConfig BenchmarkConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

void BenchmarkConfig::validate() const {
    if (distributions.empty()) throw EstimationError("no distributions configured");
    if (sample_sizes.empty()) throw EstimationError("no sample sizes configured");
    for (int n : sample_sizes)
        if (n < 1) throw EstimationError("sample sizes must be >= 1");
    if (replicates < 1) throw EstimationError("replicates must be >= 1");
    if (smoothing < 0.0) throw EstimationError("smoothing must be >= 0");
    if (methods.empty()) throw EstimationError("no methods configured");
}

namespace {

Distribution smooth_probs(const Distribution& p, double eps) {
    if (eps == 0.0) return p;
    std::vector<double> w(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i] + eps;
    return Distribution::from_weights(std::move(w));
}

// One (distribution, size, replicate) cell: draw once, score every method.
void run_cell(const BenchmarkConfig& config, std::size_t dist_index, std::size_t size_index,
              int replicate, std::vector<BenchmarkRecord>& records, std::size_t slot) {
    const auto& [dist_id, truth] = config.distributions[dist_index];
    const int n = config.sample_sizes[size_index];
    const std::uint64_t seed = derive_seed(config.seed, dist_id,
                                           static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(replicate));
    const SampleSequence data = sample(truth, static_cast<std::size_t>(n), seed);
    const CountVector counts = data.counts();

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        const Method method = config.methods[mi];
        BenchmarkRecord rec{method, dist_id, n, replicate, 0.0, true};
        std::optional<Distribution> estimate;
        switch (method) {
            case Method::ML:
                estimate = ml_estimate(counts, config.smoothing);
                break;
            case Method::ME: {
                double mean = 0.0;
                for (int s : data.states) mean += s;
                mean /= static_cast<double>(data.size());
                estimate = max_entropy_estimate(mean, truth.size());
                break;
            }
            case Method::MAP: {
                MapOutcome outcome = map_jeffreys(counts);
                if (outcome.available())
                    estimate = std::move(*outcome.dist);
                else
                    rec.available = false;
                break;
            }
            case Method::MFEE:
                estimate = mfee_estimate(data, {.smoothing = config.smoothing}).estimate;
                break;
        }
        if (estimate)
            rec.kl = kl_divergence(truth, smooth_probs(*estimate, config.smoothing));
        records[slot + mi] = std::move(rec);
    }
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config, int jobs) {
    config.validate();
    if (jobs < 1) jobs = 1;

    const std::size_t num_cells = config.distributions.size() * config.sample_sizes.size() *
                                  static_cast<std::size_t>(config.replicates);
    std::vector<BenchmarkRecord> records(num_cells * config.methods.size());

    auto work = [&](std::size_t cell) {
        const std::size_t reps = static_cast<std::size_t>(config.replicates);
        const std::size_t sizes = config.sample_sizes.size();
        const std::size_t dist_index = cell / (sizes * reps);
        const std::size_t size_index = (cell / reps) % sizes;
        const int replicate = static_cast<int>(cell % reps);
        run_cell(config, dist_index, size_index, replicate, records,
                 cell * config.methods.size());
    };

    if (jobs == 1) {
        for (std::size_t cell = 0; cell < num_cells; ++cell) work(cell);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t cell = static_cast<std::size_t>(t); cell < num_cells;
                     cell += static_cast<std::size_t>(jobs))
                    work(cell);
            });
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

std::vector<AggregateRow> aggregate(const std::vector<BenchmarkRecord>& records) {
    if (records.empty()) throw EstimationError("no records to aggregate");

    // Deterministic cell order: method, then distribution, then size, in the
    // order each first appears in the record stream.
    std::vector<Method> methods;
    std::vector<std::string> dists;
    std::vector<int> sizes;
    for (const auto& rec : records) {
        if (std::find(methods.begin(), methods.end(), rec.method) == methods.end())
            methods.push_back(rec.method);
        if (std::find(dists.begin(), dists.end(), rec.dist_id) == dists.end())
            dists.push_back(rec.dist_id);
        if (std::find(sizes.begin(), sizes.end(), rec.sample_size) == sizes.end())
            sizes.push_back(rec.sample_size);
    }
    std::sort(sizes.begin(), sizes.end());

    std::vector<AggregateRow> rows;
    for (Method method : methods) {
        for (const auto& dist_id : dists) {
            for (int n : sizes) {
                AggregateRow row{method, dist_id, n, std::nullopt, 0.0, 0};
                double sum = 0.0;
                double sumsq = 0.0;
                for (const auto& rec : records) {
                    if (rec.method != method || rec.dist_id != dist_id ||
                        rec.sample_size != n || !rec.available)
                        continue;
                    sum += rec.kl;
                    sumsq += rec.kl * rec.kl;
                    ++row.n_available;
                }
                if (row.n_available > 0) {
                    const double m = sum / row.n_available;
                    row.mean_kl = m;
                    if (row.n_available > 1) {
                        const double var =
                            (sumsq - row.n_available * m * m) / (row.n_available - 1);
                        row.stderr_kl = std::sqrt(std::max(var, 0.0) / row.n_available);
                    }
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "method,dist,sample_size,mean_kl,stderr_kl,n_available\n";
    for (const auto& row : rows) {
        out << method_name(row.method) << ',' << row.dist_id << ',' << row.sample_size << ',';
        if (row.mean_kl)
            out << format_double(*row.mean_kl) << ',' << format_double(row.stderr_kl);
        else
            out << ',';
        out << ',' << row.n_available << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<AggregateRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "method,dist,sample_size,mean_kl,stderr_kl,n_available")
        throw IoError("bad CSV header in " + path.string());

    std::vector<AggregateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 6) fields.emplace_back();
        if (fields.size() != 6) throw IoError("bad CSV row: " + line);

        AggregateRow row;
        const auto method = parse_method(fields[0]);
        if (!method) throw IoError("unknown method in CSV: " + fields[0]);
        row.method = *method;
        row.dist_id = fields[1];
        row.sample_size = std::stoi(fields[2]);
        if (!fields[3].empty()) {
            row.mean_kl = std::stod(fields[3]);
            row.stderr_kl = std::stod(fields[4]);
        }
        row.n_available = std::stoi(fields[5]);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

const char* method_color(Method m) {
    switch (m) {
        case Method::ML: return "#1f77b4";
        case Method::ME: return "#2ca02c";
        case Method::MAP: return "#9467bd";
        case Method::MFEE: return "#d62728";
    }
    return "#000000";
}

}  // namespace

void write_svg_chart(const std::vector<AggregateRow>& rows, const std::filesystem::path& path) {
    std::vector<std::string> dists;
    std::vector<Method> methods;
    for (const auto& row : rows) {
        if (std::find(dists.begin(), dists.end(), row.dist_id) == dists.end())
            dists.push_back(row.dist_id);
        if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
            methods.push_back(row.method);
    }

    const int panel_w = 360;
    const int panel_h = 260;
    const int margin = 48;
    const int cols = 2;
    const int rows_n = static_cast<int>((dists.size() + cols - 1) / cols);
    const int width = cols * (panel_w + margin) + margin;
    const int height = rows_n * (panel_h + margin) + margin + 24;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";

    for (std::size_t di = 0; di < dists.size(); ++di) {
        const int px = margin + static_cast<int>(di % cols) * (panel_w + margin);
        const int py = margin + static_cast<int>(di / cols) * (panel_h + margin);

        double x_min = 1e300, x_max = -1e300, y_max = 0.0;
        for (const auto& row : rows) {
            if (row.dist_id != dists[di] || !row.mean_kl) continue;
            x_min = std::min(x_min, std::log10(static_cast<double>(row.sample_size)));
            x_max = std::max(x_max, std::log10(static_cast<double>(row.sample_size)));
            y_max = std::max(y_max, *row.mean_kl);
        }
        if (x_max <= x_min) x_max = x_min + 1.0;
        if (y_max <= 0.0) y_max = 1.0;

        out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << panel_w
            << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#888\"/>\n";
        out << "<text x=\"" << px + 4 << "\" y=\"" << py - 6 << "\">dist " << dists[di]
            << " (mean KL vs sample size, log x)</text>\n";

        for (Method m : methods) {
            std::string points;
            for (const auto& row : rows) {
                if (row.dist_id != dists[di] || row.method != m || !row.mean_kl) continue;
                const double fx =
                    (std::log10(static_cast<double>(row.sample_size)) - x_min) /
                    (x_max - x_min);
                const double fy = *row.mean_kl / y_max;
                points += format_double(px + fx * panel_w) + "," +
                          format_double(py + panel_h - fy * panel_h) + " ";
            }
            if (!points.empty())
                out << "<polyline fill=\"none\" stroke=\"" << method_color(m)
                    << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
        }
    }

    // Legend
    int lx = margin;
    const int ly = height - 16;
    for (Method m : methods) {
        out << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
            << method_color(m) << "\"/>\n";
        out << "<text x=\"" << lx + 16 << "\" y=\"" << ly << "\">" << method_name(m)
            << "</text>\n";
        lx += 80;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace mfee::bench
