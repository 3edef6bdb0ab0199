#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mfee/distribution.hpp"

namespace mfee::io {

/// Labels mapped to dense indices, in first-appearance order unless preloaded
/// from an alphabet file.
class LabelMap {
  public:
    LabelMap() = default;
    explicit LabelMap(std::vector<std::string> labels);

    /// Index of label; appends it when unknown and growth is allowed, throws
    /// IoError otherwise.
    int index_of(const std::string& label, bool allow_growth);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }

  private:
    std::vector<std::string> labels_;
};

/// JSON array of label strings.
LabelMap read_alphabet(const std::filesystem::path& path);

/// Plain text, one state token per line; blank lines ignored. When a
/// preloaded alphabet is given, unknown tokens are an error.
SampleSequence read_sample_file(const std::filesystem::path& path, LabelMap& alphabet,
                                bool alphabet_fixed);

struct PairData {
    std::vector<std::pair<int, int>> pairs;  // (context index, state index)
    LabelMap contexts;
};

/// Two-column CSV "context,state" without a header. Throws IoError on
/// malformed rows.
PairData read_pairs_csv(const std::filesystem::path& path, LabelMap& alphabet,
                        bool alphabet_fixed);

}  // namespace mfee::io
