#include "mfee/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mfee::io {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

LabelMap::LabelMap(std::vector<std::string> labels) : labels_(std::move(labels)) {}

int LabelMap::index_of(const std::string& label, bool allow_growth) {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it != labels_.end()) return static_cast<int>(it - labels_.begin());
    if (!allow_growth) throw IoError("token not in alphabet: " + label);
    labels_.push_back(label);
    return static_cast<int>(labels_.size()) - 1;
}

LabelMap read_alphabet(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open alphabet: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        auto labels = j.get<std::vector<std::string>>();
        if (labels.empty()) throw IoError("empty alphabet: " + path.string());
        return LabelMap(std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("alphabet must be a JSON array of strings: " + std::string(e.what()));
    }
}

SampleSequence read_sample_file(const std::filesystem::path& path, LabelMap& alphabet,
                                bool alphabet_fixed) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input: " + path.string());
    SampleSequence seq;
    std::string line;
    while (std::getline(in, line)) {
        const std::string token = trim(line);
        if (token.empty()) continue;
        seq.states.push_back(alphabet.index_of(token, !alphabet_fixed));
    }
    seq.alphabet_size = static_cast<int>(alphabet.size());
    return seq;
}

PairData read_pairs_csv(const std::filesystem::path& path, LabelMap& alphabet,
                        bool alphabet_fixed) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input: " + path.string());
    PairData data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw IoError("expected exactly two columns at line " + std::to_string(line_no));
        const std::string context = trim(line.substr(0, comma));
        const std::string state = trim(line.substr(comma + 1));
        if (context.empty() || state.empty())
            throw IoError("empty field at line " + std::to_string(line_no));
        data.pairs.emplace_back(data.contexts.index_of(context, true),
                                alphabet.index_of(state, !alphabet_fixed));
    }
    return data;
}

}  // namespace mfee::io
