#include "textnet/features.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "textnet/error.hpp"

namespace textnet {

std::vector<double> FeatureMatrix::column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& columns) const {
    FeatureMatrix out;
    out.doc_ids = doc_ids;
    out.labels = labels;
    for (auto c : columns) out.feature_names.push_back(feature_names.at(c));
    out.values.reserve(rows() * columns.size());
    for (std::size_t r = 0; r < rows(); ++r)
        for (auto c : columns) out.values.push_back(at(r, c));
    return out;
}

std::ptrdiff_t FeatureMatrix::column_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    return it == feature_names.end() ? -1 : it - feature_names.begin();
}

SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) return {kMissing, kMissing, kMissing, kMissing, kMissing};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    const double median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return {mean, std::sqrt(ss / n), median, values.back(), values.front()};
}

FeatureMatrix global_features(const std::vector<DocumentMeasureSet>& docs) {
    FeatureMatrix fm;
    if (docs.empty()) return fm;
    fm.feature_names = {"V", "Q"};
    std::vector<std::string> measure_names;
    for (const auto& m : docs.front().measures) {
        measure_names.push_back(m.name);
        for (const char* stat : {"mean", "std", "median", "max", "min"})
            fm.feature_names.push_back(std::string(stat) + "(" + m.name + ")");
    }
    for (const auto& doc : docs) {
        fm.doc_ids.push_back(doc.doc_id);
        fm.labels.push_back(doc.label);
        fm.values.push_back(static_cast<double>(doc.node_labels.size()));
        fm.values.push_back(doc.modularity);
        for (const auto& name : measure_names) {
            auto it = std::find_if(doc.measures.begin(), doc.measures.end(),
                                   [&](const NodeMeasures& m) { return m.name == name; });
            if (it == doc.measures.end())
                throw Error(ErrorKind::InvalidArgument, doc.doc_id + " lacks measure " + name);
            auto s = summarize(it->present());
            for (double v : {s.mean, s.stddev, s.median, s.max, s.min}) fm.values.push_back(v);
        }
    }
    impute_column_means(fm);
    return fm;
}

std::vector<std::string> select_word_list(const std::vector<Document>& docs, std::size_t count,
                                          double min_coverage) {
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // total, documents
    for (const auto& doc : docs) {
        std::set<std::string> seen;
        for (const auto& t : doc.tokens) {
            auto& s = stats[t];
            ++s.first;
            if (seen.insert(t).second) ++s.second;
        }
    }
    const double needed = min_coverage * static_cast<double>(docs.size());
    std::vector<std::pair<std::size_t, std::string>> candidates;
    for (const auto& [word, s] : stats)
        if (static_cast<double>(s.second) >= needed - 1e-9) candidates.emplace_back(s.first, word);
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < candidates.size() && i < count; ++i) words.push_back(candidates[i].second);
    return words;
}

FeatureMatrix local_features(const std::vector<DocumentMeasureSet>& docs, const std::vector<std::string>& words) {
    if (words.empty()) throw Error(ErrorKind::InvalidArgument, "local features need a nonempty word list");
    FeatureMatrix fm;
    if (docs.empty()) return fm;
    std::vector<std::string> measure_names;
    for (const auto& m : docs.front().measures) measure_names.push_back(m.name);
    for (const auto& name : measure_names)
        for (const auto& w : words) fm.feature_names.push_back(name + "@" + w);

    for (const auto& doc : docs) {
        fm.doc_ids.push_back(doc.doc_id);
        fm.labels.push_back(doc.label);
        std::unordered_map<std::string, std::size_t> node_of;
        for (std::size_t i = 0; i < doc.node_labels.size(); ++i) node_of.emplace(doc.node_labels[i], i);
        for (const auto& name : measure_names) {
            auto it = std::find_if(doc.measures.begin(), doc.measures.end(),
                                   [&](const NodeMeasures& m) { return m.name == name; });
            if (it == doc.measures.end())
                throw Error(ErrorKind::InvalidArgument, doc.doc_id + " lacks measure " + name);
            for (const auto& w : words) {
                auto node = node_of.find(w);
                double v = kMissing;
                if (node != node_of.end() && it->values[node->second]) v = *it->values[node->second];
                fm.values.push_back(v);
            }
        }
    }
    impute_column_means(fm);
    return fm;
}

void impute_column_means(FeatureMatrix& fm) {
    for (std::size_t c = 0; c < fm.cols(); ++c) {
        double total = 0.0;
        std::size_t present = 0;
        for (std::size_t r = 0; r < fm.rows(); ++r)
            if (!is_missing(fm.at(r, c))) {
                total += fm.at(r, c);
                ++present;
            }
        const double mean = present ? total / static_cast<double>(present) : 0.0;
        for (std::size_t r = 0; r < fm.rows(); ++r)
            if (is_missing(fm.at(r, c))) fm.at(r, c) = mean;
    }
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "pearson needs equal-length inputs");
    const double n = static_cast<double>(x.size());
    if (x.empty()) return 0.0;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::map<std::string, std::vector<double>> word_frequency_table(const std::vector<DocumentMeasureSet>& docs,
                                                                const std::vector<std::string>& words) {
    std::map<std::string, std::vector<double>> table;
    for (const auto& w : words) table[w].assign(docs.size(), 0.0);
    for (std::size_t d = 0; d < docs.size(); ++d)
        for (std::size_t i = 0; i < docs[d].node_labels.size(); ++i) {
            auto it = table.find(docs[d].node_labels[i]);
            if (it != table.end()) it->second[d] = static_cast<double>(docs[d].node_frequency[i]);
        }
    return table;
}

FeatureMatrix frequency_decorrelation_filter(const FeatureMatrix& fm,
                                             const std::map<std::string, std::vector<double>>& frequencies,
                                             double rho_max) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < fm.cols(); ++c) {
        const auto& name = fm.feature_names[c];
        auto at = name.find('@');
        if (at == std::string::npos) {
            keep.push_back(c);
            continue;
        }
        auto freq = frequencies.find(name.substr(at + 1));
        if (freq == frequencies.end())
            throw Error(ErrorKind::InvalidArgument, "no frequencies for word of column " + name);
        auto column = fm.column(c);
        if (std::abs(pearson(column, freq->second)) <= rho_max) keep.push_back(c);
    }
    return fm.select_columns(keep);
}

std::vector<int> equal_frequency_bins(std::span<const double> values, std::size_t bins) {
    const auto n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<int> out(n);
    std::size_t first_rank = 0;
    for (std::size_t rank = 0; rank < n; ++rank) {
        if (rank > 0 && values[order[rank]] != values[order[rank - 1]]) first_rank = rank;
        out[order[rank]] = static_cast<int>(first_rank * bins / n);
    }
    return out;
}

double mutual_information(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "mutual information needs paired samples");
    if (x.empty()) return 0.0;
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> px, py;
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[{x[i], y[i]}] += 1.0;
        px[x[i]] += 1.0;
        py[y[i]] += 1.0;
    }
    const double n = static_cast<double>(x.size());
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        double pxy = count / n;
        mi += pxy * std::log2(pxy / ((px[key.first] / n) * (py[key.second] / n)));
    }
    return std::max(0.0, mi);
}

double information_gain(const FeatureMatrix& fm, std::size_t column, std::size_t bins) {
    auto values = fm.column(column);
    auto binned = equal_frequency_bins(values, bins);
    std::vector<int> classes(fm.rows());
    for (std::size_t r = 0; r < fm.rows(); ++r) classes[r] = static_cast<int>(fm.labels[r]);
    return mutual_information(binned, classes);
}

FeatureRanking rank_features(const FeatureMatrix& fm, std::size_t bins) {
    FeatureRanking ranking;
    for (std::size_t c = 0; c < fm.cols(); ++c)
        ranking.entries.emplace_back(fm.feature_names[c], information_gain(fm, c, bins));
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return ranking;
}

FeatureMatrix select_top_k(const FeatureMatrix& fm, std::size_t k, std::size_t bins) {
    if (k > fm.cols())
        throw Error(ErrorKind::InvalidArgument,
                    "cannot select " + std::to_string(k) + " of " + std::to_string(fm.cols()) + " features");
    auto ranking = rank_features(fm, bins);
    std::vector<std::size_t> columns;
    for (std::size_t i = 0; i < k; ++i)
        columns.push_back(static_cast<std::size_t>(fm.column_index(ranking.entries[i].first)));
    return fm.select_columns(columns);
}

std::string format_double(double v) {
    if (is_missing(v)) return "NA";
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
    return std::string(buffer, end);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

double parse_double(const std::string& s) {
    if (s == "NA") return kMissing;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::MalformedInput, "not a number: '" + s + "'");
    return v;
}

}  // namespace

std::string feature_matrix_to_csv(const FeatureMatrix& fm) {
    std::ostringstream out;
    out << "doc_id,label";
    for (const auto& name : fm.feature_names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        out << fm.doc_ids[r] << ',' << to_string(fm.labels[r]);
        for (std::size_t c = 0; c < fm.cols(); ++c) out << ',' << format_double(fm.at(r, c));
        out << '\n';
    }
    return out.str();
}

FeatureMatrix feature_matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedInput, "empty feature CSV");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "doc_id" || header[1] != "label")
        throw Error(ErrorKind::MalformedInput, "feature CSV must start with doc_id,label");
    FeatureMatrix fm;
    fm.feature_names.assign(header.begin() + 2, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) throw Error(ErrorKind::MalformedInput, "ragged feature CSV row");
        fm.doc_ids.push_back(fields[0]);
        fm.labels.push_back(parse_label(fields[1]));
        for (std::size_t c = 2; c < fields.size(); ++c) fm.values.push_back(parse_double(fields[c]));
    }
    return fm;
}

}  // namespace textnet
