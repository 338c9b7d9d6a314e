#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/metrics.hpp"

namespace textnet {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Documents x features, row-major. Missing cells hold kMissing until imputed.
struct FeatureMatrix {
    std::vector<std::string> doc_ids;
    std::vector<Label> labels;
    std::vector<std::string> feature_names;
    std::vector<double> values;

    std::size_t rows() const { return doc_ids.size(); }
    std::size_t cols() const { return feature_names.size(); }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }
    std::vector<double> column(std::size_t c) const;

    // Keeps the given columns, in the given order.
    FeatureMatrix select_columns(const std::vector<std::size_t>& columns) const;
    std::ptrdiff_t column_index(const std::string& name) const;  // -1 when absent
};

// Everything measured on one document's network, ready for feature assembly.
struct DocumentMeasureSet {
    std::string doc_id;
    Label label = Label::imaginative;
    std::vector<std::string> node_labels;
    std::vector<std::size_t> node_frequency;
    std::vector<NodeMeasures> measures;
    double modularity = 0.0;
};

struct SummaryStats {
    double mean, stddev, median, max, min;
};

// Population standard deviation. All fields kMissing for an empty input.
SummaryStats summarize(std::vector<double> values);

// Columns: V, Q, then mean/std/median/max/min of every measure, named
// "<stat>(<measure>)". Measure order follows the first document.
FeatureMatrix global_features(const std::vector<DocumentMeasureSet>& docs);

// The `count` most frequent lemmas that occur in at least `min_coverage` of
// the documents. Frequency ties break alphabetically.
std::vector<std::string> select_word_list(const std::vector<Document>& docs, std::size_t count,
                                          double min_coverage = 0.9);

// One column "<measure>@<word>" per (measure, word); absent words are
// imputed with the column mean.
FeatureMatrix local_features(const std::vector<DocumentMeasureSet>& docs, const std::vector<std::string>& words);

// Replaces missing cells with their column mean (0 for an all-missing column).
void impute_column_means(FeatureMatrix& fm);

double pearson(std::span<const double> x, std::span<const double> y);  // 0 when either is constant

// Per word, the node frequency of that word in each document (0 if absent).
std::map<std::string, std::vector<double>> word_frequency_table(const std::vector<DocumentMeasureSet>& docs,
                                                                const std::vector<std::string>& words);

// Drops "<measure>@<word>" columns whose |pearson| with the word's frequency
// exceeds rho_max. Other columns pass through.
FeatureMatrix frequency_decorrelation_filter(const FeatureMatrix& fm,
                                             const std::map<std::string, std::vector<double>>& frequencies,
                                             double rho_max = 0.5);

inline constexpr std::size_t kInformationGainBins = 10;

// Equal-frequency bin index per value. Equal values share the bin of their
// first rank, so the binning depends only on value order.
std::vector<int> equal_frequency_bins(std::span<const double> values, std::size_t bins = kInformationGainBins);

// Mutual information in bits between two discrete variables.
double mutual_information(std::span<const int> x, std::span<const int> y);

double information_gain(const FeatureMatrix& fm, std::size_t column, std::size_t bins = kInformationGainBins);

struct FeatureRanking {
    std::vector<std::pair<std::string, double>> entries;  // descending gain, ties by name
};

FeatureRanking rank_features(const FeatureMatrix& fm, std::size_t bins = kInformationGainBins);

// Columns ordered by rank.
FeatureMatrix select_top_k(const FeatureMatrix& fm, std::size_t k, std::size_t bins = kInformationGainBins);

std::string feature_matrix_to_csv(const FeatureMatrix& fm);
FeatureMatrix feature_matrix_from_csv(const std::string& text);

std::string format_double(double v);  // shortest round-trip form; "NA" for missing

}  // namespace textnet
