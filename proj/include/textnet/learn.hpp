#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/features.hpp"

namespace textnet {

// Rows of features with their class labels.
struct Dataset {
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<Label> y;

    std::size_t rows() const { return y.size(); }
    std::span<const double> row(std::size_t r) const { return {x.data() + r * cols, cols}; }
    void add(std::span<const double> features, Label label);
};

Dataset to_dataset(const FeatureMatrix& fm);

// Per-column z-scoring fitted on training rows; constant columns are only
// centered.
struct Standardizer {
    std::vector<double> mean, scale;

    static Standardizer fit(const Dataset& train);
    std::vector<double> apply(std::span<const double> row) const;
    Dataset apply(const Dataset& data) const;
};

// Majority label among the K nearest rows (Euclidean). Rows tied with the
// K-th distance are all kept; a tied vote goes to the smaller label.
Label knn_classify(const Dataset& train, std::span<const double> row, unsigned k);

struct CartTree {
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::size_t left = 0, right = 0;  // row goes left when value <= threshold
        Label label = Label::imaginative;
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    std::size_t depth() const;
};

// Gini splits at midpoints between sorted distinct values. Growth stops at
// pure nodes or when no split leaves min_leaf rows on each side. Ties prefer
// the lowest feature index, then the lowest threshold.
CartTree cart_train(const Dataset& train, std::size_t min_leaf = 2);
Label cart_classify(const CartTree& tree, std::span<const double> row);

struct GaussianNaiveBayes {
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> mean, variance;

    double log_joint(std::span<const double> row, Label label) const;
};

// Variance smoothing is `smoothing` times the largest column variance.
GaussianNaiveBayes nb_train(const Dataset& train, double smoothing = 1e-9);
Label nb_classify(const GaussianNaiveBayes& model, std::span<const double> row);

struct ClassifierSpec {
    enum class Kind { knn, cart, naive_bayes } kind = Kind::knn;
    unsigned knn_k = 1;
    std::size_t cart_min_leaf = 2;
    double nb_smoothing = 1e-9;

    std::string name() const;
};

ClassifierSpec::Kind parse_classifier(const std::string& name);

// Fit on (already standardized) training rows and predict one row.
Label train_and_classify(const ClassifierSpec& spec, const Dataset& train, std::span<const double> row);

struct ClassificationReport {
    std::string classifier;
    std::size_t n = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::array<std::array<std::size_t, 2>, 2> confusion{};  // [actual][predicted]
    double p_value = 1.0;
    std::vector<std::string> features;
    std::vector<Label> predictions;
};

// Leave-one-out; each fold standardizes with its own training rows.
ClassificationReport loo_evaluate(const FeatureMatrix& fm, const ClassifierSpec& spec, unsigned threads = 1);

// One-sided exact binomial tail P(X >= round(accuracy * n)) for X ~ Bin(n, 1/2).
double significance(double accuracy, std::size_t n);

struct RelevanceReport {
    std::vector<std::string> features;
    std::size_t n = 0;
    // Every nonempty subset as a bitmask over `features`, best first.
    std::vector<std::uint32_t> ledger;
    std::vector<std::size_t> ledger_correct;
    // omega[f][k - 1] for k = 1 .. 2^(features - 1)
    std::vector<std::vector<std::uint64_t>> omega;
    std::vector<std::uint64_t> relevance;

    std::size_t phi() const { return features.size(); }
};

inline constexpr std::size_t kMaxRelevanceFeatures = 15;

// correct_by_mask[mask] holds the number of correct LOO predictions for the
// subset `mask` (index 0 unused). Ranking: more correct first, then smaller
// subsets, then smaller masks.
RelevanceReport relevance_from_scores(const std::vector<std::string>& features,
                                      const std::vector<std::size_t>& correct_by_mask, std::size_t n);

RelevanceReport relevance_index(const FeatureMatrix& fm, const ClassifierSpec& spec, unsigned threads = 1);

struct Projection {
    std::vector<std::array<double, 2>> coords;
    std::array<double, 2> variance{};        // explained variance (eigenvalues)
    std::vector<std::vector<double>> axes;   // unit loading vectors
};

// Top eigenpairs of a symmetric matrix by power iteration with deflation.
// Each vector's largest-magnitude entry is made positive.
struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
EigenPairs top_eigenpairs(const std::vector<std::vector<double>>& symmetric, std::size_t count,
                          double tolerance = 1e-13, unsigned max_iterations = 200000);

// Centers the columns and projects onto the two leading covariance axes.
Projection pca_project(const FeatureMatrix& fm);

// Rank-2 truncated SVD of the uncentered matrix: coordinates are X * V_2.
Projection lsa_project(const FeatureMatrix& fm);

// Relative (or raw) frequencies of the `count` most frequent non-stopword
// lemmas across the corpus; columns named "freq@<word>".
FeatureMatrix word_frequency_features(const std::vector<Document>& docs, std::size_t count, bool relative = true);

// Frequencies of every stoplist word per document; all-zero columns dropped.
FeatureMatrix stopword_frequency_features(const std::vector<Document>& docs, const LemmaDictionary& dict,
                                          bool relative = true);

// Word-internal letter bigrams of the lowercased raw text; columns "bigram@xy".
FeatureMatrix char_bigram_features(const std::vector<std::string>& raw_texts, const std::vector<std::string>& ids,
                                   const std::vector<Label>& labels, bool relative = true);

// IG-select the top k columns (all when k exceeds the column count), then LOO.
ClassificationReport select_and_evaluate(const FeatureMatrix& fm, std::size_t k, const ClassifierSpec& spec,
                                         unsigned threads = 1);

}  // namespace textnet
