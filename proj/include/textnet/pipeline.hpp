#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/features.hpp"
#include "textnet/learn.hpp"
#include "textnet/metrics.hpp"

namespace textnet {

enum class Strategy { GS, LS, LSS };
const char* to_string(Strategy s);
Strategy parse_strategy(std::string_view text);
inline bool keeps_stopwords(Strategy s) { return s == Strategy::LSS; }

std::filesystem::path default_data_dir();

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path lemmas = default_data_dir() / "lemmas.tsv";
    std::filesystem::path stoplist = default_data_dir() / "stoplist.txt";
    std::filesystem::path out = "textnet-out";
    std::filesystem::path cache;  // empty: <out>/cache
    Strategy strategy = Strategy::LSS;
    std::size_t words = 50;
    double coverage = 0.9;
    std::vector<unsigned> h{2, 3, 4};
    std::size_t top_k = 15;
    std::string classifier = "all";  // all, knn, cart, nb
    unsigned knn_k = 1;
    std::size_t cart_min_leaf = 2;
    double nb_smoothing = 1e-9;
    double alpha = 0.85;
    double rho_max = 0.5;
    ClosenessForm closeness = ClosenessForm::mean_distance;
    bool cumulative = false;
    bool ag_exclude_self = false;
    std::size_t window = 1;
    std::size_t longest = 0;          // per class; 0 keeps every document
    std::string length_by = "raw";    // raw or processed
    std::size_t relevance_features = 8;
    std::size_t baseline_words = 10;
    bool raw_counts = false;
    bool use_cache = true;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string doc;       // export-network: single document id, empty for all

    unsigned worker_count() const;
    std::filesystem::path cache_dir() const { return cache.empty() ? out / "cache" : cache; }
    std::vector<ClassifierSpec> classifiers() const;
    void validate() const;
};

// Keys are the long flag names with '-' replaced by '_'.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
// Flat key=value lines, '#' comments.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
// Everything that can change an output; execution-only settings (out, cache,
// threads) are left out so that reports do not depend on them.
std::vector<std::pair<std::string, std::string>> resolved_config(const RunConfig& config);

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct LoadedCorpus {
    std::vector<ManifestEntry> entries;  // by id, after the length filter
    std::vector<std::string> raw;
    LemmaDictionary dict;
};

LoadedCorpus load_corpus(const RunConfig& config);
std::vector<Document> preprocess_corpus(const LoadedCorpus& corpus, bool keep_stopwords, unsigned threads);

struct MeasureOptions {
    std::vector<unsigned> h{2, 3, 4};
    double alpha = 0.85;
    ClosenessForm closeness = ClosenessForm::mean_distance;
    bool cumulative = false;
    bool ag_exclude_self = false;
    std::size_t window = 1;

    static MeasureOptions from(const RunConfig& config);
    std::string signature() const;
};

// Every node measure on the document network, plus V, Q and node frequencies.
DocumentMeasureSet compute_measures(const Document& doc, const MeasureOptions& options);

// Long CSV: doc_id,node_label,measure,value. Document-level values (V, Q)
// have an empty node_label; "freq" rows carry node frequencies.
std::string measures_to_csv(const DocumentMeasureSet& set);
DocumentMeasureSet measures_from_csv(const std::string& text);

struct CacheStats {
    std::size_t hits = 0, misses = 0, repaired = 0;
};

// Measures for every document, served from the content-hash cache when valid.
std::vector<DocumentMeasureSet> measure_corpus(const std::vector<Document>& docs, const RunConfig& config,
                                               CacheStats* stats = nullptr);

struct StrategyFeatures {
    FeatureMatrix all;       // after imputation and, for local strategies, decorrelation
    std::size_t unfiltered_columns = 0;
    std::vector<std::string> word_list;
    FeatureRanking ranking;
};

StrategyFeatures build_features(const std::vector<Document>& docs, const std::vector<DocumentMeasureSet>& sets,
                                const RunConfig& config);

std::string projection_to_csv(const FeatureMatrix& fm, const Projection& p);
// Column z-scoring (constant columns centered) ahead of PCA.
FeatureMatrix standardized(const FeatureMatrix& fm);

// Commands. Each writes its files under config.out and returns 0, or throws.
int cmd_measure(const RunConfig& config);
int cmd_classify(const RunConfig& config);
int cmd_relevance(const RunConfig& config);
int cmd_baselines(const RunConfig& config);
int cmd_export_network(const RunConfig& config);

}  // namespace textnet
