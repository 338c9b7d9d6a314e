#include "textnet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "textnet/error.hpp"
#include "textnet/graph.hpp"
#include "textnet/parallel.hpp"
#include "textnet/walks.hpp"

#ifndef TEXTNET_DATA_DIR
#define TEXTNET_DATA_DIR "data"
#endif

namespace textnet {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// Bumped whenever a measure definition changes so stale cache files miss.
constexpr std::string_view kMeasureVersion = "textnet-measures-3";

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    auto text = trim(value);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::InvalidArgument, "bad value for " + key + ": '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    auto v = trim(value);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw Error(ErrorKind::InvalidArgument, "bad boolean for " + key + ": '" + value + "'");
}

std::string join(const std::vector<unsigned>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::GS: return "GS";
        case Strategy::LS: return "LS";
        case Strategy::LSS: return "LSS";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "GS" || text == "gs") return Strategy::GS;
    if (text == "LS" || text == "ls") return Strategy::LS;
    if (text == "LSS" || text == "lss") return Strategy::LSS;
    throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

fs::path default_data_dir() {
    if (const char* env = std::getenv("TEXTNET_DATA_DIR")) return env;
    return TEXTNET_DATA_DIR;
}

unsigned RunConfig::worker_count() const { return threads ? threads : default_thread_count(); }

std::vector<ClassifierSpec> RunConfig::classifiers() const {
    std::vector<ClassifierSpec::Kind> kinds;
    if (classifier == "all")
        kinds = {ClassifierSpec::Kind::knn, ClassifierSpec::Kind::cart, ClassifierSpec::Kind::naive_bayes};
    else
        for (const auto& name : split(classifier, ',')) kinds.push_back(parse_classifier(trim(name)));
    std::vector<ClassifierSpec> specs;
    for (auto kind : kinds) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.knn_k = knn_k;
        spec.cart_min_leaf = cart_min_leaf;
        spec.nb_smoothing = nb_smoothing;
        specs.push_back(spec);
    }
    return specs;
}

void RunConfig::validate() const {
    if (manifest.empty()) throw Error(ErrorKind::InvalidArgument, "no manifest given");
    if (h.empty()) throw Error(ErrorKind::InvalidArgument, "h list is empty");
    for (unsigned v : h)
        if (v < 1 || v > kMaxWalkLength)
            throw Error(ErrorKind::InvalidArgument, "h values must lie in 1.." + std::to_string(kMaxWalkLength));
    if (strategy != Strategy::GS && stoplist.empty())
        throw Error(ErrorKind::InvalidArgument, "local strategies need a stoplist");
    if (length_by != "raw" && length_by != "processed")
        throw Error(ErrorKind::InvalidArgument, "length_by must be raw or processed");
    if (coverage < 0.0 || coverage > 1.0) throw Error(ErrorKind::InvalidArgument, "coverage must lie in [0, 1]");
    if (knn_k == 0) throw Error(ErrorKind::InvalidArgument, "knn_k must be positive");
    if (window == 0) throw Error(ErrorKind::InvalidArgument, "window must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    (void)classifiers();
}

void set_config_value(RunConfig& c, const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string v = trim(value);
    if (key == "manifest") c.manifest = v;
    else if (key == "lemmas") c.lemmas = v;
    else if (key == "stoplist") c.stoplist = v;
    else if (key == "out") c.out = v;
    else if (key == "cache") c.cache = v;
    else if (key == "strategy") c.strategy = parse_strategy(v);
    else if (key == "words") c.words = parse_number<std::size_t>(key, v);
    else if (key == "coverage") c.coverage = parse_number<double>(key, v);
    else if (key == "h") {
        c.h.clear();
        for (const auto& part : split(v, ',')) c.h.push_back(parse_number<unsigned>(key, part));
        std::sort(c.h.begin(), c.h.end());
        c.h.erase(std::unique(c.h.begin(), c.h.end()), c.h.end());
    } else if (key == "top_k") c.top_k = parse_number<std::size_t>(key, v);
    else if (key == "classifier") c.classifier = v;
    else if (key == "knn_k") c.knn_k = parse_number<unsigned>(key, v);
    else if (key == "cart_min_leaf") c.cart_min_leaf = parse_number<std::size_t>(key, v);
    else if (key == "nb_smoothing") c.nb_smoothing = parse_number<double>(key, v);
    else if (key == "alpha") c.alpha = parse_number<double>(key, v);
    else if (key == "rho_max") c.rho_max = parse_number<double>(key, v);
    else if (key == "closeness") {
        if (v == "mean" || v == "mean_distance") c.closeness = ClosenessForm::mean_distance;
        else if (v == "reciprocal") c.closeness = ClosenessForm::reciprocal;
        else throw Error(ErrorKind::InvalidArgument, "closeness must be mean or reciprocal");
    } else if (key == "cumulative") c.cumulative = parse_bool(key, v);
    else if (key == "ag_exclude_self") c.ag_exclude_self = parse_bool(key, v);
    else if (key == "window") c.window = parse_number<std::size_t>(key, v);
    else if (key == "longest") c.longest = parse_number<std::size_t>(key, v);
    else if (key == "length_by") c.length_by = v;
    else if (key == "relevance_features") c.relevance_features = parse_number<std::size_t>(key, v);
    else if (key == "baseline_words") c.baseline_words = parse_number<std::size_t>(key, v);
    else if (key == "raw_counts") c.raw_counts = parse_bool(key, v);
    else if (key == "cache_enabled" || key == "use_cache") c.use_cache = parse_bool(key, v);
    else if (key == "threads") c.threads = parse_number<unsigned>(key, v);
    else if (key == "doc") c.doc = v;
    else throw Error(ErrorKind::InvalidArgument, "unknown config key '" + raw_key + "'");
}

void apply_config_file(RunConfig& config, const fs::path& path) {
    std::istringstream in(read_all(path));
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::MalformedInput, path.string() + ":" + std::to_string(number) + ": expected key=value");
        auto key = trim(t.substr(0, eq));
        auto value = trim(t.substr(eq + 1));
        // Relative paths in a config file are relative to the file.
        if ((key == "manifest" || key == "lemmas" || key == "stoplist") && !value.empty() && fs::path(value).is_relative())
            value = (path.parent_path() / value).lexically_normal().string();
        set_config_value(config, key, value);
    }
}

std::vector<std::pair<std::string, std::string>> resolved_config(const RunConfig& c) {
    return {
        {"manifest", c.manifest.string()},
        {"lemmas", c.lemmas.string()},
        {"stoplist", c.stoplist.string()},
        {"strategy", to_string(c.strategy)},
        {"words", std::to_string(c.words)},
        {"coverage", format_double(c.coverage)},
        {"h", join(c.h)},
        {"top_k", std::to_string(c.top_k)},
        {"classifier", c.classifier},
        {"knn_k", std::to_string(c.knn_k)},
        {"cart_min_leaf", std::to_string(c.cart_min_leaf)},
        {"nb_smoothing", format_double(c.nb_smoothing)},
        {"alpha", format_double(c.alpha)},
        {"rho_max", format_double(c.rho_max)},
        {"closeness", c.closeness == ClosenessForm::reciprocal ? "reciprocal" : "mean"},
        {"cumulative", c.cumulative ? "true" : "false"},
        {"ag_exclude_self", c.ag_exclude_self ? "true" : "false"},
        {"window", std::to_string(c.window)},
        {"longest", std::to_string(c.longest)},
        {"length_by", c.length_by},
        {"relevance_features", std::to_string(c.relevance_features)},
        {"baseline_words", std::to_string(c.baseline_words)},
        {"raw_counts", c.raw_counts ? "true" : "false"},
    };
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
    return out;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

LoadedCorpus load_corpus(const RunConfig& config) {
    LoadedCorpus corpus;
    auto manifest = load_manifest(config.manifest);
    corpus.dict = load_dictionary(config.lemmas, config.stoplist);
    for (const auto& e : manifest.entries)
        if (e.id.find_first_of(",\"\n\r/\\") != std::string::npos || e.id.empty() || e.id[0] == '.')
            throw Error(ErrorKind::MalformedInput, "document id '" + e.id + "' cannot be used in file names and CSV");
    std::vector<std::string> raw(manifest.entries.size());
    parallel_for(raw.size(), config.worker_count(),
                 [&](std::size_t i) { raw[i] = read_text_file(manifest.entries[i].path); });

    std::vector<std::size_t> keep(raw.size());
    std::iota(keep.begin(), keep.end(), 0);
    if (config.longest > 0) {
        std::vector<std::size_t> length(raw.size());
        parallel_for(raw.size(), config.worker_count(), [&](std::size_t i) {
            length[i] = config.length_by == "raw" ? tokenize(raw[i]).size()
                                                  : preprocess(raw[i], corpus.dict, false).tokens.size();
        });
        keep.clear();
        for (Label label : {Label::imaginative, Label::informative}) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < raw.size(); ++i)
                if (manifest.entries[i].label == label) members.push_back(i);
            std::stable_sort(members.begin(), members.end(),
                             [&](std::size_t a, std::size_t b) { return length[a] > length[b]; });
            members.resize(std::min(members.size(), config.longest));
            keep.insert(keep.end(), members.begin(), members.end());
        }
        std::sort(keep.begin(), keep.end());
    }
    for (auto i : keep) {
        corpus.entries.push_back(manifest.entries[i]);
        corpus.raw.push_back(std::move(raw[i]));
    }
    return corpus;
}

std::vector<Document> preprocess_corpus(const LoadedCorpus& corpus, bool keep_stopwords, unsigned threads) {
    std::vector<Document> docs(corpus.entries.size());
    std::vector<std::string> errors(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) {
        try {
            docs[i] = preprocess(corpus.raw[i], corpus.dict, keep_stopwords, corpus.entries[i].id, corpus.entries[i].label);
        } catch (const std::exception& e) {
            errors[i] = corpus.entries[i].id + ": " + e.what();
        }
    });
    std::string message;
    for (const auto& e : errors)
        if (!e.empty()) message += (message.empty() ? "" : "; ") + e;
    if (!message.empty()) throw Error(ErrorKind::EmptyDocument, message);
    return docs;
}

MeasureOptions MeasureOptions::from(const RunConfig& c) {
    return {c.h, c.alpha, c.closeness, c.cumulative, c.ag_exclude_self, c.window};
}

std::string MeasureOptions::signature() const {
    std::ostringstream s;
    s << kMeasureVersion << ";h=" << join(h) << ";alpha=" << format_double(alpha)
      << ";closeness=" << (closeness == ClosenessForm::reciprocal ? "reciprocal" : "mean")
      << ";cumulative=" << cumulative << ";ag_exclude_self=" << ag_exclude_self << ";window=" << window;
    return s.str();
}

DocumentMeasureSet compute_measures(const Document& doc, const MeasureOptions& options) {
    auto net = build_network(doc, options.window);
    const auto n = static_cast<NodeId>(net.node_count());
    DocumentMeasureSet set;
    set.doc_id = doc.id;
    set.label = doc.label;
    set.node_labels = net.labels();
    for (NodeId v = 0; v < n; ++v) set.node_frequency.push_back(net.frequency(v));
    // A network whose only edges were self loops has no community structure.
    set.modularity = net.edge_count() ? detect_communities(net).modularity : 0.0;

    auto& m = set.measures;
    m.push_back(degree(net));
    for (unsigned h : options.h) m.push_back(neighborhood_connectivity(net, h, options.cumulative));
    m.push_back(clustering(net));
    m.push_back(betweenness(net));
    m.push_back(closeness(net, options.closeness));
    m.push_back(eccentricity(net));
    m.push_back(eigenvector_centrality(net));
    m.push_back(pagerank(net, options.alpha));
    m.push_back(generalized_accessibility(net, options.ag_exclude_self));

    auto per_node = [&](std::string name, auto&& fn) {
        NodeMeasures out{std::move(name), std::vector<std::optional<double>>(n), doc.id};
        for (NodeId v = 0; v < n; ++v) out.values[v] = fn(v);
        m.push_back(std::move(out));
    };
    for (unsigned h : options.h)
        per_node("A" + std::to_string(h), [&](NodeId v) { return accessibility(net, v, h); });
    for (unsigned h : options.h)
        per_node("Sb" + std::to_string(h), [&](NodeId v) { return symmetry(net, v, h, SymmetryVariant::backbone); });
    for (unsigned h : options.h)
        per_node("Sm" + std::to_string(h), [&](NodeId v) { return symmetry(net, v, h, SymmetryVariant::merged); });
    for (auto& measure : m) measure.network_ref = doc.id;
    return set;
}

std::string measures_to_csv(const DocumentMeasureSet& set) {
    std::string out = "doc_id,node_label,measure,value\n";
    auto row = [&](const std::string& node, const std::string& measure, const std::string& value) {
        out += set.doc_id;
        out += ',';
        out += node;
        out += ',';
        out += measure;
        out += ',';
        out += value;
        out += '\n';
    };
    row("", "V", std::to_string(set.node_labels.size()));
    row("", "Q", format_double(set.modularity));
    for (std::size_t i = 0; i < set.node_labels.size(); ++i)
        row(set.node_labels[i], "freq", std::to_string(set.node_frequency[i]));
    for (const auto& m : set.measures)
        for (std::size_t i = 0; i < set.node_labels.size(); ++i)
            row(set.node_labels[i], m.name, m.values[i] ? format_double(*m.values[i]) : "NA");
    return out;
}

DocumentMeasureSet measures_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "doc_id,node_label,measure,value")
        throw Error(ErrorKind::MalformedInput, "measure CSV header missing");
    DocumentMeasureSet set;
    std::map<std::string, std::size_t> node_index, measure_index;
    bool have_v = false, have_q = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 4) throw Error(ErrorKind::MalformedInput, "measure CSV row needs 4 fields");
        if (set.doc_id.empty()) set.doc_id = f[0];
        else if (f[0] != set.doc_id) throw Error(ErrorKind::MalformedInput, "measure CSV mixes documents");
        const auto& node = f[1];
        const auto& name = f[2];
        if (node.empty()) {
            if (name == "V") have_v = true;
            else if (name == "Q") {
                set.modularity = parse_number<double>(name, f[3]);
                have_q = true;
            } else throw Error(ErrorKind::MalformedInput, "unknown document measure " + name);
            continue;
        }
        if (name == "freq") {
            if (!node_index.emplace(node, set.node_labels.size()).second)
                throw Error(ErrorKind::MalformedInput, "duplicate node " + node);
            set.node_labels.push_back(node);
            set.node_frequency.push_back(parse_number<std::size_t>(name, f[3]));
            continue;
        }
        auto ni = node_index.find(node);
        if (ni == node_index.end()) throw Error(ErrorKind::MalformedInput, "measure for unknown node " + node);
        auto [mi, inserted] = measure_index.emplace(name, set.measures.size());
        if (inserted)
            set.measures.push_back({name, std::vector<std::optional<double>>(set.node_labels.size()), set.doc_id});
        if (f[3] != "NA") set.measures[mi->second].values[ni->second] = parse_number<double>(name, f[3]);
    }
    if (!have_v || !have_q) throw Error(ErrorKind::MalformedInput, "measure CSV lacks V or Q");
    return set;
}

namespace {

constexpr std::string_view kCacheMagic = "#textnet-cache ";

std::string document_key(const Document& doc, const MeasureOptions& options) {
    std::string blob = options.signature();
    blob += '\n';
    blob += doc.id;
    blob += '\n';
    blob += to_string(doc.label);
    blob += '\n';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        blob += doc.tokens[i];
        blob += doc.stopword_mask[i] ? "*\n" : "\n";
    }
    return hex64(fnv1a(blob)) + hex64(fnv1a(blob, 0x84222325cbf29ce4ULL));
}

// Returns the cached body when the file exists and its checksum holds.
std::optional<std::string> read_cache(const fs::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) return std::nullopt;
    std::ostringstream ss;
    ss << probe.rdbuf();
    auto text = ss.str();
    auto nl = text.find('\n');
    if (nl == std::string::npos || text.compare(0, kCacheMagic.size(), kCacheMagic) != 0) return std::nullopt;
    auto checksum = text.substr(kCacheMagic.size(), nl - kCacheMagic.size());
    auto body = text.substr(nl + 1);
    if (checksum != hex64(fnv1a(body))) return std::nullopt;
    return body;
}

}  // namespace

std::vector<DocumentMeasureSet> measure_corpus(const std::vector<Document>& docs, const RunConfig& config,
                                               CacheStats* stats) {
    const auto options = MeasureOptions::from(config);
    std::vector<DocumentMeasureSet> sets(docs.size());
    std::vector<std::string> errors(docs.size());
    std::vector<int> outcome(docs.size(), 0);  // 0 miss, 1 hit, 2 repaired
    parallel_for(docs.size(), config.worker_count(), [&](std::size_t i) {
        try {
            fs::path file;
            if (config.use_cache) {
                file = config.cache_dir() / (document_key(docs[i], options) + ".csv");
                bool existed = fs::exists(file);
                if (auto body = read_cache(file)) {
                    try {
                        sets[i] = measures_from_csv(*body);
                        // The CSV has no label column; the key already pins the document.
                        sets[i].label = docs[i].label;
                        outcome[i] = 1;
                        return;
                    } catch (const Error&) {
                    }
                }
                if (existed) outcome[i] = 2;
            }
            sets[i] = compute_measures(docs[i], options);
            if (config.use_cache) {
                auto body = measures_to_csv(sets[i]);
                write_file_atomic(file, std::string(kCacheMagic) + hex64(fnv1a(body)) + "\n" + body);
            }
        } catch (const std::exception& e) {
            errors[i] = docs[i].id + ": " + e.what();
        }
    });
    std::string message;
    for (const auto& e : errors)
        if (!e.empty()) message += (message.empty() ? "" : "; ") + e;
    if (!message.empty()) throw Error(ErrorKind::InvalidArgument, "measurement failed for " + message);
    if (stats)
        for (int o : outcome) {
            if (o == 1) ++stats->hits;
            else ++stats->misses;
            if (o == 2) ++stats->repaired;
        }
    return sets;
}

StrategyFeatures build_features(const std::vector<Document>& docs, const std::vector<DocumentMeasureSet>& sets,
                                const RunConfig& config) {
    StrategyFeatures out;
    if (config.strategy == Strategy::GS) {
        out.all = global_features(sets);
        out.unfiltered_columns = out.all.cols();
    } else {
        out.word_list = select_word_list(docs, config.words, config.coverage);
        if (out.word_list.empty())
            throw Error(ErrorKind::InvalidArgument, "no word reaches the coverage threshold; lower coverage");
        auto local = local_features(sets, out.word_list);
        out.unfiltered_columns = local.cols();
        out.all = frequency_decorrelation_filter(local, word_frequency_table(sets, out.word_list), config.rho_max);
    }
    out.ranking = rank_features(out.all);
    return out;
}

FeatureMatrix standardized(const FeatureMatrix& fm) {
    auto data = to_dataset(fm);
    auto scaled = Standardizer::fit(data).apply(data);
    FeatureMatrix out = fm;
    out.values = scaled.x;
    return out;
}

std::string projection_to_csv(const FeatureMatrix& fm, const Projection& p) {
    std::string out = "doc_id,label,pc1,pc2\n";
    for (std::size_t r = 0; r < fm.rows(); ++r)
        out += fm.doc_ids[r] + "," + to_string(fm.labels[r]) + "," + format_double(p.coords[r][0]) + "," +
               format_double(p.coords[r][1]) + "\n";
    return out;
}

namespace {

ojson config_json(const RunConfig& config) {
    ojson j = ojson::object();
    for (const auto& [k, v] : resolved_config(config)) j[k] = v;
    return j;
}

ojson report_json(const ClassificationReport& r) {
    ojson j;
    j["classifier"] = r.classifier;
    j["n"] = r.n;
    j["correct"] = r.correct;
    j["accuracy"] = r.accuracy;
    j["p_value"] = r.p_value;
    j["confusion"] = {{"actual_imaginative", {{"imaginative", r.confusion[0][0]}, {"informative", r.confusion[0][1]}}},
                      {"actual_informative", {{"imaginative", r.confusion[1][0]}, {"informative", r.confusion[1][1]}}}};
    j["features"] = r.features;
    return j;
}

std::string predictions_csv(const FeatureMatrix& fm, const std::vector<ClassificationReport>& reports) {
    std::string out = "doc_id,label";
    for (const auto& r : reports) out += "," + r.classifier;
    out += "\n";
    for (std::size_t i = 0; i < fm.rows(); ++i) {
        out += fm.doc_ids[i] + "," + to_string(fm.labels[i]);
        for (const auto& r : reports) out += std::string(",") + to_string(r.predictions[i]);
        out += "\n";
    }
    return out;
}

std::string ranking_csv(const FeatureRanking& ranking) {
    std::string out = "feature,information_gain\n";
    for (const auto& [name, gain] : ranking.entries) out += name + "," + format_double(gain) + "\n";
    return out;
}

std::string classifier_label(const ClassifierSpec& s) {
    return s.kind == ClassifierSpec::Kind::knn ? "knn" + std::to_string(s.knn_k) : s.name();
}

struct Prepared {
    LoadedCorpus corpus;
    std::vector<Document> docs;
    std::vector<DocumentMeasureSet> sets;
    CacheStats cache;
};

Prepared prepare(const RunConfig& config) {
    config.validate();
    Prepared p;
    p.corpus = load_corpus(config);
    p.docs = preprocess_corpus(p.corpus, keeps_stopwords(config.strategy), config.worker_count());
    p.sets = measure_corpus(p.docs, config, &p.cache);
    std::cerr << "measures: " << p.sets.size() << " documents, " << p.cache.hits << " cached, " << p.cache.misses
              << " computed\n";
    return p;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_measure(const RunConfig& config) {
    auto p = prepare(config);
    const auto dir = config.out / "measures" / to_string(config.strategy);
    ojson index = ojson::array();
    for (const auto& set : p.sets) {
        auto body = measures_to_csv(set);
        write_file_atomic(dir / (set.doc_id + ".csv"), body);
        index.push_back({{"doc_id", set.doc_id},
                         {"label", to_string(set.label)},
                         {"nodes", set.node_labels.size()},
                         {"file", set.doc_id + ".csv"},
                         {"checksum", hex64(fnv1a(body))}});
    }
    ojson j;
    j["command"] = "measure";
    j["config"] = config_json(config);
    j["documents"] = index;
    write_file_atomic(dir / "index.json", dump(j));
    return 0;
}

int cmd_classify(const RunConfig& config) {
    auto p = prepare(config);
    auto features = build_features(p.docs, p.sets, config);
    const auto dir = config.out / to_string(config.strategy);
    write_file_atomic(dir / "features.csv", feature_matrix_to_csv(features.all));
    write_file_atomic(dir / "ranking.csv", ranking_csv(features.ranking));
    auto selected = select_top_k(features.all, std::min(config.top_k, features.all.cols()));
    write_file_atomic(dir / "selected.csv", feature_matrix_to_csv(selected));

    std::vector<ClassificationReport> reports;
    ojson results = ojson::array();
    for (const auto& spec : config.classifiers()) {
        auto r = loo_evaluate(selected, spec, config.worker_count());
        r.classifier = classifier_label(spec);
        std::cerr << to_string(config.strategy) << " " << r.classifier << ": accuracy " << r.accuracy << "\n";
        results.push_back(report_json(r));
        reports.push_back(std::move(r));
    }
    write_file_atomic(dir / "predictions.csv", predictions_csv(selected, reports));

    ojson j;
    j["command"] = "classify";
    j["config"] = config_json(config);
    j["strategy"] = to_string(config.strategy);
    j["documents"] = selected.rows();
    j["word_list"] = features.word_list;
    j["columns_before_filter"] = features.unfiltered_columns;
    j["columns_after_filter"] = features.all.cols();
    ojson top = ojson::array();
    for (std::size_t i = 0; i < selected.cols(); ++i)
        top.push_back({{"feature", features.ranking.entries[i].first},
                       {"information_gain", features.ranking.entries[i].second}});
    j["selected_features"] = top;
    j["reports"] = results;
    if (selected.cols() >= 2) {
        auto projection = pca_project(standardized(selected));
        write_file_atomic(dir / "projection.csv", projection_to_csv(selected, projection));
        j["projection"] = {{"file", "projection.csv"},
                           {"explained_variance", {projection.variance[0], projection.variance[1]}}};
    }
    write_file_atomic(dir / "classify.json", dump(j));
    return 0;
}

int cmd_relevance(const RunConfig& config) {
    if (config.relevance_features > kMaxRelevanceFeatures)
        throw Error(ErrorKind::CostGuard, "relevance sweep limited to " + std::to_string(kMaxRelevanceFeatures) +
                                              " features, asked for " + std::to_string(config.relevance_features));
    auto p = prepare(config);
    auto features = build_features(p.docs, p.sets, config);
    auto selected = select_top_k(features.all, std::min(config.relevance_features, features.all.cols()));
    auto specs = config.classifiers();
    // The sweep uses one classifier: the first listed, which is KNN for "all".
    const auto spec = specs.front();
    auto report = relevance_index(selected, spec, config.worker_count());

    const auto dir = config.out / to_string(config.strategy);
    std::string ledger = "rank,correct,accuracy,size,features\n";
    for (std::size_t i = 0; i < report.ledger.size(); ++i) {
        std::string names;
        for (std::size_t f = 0; f < report.phi(); ++f)
            if (report.ledger[i] & (1u << f)) names += (names.empty() ? "" : ";") + report.features[f];
        ledger += std::to_string(i + 1) + "," + std::to_string(report.ledger_correct[i]) + "," +
                  format_double(static_cast<double>(report.ledger_correct[i]) / static_cast<double>(report.n)) + "," +
                  std::to_string(std::popcount(report.ledger[i])) + "," + names + "\n";
    }
    write_file_atomic(dir / "relevance_ledger.csv", ledger);

    std::vector<std::size_t> order(report.phi());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (report.relevance[a] != report.relevance[b]) return report.relevance[a] > report.relevance[b];
        return report.features[a] < report.features[b];
    });
    ojson ranked = ojson::array();
    for (auto f : order) ranked.push_back({{"feature", report.features[f]}, {"R", report.relevance[f]}});
    ojson j;
    j["command"] = "relevance";
    j["config"] = config_json(config);
    j["classifier"] = classifier_label(spec);
    j["phi"] = report.phi();
    j["n"] = report.n;
    j["ranking"] = ranked;
    j["best_subset"] = {{"correct", report.ledger_correct.front()},
                        {"accuracy", static_cast<double>(report.ledger_correct.front()) / static_cast<double>(report.n)}};
    write_file_atomic(dir / "relevance.json", dump(j));
    return 0;
}

int cmd_baselines(const RunConfig& config) {
    config.validate();
    auto corpus = load_corpus(config);
    const bool relative = !config.raw_counts;
    auto content = preprocess_corpus(corpus, false, config.worker_count());
    auto with_stopwords = preprocess_corpus(corpus, true, config.worker_count());
    std::vector<std::string> ids;
    std::vector<Label> labels;
    for (const auto& e : corpus.entries) {
        ids.push_back(e.id);
        labels.push_back(e.label);
    }
    const auto dir = config.out / "baselines";

    struct Baseline {
        std::string name;
        FeatureMatrix fm;
        bool select;
    };
    std::vector<Baseline> baselines{
        {"word_lsa", word_frequency_features(content, config.baseline_words, relative), false},
        {"stopword_frequency", stopword_frequency_features(with_stopwords, corpus.dict, relative), true},
        {"char_bigram", char_bigram_features(corpus.raw, ids, labels, relative), true},
    };

    ojson j;
    j["command"] = "baselines";
    j["config"] = config_json(config);
    ojson all = ojson::array();
    for (auto& b : baselines) {
        write_file_atomic(dir / (b.name + "_features.csv"), feature_matrix_to_csv(b.fm));
        auto used = b.select ? select_top_k(b.fm, std::min(config.top_k, b.fm.cols())) : b.fm;
        ojson entry;
        entry["baseline"] = b.name;
        entry["columns"] = b.fm.cols();
        entry["used_features"] = used.feature_names;
        ojson reports = ojson::array();
        for (const auto& spec : config.classifiers()) {
            auto r = loo_evaluate(used, spec, config.worker_count());
            r.classifier = classifier_label(spec);
            std::cerr << b.name << " " << r.classifier << ": accuracy " << r.accuracy << "\n";
            reports.push_back(report_json(r));
        }
        entry["reports"] = reports;
        if (used.cols() >= 2) {
            auto projection = b.name == "word_lsa" ? lsa_project(used) : pca_project(standardized(used));
            write_file_atomic(dir / (b.name + "_projection.csv"), projection_to_csv(used, projection));
            entry["projection"] = {{"method", b.name == "word_lsa" ? "lsa" : "pca"},
                                   {"file", b.name + "_projection.csv"},
                                   {"explained_variance", {projection.variance[0], projection.variance[1]}}};
        }
        all.push_back(entry);
    }
    j["baselines"] = all;
    write_file_atomic(dir / "baselines.json", dump(j));
    return 0;
}

int cmd_export_network(const RunConfig& config) {
    config.validate();
    auto corpus = load_corpus(config);
    auto docs = preprocess_corpus(corpus, keeps_stopwords(config.strategy), config.worker_count());
    bool found = config.doc.empty();
    for (const auto& doc : docs) {
        if (!config.doc.empty() && doc.id != config.doc) continue;
        found = true;
        write_file_atomic(config.out / "networks" / to_string(config.strategy) / (doc.id + ".json"),
                          network_to_json(build_network(doc, config.window)) + "\n");
    }
    if (!found) throw Error(ErrorKind::InvalidArgument, "no document with id '" + config.doc + "'");
    return 0;
}

}  // namespace textnet
