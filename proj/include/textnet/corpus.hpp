#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace textnet {

// Enumerators are in lexicographic order of their names; tie-breaks that
// prefer "the smaller label" rely on this.
enum class Label { imaginative = 0, informative = 1 };

const char* to_string(Label label);
Label parse_label(std::string_view text);

struct ManifestEntry {
    std::string id;
    Label label;
    std::filesystem::path path;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;  // sorted by id
};

// Tab-separated id, label, path per line; '#' starts a comment line.
// Relative paths resolve against the manifest's directory.
CorpusManifest load_manifest(const std::filesystem::path& path);

class LemmaDictionary {
public:
    LemmaDictionary() = default;
    LemmaDictionary(std::unordered_map<std::string, std::string> lemmas,
                    std::unordered_set<std::string> stoplist);

    // Unknown surface forms map to themselves.
    const std::string& lemma(const std::string& surface) const;
    bool is_stopword(const std::string& lemma) const { return stoplist_.count(lemma) > 0; }

    const std::unordered_set<std::string>& stoplist() const { return stoplist_; }
    std::size_t size() const { return lemmas_.size(); }

private:
    std::unordered_map<std::string, std::string> lemmas_;
    std::unordered_set<std::string> stoplist_;
};

// surface<TAB>lemma lines and one-lemma-per-line stoplist. Chains in the
// lemma table are collapsed so that lookup is idempotent. Either path may be
// empty to load nothing.
LemmaDictionary load_dictionary(const std::filesystem::path& lemma_path,
                                const std::filesystem::path& stoplist_path);

struct Document {
    std::string id;
    Label label = Label::imaginative;
    std::vector<std::string> tokens;
    std::size_t raw_token_count = 0;
    std::vector<bool> stopword_mask;  // true = token is a stopword
};

// Lowercased alphabetic runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

Document preprocess(std::string_view raw_text, const LemmaDictionary& dict, bool keep_stopwords,
                    std::string id = {}, Label label = Label::imaginative);

std::map<std::string, std::size_t> word_frequencies(const Document& doc);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace textnet
