#include "textnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "textnet/error.hpp"

namespace textnet {

const char* to_string(Label label) {
    return label == Label::informative ? "informative" : "imaginative";
}

Label parse_label(std::string_view text) {
    if (text == "informative") return Label::informative;
    if (text == "imaginative") return Label::imaginative;
    throw Error(ErrorKind::UnknownLabel, "'" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(trim(line.substr(start, tab == std::string_view::npos ? tab : tab - start)));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

bool is_lower_alpha(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::UnreadablePath, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::UnreadablePath, path.string());
    return buffer.str();
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::UnreadablePath, path.string());
    const auto base = path.parent_path();

    CorpusManifest manifest;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        auto fields = split_tabs(content);
        if (fields.size() != 3 || fields[0].empty() || fields[2].empty())
            throw Error(ErrorKind::MalformedInput,
                        path.string() + ":" + std::to_string(line_no) + ": expected id<TAB>label<TAB>path");
        ManifestEntry entry{std::string(fields[0]), parse_label(fields[1]), std::filesystem::path(fields[2])};
        if (entry.path.is_relative()) entry.path = base / entry.path;
        if (!ids.insert(entry.id).second) throw Error(ErrorKind::DuplicateId, entry.id);
        std::ifstream probe(entry.path);
        if (!probe) throw Error(ErrorKind::UnreadablePath, entry.path.string());
        manifest.entries.push_back(std::move(entry));
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });

    bool has_informative = false, has_imaginative = false;
    for (const auto& e : manifest.entries) {
        has_informative |= e.label == Label::informative;
        has_imaginative |= e.label == Label::imaginative;
    }
    if (!has_informative || !has_imaginative)
        throw Error(ErrorKind::MissingClass, path.string() + ": both class labels must be present");
    return manifest;
}

LemmaDictionary::LemmaDictionary(std::unordered_map<std::string, std::string> lemmas,
                                 std::unordered_set<std::string> stoplist)
    : lemmas_(std::move(lemmas)), stoplist_(std::move(stoplist)) {
    // Collapse chains (a -> b -> c) so that lemma(lemma(x)) == lemma(x).
    // A cycle settles on its lexicographically smallest member.
    std::unordered_map<std::string, std::string> resolved;
    for (const auto& [surface, first] : lemmas_) {
        std::vector<std::string> seen{surface};
        std::string current = first;
        while (true) {
            auto cycle = std::find(seen.begin(), seen.end(), current);
            if (cycle != seen.end()) {
                current = *std::min_element(cycle, seen.end());
                break;
            }
            auto next = lemmas_.find(current);
            if (next == lemmas_.end()) break;
            seen.push_back(current);
            current = next->second;
        }
        resolved.emplace(surface, current);
    }
    lemmas_.clear();
    for (auto& [surface, lemma] : resolved)
        if (surface != lemma) lemmas_.emplace(surface, std::move(lemma));
}

const std::string& LemmaDictionary::lemma(const std::string& surface) const {
    auto it = lemmas_.find(surface);
    return it == lemmas_.end() ? surface : it->second;
}

LemmaDictionary load_dictionary(const std::filesystem::path& lemma_path,
                                const std::filesystem::path& stoplist_path) {
    std::unordered_map<std::string, std::string> lemmas;
    std::unordered_set<std::string> stoplist;
    std::string line;
    if (!lemma_path.empty()) {
        std::ifstream in(lemma_path);
        if (!in) throw Error(ErrorKind::UnreadablePath, lemma_path.string());
        while (std::getline(in, line)) {
            auto content = trim(line);
            if (content.empty() || content.front() == '#') continue;
            auto fields = split_tabs(content);
            if (fields.size() != 2) throw Error(ErrorKind::MalformedInput, lemma_path.string() + ": " + line);
            std::string surface(fields[0]), lemma(fields[1]);
            std::transform(surface.begin(), surface.end(), surface.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            std::transform(lemma.begin(), lemma.end(), lemma.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            // Entries that could never match a token, or would produce a
            // non-token lemma, are ignored.
            if (!is_lower_alpha(surface) || !is_lower_alpha(lemma)) continue;
            lemmas.emplace(std::move(surface), std::move(lemma));
        }
    }
    if (!stoplist_path.empty()) {
        std::ifstream in(stoplist_path);
        if (!in) throw Error(ErrorKind::UnreadablePath, stoplist_path.string());
        while (std::getline(in, line)) {
            auto content = trim(line);
            if (content.empty() || content.front() == '#') continue;
            std::string word(content);
            std::transform(word.begin(), word.end(), word.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            stoplist.insert(std::move(word));
        }
    }
    return LemmaDictionary(std::move(lemmas), std::move(stoplist));
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::isalpha(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Document preprocess(std::string_view raw_text, const LemmaDictionary& dict, bool keep_stopwords,
                    std::string id, Label label) {
    Document doc;
    doc.id = std::move(id);
    doc.label = label;
    auto surface = tokenize(raw_text);
    doc.raw_token_count = surface.size();
    for (const auto& s : surface) {
        const std::string& lemma = dict.lemma(s);
        bool stop = dict.is_stopword(lemma);
        if (stop && !keep_stopwords) continue;
        doc.tokens.push_back(lemma);
        doc.stopword_mask.push_back(stop);
    }
    if (doc.tokens.empty())
        throw Error(ErrorKind::EmptyDocument, doc.id.empty() ? std::string("no tokens left") : doc.id);
    return doc;
}

std::map<std::string, std::size_t> word_frequencies(const Document& doc) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : doc.tokens) ++counts[t];
    return counts;
}

}  // namespace textnet
