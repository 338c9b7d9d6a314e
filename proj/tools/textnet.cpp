#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "textnet/error.hpp"
#include "textnet/pipeline.hpp"

using namespace textnet;

namespace {

struct Overrides {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "flat key=value config file; flags override it");
    auto value = [&](const std::string& name, const std::string& help) {
        cmd->add_option("--" + name, o.values[name], help);
    };
    value("manifest", "tab-separated manifest: id, label, path");
    value("lemmas", "lemma dictionary (surface<TAB>lemma)");
    value("stoplist", "stopword list, one lemma per line");
    value("out", "output directory");
    value("cache", "measure cache directory (default <out>/cache)");
    value("strategy", "GS, LS or LSS");
    value("words", "word-list size W for local strategies");
    value("coverage", "minimum document coverage of word-list lemmas");
    value("h", "comma-separated walk lengths, each in 1..4");
    value("top-k", "number of features kept after information-gain ranking");
    value("classifier", "all, or a comma list of knn, cart, nb");
    value("knn-k", "neighbors for KNN");
    value("cart-min-leaf", "minimum rows per CART leaf");
    value("nb-smoothing", "naive Bayes variance smoothing");
    value("alpha", "PageRank damping");
    value("rho-max", "largest |pearson| with word frequency a local feature may have");
    value("closeness", "mean or reciprocal");
    value("window", "adjacency window");
    value("longest", "keep the N longest documents per class (0 keeps all)");
    value("length-by", "raw or processed token counts for --longest");
    value("relevance-features", "features in the relevance sweep (at most 15)");
    value("baseline-words", "frequent words used by the LSA baseline");
    value("threads", "worker threads (0 = all cores)");
    const std::pair<const char*, const char*> flags[]{
        {"cumulative", "N counts nodes within 1..h instead of exactly h"},
        {"ag-exclude-self", "drop the diagonal of exp(P) in generalized accessibility"},
        {"raw-counts", "baselines use raw counts instead of relative frequencies"},
        {"no-cache", "recompute measures, neither reading nor writing the cache"},
    };
    for (const auto& [flag, text] : flags) cmd->add_flag(std::string("--") + flag, o.flags[flag], text);
}

RunConfig resolve(const Overrides& o) {
    RunConfig config;
    if (!o.config_file.empty()) apply_config_file(config, o.config_file);
    for (const auto& [key, value] : o.values)
        if (!value.empty()) set_config_value(config, key, value);
    for (const auto& [flag, on] : o.flags) {
        if (!on) continue;
        if (flag == "no-cache") config.use_cache = false;
        else set_config_value(config, flag, "true");
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word-adjacency network measurements and prose-style classification"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string doc;
    std::map<std::string, int (*)(const RunConfig&)> commands{
        {"measure", cmd_measure},   {"classify", cmd_classify},           {"relevance", cmd_relevance},
        {"baselines", cmd_baselines}, {"export-network", cmd_export_network},
    };
    std::map<std::string, std::string> help{
        {"measure", "compute per-document measure CSVs"},
        {"classify", "features, information-gain selection, leave-one-out classification"},
        {"relevance", "exhaustive feature-subset relevance index"},
        {"baselines", "word LSA, stopword frequency and character bigram baselines"},
        {"export-network", "write document networks as JSON"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name, help[name]);
        sub->set_help_flag("--help", "print this help");  // -h is taken by the walk lengths
        add_common(sub, overrides);
        if (name == "export-network") sub->add_option("--doc", doc, "only this document id");
        subs.push_back(sub);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        for (auto* sub : subs) {
            if (!sub->parsed()) continue;
            auto config = resolve(overrides);
            if (!doc.empty()) config.doc = doc;
            return commands.at(sub->get_name())(config);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
