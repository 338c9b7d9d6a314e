#include "textnet/learn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "textnet/error.hpp"
#include "textnet/parallel.hpp"

namespace textnet {

void Dataset::add(std::span<const double> features, Label label) {
    if (y.empty() && x.empty()) cols = features.size();
    if (features.size() != cols) throw Error(ErrorKind::InvalidArgument, "row width mismatch");
    x.insert(x.end(), features.begin(), features.end());
    y.push_back(label);
}

Dataset to_dataset(const FeatureMatrix& fm) {
    Dataset d;
    d.cols = fm.cols();
    d.x = fm.values;
    d.y = fm.labels;
    for (double v : d.x)
        if (is_missing(v)) throw Error(ErrorKind::InvalidArgument, "feature matrix still has missing values");
    return d;
}

Standardizer Standardizer::fit(const Dataset& train) {
    Standardizer s;
    s.mean.assign(train.cols, 0.0);
    s.scale.assign(train.cols, 1.0);
    const double n = static_cast<double>(train.rows());
    if (train.rows() == 0) return s;
    for (std::size_t r = 0; r < train.rows(); ++r)
        for (std::size_t c = 0; c < train.cols; ++c) s.mean[c] += train.x[r * train.cols + c];
    for (auto& m : s.mean) m /= n;
    std::vector<double> ss(train.cols, 0.0);
    for (std::size_t r = 0; r < train.rows(); ++r)
        for (std::size_t c = 0; c < train.cols; ++c) {
            double d = train.x[r * train.cols + c] - s.mean[c];
            ss[c] += d * d;
        }
    for (std::size_t c = 0; c < train.cols; ++c) {
        double sd = std::sqrt(ss[c] / n);
        s.scale[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - mean[c]) / scale[c];
    return out;
}

Dataset Standardizer::apply(const Dataset& data) const {
    Dataset out;
    out.cols = data.cols;
    out.y = data.y;
    out.x.resize(data.x.size());
    for (std::size_t r = 0; r < data.rows(); ++r)
        for (std::size_t c = 0; c < data.cols; ++c)
            out.x[r * data.cols + c] = (data.x[r * data.cols + c] - mean[c]) / scale[c];
    return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double d = a[c] - b[c];
        total += d * d;
    }
    return total;
}

// Votes among rows within the K-th smallest distance.
Label knn_vote(const std::vector<double>& dist, const std::vector<Label>& labels, unsigned k) {
    if (dist.empty()) throw Error(ErrorKind::InvalidArgument, "KNN needs a nonempty training set");
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "KNN needs K >= 1");
    double radius;
    if (k >= dist.size()) {
        radius = *std::max_element(dist.begin(), dist.end());
    } else {
        std::vector<double> sorted(dist);
        std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
        radius = sorted[k - 1];
    }
    std::array<std::size_t, 2> votes{};
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] <= radius) ++votes[static_cast<int>(labels[i])];
    return votes[1] > votes[0] ? Label::informative : Label::imaginative;
}

}  // namespace

Label knn_classify(const Dataset& train, std::span<const double> row, unsigned k) {
    std::vector<double> dist(train.rows());
    for (std::size_t r = 0; r < train.rows(); ++r) dist[r] = squared_distance(train.row(r), row);
    return knn_vote(dist, train.y, k);
}

std::size_t CartTree::depth() const {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t best = 0;
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (nodes[node].feature >= 0) {
            stack.push_back({nodes[node].left, d + 1});
            stack.push_back({nodes[node].right, d + 1});
        }
    }
    return best;
}

namespace {

struct CartBuilder {
    const Dataset& data;
    std::size_t min_leaf;
    CartTree tree;

    static Label majority(const std::array<std::int64_t, 2>& counts) {
        return counts[1] > counts[0] ? Label::informative : Label::imaginative;
    }

    std::size_t build(std::vector<std::size_t> rows) {
        std::array<std::int64_t, 2> counts{};
        for (auto r : rows) ++counts[static_cast<int>(data.y[r])];
        const std::size_t index = tree.nodes.size();
        tree.nodes.push_back({});
        tree.nodes[index].label = majority(counts);
        const auto n = static_cast<std::int64_t>(rows.size());
        if (counts[0] == 0 || counts[1] == 0 || rows.size() < 2 * min_leaf) return index;

        // Minimizing weighted Gini equals maximizing
        // (sum_c left_c^2) / n_left + (sum_c right_c^2) / n_right, compared
        // exactly as fractions.
        bool found = false;
        __int128 best_num = 0, best_den = 1;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::size_t> order(rows);
        for (std::size_t f = 0; f < data.cols; ++f) {
            auto value = [&](std::size_t r) { return data.x[r * data.cols + f]; };
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value(a) < value(b); });
            std::array<std::int64_t, 2> left{};
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                ++left[static_cast<int>(data.y[order[i]])];
                double lo = value(order[i]), hi = value(order[i + 1]);
                if (!(lo < hi)) continue;
                const auto nl = static_cast<std::int64_t>(i + 1), nr = n - nl;
                if (nl < static_cast<std::int64_t>(min_leaf) || nr < static_cast<std::int64_t>(min_leaf)) continue;
                std::array<std::int64_t, 2> right{counts[0] - left[0], counts[1] - left[1]};
                __int128 sl = left[0] * left[0] + left[1] * left[1];
                __int128 sr = right[0] * right[0] + right[1] * right[1];
                __int128 num = sl * nr + sr * nl, den = static_cast<__int128>(nl) * nr;
                if (!found || num * best_den > best_num * den) {
                    found = true;
                    best_num = num;
                    best_den = den;
                    best_feature = static_cast<int>(f);
                    best_threshold = lo + (hi - lo) / 2.0;
                }
            }
            order = rows;
        }
        if (!found) return index;

        std::vector<std::size_t> left_rows, right_rows;
        for (auto r : rows)
            (data.x[r * data.cols + static_cast<std::size_t>(best_feature)] <= best_threshold ? left_rows : right_rows)
                .push_back(r);
        tree.nodes[index].feature = best_feature;
        tree.nodes[index].threshold = best_threshold;
        auto l = build(std::move(left_rows));
        auto r = build(std::move(right_rows));
        tree.nodes[index].left = l;
        tree.nodes[index].right = r;
        return index;
    }
};

}  // namespace

CartTree cart_train(const Dataset& train, std::size_t min_leaf) {
    if (train.rows() == 0) throw Error(ErrorKind::InvalidArgument, "CART needs at least one training row");
    CartBuilder builder{train, std::max<std::size_t>(min_leaf, 1), {}};
    std::vector<std::size_t> rows(train.rows());
    std::iota(rows.begin(), rows.end(), 0);
    builder.build(std::move(rows));
    return std::move(builder.tree);
}

Label cart_classify(const CartTree& tree, std::span<const double> row) {
    std::size_t node = 0;
    while (tree.nodes[node].feature >= 0) {
        const auto& n = tree.nodes[node];
        node = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return tree.nodes[node].label;
}

double GaussianNaiveBayes::log_joint(std::span<const double> row, Label label) const {
    const int c = static_cast<int>(label);
    double total = log_prior[c];
    for (std::size_t f = 0; f < row.size(); ++f) {
        const double var = variance[c][f];
        const double d = row[f] - mean[c][f];
        total += -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
    }
    return total;
}

GaussianNaiveBayes nb_train(const Dataset& train, double smoothing) {
    GaussianNaiveBayes model;
    std::array<std::size_t, 2> count{};
    for (auto y : train.y) ++count[static_cast<int>(y)];
    for (int c = 0; c < 2; ++c)
        if (count[c] == 0)
            throw Error(ErrorKind::MissingClass,
                        std::string("class '") + to_string(static_cast<Label>(c)) + "' absent from training data");

    const auto cols = train.cols;
    double max_var = 0.0;
    for (std::size_t f = 0; f < cols; ++f) {
        double mean = 0.0, ss = 0.0;
        for (std::size_t r = 0; r < train.rows(); ++r) mean += train.x[r * cols + f];
        mean /= static_cast<double>(train.rows());
        for (std::size_t r = 0; r < train.rows(); ++r) ss += std::pow(train.x[r * cols + f] - mean, 2);
        max_var = std::max(max_var, ss / static_cast<double>(train.rows()));
    }
    const double epsilon = max_var > 0.0 ? smoothing * max_var : smoothing;

    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(count[c]) / static_cast<double>(train.rows()));
        model.mean[c].assign(cols, 0.0);
        model.variance[c].assign(cols, 0.0);
    }
    for (std::size_t r = 0; r < train.rows(); ++r) {
        int c = static_cast<int>(train.y[r]);
        for (std::size_t f = 0; f < cols; ++f) model.mean[c][f] += train.x[r * cols + f];
    }
    for (int c = 0; c < 2; ++c)
        for (auto& m : model.mean[c]) m /= static_cast<double>(count[c]);
    for (std::size_t r = 0; r < train.rows(); ++r) {
        int c = static_cast<int>(train.y[r]);
        for (std::size_t f = 0; f < cols; ++f) model.variance[c][f] += std::pow(train.x[r * cols + f] - model.mean[c][f], 2);
    }
    for (int c = 0; c < 2; ++c)
        for (auto& v : model.variance[c]) v = v / static_cast<double>(count[c]) + epsilon;
    return model;
}

Label nb_classify(const GaussianNaiveBayes& model, std::span<const double> row) {
    return model.log_joint(row, Label::informative) > model.log_joint(row, Label::imaginative) ? Label::informative
                                                                                                : Label::imaginative;
}

std::string ClassifierSpec::name() const {
    switch (kind) {
        case Kind::knn: return "knn";
        case Kind::cart: return "cart";
        case Kind::naive_bayes: return "naive_bayes";
    }
    return "unknown";
}

ClassifierSpec::Kind parse_classifier(const std::string& name) {
    if (name == "knn") return ClassifierSpec::Kind::knn;
    if (name == "cart") return ClassifierSpec::Kind::cart;
    if (name == "nb" || name == "naive_bayes" || name == "bayes") return ClassifierSpec::Kind::naive_bayes;
    throw Error(ErrorKind::InvalidArgument, "unknown classifier '" + name + "'");
}

Label train_and_classify(const ClassifierSpec& spec, const Dataset& train, std::span<const double> row) {
    switch (spec.kind) {
        case ClassifierSpec::Kind::knn: return knn_classify(train, row, spec.knn_k);
        case ClassifierSpec::Kind::cart: return cart_classify(cart_train(train, spec.cart_min_leaf), row);
        case ClassifierSpec::Kind::naive_bayes: return nb_classify(nb_train(train, spec.nb_smoothing), row);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown classifier");
}

namespace {

Dataset without_row(const Dataset& data, std::size_t skip) {
    Dataset out;
    out.cols = data.cols;
    out.x.reserve(data.x.size() - data.cols);
    out.y.reserve(data.rows() - 1);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        if (r == skip) continue;
        auto row = data.row(r);
        out.x.insert(out.x.end(), row.begin(), row.end());
        out.y.push_back(data.y[r]);
    }
    return out;
}

}  // namespace

ClassificationReport loo_evaluate(const FeatureMatrix& fm, const ClassifierSpec& spec, unsigned threads) {
    const auto data = to_dataset(fm);
    const auto n = data.rows();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "leave-one-out needs at least 2 rows");
    ClassificationReport report;
    report.classifier = spec.name();
    report.n = n;
    report.features = fm.feature_names;
    report.predictions.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        auto train = without_row(data, i);
        auto scaler = Standardizer::fit(train);
        auto test = scaler.apply(data.row(i));
        report.predictions[i] = train_and_classify(spec, scaler.apply(train), test);
    });
    for (std::size_t i = 0; i < n; ++i) {
        ++report.confusion[static_cast<int>(data.y[i])][static_cast<int>(report.predictions[i])];
        if (report.predictions[i] == data.y[i]) ++report.correct;
    }
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(n);
    report.p_value = significance(report.accuracy, n);
    return report;
}

double significance(double accuracy, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "significance needs n >= 1");
    const auto successes = static_cast<std::size_t>(std::llround(std::clamp(accuracy, 0.0, 1.0) * static_cast<double>(n)));
    const double dn = static_cast<double>(n);
    auto log_pmf = [&](std::size_t x) {
        const double dx = static_cast<double>(x);
        return std::lgamma(dn + 1.0) - std::lgamma(dx + 1.0) - std::lgamma(dn - dx + 1.0) - dn * std::log(2.0);
    };
    double peak = -INFINITY;
    for (std::size_t x = successes; x <= n; ++x) peak = std::max(peak, log_pmf(x));
    double total = 0.0;
    for (std::size_t x = successes; x <= n; ++x) total += std::exp(log_pmf(x) - peak);
    return std::min(1.0, std::exp(peak) * total);
}

RelevanceReport relevance_from_scores(const std::vector<std::string>& features,
                                      const std::vector<std::size_t>& correct_by_mask, std::size_t n) {
    const std::size_t phi = features.size();
    if (phi == 0) throw Error(ErrorKind::InvalidArgument, "relevance needs at least one feature");
    if (phi > kMaxRelevanceFeatures)
        throw Error(ErrorKind::CostGuard, "relevance sweep limited to " + std::to_string(kMaxRelevanceFeatures) +
                                              " features, got " + std::to_string(phi));
    const std::uint32_t subsets = (1u << phi) - 1;
    if (correct_by_mask.size() != subsets + 1u)
        throw Error(ErrorKind::InvalidArgument, "need one score per nonempty subset");
    RelevanceReport report;
    report.features = features;
    report.n = n;
    report.ledger.resize(subsets);
    std::iota(report.ledger.begin(), report.ledger.end(), 1u);
    std::sort(report.ledger.begin(), report.ledger.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (correct_by_mask[a] != correct_by_mask[b]) return correct_by_mask[a] > correct_by_mask[b];
        if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
        return a < b;
    });
    for (auto mask : report.ledger) report.ledger_correct.push_back(correct_by_mask[mask]);

    // The relevance sum runs to 2^(phi - 1) ranks even though the ledger is longer.
    const std::size_t horizon = std::size_t{1} << (phi - 1);
    report.omega.assign(phi, std::vector<std::uint64_t>(horizon, 0));
    report.relevance.assign(phi, 0);
    for (std::size_t f = 0; f < phi; ++f) {
        std::uint64_t running = 0;
        for (std::size_t k = 0; k < horizon; ++k) {
            if (report.ledger[k] & (1u << f)) ++running;
            report.omega[f][k] = running;
            report.relevance[f] += running;
        }
    }
    return report;
}

RelevanceReport relevance_index(const FeatureMatrix& fm, const ClassifierSpec& spec, unsigned threads) {
    const std::size_t phi = fm.cols();
    if (phi > kMaxRelevanceFeatures)
        throw Error(ErrorKind::CostGuard, "relevance sweep limited to " + std::to_string(kMaxRelevanceFeatures) +
                                              " features, got " + std::to_string(phi));
    if (phi == 0) throw Error(ErrorKind::InvalidArgument, "relevance needs at least one feature");
    const auto data = to_dataset(fm);
    const auto n = data.rows();
    const std::uint32_t subsets = (1u << phi) - 1;
    std::vector<std::size_t> correct(subsets + 1u, 0);

    if (spec.kind == ClassifierSpec::Kind::knn) {
        // Standardization is per column, so each fold's scaled per-feature
        // squared differences can be shared by every subset. Summing them in
        // column order reproduces knn_classify on the projected matrix exactly.
        std::vector<double> diff(n * n * phi, 0.0);  // [fold][row][feature]
        parallel_for(n, threads, [&](std::size_t t) {
            auto train = without_row(data, t);
            auto scaler = Standardizer::fit(train);
            auto test = scaler.apply(data.row(t));
            for (std::size_t r = 0; r < n; ++r) {
                if (r == t) continue;
                auto z = scaler.apply(data.row(r));
                for (std::size_t f = 0; f < phi; ++f) {
                    double d = z[f] - test[f];
                    diff[(t * n + r) * phi + f] = d * d;
                }
            }
        });
        parallel_for(subsets, threads, [&](std::size_t index) {
            const auto mask = static_cast<std::uint32_t>(index + 1);
            std::vector<std::size_t> bits;
            for (std::size_t f = 0; f < phi; ++f)
                if (mask & (1u << f)) bits.push_back(f);
            std::vector<double> dist;
            std::vector<Label> labels;
            std::size_t hits = 0;
            for (std::size_t t = 0; t < n; ++t) {
                dist.clear();
                labels.clear();
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == t) continue;
                    const double* row = &diff[(t * n + r) * phi];
                    double total = 0.0;
                    for (auto f : bits) total += row[f];
                    dist.push_back(total);
                    labels.push_back(data.y[r]);
                }
                if (knn_vote(dist, labels, spec.knn_k) == data.y[t]) ++hits;
            }
            correct[mask] = hits;
        });
    } else {
        parallel_for(subsets, threads, [&](std::size_t index) {
            const auto mask = static_cast<std::uint32_t>(index + 1);
            std::vector<std::size_t> columns;
            for (std::size_t f = 0; f < phi; ++f)
                if (mask & (1u << f)) columns.push_back(f);
            correct[mask] = loo_evaluate(fm.select_columns(columns), spec, 1).correct;
        });
    }
    return relevance_from_scores(fm.feature_names, correct, n);
}

EigenPairs top_eigenpairs(const std::vector<std::vector<double>>& symmetric, std::size_t count, double tolerance,
                          unsigned max_iterations) {
    const std::size_t d = symmetric.size();
    auto m = symmetric;
    EigenPairs out;
    for (std::size_t k = 0; k < std::min(count, d); ++k) {
        // Fixed, non-degenerate start so the result is reproducible.
        std::vector<double> v(d), next(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i * (k + 1)));
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (auto& x : v) x /= norm;
        double lambda = 0.0;
        for (unsigned iter = 0; iter < max_iterations; ++iter) {
            for (std::size_t i = 0; i < d; ++i) next[i] = std::inner_product(m[i].begin(), m[i].end(), v.begin(), 0.0);
            norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
            if (norm == 0.0) {
                lambda = 0.0;
                break;
            }
            for (auto& x : next) x /= norm;
            double change = 0.0;
            for (std::size_t i = 0; i < d; ++i) change = std::max(change, std::abs(next[i] - v[i]));
            v.swap(next);
            lambda = norm;
            if (change < tolerance) break;
        }
        // Rayleigh quotient is the better eigenvalue estimate.
        for (std::size_t i = 0; i < d; ++i) next[i] = std::inner_product(m[i].begin(), m[i].end(), v.begin(), 0.0);
        lambda = std::inner_product(v.begin(), v.end(), next.begin(), 0.0);
        std::size_t lead = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (std::abs(v[i]) > std::abs(v[lead])) lead = i;
        if (v[lead] < 0)
            for (auto& x : v) x = -x;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m[i][j] -= lambda * v[i] * v[j];
        out.values.push_back(lambda);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

namespace {

Projection project(const std::vector<std::vector<double>>& rows, const std::vector<std::vector<double>>& gram,
                   double divisor) {
    const std::size_t d = gram.size();
    auto scaled = gram;
    for (auto& row : scaled)
        for (auto& x : row) x /= divisor;
    auto pairs = top_eigenpairs(scaled, 2);
    Projection p;
    for (std::size_t k = 0; k < 2; ++k) {
        p.variance[k] = k < pairs.values.size() ? pairs.values[k] : 0.0;
        p.axes.push_back(k < pairs.vectors.size() ? pairs.vectors[k] : std::vector<double>(d, 0.0));
    }
    for (const auto& row : rows)
        p.coords.push_back({std::inner_product(row.begin(), row.end(), p.axes[0].begin(), 0.0),
                            std::inner_product(row.begin(), row.end(), p.axes[1].begin(), 0.0)});
    return p;
}

std::vector<std::vector<double>> gram_matrix(const std::vector<std::vector<double>>& rows, std::size_t d) {
    std::vector<std::vector<double>> g(d, std::vector<double>(d, 0.0));
    for (const auto& row : rows)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) g[i][j] += row[i] * row[j];
    return g;
}

}  // namespace

Projection pca_project(const FeatureMatrix& fm) {
    if (fm.cols() < 2) throw Error(ErrorKind::InvalidArgument, "PCA needs at least 2 features");
    if (fm.rows() < 2) throw Error(ErrorKind::InvalidArgument, "PCA needs at least 2 rows");
    const std::size_t d = fm.cols();
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < fm.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += fm.at(r, c);
    for (auto& m : mean) m /= static_cast<double>(fm.rows());
    std::vector<std::vector<double>> centered(fm.rows(), std::vector<double>(d));
    for (std::size_t r = 0; r < fm.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) centered[r][c] = fm.at(r, c) - mean[c];
    return project(centered, gram_matrix(centered, d), static_cast<double>(fm.rows() - 1));
}

Projection lsa_project(const FeatureMatrix& fm) {
    const std::size_t d = fm.cols();
    std::vector<std::vector<double>> rows(fm.rows());
    for (std::size_t r = 0; r < fm.rows(); ++r) rows[r].assign(fm.row(r).begin(), fm.row(r).end());
    return project(rows, gram_matrix(rows, d), 1.0);
}

namespace {

FeatureMatrix frequency_matrix(const std::vector<std::string>& ids, const std::vector<Label>& labels,
                               const std::vector<std::map<std::string, double>>& counts,
                               const std::vector<double>& totals, const std::vector<std::string>& columns,
                               const std::string& prefix, bool relative) {
    FeatureMatrix fm;
    fm.doc_ids = ids;
    fm.labels = labels;
    for (const auto& c : columns) fm.feature_names.push_back(prefix + c);
    for (std::size_t d = 0; d < ids.size(); ++d)
        for (const auto& c : columns) {
            auto it = counts[d].find(c);
            double v = it == counts[d].end() ? 0.0 : it->second;
            if (relative) v = totals[d] > 0.0 ? v / totals[d] : 0.0;
            fm.values.push_back(v);
        }
    return fm;
}

}  // namespace

FeatureMatrix word_frequency_features(const std::vector<Document>& docs, std::size_t count, bool relative) {
    std::vector<std::string> ids;
    std::vector<Label> labels;
    std::vector<std::map<std::string, double>> counts;
    std::vector<double> totals;
    std::map<std::string, double> global;
    for (const auto& doc : docs) {
        ids.push_back(doc.id);
        labels.push_back(doc.label);
        counts.emplace_back();
        double total = 0.0;
        for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
            if (t < doc.stopword_mask.size() && doc.stopword_mask[t]) continue;
            counts.back()[doc.tokens[t]] += 1.0;
            global[doc.tokens[t]] += 1.0;
            total += 1.0;
        }
        totals.push_back(total);
    }
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [w, c] : global) ranked.emplace_back(c, w);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::string> columns;
    for (std::size_t i = 0; i < ranked.size() && i < count; ++i) columns.push_back(ranked[i].second);
    return frequency_matrix(ids, labels, counts, totals, columns, "freq@", relative);
}

FeatureMatrix stopword_frequency_features(const std::vector<Document>& docs, const LemmaDictionary& dict,
                                          bool relative) {
    if (dict.stoplist().empty()) throw Error(ErrorKind::InvalidArgument, "stopword features need a stoplist");
    std::vector<std::string> ids;
    std::vector<Label> labels;
    std::vector<std::map<std::string, double>> counts;
    std::vector<double> totals;
    std::map<std::string, double> seen;
    for (const auto& doc : docs) {
        ids.push_back(doc.id);
        labels.push_back(doc.label);
        counts.emplace_back();
        for (const auto& t : doc.tokens)
            if (dict.is_stopword(t)) {
                counts.back()[t] += 1.0;
                seen[t] += 1.0;
            }
        totals.push_back(static_cast<double>(doc.tokens.size()));
    }
    std::vector<std::string> columns;
    for (const auto& [w, c] : seen) columns.push_back(w);
    return frequency_matrix(ids, labels, counts, totals, columns, "freq@", relative);
}

FeatureMatrix char_bigram_features(const std::vector<std::string>& raw_texts, const std::vector<std::string>& ids,
                                   const std::vector<Label>& labels, bool relative) {
    if (raw_texts.size() != ids.size() || ids.size() != labels.size())
        throw Error(ErrorKind::InvalidArgument, "bigram inputs must align");
    std::vector<std::map<std::string, double>> counts(raw_texts.size());
    std::vector<double> totals(raw_texts.size(), 0.0);
    std::map<std::string, double> seen;
    for (std::size_t d = 0; d < raw_texts.size(); ++d)
        for (const auto& word : tokenize(raw_texts[d]))
            for (std::size_t i = 0; i + 1 < word.size(); ++i) {
                auto bigram = word.substr(i, 2);
                counts[d][bigram] += 1.0;
                seen[bigram] += 1.0;
                totals[d] += 1.0;
            }
    std::vector<std::string> columns;
    for (const auto& [b, c] : seen) columns.push_back(b);
    return frequency_matrix(ids, labels, counts, totals, columns, "bigram@", relative);
}

ClassificationReport select_and_evaluate(const FeatureMatrix& fm, std::size_t k, const ClassifierSpec& spec,
                                         unsigned threads) {
    auto selected = select_top_k(fm, std::min(k, fm.cols()));
    return loo_evaluate(selected, spec, threads);
}

}  // namespace textnet
