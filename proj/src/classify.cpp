#include "stsync/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "stsync/kernels.hpp"

namespace stsync {

double chi2_distance(const Histogram& a, const Histogram& b, double eps) {
    if (a.weights.size() != b.weights.size())
        throw std::invalid_argument("chi2_distance: histogram size mismatch");
    return kernels::chi2(a.weights.data(), b.weights.data(), a.weights.size(), eps);
}

double chi2_kernel(const Histogram& a, const Histogram& b, double gamma, double eps) {
    if (!(gamma > 0.0)) throw std::invalid_argument("chi2_kernel: gamma must be positive");
    return std::exp(-chi2_distance(a, b, eps) / gamma);
}

double mean_pairwise_chi2(const std::vector<Histogram>& hists, double eps) {
    if (hists.size() < 2) throw std::invalid_argument("mean_pairwise_chi2: need >= 2 histograms");
    double acc = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < hists.size(); ++i)
        for (std::size_t j = i + 1; j < hists.size(); ++j) {
            acc += chi2_distance(hists[i], hists[j], eps);
            ++pairs;
        }
    return acc / static_cast<double>(pairs);
}

Mat chi2_kernel_matrix(const std::vector<Histogram>& hists, double gamma, double eps) {
    const std::size_t n = hists.size();
    Mat k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = chi2_kernel(hists[i], hists[j], gamma, eps);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

std::int64_t knn_classify(const std::vector<LabeledHistogram>& train, const Histogram& test,
                          std::size_t k) {
    if (train.empty()) throw std::invalid_argument("knn_classify: empty training set");
    if (k < 1 || k > train.size())
        throw std::invalid_argument("knn_classify: k out of range");

    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        dist[i] = {chi2_distance(train[i].hist, test), i};
    std::stable_sort(dist.begin(), dist.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    struct Tally {
        std::size_t votes = 0;
        double dist_sum = 0.0;
    };
    std::map<std::int64_t, Tally> tallies;
    for (std::size_t i = 0; i < k; ++i) {
        auto& t = tallies[train[dist[i].second].label];
        ++t.votes;
        t.dist_sum += dist[i].first;
    }

    std::int64_t best_label = tallies.begin()->first;
    const Tally* best = &tallies.begin()->second;
    for (const auto& [label, t] : tallies) {
        double mean = t.dist_sum / static_cast<double>(t.votes);
        double best_mean = best->dist_sum / static_cast<double>(best->votes);
        if (t.votes > best->votes ||
            (t.votes == best->votes && mean < best_mean) ||
            (t.votes == best->votes && mean == best_mean && label < best_label)) {
            best_label = label;
            best = &t;
        }
    }
    return best_label;
}

namespace {

EvalReport evaluate_impl(const std::vector<LabeledHistogram>& train,
                         const std::vector<LabeledHistogram>& test, std::size_t k, bool loo) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");

    std::set<std::int64_t> classes;
    for (const auto& it : train) classes.insert(it.label);
    for (const auto& it : test)
        if (!classes.count(it.label))
            throw std::invalid_argument("evaluate: test class " + std::to_string(it.label) +
                                        " absent from training split");
    if (classes.size() < 2) throw std::invalid_argument("evaluate: need >= 2 classes");

    EvalReport rep;
    rep.class_labels.assign(classes.begin(), classes.end());
    std::map<std::int64_t, std::size_t> index;
    for (std::size_t i = 0; i < rep.class_labels.size(); ++i) index[rep.class_labels[i]] = i;
    rep.confusion = Mat(classes.size(), classes.size());

    std::size_t correct = 0;
    for (std::size_t t = 0; t < test.size(); ++t) {
        std::int64_t pred;
        if (loo) {
            std::vector<LabeledHistogram> rest;
            rest.reserve(train.size() - 1);
            for (std::size_t i = 0; i < train.size(); ++i)
                if (i != t) rest.push_back(train[i]);
            pred = knn_classify(rest, test[t].hist, std::min(k, rest.size()));
        } else {
            pred = knn_classify(train, test[t].hist, k);
        }
        rep.predicted.push_back(pred);
        rep.confusion(index[test[t].label], index[pred]) += 1.0;
        if (pred == test[t].label) ++correct;
    }
    rep.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return rep;
}

} // namespace

EvalReport evaluate_split(const std::vector<LabeledHistogram>& train,
                          const std::vector<LabeledHistogram>& test, std::size_t k) {
    return evaluate_impl(train, test, k, false);
}

EvalReport evaluate_loo(const std::vector<LabeledHistogram>& items, std::size_t k) {
    if (items.size() < 2) throw std::invalid_argument("evaluate_loo: need >= 2 items");
    return evaluate_impl(items, items, k, true);
}

} // namespace stsync
