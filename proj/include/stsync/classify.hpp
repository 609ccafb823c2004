#pragma once

#include <cstdint>
#include <vector>

#include "stsync/linalg.hpp"

namespace stsync {

// L1-normalized bag-of-words vector; all-zero means "no descriptors".
struct Histogram {
    Vec weights;

    bool empty_support() const {
        for (double w : weights)
            if (w != 0.0) return false;
        return true;
    }
};

// D(a,b) = 0.5 sum (a-b)^2 / (a+b+eps)
double chi2_distance(const Histogram& a, const Histogram& b, double eps = 1e-10);

// K(a,b) = exp(-D(a,b)/gamma)
double chi2_kernel(const Histogram& a, const Histogram& b, double gamma, double eps = 1e-10);

// default gamma: mean pairwise distance on the training set
double mean_pairwise_chi2(const std::vector<Histogram>& hists, double eps = 1e-10);

Mat chi2_kernel_matrix(const std::vector<Histogram>& hists, double gamma, double eps = 1e-10);

struct LabeledHistogram {
    Histogram hist;
    std::int64_t label = 0;
};

// majority vote among the k nearest by chi^2 distance; ties broken by
// smallest mean distance, then lowest label
std::int64_t knn_classify(const std::vector<LabeledHistogram>& train, const Histogram& test,
                          std::size_t k);

struct EvalReport {
    double accuracy = 0.0;
    std::vector<std::int64_t> class_labels;    // row/col order of the confusion matrix
    Mat confusion;                             // true x predicted, counts
    std::vector<std::int64_t> predicted;       // per test item
};

EvalReport evaluate_split(const std::vector<LabeledHistogram>& train,
                          const std::vector<LabeledHistogram>& test, std::size_t k);

EvalReport evaluate_loo(const std::vector<LabeledHistogram>& items, std::size_t k);

} // namespace stsync
