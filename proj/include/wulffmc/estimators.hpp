#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace wulffmc {

// Mean of an observable over correlated Markov-chain samples. The standard
// error comes from block averaging: contiguous near-equal blocks, scatter of
// block means. Blocks always partition the samples.
struct EnergyEstimate {
    std::string observable;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::size_t blocks = 0;
};

EnergyEstimate block_estimate(std::string observable, std::span<const double> samples,
                              std::size_t blocks = 16);

// complement of the asymptotic Kolmogorov distribution, Q(lambda) =
// 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2)
double kolmogorov_cdf_complement(double lambda);

struct KsResult {
    double statistic = 0.0;  // sup |F_n - F|
    double p_value = 1.0;
    std::size_t samples = 0;
};

// one-sample Kolmogorov-Smirnov against an analytic CDF
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace wulffmc
