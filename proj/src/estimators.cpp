#include "wulffmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wulffmc {

EnergyEstimate block_estimate(std::string observable, std::span<const double> samples,
                              std::size_t blocks) {
    if (blocks < 2) throw std::invalid_argument("block averaging needs at least 2 blocks");
    if (samples.size() < blocks)
        throw std::invalid_argument("fewer samples than blocks; shorten the block count");
    const std::size_t n = samples.size();
    double grand = 0.0;
    for (double s : samples) grand += s;
    grand /= static_cast<double>(n);

    // near-equal partition: the first n % blocks blocks get one extra sample
    std::vector<double> means(blocks);
    const std::size_t base = n / blocks, extra = n % blocks;
    std::size_t at = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t len = base + (b < extra ? 1 : 0);
        double m = 0.0;
        for (std::size_t i = 0; i < len; ++i) m += samples[at + i];
        means[b] = m / static_cast<double>(len);
        at += len;
    }
    double mbar = 0.0;
    for (double m : means) mbar += m;
    mbar /= static_cast<double>(blocks);
    double var = 0.0;
    for (double m : means) var += (m - mbar) * (m - mbar);
    var /= static_cast<double>(blocks - 1);
    const double se = std::sqrt(std::max(0.0, var / static_cast<double>(blocks)));
    return {std::move(observable), grand, se, n, blocks};
}

double kolmogorov_cdf_complement(double lambda) {
    if (std::isnan(lambda)) throw std::invalid_argument("lambda must be a number");
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // theta-dual form converges fast for small lambda
        const double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        const double s = std::sqrt(2.0 * M_PI) / lambda *
                         (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
        return 1.0 - s;
    }
    double sum = 0.0;
    for (int k = 1; k <= 32; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) *
                                     lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 2) throw std::invalid_argument("KS test needs at least 2 samples");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        if (std::isnan(f) || f < -1e-12 || f > 1.0 + 1e-12)
            throw std::invalid_argument("CDF must map samples into [0, 1]");
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    const double sn = std::sqrt(n);
    const double p = kolmogorov_cdf_complement((sn + 0.12 + 0.11 / sn) * d);
    return {d, p, xs.size()};
}

}  // namespace wulffmc
