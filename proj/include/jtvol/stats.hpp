#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jtvol {

// A named reference density with compact support, integrable by
// quadrature (the CDF used for KS statistics is built that way).
struct ReferenceDensity {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> pdf;

    double cdf(double x) const;        // quadrature of pdf over [lo, x]
    double norm() const { return cdf(hi); }
};

ReferenceDensity semicircle_reference();                 // (2/pi) sqrt(1-x^2) on [-1,1]
ReferenceDensity uniform_reference(double a, double b);
ReferenceDensity gaussian_reference(double mu, double sigma);

struct HistogramStats {
    std::vector<double> edges;    // bins+1 entries
    std::vector<double> density;  // normalized by total count and bin width
    double ks = 0.0;              // vs the reference, when one is given
    std::optional<double> edge_slope;
};

// Histogram of the pooled sample over [lo, hi] with `bins` equal bins.
// With clip=false a sample outside the range is an error (bins must
// cover the observed support); with clip=true out-of-range samples are
// left out of the bins but still count in the normalization.
HistogramStats histogram_and_stats(const std::vector<double>& pooled_sorted,
                                   const ReferenceDensity* reference, int bins, double lo,
                                   double hi, bool clip = false);

// Kolmogorov-Smirnov sup distance of the empirical CDF from the
// reference CDF (computed by quadrature between consecutive samples).
double ks_statistic(const std::vector<double>& pooled_sorted, const ReferenceDensity& reference);

// Sup over bins of |histogram density - bin average of pdf|.
double histogram_sup_distance(const HistogramStats& h, const ReferenceDensity& reference);

// Least-squares slope of log(density) vs log(E) on log-spaced bins over
// [elo, ehi]; empty bins are dropped.
double fit_log_slope(const std::vector<double>& pooled_sorted, double elo, double ehi, int bins);

// Mean of per-draw means and its standard error (draws are independent).
struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};
MeanSE batch_mean(const std::vector<std::vector<double>>& draws,
                  const std::function<double(double)>& f);

}  // namespace jtvol
