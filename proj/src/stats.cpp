#include "jtvol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jtvol/quadrature.hpp"

namespace jtvol {

double ReferenceDensity::cdf(double x) const {
    if (x <= lo) return 0.0;
    double top = std::min(x, hi);
    return adaptive_simpson(pdf, lo, top, 1e-10);
}

ReferenceDensity semicircle_reference() {
    return {"semicircle", -1.0, 1.0, [](double x) {
                double s = 1.0 - x * x;
                return s > 0.0 ? 2.0 / M_PI * std::sqrt(s) : 0.0;
            }};
}

ReferenceDensity uniform_reference(double a, double b) {
    double w = b - a;
    return {"uniform", a, b, [w](double) { return 1.0 / w; }};
}

ReferenceDensity gaussian_reference(double mu, double sigma) {
    // clipped far outside the bulk; good to ~1e-16 mass
    double lo = mu - 9.0 * sigma, hi = mu + 9.0 * sigma;
    return {"gaussian", lo, hi, [mu, sigma](double x) {
                double t = (x - mu) / sigma;
                return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * M_PI));
            }};
}

HistogramStats histogram_and_stats(const std::vector<double>& pooled, const ReferenceDensity* ref,
                                   int bins, double lo, double hi, bool clip) {
    if (pooled.empty()) throw std::invalid_argument("histogram: empty sample");
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad binning");
    HistogramStats h;
    double w = (hi - lo) / bins;
    if (w <= 0.0) throw std::invalid_argument("histogram: zero-width bins");
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + w * i;
    std::vector<long> counts(bins, 0);
    for (double x : pooled) {
        if (x < lo || x > hi) {
            if (!clip) throw std::invalid_argument("histogram: sample outside bin range");
            continue;
        }
        int b = std::min(static_cast<int>((x - lo) / w), bins - 1);
        ++counts[b];
    }
    h.density.resize(bins);
    double total = static_cast<double>(pooled.size());
    for (int i = 0; i < bins; ++i) h.density[i] = counts[i] / (total * w);
    if (ref != nullptr) h.ks = ks_statistic(pooled, *ref);
    return h;
}

double ks_statistic(const std::vector<double>& pooled, const ReferenceDensity& ref) {
    if (pooled.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    double n = static_cast<double>(pooled.size());
    double d = 0.0;
    double cdf_acc = 0.0;
    double prev = ref.lo;
    for (size_t i = 0; i < pooled.size(); ++i) {
        double x = std::clamp(pooled[i], ref.lo, ref.hi);
        if (x > prev) {
            cdf_acc += adaptive_simpson(ref.pdf, prev, x, 1e-9);
            prev = x;
        }
        d = std::max(d, std::fabs(cdf_acc - (i + 1) / n));
        d = std::max(d, std::fabs(cdf_acc - i / n));
    }
    return d;
}

double histogram_sup_distance(const HistogramStats& h, const ReferenceDensity& ref) {
    double sup = 0.0;
    for (size_t i = 0; i + 1 < h.edges.size(); ++i) {
        double a = h.edges[i], b = h.edges[i + 1];
        double avg = 0.0;
        if (b > ref.lo && a < ref.hi)
            avg = adaptive_simpson(ref.pdf, std::max(a, ref.lo), std::min(b, ref.hi), 1e-9) / (b - a);
        sup = std::max(sup, std::fabs(h.density[i] - avg));
    }
    return sup;
}

double fit_log_slope(const std::vector<double>& pooled, double elo, double ehi, int bins) {
    if (!(elo > 0.0) || !(ehi > elo)) throw std::invalid_argument("slope fit: bad window");
    double la = std::log(elo), lb = std::log(ehi);
    double lw = (lb - la) / bins;
    std::vector<long> counts(bins, 0);
    for (double x : pooled) {
        if (x < elo || x >= ehi) continue;
        int b = std::min(static_cast<int>((std::log(x) - la) / lw), bins - 1);
        ++counts[b];
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    double total = static_cast<double>(pooled.size());
    for (int i = 0; i < bins; ++i) {
        if (counts[i] == 0) continue;
        double le0 = la + i * lw;
        double center = le0 + 0.5 * lw;
        double width = std::exp(le0 + lw) - std::exp(le0);
        double y = std::log(counts[i] / (total * width));
        sx += center;
        sy += y;
        sxx += center * center;
        sxy += center * y;
        ++used;
    }
    if (used < 2) throw std::runtime_error("slope fit: not enough occupied bins");
    double denom = used * sxx - sx * sx;
    return (used * sxy - sx * sy) / denom;
}

MeanSE batch_mean(const std::vector<std::vector<double>>& draws,
                  const std::function<double(double)>& f) {
    if (draws.empty()) throw std::invalid_argument("batch_mean: empty batch");
    std::vector<double> per;
    per.reserve(draws.size());
    for (const auto& d : draws) {
        double acc = 0.0;
        for (double x : d) acc += f(x);
        per.push_back(acc / d.size());
    }
    double mean = 0.0;
    for (double m : per) mean += m;
    mean /= per.size();
    double var = 0.0;
    for (double m : per) var += (m - mean) * (m - mean);
    var = per.size() > 1 ? var / (per.size() - 1.0) : 0.0;
    return {mean, std::sqrt(var / per.size())};
}

}  // namespace jtvol
