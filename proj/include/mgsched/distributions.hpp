#ifndef MGSCHED_DISTRIBUTIONS_HPP
#define MGSCHED_DISTRIBUTIONS_HPP

#include <cstdint>
#include <random>
#include <span>

#include "mgsched/common.hpp"

namespace mgsched {

enum class DistKind { Normal, Beta, Weibull };

// One uncertain quantity: a Normal (load/price), a Beta on [a,b] (PV capacity
// factor) or a Weibull (WT capacity).  Only the fields of the active kind are
// meaningful.
struct DistributionSpec {
    DistKind kind = DistKind::Normal;

    // Normal: mean and variance (variance, not stddev).
    double mu = 0.0;
    double sigma2 = 1.0;

    // Beta on [a, b].
    double alpha = 1.0;
    double beta = 1.0;
    double a = 0.0;
    double b = 1.0;

    // Weibull: shape k1, scale c1.
    double k1 = 1.0;
    double c1 = 1.0;

    static DistributionSpec normal(double mu, double sigma2);
    static DistributionSpec beta_ab(double alpha, double beta, double a = 0.0, double b = 1.0);
    static DistributionSpec weibull(double k1, double c1);

    // Throws std::domain_error on invalid parameters.  sigma2 == 0 is allowed
    // (degenerate point mass, usable for sampling but not for pdf_normal).
    void validate() const;

    double mean() const;
    double variance() const;

    bool operator==(const DistributionSpec&) const = default;
};

// Density evaluators.  Each throws std::domain_error outside the support or
// for invalid parameters.
double pdf_beta(double y, const DistributionSpec& spec);
double pdf_weibull(double v, const DistributionSpec& spec);
double pdf_normal(double q, const DistributionSpec& spec);
double pdf(double x, const DistributionSpec& spec);

// Deterministic random stream.  mt19937_64 is bit-exact across platforms and
// all transforms below consume it in a fixed order, so a seed pins the whole
// stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on (0, 1], never exactly 0 (safe under log).
    double uniform();
    // Standard normal via Box-Muller (cosine branch only).
    double normal();
    // Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape);

    // Derive an independent substream, e.g. per scenario.
    static std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

private:
    std::mt19937_64 gen_;
};

// One draw with the law of `spec`.  Normal draws are NOT clamped here; the
// physical clamping (load/price >= 0, RES caps in [0, scale]) happens at
// profile level in build_scenarios.
double sample(const DistributionSpec& spec, Rng& rng);

// Normal draw clamped at 0: resample once, then clamp.
double sample_nonnegative_normal(const DistributionSpec& spec, Rng& rng);

// Method-of-moments fit.  Normal: sample mean / sample variance (N-1).
// Beta: closed form on the fixed support [0,1].  Weibull: bisection on the
// shape parameter (tolerance 1e-10).  Throws std::domain_error when the
// moments admit no parameters in the domain.
DistributionSpec fit_moments(std::span<const double> samples, DistKind kind);

} // namespace mgsched

#endif
