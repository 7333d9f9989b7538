#include "mgsched/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mgsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_beta_fn(double alpha, double beta) {
    return std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
}

} // namespace

DistributionSpec DistributionSpec::normal(double mu, double sigma2) {
    DistributionSpec s;
    s.kind = DistKind::Normal;
    s.mu = mu;
    s.sigma2 = sigma2;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::beta_ab(double alpha, double beta, double a, double b) {
    DistributionSpec s;
    s.kind = DistKind::Beta;
    s.alpha = alpha;
    s.beta = beta;
    s.a = a;
    s.b = b;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::weibull(double k1, double c1) {
    DistributionSpec s;
    s.kind = DistKind::Weibull;
    s.k1 = k1;
    s.c1 = c1;
    s.validate();
    return s;
}

void DistributionSpec::validate() const {
    switch (kind) {
    case DistKind::Normal:
        if (!(sigma2 >= 0.0) || !std::isfinite(mu) || !std::isfinite(sigma2))
            throw std::domain_error("normal: need finite mu and sigma2 >= 0");
        return;
    case DistKind::Beta:
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::domain_error("beta: need alpha > 0 and beta > 0");
        if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
            throw std::domain_error("beta: need finite limits with b > a");
        return;
    case DistKind::Weibull:
        if (!(k1 > 0.0) || !(c1 > 0.0))
            throw std::domain_error("weibull: need k1 > 0 and c1 > 0");
        return;
    }
    throw std::domain_error("unknown distribution kind");
}

double DistributionSpec::mean() const {
    validate();
    switch (kind) {
    case DistKind::Normal:
        return mu;
    case DistKind::Beta:
        return a + (b - a) * alpha / (alpha + beta);
    case DistKind::Weibull:
        return c1 * std::exp(std::lgamma(1.0 + 1.0 / k1));
    }
    return 0.0;
}

double DistributionSpec::variance() const {
    validate();
    switch (kind) {
    case DistKind::Normal:
        return sigma2;
    case DistKind::Beta: {
        const double s = alpha + beta;
        return (b - a) * (b - a) * alpha * beta / (s * s * (s + 1.0));
    }
    case DistKind::Weibull: {
        const double g1 = std::exp(std::lgamma(1.0 + 1.0 / k1));
        const double g2 = std::exp(std::lgamma(1.0 + 2.0 / k1));
        return c1 * c1 * (g2 - g1 * g1);
    }
    }
    return 0.0;
}

double pdf_beta(double y, const DistributionSpec& spec) {
    if (spec.kind != DistKind::Beta)
        throw std::domain_error("pdf_beta: spec is not a Beta distribution");
    spec.validate();
    if (!(y >= spec.a) || !(y <= spec.b))
        throw std::domain_error("pdf_beta: y outside [a, b]");
    const double w = spec.b - spec.a;
    // Boundary cases where a log formulation would produce 0*inf.
    if (y == spec.a) {
        if (spec.alpha < 1.0) return kInf;
        if (spec.alpha > 1.0) return 0.0;
        return std::exp(-log_beta_fn(spec.alpha, spec.beta)
                        + (spec.beta - 1.0) * std::log(w) - (spec.alpha + spec.beta - 1.0) * std::log(w));
    }
    if (y == spec.b) {
        if (spec.beta < 1.0) return kInf;
        if (spec.beta > 1.0) return 0.0;
        return std::exp(-log_beta_fn(spec.alpha, spec.beta)
                        + (spec.alpha - 1.0) * std::log(w) - (spec.alpha + spec.beta - 1.0) * std::log(w));
    }
    const double lg = -log_beta_fn(spec.alpha, spec.beta)
                    + (spec.alpha - 1.0) * std::log(y - spec.a)
                    + (spec.beta - 1.0) * std::log(spec.b - y)
                    - (spec.alpha + spec.beta - 1.0) * std::log(w);
    return std::exp(lg);
}

double pdf_weibull(double v, const DistributionSpec& spec) {
    if (spec.kind != DistKind::Weibull)
        throw std::domain_error("pdf_weibull: spec is not a Weibull distribution");
    spec.validate();
    if (!(v >= 0.0))
        throw std::domain_error("pdf_weibull: v < 0");
    if (v == 0.0) {
        if (spec.k1 < 1.0) return kInf;
        if (spec.k1 > 1.0) return 0.0;
        return 1.0 / spec.c1;
    }
    const double r = v / spec.c1;
    return (spec.k1 / spec.c1) * std::pow(r, spec.k1 - 1.0) * std::exp(-std::pow(r, spec.k1));
}

double pdf_normal(double q, const DistributionSpec& spec) {
    if (spec.kind != DistKind::Normal)
        throw std::domain_error("pdf_normal: spec is not a Normal distribution");
    if (!(spec.sigma2 > 0.0))
        throw std::domain_error("pdf_normal: sigma2 must be > 0");
    const double d = q - spec.mu;
    return std::exp(-d * d / (2.0 * spec.sigma2)) / std::sqrt(2.0 * std::numbers::pi * spec.sigma2);
}

double pdf(double x, const DistributionSpec& spec) {
    switch (spec.kind) {
    case DistKind::Normal: return pdf_normal(x, spec);
    case DistKind::Beta: return pdf_beta(x, spec);
    case DistKind::Weibull: return pdf_weibull(x, spec);
    }
    throw std::domain_error("unknown distribution kind");
}

double Rng::uniform() {
    // 53-bit mantissa draw in (0, 1]; bit-exact for a given mt19937_64 stream.
    const std::uint64_t r = gen_();
    return (static_cast<double>(r >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        const double u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::uint64_t Rng::substream_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 of (seed, index); decorrelates consecutive scenario streams.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample(const DistributionSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
    case DistKind::Normal: {
        if (spec.sigma2 == 0.0) return spec.mu;
        return spec.mu + std::sqrt(spec.sigma2) * rng.normal();
    }
    case DistKind::Beta: {
        const double ga = rng.gamma(spec.alpha);
        const double gb = rng.gamma(spec.beta);
        const double x = ga / (ga + gb);
        return spec.a + (spec.b - spec.a) * x;
    }
    case DistKind::Weibull: {
        // Inverse CDF.
        const double u = rng.uniform();
        return spec.c1 * std::pow(-std::log(u), 1.0 / spec.k1);
    }
    }
    throw std::domain_error("unknown distribution kind");
}

double sample_nonnegative_normal(const DistributionSpec& spec, Rng& rng) {
    double v = sample(spec, rng);
    if (v < 0.0) v = sample(spec, rng);
    return std::max(v, 0.0);
}

DistributionSpec fit_moments(std::span<const double> samples, DistKind kind) {
    if (samples.size() < 2)
        throw std::domain_error("fit_moments: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= (n - 1.0);

    switch (kind) {
    case DistKind::Normal:
        return DistributionSpec::normal(mean, var);
    case DistKind::Beta: {
        // Support fixed to [0,1]: samples are capacity factors.
        if (!(mean > 0.0) || !(mean < 1.0))
            throw std::domain_error("fit_moments(beta): mean must lie in (0,1)");
        if (!(var > 0.0) || !(var < mean * (1.0 - mean)))
            throw std::domain_error("fit_moments(beta): variance out of range for [0,1] support");
        const double kappa = mean * (1.0 - mean) / var - 1.0;
        return DistributionSpec::beta_ab(mean * kappa, (1.0 - mean) * kappa, 0.0, 1.0);
    }
    case DistKind::Weibull: {
        if (!(mean > 0.0) || !(var > 0.0))
            throw std::domain_error("fit_moments(weibull): need positive mean and variance");
        // CV^2 = Gamma(1+2/k)/Gamma(1+1/k)^2 - 1 is strictly decreasing in k;
        // bisect on k.
        const double target = std::log1p(var / (mean * mean));
        auto g = [&](double k) {
            return std::lgamma(1.0 + 2.0 / k) - 2.0 * std::lgamma(1.0 + 1.0 / k) - target;
        };
        double lo = 1e-2, hi = 1e3;
        if (g(lo) < 0.0 || g(hi) > 0.0)
            throw std::domain_error("fit_moments(weibull): moments outside representable range");
        for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
        }
        const double k = 0.5 * (lo + hi);
        const double c = mean / std::exp(std::lgamma(1.0 + 1.0 / k));
        return DistributionSpec::weibull(k, c);
    }
    }
    throw std::domain_error("unknown distribution kind");
}

} // namespace mgsched
