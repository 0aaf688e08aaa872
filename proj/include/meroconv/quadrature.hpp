#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace mero {

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);          // cached, on [-1, 1]
GaussRule gauss_legendre_on(int n, double a, double b);

/// Integrate a smooth function over [a,b] with `panels` geometric panels of
/// `n` Gauss points each. Panels refine toward `a` when bias > 1.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int n,
                        int panels, double bias = 1.0);

/// Trapezoid rule for 2*pi-periodic integrands (spectrally accurate).
double integrate_periodic(const std::function<double(double)>& f, int n);

/// Deterministic substream seeding: worker k of a run with seed s gets an
/// independent generator; reproducible for fixed seed and worker count.
std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

/// Sample uniformly from the real 2n-ball of radius R centered at c
/// (complex n-vector form).
std::vector<std::complex<double>> sample_ball(std::mt19937_64& rng,
                                              const std::vector<std::complex<double>>& center,
                                              double radius);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Mean-value Monte Carlo of f over the 2n-ball (antithetic pairs, worker
/// substreams, deterministic for fixed seed/worker count).
McEstimate mc_ball_integral(const std::function<double(const std::vector<std::complex<double>>&)>& f,
                            const std::vector<std::complex<double>>& center, double radius,
                            std::int64_t samples, std::uint64_t seed, int workers);

/// Importance ball for mixtures: radial density q(r) = 2 r / s^2 on [0, s],
/// i.e. pdf(z) = 2 / (pi^3 s^2 r^4) in C^3. Used to resolve concentrated
/// Monge-Ampere densities near a known singular center.
struct ImportanceBall {
    std::vector<std::complex<double>> center;
    double scale = 0.1;
    double weight = 0.25;  // mixture probability
};

/// Mixture Monte Carlo over the ball with optional importance balls (C^3
/// only). The estimator stays unbiased: every sample is weighted by the full
/// mixture density at its location.
McEstimate mc_ball_mixture(const std::function<double(const std::vector<std::complex<double>>&)>& f,
                           const std::vector<std::complex<double>>& center, double radius,
                           const std::vector<ImportanceBall>& balls, std::int64_t samples,
                           std::uint64_t seed, int workers);

}  // namespace mero
