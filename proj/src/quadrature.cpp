#include "meroconv/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mero {

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

GaussRule gauss_legendre_on(int n, double a, double b) {
    const GaussRule& base = gauss_legendre(n);
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * base.nodes[i];
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int n,
                        int panels, double bias) {
    if (panels < 1) panels = 1;
    std::vector<double> cuts(panels + 1);
    if (bias <= 1.0) {
        for (int i = 0; i <= panels; ++i) cuts[i] = a + (b - a) * i / panels;
    } else {
        // geometric refinement toward a
        double total = 0.0, w = 1.0;
        std::vector<double> widths(panels);
        for (int i = panels - 1; i >= 0; --i) {
            widths[i] = w;
            total += w;
            w *= bias;
        }
        cuts[0] = a;
        for (int i = 0; i < panels; ++i) cuts[i + 1] = cuts[i] + (b - a) * widths[i] / total;
        cuts[panels] = b;
    }
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        auto rule = gauss_legendre_on(n, cuts[p], cuts[p + 1]);
        for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    }
    return acc;
}

double integrate_periodic(const std::function<double(double)>& f, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(2.0 * M_PI * i / n);
    return acc * 2.0 * M_PI / n;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (0xda3e39cb94b95bdbULL * (stream + 1))));
}

std::vector<std::complex<double>> sample_ball(std::mt19937_64& rng,
                                              const std::vector<std::complex<double>>& center,
                                              double radius) {
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::size_t n = center.size();
    std::vector<double> dir(2 * n);
    double norm2 = 0.0;
    for (auto& d : dir) {
        d = N(rng);
        norm2 += d * d;
    }
    double norm = std::sqrt(norm2);
    double r = radius * std::pow(U(rng), 1.0 / (2.0 * n));
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = center[i] + std::complex<double>(dir[2 * i], dir[2 * i + 1]) * (r / norm);
    return z;
}

namespace {

struct Accum {
    double sum = 0.0, sumsq = 0.0;
    std::int64_t n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
};

McEstimate finish(const std::vector<Accum>& accs, double scale) {
    Accum total;
    for (const auto& a : accs) {
        total.sum += a.sum;
        total.sumsq += a.sumsq;
        total.n += a.n;
    }
    McEstimate e;
    e.samples = total.n;
    double mean = total.sum / total.n;
    double var = std::max(0.0, total.sumsq / total.n - mean * mean);
    e.value = scale * mean;
    e.std_error = scale * std::sqrt(var / total.n);
    return e;
}

double ball_volume(std::size_t n_complex, double radius) {
    // volume of the 2n-real-dim ball
    double d = 2.0 * static_cast<double>(n_complex);
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(radius, d);
}

}  // namespace

McEstimate mc_ball_integral(const std::function<double(const std::vector<std::complex<double>>&)>& f,
                            const std::vector<std::complex<double>>& center, double radius,
                            std::int64_t samples, std::uint64_t seed, int workers) {
    if (workers < 1) workers = 1;
    std::vector<Accum> accs(workers);
    std::vector<std::thread> pool;
    std::int64_t per = (samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            auto rng = substream(seed, static_cast<std::uint64_t>(w));
            std::int64_t todo = std::min<std::int64_t>(per, samples - w * per);
            for (std::int64_t i = 0; i + 1 < todo; i += 2) {
                auto z = sample_ball(rng, center, radius);
                accs[w].add(f(z));
                // antithetic partner: reflect through the center
                auto zr = z;
                for (std::size_t j = 0; j < z.size(); ++j) zr[j] = 2.0 * center[j] - z[j];
                accs[w].add(f(zr));
            }
            if (todo % 2 == 1) {
                auto z = sample_ball(rng, center, radius);
                accs[w].add(f(z));
            }
        });
    }
    for (auto& t : pool) t.join();
    return finish(accs, ball_volume(center.size(), radius));
}

McEstimate mc_ball_mixture(const std::function<double(const std::vector<std::complex<double>>&)>& f,
                           const std::vector<std::complex<double>>& center, double radius,
                           const std::vector<ImportanceBall>& balls, std::int64_t samples,
                           std::uint64_t seed, int workers) {
    if (balls.empty()) return mc_ball_integral(f, center, radius, samples, seed, workers);
    if (center.size() != 3) throw std::invalid_argument("mc_ball_mixture: C^3 only");
    if (workers < 1) workers = 1;

    double w_balls = 0.0;
    for (const auto& b : balls) w_balls += b.weight;
    if (w_balls >= 1.0) throw std::invalid_argument("mc_ball_mixture: importance weights must sum below 1");
    double w_uniform = 1.0 - w_balls;
    const double vol = ball_volume(3, radius);
    const double pi3 = M_PI * M_PI * M_PI;

    auto mixture_pdf = [&](const std::vector<std::complex<double>>& z) {
        double r2c = 0.0;
        for (std::size_t i = 0; i < 3; ++i) r2c += std::norm(z[i] - center[i]);
        double p = (r2c <= radius * radius) ? w_uniform / vol : 0.0;
        for (const auto& b : balls) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < 3; ++i) r2 += std::norm(z[i] - b.center[i]);
            double r = std::sqrt(r2);
            if (r < b.scale && r > 0.0)
                p += b.weight * 2.0 / (pi3 * b.scale * b.scale * r2 * r2);
        }
        return p;
    };

    std::vector<Accum> accs(workers);
    std::vector<std::thread> pool;
    std::int64_t per = (samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            auto rng = substream(seed, static_cast<std::uint64_t>(w) + 101);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            std::normal_distribution<double> N(0.0, 1.0);
            std::int64_t todo = std::min<std::int64_t>(per, samples - w * per);
            for (std::int64_t i = 0; i < todo; i += 2) {
                double u = U(rng);
                std::vector<std::complex<double>> z;
                std::vector<std::complex<double>> reflect_center;
                if (u < w_uniform) {
                    z = sample_ball(rng, center, radius);
                    reflect_center = center;
                } else {
                    double acc = w_uniform;
                    const ImportanceBall* chosen = &balls.back();
                    for (const auto& b : balls) {
                        acc += b.weight;
                        if (u < acc) {
                            chosen = &b;
                            break;
                        }
                    }
                    // direction uniform on S^5, radius r = s * sqrt(U)
                    std::vector<double> dir(6);
                    double norm2 = 0.0;
                    for (auto& d : dir) {
                        d = N(rng);
                        norm2 += d * d;
                    }
                    double norm = std::sqrt(norm2);
                    double r = chosen->scale * std::sqrt(U(rng));
                    z.resize(3);
                    for (int j = 0; j < 3; ++j)
                        z[j] = chosen->center[j] +
                               std::complex<double>(dir[2 * j], dir[2 * j + 1]) * (r / norm);
                    reflect_center = chosen->center;
                }
                auto record = [&](const std::vector<std::complex<double>>& zz) {
                    double r2c = 0.0;
                    for (int j = 0; j < 3; ++j) r2c += std::norm(zz[j] - center[j]);
                    double val = 0.0;
                    if (r2c <= radius * radius) {
                        double p = mixture_pdf(zz);
                        if (p > 0.0) val = f(zz) / p;
                    }
                    accs[w].add(val);
                };
                record(z);
                if (i + 1 < todo) {
                    auto zr = z;
                    for (int j = 0; j < 3; ++j) zr[j] = 2.0 * reflect_center[j] - zr[j];
                    record(zr);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    return finish(accs, 1.0);
}

}  // namespace mero
