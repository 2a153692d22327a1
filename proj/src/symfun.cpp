#include "mixhess/symfun.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace mixhess {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ArgumentError("Spectrum: n must be >= 1");
    for (double v : values_)
        if (!std::isfinite(v)) throw ArgumentError("Spectrum: non-finite entry");
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(std::vector<double>(values)) {}

Spectrum Spectrum::sorted_descending() const {
    std::vector<int> order(values_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [this](int a, int b) { return values_[a] > values_[b]; });
    std::vector<double> out;
    out.reserve(values_.size());
    for (int i : order) out.push_back(values_[i]);
    return Spectrum(std::move(out));
}

namespace {

void check_order(int m, int n) {
    if (m < 0 || m > n)
        throw ArgumentError("sigma: order " + std::to_string(m) + " outside [0, " +
                            std::to_string(n) + "]");
}

}  // namespace

std::vector<double> sigma_all(std::span<const double> lambda) {
    const std::size_t n = lambda.size();
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    // e_m(l_1..l_j) = e_m(l_1..l_{j-1}) + l_j e_{m-1}(l_1..l_{j-1}), descending m.
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = j + 1; m >= 1; --m) e[m] += lambda[j] * e[m - 1];
    return e;
}

double sigma(int m, std::span<const double> lambda) {
    const int n = static_cast<int>(lambda.size());
    check_order(m, n);
    if (m == 0) return 1.0;
    std::vector<double> e(static_cast<std::size_t>(m) + 1, 0.0);
    e[0] = 1.0;
    for (int j = 0; j < n; ++j)
        for (int i = std::min(j + 1, m); i >= 1; --i) e[i] += lambda[j] * e[i - 1];
    return e[m];
}

double sigma(int m, const Spectrum& lambda) { return sigma(m, lambda.values()); }

double sigma_reduced(int m, const Spectrum& lambda, std::span<const int> excluded) {
    const int n = lambda.size();
    check_order(m, n);
    if (excluded.size() > 2) throw ArgumentError("sigma_reduced: at most two excluded indices");
    std::vector<double> v(lambda.values().begin(), lambda.values().end());
    for (std::size_t a = 0; a < excluded.size(); ++a) {
        const int i = excluded[a];
        if (i < 0 || i >= n) throw ArgumentError("sigma_reduced: index out of range");
        for (std::size_t b = 0; b < a; ++b)
            if (excluded[b] == i) throw ArgumentError("sigma_reduced: repeated index");
        v[i] = 0.0;
    }
    return sigma(m, v);
}

double sigma_reduced(int m, const Spectrum& lambda, std::initializer_list<int> excluded) {
    return sigma_reduced(m, lambda, std::span<const int>(excluded.begin(), excluded.size()));
}

ConeCertificate in_cone(int k, const Spectrum& lambda) {
    const int n = lambda.size();
    if (k < 1 || k > n) throw ArgumentError("in_cone: k outside [1, n]");
    const auto e = sigma_all(lambda.values());
    ConeCertificate cert;
    cert.k = k;
    cert.sigmas.assign(e.begin() + 1, e.begin() + 1 + k);
    cert.member = std::all_of(cert.sigmas.begin(), cert.sigmas.end(),
                              [](double s) { return s > 0.0; });
    return cert;
}

double cone_margin(int k, std::span<const double> lambda) {
    const auto e = sigma_all(lambda);
    return *std::min_element(e.begin() + 1, e.begin() + 1 + k);
}

std::vector<Spectrum> sample_cone(int k, int n, std::uint64_t seed, int count, double shift) {
    if (n < 1 || k < 1 || k > n) throw ArgumentError("sample_cone: need 1 <= k <= n");
    if (count < 0) throw ArgumentError("sample_cone: negative count");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Spectrum> out;
    out.reserve(static_cast<std::size_t>(count));
    long rejections = 0;
    std::vector<double> v(static_cast<std::size_t>(n));
    while (static_cast<int>(out.size()) < count) {
        for (auto& x : v) x = normal(rng) + shift;
        if (cone_margin(k, v) > 0.0) {
            out.emplace_back(v);
        } else if (++rejections > 1'000'000) {
            throw ResourceError("sample_cone: rejection budget exceeded");
        }
    }
    return out;
}

std::vector<Spectrum> sample_cone(int k, int n, std::uint64_t seed, int count) {
    return sample_cone(k, n, seed, count, static_cast<double>(n));
}

double binomial(int n, int m) {
    if (m < 0 || m > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c = c * (n - m + i) / i;
    return std::round(c);
}

}  // namespace mixhess
