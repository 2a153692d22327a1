#include "mixhess/identities.hpp"

#include "mixhess/errors.hpp"
#include "mixhess/gop.hpp"
#include "mixhess/symfun.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace mixhess {

void IdentityOptions::validate() const {
    if (n_min < 1 || n_max < n_min || n_max > 8) throw ArgumentError("identities: need 1 <= n_min <= n_max <= 8");
    if (samples < 0 || operator_samples < 0) throw ArgumentError("identities: sample counts must be >= 0");
    if (operator_n_max > 6) throw ArgumentError("identities: operator_n_max must be <= 6");
}

bool IdentityReport::ok() const {
    return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.ok(); });
}

double sigma_brute_force(int m, const std::vector<double>& lambda) {
    const int n = static_cast<int>(lambda.size());
    if (m < 0 || m > n) throw ArgumentError("sigma_brute_force: m out of range");
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != m) continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) p *= lambda[i];
        total += p;
    }
    return total;
}

namespace {

std::string describe(const std::vector<double>& lambda, const std::string& extra = {}) {
    std::ostringstream s;
    s.precision(10);
    s << "lambda=(";
    for (std::size_t i = 0; i < lambda.size(); ++i) s << (i ? "," : "") << lambda[i];
    s << ')';
    if (!extra.empty()) s << ' ' << extra;
    return s.str();
}

// Accumulates properties in insertion order.
class Ledger {
public:
    PropertyResult& get(const std::string& name, double tolerance) {
        auto it = index_.find(name);
        if (it == index_.end()) {
            index_[name] = results_.size();
            PropertyResult r;
            r.property = name;
            r.tolerance = tolerance;
            r.worst_margin = std::numeric_limits<double>::infinity();
            results_.push_back(r);
            return results_.back();
        }
        return results_[it->second];
    }
    // Identity a == b to relative tolerance.
    void identity(const std::string& name, double a, double b, double scale, double tol,
                  const std::function<std::string()>& what) {
        offer(name, tol - std::abs(a - b) / std::max(scale, 1e-300), tol, what);
    }
    // Inequality lhs <= rhs to relative tolerance.
    void at_most(const std::string& name, double lhs, double rhs, double scale, double tol,
                 const std::function<std::string()>& what) {
        offer(name, (rhs - lhs) / std::max(scale, 1e-300) + tol, tol, what);
    }
    // Strict positivity; the margin is the normalized value itself.
    void positive(const std::string& name, double v, double scale, const std::function<std::string()>& what) {
        const double m = v / std::max(scale, 1e-300);
        offer(name, m > 0.0 ? m : std::min(m, -std::numeric_limits<double>::min()), 0.0, what);
    }
    void count(const std::string& name, double tol) { ++get(name, tol).samples; }
    std::vector<PropertyResult> take() {
        for (auto& r : results_)
            if (r.samples == 0) r.worst_margin = 0.0;
        return std::move(results_);
    }

private:
    void offer(const std::string& name, double margin, double tol, const std::function<std::string()>& what) {
        auto& r = get(name, tol);
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_case = what();
        }
    }
    std::map<std::string, std::size_t> index_;
    std::vector<PropertyResult> results_;
};

std::uint64_t mix_seed(std::uint64_t seed, int a, int b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// The suite's view of sigma, with the fault hook.
struct Sigmas {
    bool fault = false;
    std::vector<double> all(std::span<const double> lambda) const {
        auto e = sigma_all(lambda);
        if (fault)
            for (std::size_t m = 1; m < e.size(); ++m) e[m] = -e[m];
        return e;
    }
};

}  // namespace

IdentityReport run_symfun_suite(const IdentityOptions& opt) {
    opt.validate();
    const auto start = std::chrono::steady_clock::now();
    const Sigmas sig{opt.inject_fault};
    constexpr double tol = 1e-10;
    constexpr double brute_tol = 1e-12;
    Ledger L;

    for (int n = opt.n_min; n <= opt.n_max; ++n) {
        for (int m = 1; m <= n; ++m) {
            const auto samples = sample_cone(m, n, mix_seed(opt.seed, n, m), opt.samples);
            for (const auto& sample : samples) {
                const std::vector<double> lam(sample.values().begin(), sample.values().end());
                const auto e = sig.all(lam);
                std::vector<std::vector<double>> red(static_cast<std::size_t>(n));
                std::vector<double> tmp = lam;
                for (int i = 0; i < n; ++i) {
                    tmp[i] = 0.0;
                    red[i] = sig.all(tmp);
                    tmp[i] = lam[i];
                }
                auto what = [&] { return describe(lam, "m=" + std::to_string(m)); };

                // Expansion and sum identities.
                double euler = 0.0, euler_scale = 0.0, trace = 0.0, trace_scale = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double a = red[i][m], b = lam[i] * red[i][m - 1];
                    L.identity("expansion", e[m], a + b, std::abs(a) + std::abs(b) + std::abs(e[m]), tol, what);
                    euler += b;
                    euler_scale += std::abs(b);
                    trace += red[i][m];
                    trace_scale += std::abs(red[i][m]);
                }
                L.count("expansion", tol);
                L.identity("weighted_reduced_sum", euler, m * e[m], euler_scale + m * std::abs(e[m]), tol, what);
                L.count("weighted_reduced_sum", tol);
                L.identity("reduced_sum", trace, (n - m) * e[m], trace_scale + (n - m) * std::abs(e[m]), tol,
                           what);
                L.count("reduced_sum", tol);

                // Brute-force oracle, every order.
                for (int j = 0; j <= n; ++j) {
                    const double bf = sigma_brute_force(j, lam);
                    double scale = 0.0;
                    for (double x : lam) scale += std::abs(x);
                    scale = std::max(std::abs(bf), std::pow(scale, j) / std::tgamma(j + 1.0));
                    L.identity("sigma_brute_force", e[j], bf, scale, brute_tol, what);
                }
                L.count("sigma_brute_force", brute_tol);

                // Reduced-sum orderings and bounds on the descending arrangement; red is indexed by original position.
                std::vector<int> order(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) order[i] = i;
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] > lam[b]; });
                double scale_ord = 0.0;
                for (int i = 0; i < n; ++i) scale_ord = std::max(scale_ord, std::abs(red[i][m - 1]));
                for (int p = n - 1; p >= 1; --p)  // sigma_{m-1}(lambda|p+1) >= sigma_{m-1}(lambda|p), 1-based p
                    L.at_most("reduced_ordering", red[order[p - 1]][m - 1], red[order[p]][m - 1], scale_ord, tol, what);
                L.positive("reduced_positive", red[order[0]][m - 1], scale_ord, what);
                L.count("reduced_ordering", tol);
                L.count("reduced_positive", 0.0);

                L.positive("lambda_m_positive", lam[order[m - 1]], std::abs(lam[order[0]]), what);
                L.count("lambda_m_positive", 0.0);
                double prod = 1.0;
                for (int i = 0; i < m; ++i) prod *= lam[order[i]];
                L.at_most("product_bound", e[m], binomial(n, m) * prod, binomial(n, m) * std::abs(prod), tol, what);
                L.count("product_bound", tol);

                const double lhs_top = lam[order[0]] * red[order[0]][m - 1];
                L.at_most("largest_reduced_bound", static_cast<double>(m) / n * e[m], lhs_top, std::abs(lhs_top), tol, what);
                L.count("largest_reduced_bound", tol);

                L.positive("reduced_m_positive", red[order[m - 1]][m - 1], std::abs(e[m - 1]), what);
                L.count("reduced_m_positive", 0.0);

                // Newton-Maclaurin over all admissible (top, l, r, s) with top = m.
                for (int l = 0; l < m; ++l)
                    for (int r = 1; r <= m; ++r)
                        for (int s = 0; s < r && s <= l; ++s) {
                            const double left =
                                std::pow((e[m] / binomial(n, m)) / (e[l] / binomial(n, l)), 1.0 / (m - l));
                            const double right =
                                std::pow((e[r] / binomial(n, r)) / (e[s] / binomial(n, s)), 1.0 / (r - s));
                            L.at_most("newton_maclaurin", left, right, std::abs(right), tol, [&] {
                                return describe(lam, "(m,l,r,s)=(" + std::to_string(m) + "," + std::to_string(l) + "," +
                                                         std::to_string(r) + "," + std::to_string(s) + ")");
                            });
                        }
                L.count("newton_maclaurin", tol);
            }
        }
    }
    IdentityReport rep;
    rep.results = L.take();
    rep.seconds_symfun = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

namespace {

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> N01;
    Eigen::MatrixXcd Z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Z(i, j) = {N01(rng), N01(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

struct OperatorSample {
    std::vector<double> lambda;
    std::vector<double> alpha;  // alpha_0..alpha_{k-1}, the last from the equation
    HermitianMatrix H;
};

// lambda in Gamma_k rotated by a random unitary; alpha_{k-1} := G, kept when positive.
std::vector<OperatorSample> operator_samples(int n, int k, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.05, 1.0);
    std::vector<OperatorSample> out;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100L * count + 1000) throw ResourceError("operator suite: sampling budget exceeded");
        const auto lam = sample_cone(k, n, rng(), 1).front();
        double mean = 0.0;
        for (double x : lam.values()) mean += std::abs(x) / n;
        OperatorSample s;
        s.lambda.assign(lam.values().begin(), lam.values().end());
        for (int l = 0; l <= k - 2; ++l) s.alpha.push_back(U(rng) * std::pow(mean, k - 1 - l) / k);
        const double g = g_value(k, s.alpha, lam);
        if (!(g > 0.0)) continue;
        s.alpha.push_back(g);
        const Eigen::MatrixXcd Q = random_unitary(n, rng);
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d[i] = s.lambda[i];
        Eigen::MatrixXcd H = Q * d.cast<std::complex<double>>().asDiagonal() * Q.adjoint();
        H = 0.5 * (H + H.adjoint()).eval();
        s.H = HermitianMatrix{H};
        out.push_back(std::move(s));
    }
    return out;
}

// Real Hessian whose complex Hessian is H.
RealHessian real_lift(const HermitianMatrix& H) {
    const int n = static_cast<int>(H.entries.rows());
    RealHessian d{Eigen::MatrixXd(2 * n, 2 * n)};
    const Eigen::MatrixXd re = H.entries.real(), im = H.entries.imag();
    d.entries << 2.0 * re, 2.0 * im, -2.0 * im, 2.0 * re;
    return d;
}

}  // namespace

IdentityReport run_operator_suite(const IdentityOptions& opt) {
    opt.validate();
    const auto start = std::chrono::steady_clock::now();
    constexpr double tol = 1e-10;
    Ledger L;

    for (int n = 2; n <= opt.operator_n_max; ++n) {
        for (int k = 2; k <= n; ++k) {
            const auto samples = operator_samples(n, k, mix_seed(opt.seed, 100 + n, k), opt.operator_samples);
            std::mt19937_64 rng(mix_seed(opt.seed, 200 + n, k));
            std::normal_distribution<double> N01;
            for (std::size_t si = 0; si < samples.size(); ++si) {
                const auto& s = samples[si];
                auto what = [&] {
                    std::ostringstream x;
                    x.precision(10);
                    x << "k=" << k << " alpha=(";
                    for (std::size_t l = 0; l < s.alpha.size(); ++l) x << (l ? "," : "") << s.alpha[l];
                    x << ')';
                    return describe(s.lambda, x.str());
                };
                const auto jet = g_jet(k, s.alpha, s.H);
                std::vector<double> e = sigma_all(jet.eig.lambda.values());
                if (opt.inject_fault)
                    for (std::size_t m = 1; m < e.size(); ++m) e[m] = -e[m];

                // Ellipticity.
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(jet.gradient.entries);
                const double gmin = ges.eigenvalues().minCoeff(), gmax = ges.eigenvalues().maxCoeff();
                L.positive("ellipticity", gmin, gmax, what);
                L.count("ellipticity", 0.0);

                // Trace bounds and the weighted trace.
                const auto tv = trace_values(k, s.alpha, jet.eig);
                const double tlo = static_cast<double>(n - k + 1) / k, thi = n - k + 1;
                L.at_most("trace_lower", tlo, tv.trace, tlo, tol, what);
                L.positive("trace_upper", thi - tv.trace, thi, what);
                L.count("trace_lower", tol);
                L.count("trace_upper", 0.0);

                double euler = e[k] / e[k - 1], euler_scale = std::abs(euler);
                double weighted = s.alpha[k - 1];
                for (int l = 0; l <= k - 2; ++l) {
                    const double t = s.alpha[l] * e[l] / e[k - 1];
                    euler += (k - 1 - l) * t;
                    euler_scale += (k - 1 - l) * std::abs(t);
                    weighted += (k - l) * t;
                }
                L.identity("euler_identity", tv.weighted, euler, euler_scale, tol, what);
                L.identity("weighted_trace_identity", tv.weighted, weighted, std::abs(weighted), tol, what);
                L.at_most("weighted_trace_lower", s.alpha[k - 1], tv.weighted, std::abs(tv.weighted), tol, what);
                L.count("euler_identity", tol);
                L.count("weighted_trace_identity", tol);
                L.count("weighted_trace_lower", tol);

                // Ratio bounds with the sample's own alpha as inf and sup.
                double sum = 0.0;
                for (double a : s.alpha) sum += a;
                const auto b = ratio_bounds(n, k, s.alpha, sum);
                const double top = e[k] / e[k - 1];
                L.at_most("quotient_lower", b.lower, top, std::abs(top), tol, what);
                L.at_most("quotient_upper", top, b.upper, b.upper, tol, what);
                for (int l = 0; l <= k - 2; ++l)
                    L.at_most("ratio_upper", e[l] / e[k - 1], b.ratio_uppers[l], b.ratio_uppers[l], tol, what);
                L.count("quotient_lower", tol);
                L.count("quotient_upper", tol);
                L.count("ratio_upper", tol);
                for (int l = 0; l <= k - 2; ++l) L.positive("G_l_negative", e[l] / e[k - 1], 1.0, what);
                L.count("G_l_negative", 0.0);

                // Concavity against the next sample with the same alpha.
                const auto& other = samples[(si + 1) % samples.size()];
                const double probe = concavity_probe(k, s.alpha, s.H, other.H);
                L.at_most("concavity", -probe, 1e-12, 1.0, 0.0, what);
                L.count("concavity", 0.0);

                // Spectral gradient against central differences in every Hermitian direction.
                double gap = std::numeric_limits<double>::infinity();
                for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, jet.eig.lambda[i] - jet.eig.lambda[i + 1]);
                const double fd_tol = gap < 1e-3 ? 1e-4 : 1e-6;
                const double h = 1e-5;
                const double gscale = jet.gradient.entries.cwiseAbs().maxCoeff();
                for (int p = 0; p < n; ++p)
                    for (int q = p; q < n; ++q)
                        for (int part = 0; part < (p == q ? 1 : 2); ++part) {
                            Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(n, n);
                            const std::complex<double> c = part == 0 ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
                            E(p, q) += c;
                            if (p != q) E(q, p) += std::conj(c);
                            const double fd = (g_value(k, s.alpha, HermitianMatrix{s.H.entries + h * E}) -
                                               g_value(k, s.alpha, HermitianMatrix{s.H.entries - h * E})) / (2.0 * h);
                            const double predicted = (jet.gradient.entries * E).trace().real();
                            L.identity("gradient_vs_fd", predicted, fd, std::max(std::abs(fd), gscale), fd_tol, what);
                        }
                L.count("gradient_vs_fd", 1e-6);

                // Real form: min eigenvalue relation and a real-Hessian directional derivative.
                const Eigen::MatrixXd A = real_form(jet.gradient);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> aes(A);
                L.identity("real_form_min_eig", aes.eigenvalues().minCoeff(), 0.25 * gmin, 0.25 * gmax, tol, what);
                L.count("real_form_min_eig", tol);
                const RealHessian D = real_lift(s.H);
                Eigen::MatrixXd dD(2 * n, 2 * n);
                for (int a = 0; a < 2 * n; ++a)
                    for (int c = a; c < 2 * n; ++c) dD(a, c) = dD(c, a) = N01(rng);
                const double fd = (g_value(k, s.alpha, to_complex_hessian(RealHessian{D.entries + h * dD})) -
                                   g_value(k, s.alpha, to_complex_hessian(RealHessian{D.entries - h * dD}))) / (2.0 * h);
                const double predicted = (A.array() * dD.array()).sum();
                L.identity("real_form_vs_fd", predicted, fd, std::max(std::abs(fd), gscale * dD.cwiseAbs().maxCoeff()),
                           fd_tol, what);
                L.count("real_form_vs_fd", 1e-6);
            }
        }
    }
    IdentityReport rep;
    rep.results = L.take();
    rep.seconds_operator = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

IdentityReport run_identities(const IdentityOptions& options) {
    auto a = run_symfun_suite(options);
    auto b = run_operator_suite(options);
    a.results.insert(a.results.end(), b.results.begin(), b.results.end());
    a.seconds_operator = b.seconds_operator;
    return a;
}

}  // namespace mixhess
