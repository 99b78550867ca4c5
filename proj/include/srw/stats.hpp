#ifndef SRW_STATS_HPP
#define SRW_STATS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "srw/rng.hpp"
#include "srw/torus.hpp"

namespace srw {

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    double n_eff = 0.0;
    std::string method;
};

inline double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ---------------------------------------------------------------------------

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-12) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 50 || b.size() < 50)
        throw std::invalid_argument("ks_two_sample: sample sizes must be >= 50");
    auto degenerate = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    if (degenerate(a) && degenerate(b) && a.front() == b.front())
        return {0.0, 1.0};
    if (degenerate(a) || degenerate(b))
        throw std::invalid_argument("ks_two_sample: degenerate (constant) sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        const double x = std::min(a[i], b[j]);
        while (i < n && a[i] <= x) ++i;
        while (j < m && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    const double ne = std::sqrt(static_cast<double>(n) * m / static_cast<double>(n + m));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return {d, kolmogorov_q(lambda)};
}

// ---------------------------------------------------------------------------
// Batch means
// ---------------------------------------------------------------------------

/// Confidence interval for the mean of a correlated series: batch size doubles
/// until the lag-1 autocorrelation of batch means drops below 0.1.
inline Estimate batch_means_ci(const std::vector<double>& series) {
    if (series.size() < 8) throw std::invalid_argument("batch_means_ci: series too short");
    if (variance_of(const_cast<std::vector<double>&>(series)) == 0.0)
        throw std::invalid_argument("batch_means_ci: degenerate series");
    std::size_t batch = 1;
    std::vector<double> bm;
    while (true) {
        const std::size_t nb = series.size() / batch;
        if (nb < 8) break;
        bm.assign(nb, 0.0);
        for (std::size_t k = 0; k < nb; ++k) {
            double acc = 0.0;
            for (std::size_t t = 0; t < batch; ++t) acc += series[k * batch + t];
            bm[k] = acc / batch;
        }
        const double m = mean_of(bm);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < nb; ++k) num += (bm[k] - m) * (bm[k + 1] - m);
        for (std::size_t k = 0; k < nb; ++k) den += (bm[k] - m) * (bm[k] - m);
        const double rho1 = (den > 0.0) ? num / den : 0.0;
        if (rho1 < 0.1) break;
        batch *= 2;
    }
    Estimate e;
    e.method = "batch_means(b=" + std::to_string(batch) + ")";
    e.value = mean_of(bm);
    e.n_eff = static_cast<double>(bm.size());
    e.stderr_ = std::sqrt(variance_of(bm) / bm.size());
    return e;
}

// ---------------------------------------------------------------------------
// Slope fits
// ---------------------------------------------------------------------------

struct WlsFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline WlsFit weighted_ls(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& wgt) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += wgt[i];
        sx += wgt[i] * x[i];
        sy += wgt[i] * y[i];
        sxx += wgt[i] * x[i] * x[i];
        sxy += wgt[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    WlsFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    return f;
}

/// One trajectory sampled on a fixed time grid.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::array<double, kMaxDim>> positions;
};

struct DiffusivityEstimate {
    std::array<Estimate, kMaxDim> per_coord{};
    Estimate trace;
    std::array<std::array<double, kMaxDim>, kMaxDim> offdiag_slopes{};
    int dim = 0;
};

/// Slope of E X_k(t) X_l(t) against t over the window after burn-in, weighted
/// by the replica variance of the mean; slope uncertainty from delete-one
/// jackknife over replicas (grid points are strongly correlated in t, so the
/// per-point WLS error would be optimistic).
inline DiffusivityEstimate msd_diffusivity(const std::vector<TimeSeries>& replicas, int dim,
                                           double burn_fraction = 0.2) {
    if (replicas.size() < 30) throw std::invalid_argument("msd_diffusivity: need >= 30 replicas");
    const std::size_t r = replicas.size();
    const std::size_t nt = replicas.front().times.size();
    for (const auto& s : replicas)
        if (s.times.size() != nt) throw std::invalid_argument("msd_diffusivity: ragged series");
    std::size_t t0 = static_cast<std::size_t>(burn_fraction * nt);
    if (nt - t0 < 10) throw std::invalid_argument("msd_diffusivity: window shorter than 10 points");

    DiffusivityEstimate out;
    out.dim = dim;
    auto fit_pair = [&](int k, int l, Estimate& est) {
        std::vector<double> xs, ys, ws;
        std::vector<std::vector<double>> per_rep(r); // X_k X_l per replica per grid point
        for (std::size_t t = t0; t < nt; ++t) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < r; ++i) {
                const double v = replicas[i].positions[t][k] * replicas[i].positions[t][l];
                per_rep[i].push_back(v);
                m += v;
                m2 += v * v;
            }
            m /= r;
            m2 /= r;
            const double var_mean = std::max(1e-300, (m2 - m * m) / (r - 1.0));
            xs.push_back(replicas.front().times[t]);
            ys.push_back(m);
            ws.push_back(1.0 / var_mean);
        }
        const WlsFit full = weighted_ls(xs, ys, ws);
        // jackknife over replicas
        std::vector<double> jk(r, 0.0);
        std::vector<double> yd(xs.size());
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t t = 0; t < xs.size(); ++t)
                yd[t] = (ys[t] * r - per_rep[i][t]) / (r - 1.0);
            jk[i] = weighted_ls(xs, yd, ws).slope;
        }
        const double jm = mean_of(jk);
        double acc = 0.0;
        for (double v : jk) acc += (v - jm) * (v - jm);
        est.value = full.slope;
        est.stderr_ = std::sqrt(acc * (r - 1.0) / r);
        est.n_eff = static_cast<double>(r);
        est.method = "msd_wls_jackknife";
    };

    for (int k = 0; k < dim; ++k) fit_pair(k, k, out.per_coord[k]);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
            if (k != l) {
                Estimate e;
                fit_pair(k, l, e);
                out.offdiag_slopes[k][l] = e.value;
            }
    // trace fit: sum over coordinates
    {
        Estimate e;
        std::vector<double> xs, ys, ws;
        std::vector<std::vector<double>> per_rep(r);
        for (std::size_t t = t0; t < nt; ++t) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < r; ++i) {
                double v = 0.0;
                for (int k = 0; k < dim; ++k)
                    v += replicas[i].positions[t][k] * replicas[i].positions[t][k];
                per_rep[i].push_back(v);
                m += v;
                m2 += v * v;
            }
            m /= r;
            m2 /= r;
            const double var_mean = std::max(1e-300, (m2 - m * m) / (r - 1.0));
            xs.push_back(replicas.front().times[t]);
            ys.push_back(m);
            ws.push_back(1.0 / var_mean);
        }
        const WlsFit full = weighted_ls(xs, ys, ws);
        std::vector<double> jk(r, 0.0), yd(xs.size());
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t t = 0; t < xs.size(); ++t)
                yd[t] = (ys[t] * r - per_rep[i][t]) / (r - 1.0);
            jk[i] = weighted_ls(xs, yd, ws).slope;
        }
        const double jm = mean_of(jk);
        double acc = 0.0;
        for (double v : jk) acc += (v - jm) * (v - jm);
        e.value = full.slope;
        e.stderr_ = std::sqrt(acc * (r - 1.0) / r);
        e.n_eff = static_cast<double>(r);
        e.method = "msd_wls_jackknife";
        out.trace = e;
    }
    return out;
}

/// Least-squares exponent of E X^2 ~ t^alpha on log-log axes.
inline Estimate exponent_fit(const std::vector<double>& times, const std::vector<double>& msd) {
    if (times.size() != msd.size() || times.size() < 3)
        throw std::invalid_argument("exponent_fit: bad input");
    std::vector<double> x, y, w;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= 0.0 || msd[i] <= 0.0) continue;
        x.push_back(std::log(times[i]));
        y.push_back(std::log(msd[i]));
        w.push_back(1.0);
    }
    if (x.size() < 3) throw std::invalid_argument("exponent_fit: too few positive points");
    const WlsFit f = weighted_ls(x, y, w);
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - f.slope * x[i] - f.intercept;
        rss += e * e;
    }
    double sxx = 0.0;
    const double mx = mean_of(x);
    for (double v : x) sxx += (v - mx) * (v - mx);
    Estimate est;
    est.value = f.slope;
    est.stderr_ = (x.size() > 2) ? std::sqrt(rss / (x.size() - 2.0) / sxx) : 0.0;
    est.n_eff = static_cast<double>(x.size());
    est.method = "loglog_ls";
    return est;
}

// ---------------------------------------------------------------------------
// Small dense linear algebra (covariance tests)
// ---------------------------------------------------------------------------

struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major n x n

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// In-place lower Cholesky; throws on non-PD input.
inline DenseMatrix cholesky(const DenseMatrix& m) {
    DenseMatrix l(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
                l.at(i, i) = std::sqrt(s);
            } else {
                l.at(i, j) = s / l.at(j, j);
            }
        }
    }
    return l;
}

inline std::vector<double> chol_solve(const DenseMatrix& l, std::vector<double> b) {
    const std::size_t n = l.n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l.at(i, k) * b[k];
        b[i] /= l.at(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) b[i] -= l.at(k, i) * b[k];
        b[i] /= l.at(i, i);
    }
    return b;
}

/// Likelihood-ratio statistic for sample covariance S (from n iid vectors)
/// against a fixed target Sigma0: n [tr(Sigma0^{-1} S) - logdet(Sigma0^{-1} S) - p].
inline double covariance_lrt_statistic(const DenseMatrix& sigma0_chol, const DenseMatrix& s,
                                       std::size_t n_samples) {
    const std::size_t p = s.n;
    // T = Sigma0^{-1} S column by column
    DenseMatrix t(p);
    std::vector<double> col(p);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < p; ++i) col[i] = s.at(i, j);
        col = chol_solve(sigma0_chol, col);
        for (std::size_t i = 0; i < p; ++i) t.at(i, j) = col[i];
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < p; ++i) trace += t.at(i, i);
    // logdet(Sigma0^{-1} S) = logdet S - logdet Sigma0
    const DenseMatrix ls = cholesky(s);
    double logdet = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        logdet += 2.0 * (std::log(ls.at(i, i)) - std::log(sigma0_chol.at(i, i)));
    return static_cast<double>(n_samples) * (trace - logdet - static_cast<double>(p));
}

/// Empirical covariance of a set of p-dimensional draws (mean removed).
inline DenseMatrix sample_covariance(const std::vector<std::vector<double>>& draws) {
    const std::size_t n = draws.size(), p = draws.front().size();
    std::vector<double> mu(p, 0.0);
    for (const auto& d : draws)
        for (std::size_t j = 0; j < p; ++j) mu[j] += d[j];
    for (auto& v : mu) v /= static_cast<double>(n);
    DenseMatrix s(p);
    for (const auto& d : draws)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j <= i; ++j) s.at(i, j) += (d[i] - mu[i]) * (d[j] - mu[j]);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            s.at(i, j) /= static_cast<double>(n - 1);
            s.at(j, i) = s.at(i, j);
        }
    return s;
}

/// Null distribution of the LRT statistic by direct simulation from Sigma0;
/// returns the (1 - alpha) quantile. Sidesteps the chi-square approximation,
/// which is poor when p is not small against n.
inline double covariance_lrt_critical(const DenseMatrix& sigma0_chol, std::size_t n_samples,
                                      double alpha, int trials, Rng& rng) {
    const std::size_t p = sigma0_chol.n;
    std::vector<double> stats(trials);
    std::vector<std::vector<double>> draws(n_samples, std::vector<double>(p));
    std::vector<double> z(p);
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (auto& v : z) v = rng.normal();
            for (std::size_t row = 0; row < p; ++row) {
                double acc = 0.0;
                for (std::size_t k = 0; k <= row; ++k) acc += sigma0_chol.at(row, k) * z[k];
                draws[i][row] = acc;
            }
        }
        stats[t] = covariance_lrt_statistic(sigma0_chol, sample_covariance(draws), n_samples);
    }
    std::sort(stats.begin(), stats.end());
    const std::size_t idx = static_cast<std::size_t>((1.0 - alpha) * (trials - 1));
    return stats[idx];
}

} // namespace srw

#endif
