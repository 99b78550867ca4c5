#ifndef SRW_SPECTRAL_HPP
#define SRW_SPECTRAL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "srw/potential.hpp"
#include "srw/torus.hpp"

namespace srw {

/// Lattice Laplacian symbol: Dhat(p) = sum_l (1 - cos p_l).
/// The Fourier multiplier of -Delta on one variable is 2 Dhat(p), so the
/// lattice Green function has kernel 1/(2 Dhat).
inline double lattice_symbol(const std::array<double, kMaxDim>& p, int d) {
    double acc = 0.0;
    for (int a = 0; a < d; ++a) acc += 1.0 - std::cos(p[a]);
    return acc;
}

/// gamma kernel (1 - cos p_1)/Dhat(p); at p = 0 the symmetrized limit 1/d is
/// used, which keeps the exact average intact under discretization.
inline double gamma_kernel(const std::array<double, kMaxDim>& p, int d) {
    const double den = lattice_symbol(p, d);
    if (den == 0.0) return 1.0 / d;
    return (1.0 - std::cos(p[0])) / den;
}

/// Midpoint rule on [-pi, pi]^d with M cells per axis. Nodes sit at cell
/// centers -pi + (j + 1/2) 2 pi / M, so for even or odd M the origin is never
/// a node and integrable singularities at p = 0 need no special casing.
/// The grid is exactly closed under coordinate permutations and sign flips.
class TorusQuadrature {
  public:
    TorusQuadrature(int d, int M) : d_(d), M_(M) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("quadrature: bad dimension");
        if (M < 2) throw std::invalid_argument("quadrature: need at least 2 cells per axis");
        nodes_.resize(M);
        const double h = 2.0 * std::numbers::pi / M;
        for (int j = 0; j < M; ++j) nodes_[j] = -std::numbers::pi + (j + 0.5) * h;
    }

    int dim() const { return d_; }
    int cells_per_axis() const { return M_; }

    /// Raw integral over [-pi, pi]^d with compensated summation.
    template <class F>
    double integrate(F&& f) const {
        const double cell = std::pow(2.0 * std::numbers::pi / M_, d_);
        std::array<int, kMaxDim> idx{};
        std::array<double, kMaxDim> p{};
        for (int a = 0; a < d_; ++a) p[a] = nodes_[0];
        double sum = 0.0, comp = 0.0;
        std::int64_t total = 1;
        for (int a = 0; a < d_; ++a) total *= M_;
        for (std::int64_t k = 0; k < total; ++k) {
            const double y = f(p) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            for (int a = 0; a < d_; ++a) {
                if (++idx[a] < M_) {
                    p[a] = nodes_[idx[a]];
                    break;
                }
                idx[a] = 0;
                p[a] = nodes_[0];
            }
        }
        return sum * cell;
    }

    /// (2 pi)^{-d} times the integral.
    template <class F>
    double normalized(F&& f) const {
        return integrate(std::forward<F>(f)) / std::pow(2.0 * std::numbers::pi, d_);
    }

  private:
    int d_;
    int M_;
    std::vector<double> nodes_;
};

/// Lattice Green function C(x) = (-Delta)^{-1}(0, x) on Z^d by torus
/// quadrature: (2 pi)^{-d} int cos(p.x)/(2 Dhat(p)) dp. Requires d >= 3.
inline double lattice_green(const std::array<int, kMaxDim>& x, int d, int M) {
    if (d < 3) throw std::invalid_argument("lattice green: requires d >= 3");
    TorusQuadrature q(d, M);
    return q.normalized([&](const std::array<double, kMaxDim>& p) {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += p[a] * x[a];
        return std::cos(phase) / (2.0 * lattice_symbol(p, d));
    });
}

struct LadderResult {
    std::vector<int> grids;
    std::vector<double> values;
    double extrapolated = 0.0;
    double empirical_order = 0.0;
};

/// One-level Richardson extrapolation over an M-doubling ladder with the
/// convergence order fitted from the last three values.
inline LadderResult richardson_ladder(const std::function<double(int)>& value_at, int m0,
                                      int levels) {
    LadderResult r;
    int m = m0;
    for (int i = 0; i < levels; ++i, m *= 2) {
        r.grids.push_back(m);
        r.values.push_back(value_at(m));
    }
    const std::size_t n = r.values.size();
    if (n >= 3) {
        const double d1 = r.values[n - 2] - r.values[n - 3];
        const double d2 = r.values[n - 1] - r.values[n - 2];
        if (d2 != 0.0 && d1 / d2 > 1.0) {
            const double ratio = d1 / d2;
            r.empirical_order = std::log2(ratio);
            r.extrapolated = r.values[n - 1] + d2 / (ratio - 1.0);
            return r;
        }
    }
    if (n >= 2 && r.values[n - 1] != r.values[n - 2]) {
        r.extrapolated = 2.0 * r.values[n - 1] - r.values[n - 2];
        r.empirical_order = 1.0;
    } else {
        r.extrapolated = r.values.back();
    }
    return r;
}

inline LadderResult lattice_green_ladder(const std::array<int, kMaxDim>& x, int d, int m0 = 64,
                                         int levels = 3) {
    return richardson_ladder([&](int m) { return lattice_green(x, d, m); }, m0, levels);
}

/// (2 pi)^{-d} int gamma kernel = 1/d exactly; survives discretization on the
/// symmetrized midpoint grid.
inline double gamma_kernel_average(int d, int M) {
    TorusQuadrature q(d, M);
    return q.normalized([&](const std::array<double, kMaxDim>& p) { return gamma_kernel(p, d); });
}

inline double gamma_kernel_sup(int d, int M) {
    TorusQuadrature q(d, M);
    // diagonal multiplier; the sup over the grid is the operator norm
    double sup = 0.0;
    q.integrate([&](const std::array<double, kMaxDim>& p) {
        sup = std::max(sup, gamma_kernel(p, d));
        return 0.0;
    });
    return sup;
}

struct InfraredReport {
    std::vector<int> grids;
    std::vector<double> values;
    bool finite = false;
    double log_slope = 0.0; // growth per unit log M when divergent
};

/// int Chat(p)/Dhat(p) dp under M-refinement. In d >= 3 with bounded Chat the
/// ladder stabilizes; in d = 2 the values grow linearly in log M and the
/// fitted slope is reported instead of an error.
inline InfraredReport
infrared_integral(const std::function<double(const std::array<double, kMaxDim>&)>& chat, int d,
                  int m0 = 32, int levels = 4) {
    InfraredReport rep;
    int m = m0;
    for (int i = 0; i < levels; ++i, m *= 2) {
        TorusQuadrature q(d, m);
        rep.grids.push_back(m);
        rep.values.push_back(q.integrate([&](const std::array<double, kMaxDim>& p) {
            return chat(p) / lattice_symbol(p, d);
        }));
    }
    const std::size_t n = rep.values.size();
    const double last_step = rep.values[n - 1] - rep.values[n - 2];
    const double prev_step = rep.values[n - 2] - rep.values[n - 3];
    // geometric decay of increments means convergence; steady increments per
    // doubling mean log divergence
    rep.finite = std::fabs(last_step) < 0.5 * std::fabs(prev_step) ||
                 std::fabs(last_step) < 1e-12 * std::fabs(rep.values[n - 1]);
    rep.log_slope = last_step / std::numbers::ln2;
    return rep;
}

// ---------------------------------------------------------------------------
// Radial quadrature for continuum (R^d) spherically symmetric integrands
// ---------------------------------------------------------------------------

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

/// Upper bound on int_R^inf r^k e^{-b r^2} dr via the incomplete gamma
/// inequality Gamma(a, x) <= 2 x^{a-1} e^{-x}, valid for x >= 2a.
inline double gaussian_tail_bound(int k, double b, double R) {
    const double a = 0.5 * (k + 1);
    const double x = b * R * R;
    if (x < 2.0 * a) return std::numeric_limits<double>::infinity();
    return 0.5 * std::pow(b, -a) * 2.0 * std::pow(x, a - 1.0) * std::exp(-x);
}

} // namespace detail

/// Composite Gauss-Legendre rule on [0, R_max] with an analytic Gaussian tail
/// bound carried along.
class RadialQuadrature {
  public:
    explicit RadialQuadrature(double r_max, int panels = 16, int order = 32)
        : r_max_(r_max), panels_(panels) {
        detail::gauss_legendre(order, x_, w_);
    }

    double r_max() const { return r_max_; }

    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        const double h = r_max_ / panels_;
        for (int pnl = 0; pnl < panels_; ++pnl) {
            const double a = pnl * h, b = a + h;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t i = 0; i < x_.size(); ++i) sum += w_[i] * half * f(mid + half * x_[i]);
        }
        return sum;
    }

  private:
    double r_max_;
    int panels_;
    std::vector<double> x_, w_;
};

inline double sphere_surface(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

struct RadialValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// rho^2 = d^{-1} int_{R^d} |p|^{-2} vhat(p) dp, radial reduction with
/// analytic tail. Diverges at p = 0 for d <= 2, hence the dimension guard.
inline RadialValue rho_squared(const GaussianPotential& v, int d, double tol = 1e-10) {
    if (d < 3) throw std::invalid_argument("rho^2: integral diverges at p=0 for d <= 2");
    const double b = 0.25 * v.sigma * v.sigma;
    const double amp = v.amplitude * std::pow(0.5 * v.sigma * v.sigma, 0.5 * d);
    // choose R so that the analytic tail bound is far below tol
    double R = std::sqrt((std::max(1.0, std::log(amp / tol)) + 40.0) / b);
    RadialQuadrature q(R);
    RadialValue out;
    out.value = sphere_surface(d) / d *
                q.integrate([&](double r) { return std::pow(r, d - 3) * v.vhat_r2(r * r); });
    out.tail_bound = sphere_surface(d) / d * amp * detail::gaussian_tail_bound(d - 3, b, R);
    if (!(out.tail_bound < tol)) throw std::runtime_error("rho^2: tail bound above tolerance");
    return out;
}

/// int p_l^2/|p|^2 vhat(p) dp = d^{-1} int vhat = (2 pi)^{d/2} V(0)/d.
inline RadialValue variational_bound_continuum(const GaussianPotential& v, int d,
                                               double tol = 1e-10) {
    const double b = 0.25 * v.sigma * v.sigma;
    const double amp = v.amplitude * std::pow(0.5 * v.sigma * v.sigma, 0.5 * d);
    double R = std::sqrt((std::max(1.0, std::log(amp / tol)) + 40.0) / b);
    RadialQuadrature q(R);
    RadialValue out;
    out.value = sphere_surface(d) / d *
                q.integrate([&](double r) { return std::pow(r, d - 1) * v.vhat_r2(r * r); });
    out.tail_bound = sphere_surface(d) / d * amp * detail::gaussian_tail_bound(d - 1, b, R);
    if (!(out.tail_bound < tol)) throw std::runtime_error("variational bound: tail above tol");
    return out;
}

/// Continuum covariance at the origin: C(0) = (2 pi)^{-d/2} int |p|^{-2} vhat.
inline double continuum_c0(const GaussianPotential& v, int d, double tol = 1e-10) {
    const double r = rho_squared(v, d, tol).value;
    return r * d / std::pow(2.0 * std::numbers::pi, 0.5 * d);
}

/// Continuum covariance C(x)/radial: (2 pi)^{-d/2} int e^{-ip.x}|p|^{-2} vhat,
/// reduced to a 1d integral for d = 3 via the spherical average sinc kernel.
inline double continuum_cov_d3(const GaussianPotential& v, double dist, double tol = 1e-10) {
    const double b = 0.25 * v.sigma * v.sigma;
    const double amp = v.amplitude * std::pow(0.5 * v.sigma * v.sigma, 1.5);
    double R = std::sqrt((std::max(1.0, std::log(amp / tol)) + 40.0) / b);
    RadialQuadrature q(R, 24, 48);
    const double integral = q.integrate([&](double r) {
        const double sinc = (dist == 0.0) ? 1.0 : std::sin(r * dist) / (r * dist);
        return v.vhat_r2(r * r) * sinc;
    });
    return integral * 4.0 * std::numbers::pi / std::pow(2.0 * std::numbers::pi, 1.5);
}

// ---------------------------------------------------------------------------
// Explicit bound formulas of the covariance recursion
// ---------------------------------------------------------------------------

/// (Z(c/2))^2 n! m! (2/c)^{(n+m)/2}
inline double covariance_bound_evaluator(int n, int m, double c, double z_half_c) {
    return z_half_c * z_half_c * std::tgamma(n + 1.0) * std::tgamma(m + 1.0) *
           std::pow(2.0 / c, 0.5 * (n + m));
}

struct EntireBound {
    double value = std::numeric_limits<double>::infinity();
    bool divergent = true;
};

/// 4 (Z(c/2))^2 ( sum_n |r^(n)(0)| (2/c)^{n/2} )^2 with the same geometric
/// tail treatment as the condition checker.
inline EntireBound entire_bound(const std::vector<double>& r_derivs, double tail_ratio, double c,
                                double z_half_c) {
    EntireBound out;
    const double q2 = 2.0 / c;
    double sum = 0.0, term = 0.0;
    for (std::size_t k = 0; k < r_derivs.size(); ++k) {
        term = std::pow(q2, (2.0 * k + 1.0) / 2.0) * std::fabs(r_derivs[k]);
        sum += term;
    }
    const double tf = tail_ratio * q2;
    if (tail_ratio > 0.0) {
        if (tf >= 1.0) return out;
        sum += term * tf / (1.0 - tf);
    }
    out.value = 4.0 * z_half_c * z_half_c * sum * sum;
    out.divergent = false;
    return out;
}

/// Right-hand side of the exponential-moment bound Z(lambda) <= (1-lambda/c)^{-beta}.
inline double z_bound(double lambda, double c, double beta) {
    if (!(lambda < c)) throw std::invalid_argument("z_bound: requires lambda < c");
    return std::pow(1.0 - lambda / c, -beta);
}

struct ZEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
    bool blowup = false;
};

/// Monte Carlo estimate of Z(lambda) = E exp(lambda (omega(0)-omega(e))^2)
/// across field replicas. `fields` must expose gradient_at_origin(axis).
template <class FieldRange>
ZEstimate z_lambda(const FieldRange& fields, double lambda, int axis = 0) {
    ZEstimate est;
    double sum = 0.0, sumsq = 0.0;
    for (const auto& f : fields) {
        const double g = f.gradient_at_origin(axis);
        const double v = std::exp(lambda * g * g);
        if (!std::isfinite(v) || v > 1e300) {
            est.blowup = true;
            continue;
        }
        sum += v;
        sumsq += v * v;
        ++est.n;
    }
    if (est.n > 1) {
        est.value = sum / est.n;
        const double var = (sumsq - sum * sum / est.n) / (est.n - 1);
        est.stderr_ = std::sqrt(std::max(0.0, var) / est.n);
    }
    return est;
}

} // namespace srw

#endif
