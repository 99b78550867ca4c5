#ifndef SRW_POTENTIAL_HPP
#define SRW_POTENTIAL_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "srw/torus.hpp"

namespace srw {

/// Smooth, spherically symmetric, positive definite interaction
/// V(x) = a exp(-|x|^2 / sigma^2), with the unitary Fourier transform
/// convention vhat(p) = (2 pi)^{-d/2} int e^{i p.x} V(x) dx.
struct GaussianPotential {
    double amplitude = 1.0; // a
    double sigma = 1.0;     // sigma_V
    int dim = 3;

    GaussianPotential() = default;
    GaussianPotential(double a, double s, int d) : amplitude(a), sigma(s), dim(d) {
        if (!(a > 0.0) || !(s > 0.0)) throw std::invalid_argument("potential: a, sigma > 0");
        if (d < 3) throw std::invalid_argument("potential: dimension must be >= 3");
    }

    double value_r2(double r2) const { return amplitude * std::exp(-r2 / (sigma * sigma)); }

    double value(const std::array<double, kMaxDim>& x) const {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
        return value_r2(r2);
    }

    /// grad V(x) = -2 x V(x) / sigma^2
    std::array<double, kMaxDim> gradient(const std::array<double, kMaxDim>& x) const {
        const double v = value(x);
        std::array<double, kMaxDim> g{};
        for (int a = 0; a < dim; ++a) g[a] = -2.0 * x[a] * v / (sigma * sigma);
        return g;
    }

    /// F = -grad V, the self-repelling force kernel.
    std::array<double, kMaxDim> force(const std::array<double, kMaxDim>& x) const {
        auto g = gradient(x);
        for (int a = 0; a < dim; ++a) g[a] = -g[a];
        return g;
    }

    /// vhat(p) = a (sigma^2/2)^{d/2} exp(-sigma^2 |p|^2 / 4) >= 0.
    double vhat_r2(double p2) const {
        return amplitude * std::pow(0.5 * sigma * sigma, 0.5 * dim) *
               std::exp(-0.25 * sigma * sigma * p2);
    }

    double vhat(const std::array<double, kMaxDim>& p) const {
        double p2 = 0.0;
        for (int a = 0; a < dim; ++a) p2 += p[a] * p[a];
        return vhat_r2(p2);
    }

    /// uhat = sqrt(vhat), the positive definite square root U*U = V in
    /// Fourier variables.
    double uhat_r2(double p2) const { return std::sqrt(vhat_r2(p2)); }

    /// Radius beyond which |V| < tol; pair sums may be truncated there.
    double cutoff_radius(double tol = 1e-12) const {
        return sigma * std::sqrt(std::log(amplitude / tol));
    }
};

inline void to_json(nlohmann::json& j, const GaussianPotential& v) {
    j = nlohmann::json{
        {"family", "gaussian"}, {"amplitude", v.amplitude}, {"sigma", v.sigma}, {"dim", v.dim}};
}

inline void from_json(const nlohmann::json& j, GaussianPotential& v) {
    if (j.value("family", "gaussian") != std::string("gaussian"))
        throw std::invalid_argument("potential: unknown family");
    v = GaussianPotential(j.at("amplitude").get<double>(), j.at("sigma").get<double>(),
                          j.at("dim").get<int>());
}

} // namespace srw

#endif
