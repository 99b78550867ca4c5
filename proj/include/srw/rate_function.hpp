#ifndef SRW_RATE_FUNCTION_HPP
#define SRW_RATE_FUNCTION_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace srw {

/// Jump-rate function w(u) = gamma + s(u) + r(u) with s even and r odd, both
/// given by coefficient lists so parity holds by construction.
///
/// s_coeffs = {s0, s2, s4, ...}:      s(u) = sum_k s_coeffs[k] u^{2k}
/// r linear:                          r(u) = r_derivs[0] * u
/// r entire:  r_derivs = {r'(0), r'''(0), ...},  r(u) = sum_k r_derivs[k] u^{2k+1}/(2k+1)!
///
/// `c` is the self-repellence constant (inf r' > c), `eps` and `c_dom` the
/// slack and constant of the Gaussian-domination condition on s.
struct RateFunction {
    enum class RMode { linear, entire };

    double gamma = 1.0;
    std::vector<double> s_coeffs;
    RMode r_mode = RMode::linear;
    std::vector<double> r_derivs{1.0};
    // limsup |r^{(n+2)}(0)/r^{(n)}(0)| for the tail beyond the stored list;
    // 0 means the list is the whole (polynomial) function.
    double r_tail_ratio = 0.0;
    double c = 0.9;
    double eps = 0.1;
    double c_dom = 1.0;

    RateFunction() = default;

    static RateFunction gaussian_mode(double gamma_, double s4, double s2 = 0.0, double s0 = 0.0) {
        RateFunction rf;
        rf.gamma = gamma_;
        rf.s_coeffs = {s0, s2, s4};
        rf.r_mode = RMode::linear;
        rf.r_derivs = {1.0};
        rf.c = 0.9;
        rf.eps = 0.1;
        rf.c_dom = 4.0 * (1.0 + std::fabs(s4) + std::fabs(s2) + std::fabs(s0));
        return rf;
    }

    static RateFunction simple_walk(double gamma_) {
        RateFunction rf;
        rf.gamma = gamma_;
        rf.s_coeffs = {};
        rf.r_derivs = {0.0};
        return rf;
    }

    void validate_fields() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("rate function: gamma must be positive");
        if (!(c > 0.0)) throw std::invalid_argument("rate function: c must be positive");
        if (!(eps > 0.0) || !(eps < c))
            throw std::invalid_argument("rate function: need 0 < eps < c");
        if (!(c_dom > 0.0)) throw std::invalid_argument("rate function: c_dom must be positive");
        if (r_mode == RMode::linear && r_derivs.size() != 1)
            throw std::invalid_argument("rate function: linear r takes exactly one coefficient");
        if (r_tail_ratio < 0.0) throw std::invalid_argument("rate function: negative tail ratio");
    }

    // --- pointwise evaluation ------------------------------------------------

    double s(double u) const {
        const double u2 = u * u;
        double acc = 0.0;
        for (std::size_t k = s_coeffs.size(); k-- > 0;) acc = acc * u2 + s_coeffs[k];
        return acc;
    }

    double r(double u) const {
        const double u2 = u * u;
        double acc = 0.0;
        const auto taylor = r_taylor();
        for (std::size_t k = taylor.size(); k-- > 0;) acc = acc * u2 + taylor[k];
        return acc * u;
    }

    double r_prime(double u) const {
        const double u2 = u * u;
        double acc = 0.0;
        const auto taylor = r_taylor();
        for (std::size_t k = taylor.size(); k-- > 0;)
            acc = acc * u2 + taylor[k] * static_cast<double>(2 * k + 1);
        return acc;
    }

    double w(double u) const { return gamma + s(u) + r(u); }

    // --- antiderivatives (used by the exact hazard inversion) ----------------

    /// S(u) = int_0^u s, odd polynomial.
    double s_antiderivative(double u) const {
        const double u2 = u * u;
        double acc = 0.0;
        for (std::size_t k = s_coeffs.size(); k-- > 0;)
            acc = acc * u2 + s_coeffs[k] / static_cast<double>(2 * k + 1);
        return acc * u;
    }

    /// R(u) = int_0^u r, even, R(0)=0; strictly convex when inf r' > 0.
    double r_antiderivative(double u) const {
        const double u2 = u * u;
        double acc = 0.0;
        const auto taylor = r_taylor();
        for (std::size_t k = taylor.size(); k-- > 0;)
            acc = acc * u2 + taylor[k] / static_cast<double>(2 * k + 2);
        return acc * u2;
    }

    /// W(u) = int_0^u w.
    double w_antiderivative(double u) const {
        return gamma * u + s_antiderivative(u) + r_antiderivative(u);
    }

    /// Taylor coefficients of r as a power series in u (odd degrees only):
    /// r(u) = sum_k taylor[k] u^{2k+1}.
    std::vector<double> r_taylor() const {
        std::vector<double> t(r_derivs.size());
        double fact = 1.0; // (2k+1)!
        for (std::size_t k = 0; k < r_derivs.size(); ++k) {
            if (k > 0) fact *= static_cast<double>(2 * k) * static_cast<double>(2 * k + 1);
            t[k] = r_derivs[k] / fact;
        }
        if (r_mode == RMode::linear) t.resize(1);
        return t;
    }

    /// Full polynomial coefficients of w as evaluated (entire r truncated):
    /// w(u) = sum_j coeffs[j] u^j.
    std::vector<double> w_poly_coeffs() const {
        const auto rt = r_taylor();
        std::size_t deg = 0;
        if (!s_coeffs.empty()) deg = std::max(deg, 2 * (s_coeffs.size() - 1));
        if (!rt.empty()) deg = std::max(deg, 2 * (rt.size() - 1) + 1);
        std::vector<double> p(deg + 1, 0.0);
        p[0] = gamma;
        for (std::size_t k = 0; k < s_coeffs.size(); ++k) p[2 * k] += s_coeffs[k];
        for (std::size_t k = 0; k < rt.size(); ++k) p[2 * k + 1] += rt[k];
        while (p.size() > 1 && p.back() == 0.0) p.pop_back();
        return p;
    }
};

struct ConditionReport {
    bool ellipticity = false;         // w > 0 on grid and in the tails
    bool convexity = false;           // r' > c on grid and tails
    bool gaussian_domination = false; // s(u) < c_dom exp((c-eps) u^2/2)
    bool r_entire = false;            // sum (2/c)^{n/2} |r^(n)(0)| converges
    double entire_sum = std::numeric_limits<double>::infinity();
    bool entire_sum_divergent = true;
    double w_min = 0.0;      // exact infimum of w (may differ from gamma)
    double w_argmin = 0.0;
    double c_dom_min = 0.0;  // fitted minimal domination constant for (c, eps)
    double grid_halfwidth = 0.0;
    int grid_points = 0;
    bool tails_decidable = false;

    bool all_pass() const { return ellipticity && convexity && gaussian_domination && r_entire; }
};

namespace detail {

/// True when the top coefficient dominates all lower ones beyond |u| >= U,
/// which decides sign questions outside the test grid for polynomials.
inline bool leading_term_dominates(const std::vector<double>& p, double U) {
    if (p.size() < 2) return true;
    const std::size_t top = p.size() - 1;
    double lower = 0.0, upow = 1.0;
    for (std::size_t j = 0; j < top; ++j) {
        lower += std::fabs(p[j]) * upow;
        upow *= U;
    }
    return p[top] * upow > lower; // strict: top term exceeds worst-case rest
}

inline double poly_eval(const std::vector<double>& p, double u) {
    double acc = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) acc = acc * u + p[j];
    return acc;
}

/// Golden-section refinement of a local minimum bracketed in [a, b].
template <class F>
double golden_min(F&& f, double a, double b, int iters = 120) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Grid evaluation plus leading-coefficient tail analysis of conditions
/// (ellipticity, convexity, Gaussian domination, entire-sum convergence).
inline ConditionReport check_conditions(const RateFunction& rf, double u_max = 50.0,
                                        int n_grid = 20001) {
    rf.validate_fields();
    ConditionReport rep;
    rep.grid_halfwidth = u_max;
    rep.grid_points = n_grid;

    const auto wp = rf.w_poly_coeffs();
    const bool even_top = (wp.size() % 2 == 1) && wp.back() > 0.0;
    rep.tails_decidable = true;

    // ellipticity: grid scan for the minimum of w, then polish
    double best = std::numeric_limits<double>::infinity(), best_u = 0.0;
    const double h = 2.0 * u_max / (n_grid - 1);
    for (int i = 0; i < n_grid; ++i) {
        const double u = -u_max + h * i;
        const double v = rf.w(u);
        if (v < best) { best = v; best_u = u; }
    }
    {
        const double a = best_u - h, b = best_u + h;
        const double u_ref = detail::golden_min([&](double u) { return rf.w(u); }, a, b);
        const double v_ref = rf.w(u_ref);
        if (v_ref < best) { best = v_ref; best_u = u_ref; }
    }
    bool tails_positive = even_top && detail::leading_term_dominates(wp, u_max);
    if (wp.size() == 1) tails_positive = wp[0] > 0.0; // constant rate
    rep.ellipticity = (best > 0.0) && tails_positive;
    rep.w_min = tails_positive ? best : -std::numeric_limits<double>::infinity();
    rep.w_argmin = best_u;

    // convexity: inf r' > c, r' is an even polynomial of u
    {
        double rp_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_grid; ++i) {
            const double u = -u_max + h * i;
            rp_min = std::min(rp_min, rf.r_prime(u));
        }
        const auto taylor = rf.r_taylor();
        std::vector<double> rp(taylor.size());
        for (std::size_t k = 0; k < taylor.size(); ++k)
            rp[k] = taylor[k] * static_cast<double>(2 * k + 1); // coeffs in u^2
        bool rp_tail_ok;
        if (rp.size() <= 1) {
            rp_tail_ok = !rp.empty() && rp[0] > rf.c; // constant r'
        } else {
            rp_tail_ok = rp.back() > 0.0 && detail::leading_term_dominates(rp, u_max * u_max);
        }
        rep.convexity = (rp_min > rf.c) && rp_tail_ok;
    }

    // Gaussian domination: fitted minimal constant C for the given (c, eps).
    // s is polynomial, the exponential wins in the tails, so the sup lives on
    // a compact set.
    {
        const double alpha = rf.c - rf.eps;
        double sup = 0.0, sup_u = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            const double u = -u_max + h * i;
            const double v = rf.s(u) * std::exp(-0.5 * alpha * u * u);
            if (v > sup) { sup = v; sup_u = u; }
        }
        const double u_ref = detail::golden_min(
            [&](double u) { return -rf.s(u) * std::exp(-0.5 * alpha * u * u); }, sup_u - h,
            sup_u + h);
        sup = std::max(sup, rf.s(u_ref) * std::exp(-0.5 * alpha * u_ref * u_ref));
        rep.c_dom_min = sup;
        rep.gaussian_domination = sup < rf.c_dom;
    }

    // entire-sum: partial sum over the stored derivatives plus a geometric
    // tail bound driven by r_tail_ratio
    {
        const double q2 = 2.0 / rf.c; // ratio (2/c) per derivative order step of 2
        double sum = 0.0, term = 0.0;
        for (std::size_t k = 0; k < rf.r_derivs.size(); ++k) {
            term = std::pow(q2, (2.0 * k + 1.0) / 2.0) * std::fabs(rf.r_derivs[k]);
            sum += term;
        }
        const double tail_factor = rf.r_tail_ratio * q2;
        if (rf.r_mode == RMode::linear || rf.r_tail_ratio == 0.0) {
            rep.entire_sum = sum;
            rep.entire_sum_divergent = false;
        } else if (tail_factor < 1.0) {
            rep.entire_sum = sum + term * tail_factor / (1.0 - tail_factor);
            rep.entire_sum_divergent = false;
        } else {
            rep.entire_sum = std::numeric_limits<double>::infinity();
            rep.entire_sum_divergent = true;
        }
        rep.r_entire = !rep.entire_sum_divergent;
    }

    return rep;
}

/// Pointwise rate, the quantity fed to every simulator. Callers are expected
/// to have run check_conditions and obtained ellipticity.
inline double evaluate_rate(const RateFunction& rf, double u) { return rf.w(u); }

inline void to_json(nlohmann::json& j, const RateFunction& rf) {
    j = nlohmann::json{{"gamma", rf.gamma},
                       {"s_coeffs", rf.s_coeffs},
                       {"r_mode", rf.r_mode == RateFunction::RMode::linear ? "linear" : "entire"},
                       {"r_derivs", rf.r_derivs},
                       {"r_tail_ratio", rf.r_tail_ratio},
                       {"c", rf.c},
                       {"eps", rf.eps},
                       {"c_dom", rf.c_dom}};
}

inline void from_json(const nlohmann::json& j, RateFunction& rf) {
    rf.gamma = j.at("gamma").get<double>();
    rf.s_coeffs = j.at("s_coeffs").get<std::vector<double>>();
    rf.r_mode = (j.at("r_mode").get<std::string>() == "linear") ? RateFunction::RMode::linear
                                                                : RateFunction::RMode::entire;
    rf.r_derivs = j.at("r_derivs").get<std::vector<double>>();
    rf.r_tail_ratio = j.value("r_tail_ratio", 0.0);
    rf.c = j.at("c").get<double>();
    rf.eps = j.at("eps").get<double>();
    rf.c_dom = j.at("c_dom").get<double>();
}

} // namespace srw

#endif
