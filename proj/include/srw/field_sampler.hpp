#ifndef SRW_FIELD_SAMPLER_HPP
#define SRW_FIELD_SAMPLER_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srw/fft.hpp"
#include "srw/potential.hpp"
#include "srw/rate_function.hpp"
#include "srw/rng.hpp"
#include "srw/spectral.hpp"
#include "srw/torus.hpp"

namespace srw {

enum class FieldKind : std::uint32_t { lattice_gaussian = 0, lattice_gibbs = 1, continuum_gaussian = 2 };

inline const char* field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::lattice_gaussian: return "lattice_gaussian";
        case FieldKind::lattice_gibbs: return "lattice_gibbs";
        case FieldKind::continuum_gaussian: return "continuum_gaussian";
    }
    return "?";
}

/// Height field on the periodic lattice, pinned so value(origin) = 0.
/// Everything downstream reads differences only, so the pinning is a gauge
/// choice, not a physical one.
struct FieldSample {
    TorusGeometry geom;
    FieldKind kind = FieldKind::lattice_gaussian;
    std::uint64_t seed = 0;
    std::vector<double> values;

    double value(std::int64_t site) const { return values[static_cast<std::size_t>(site)]; }

    /// omega(0) - omega(e_axis); the statistic all stationarity checks use.
    double gradient_at_origin(int axis) const {
        const std::int64_t e = geom.neighbor(0, axis, +1);
        return values[0] - values[static_cast<std::size_t>(e)];
    }

    void pin_at_origin() {
        const double v0 = values[0];
        for (auto& v : values) v -= v0;
    }

    double mean() const {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc / static_cast<double>(values.size());
    }
};

namespace detail {

/// Fill a complex lattice array with Hermitian standard Gaussian noise:
/// xi(-k) = conj(xi(k)), E|xi(k)|^2 = 1, self-conjugate modes real.
inline void hermitian_noise(const TorusGeometry& g, Rng& rng, std::vector<std::complex<double>>& xi) {
    xi.assign(static_cast<std::size_t>(g.size()), {0.0, 0.0});
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        auto c = g.coords(i);
        std::array<int, kMaxDim> nc{};
        for (int a = 0; a < g.dim(); ++a) nc[a] = g.wrap(-c[a]);
        const std::int64_t j = g.index(nc);
        if (j == i) {
            xi[static_cast<std::size_t>(i)] = {rng.normal(), 0.0};
        } else if (i < j) {
            const double re = rng.normal() * inv_sqrt2;
            const double im = rng.normal() * inv_sqrt2;
            xi[static_cast<std::size_t>(i)] = {re, im};
            xi[static_cast<std::size_t>(j)] = {re, -im};
        }
    }
}

} // namespace detail

/// Massless free field on the torus by spectral synthesis:
/// omega_hat(p) = xi(p)/sqrt(2 Dhat(p)) on nonzero momenta, zero mode dropped,
/// inverse FFT, pin at origin. Difference covariances match the torus Green
/// function of the lattice Laplacian.
inline FieldSample sample_gff_lattice(int d, int L, std::uint64_t seed) {
    if (d < 3) throw std::invalid_argument("gff: the massless lattice field needs d >= 3");
    if (L < 8 || L % 2 != 0) throw std::invalid_argument("gff: require even L >= 8");
    FieldSample f;
    f.geom = TorusGeometry(d, L);
    f.kind = FieldKind::lattice_gaussian;
    f.seed = seed;

    Rng rng(seed);
    std::vector<std::complex<double>> spec;
    detail::hermitian_noise(f.geom, rng, spec);
    const double two_pi_over_L = 2.0 * std::numbers::pi / L;
    for (std::int64_t i = 1; i < f.geom.size(); ++i) {
        const auto c = f.geom.coords(i);
        double dhat = 0.0;
        for (int a = 0; a < d; ++a) dhat += 1.0 - std::cos(two_pi_over_L * c[a]);
        spec[static_cast<std::size_t>(i)] /= std::sqrt(2.0 * dhat);
    }
    spec[0] = {0.0, 0.0};
    fft_cube_inplace(spec, d, L, FFTW_BACKWARD);
    const double norm = std::pow(static_cast<double>(L), -0.5 * d);
    f.values.resize(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) f.values[i] = spec[i].real() * norm;
    f.pin_at_origin();
    return f;
}

/// Exact torus difference variance Var(omega(0)-omega(e)) = (1 - L^-d)/d.
inline double torus_gradient_variance(int d, int L) {
    return (1.0 - std::pow(static_cast<double>(L), -d)) / d;
}

/// Single-site conditional specification exp(-sum_{y~x} R(omega_x - omega_y))
/// with R the antiderivative of the odd part r of the rate function.
struct GibbsSpec {
    RateFunction rf;
    double proposal_scale = 0.8;
    int sweeps_per_sample = 0; // диагностика only; chains manage their own schedule

    bool heat_bath_exact() const {
        return rf.r_mode == RateFunction::RMode::linear;
    }

    double big_r(double u) const { return rf.r_antiderivative(u); }
};

/// One systematic sweep of single-site updates. Linear r gives a Gaussian
/// conditional, sampled exactly (heat bath); otherwise Metropolis with a
/// symmetric Gaussian proposal. The origin is re-pinned after the sweep.
inline void gibbs_sweep(FieldSample& f, const GibbsSpec& spec, Rng& rng) {
    if (f.kind != FieldKind::lattice_gibbs)
        throw std::invalid_argument("gibbs_sweep: field kind must be lattice_gibbs");
    const auto& g = f.geom;
    const int d = g.dim();
    const bool exact = spec.heat_bath_exact();
    const double slope = spec.rf.r_derivs[0];
    for (std::int64_t x = 0; x < g.size(); ++x) {
        double nbr_sum = 0.0;
        std::array<double, 2 * kMaxDim> nbr{};
        for (int a = 0; a < d; ++a) {
            nbr[2 * a] = f.values[static_cast<std::size_t>(g.neighbor(x, a, +1))];
            nbr[2 * a + 1] = f.values[static_cast<std::size_t>(g.neighbor(x, a, -1))];
            nbr_sum += nbr[2 * a] + nbr[2 * a + 1];
        }
        if (exact) {
            // R(u) = slope u^2/2: conditional is N(neighbor mean, 1/(2 d slope))
            const double mean = nbr_sum / (2.0 * d);
            f.values[static_cast<std::size_t>(x)] =
                mean + rng.normal() / std::sqrt(2.0 * d * slope);
        } else {
            const double cur = f.values[static_cast<std::size_t>(x)];
            const double prop = cur + spec.proposal_scale * rng.normal();
            double dh = 0.0;
            for (int a = 0; a < 2 * d; ++a)
                dh += spec.big_r(prop - nbr[a]) - spec.big_r(cur - nbr[a]);
            if (dh <= 0.0 || rng.uniform() < std::exp(-dh))
                f.values[static_cast<std::size_t>(x)] = prop;
        }
    }
    f.pin_at_origin();
}

inline FieldSample make_gibbs_initial(int d, int L, std::uint64_t seed) {
    FieldSample f;
    f.geom = TorusGeometry(d, L);
    f.kind = FieldKind::lattice_gibbs;
    f.seed = seed;
    f.values.assign(static_cast<std::size_t>(f.geom.size()), 0.0);
    return f;
}

inline int default_burn_in_sweeps(int L) { return 10 * L * L; }

// ---------------------------------------------------------------------------
// Continuum Gaussian field on a periodic box
// ---------------------------------------------------------------------------

/// Stationary Gaussian field on [0, L_box)^d sampled on an M^d grid with
/// spectral density Chat(p) = |p|^{-2} vhat(p) restricted to box momenta
/// (zero mode dropped, so each sample has exact zero spatial mean).
/// Gradients are synthesized spectrally; accessors interpolate multilinearly.
struct ContinuumField {
    int d = 3;
    double box_length = 0.0;
    int grid = 0; // M per axis
    std::uint64_t seed = 0;
    TorusGeometry geom; // index geometry of the M^d grid
    std::vector<double> value;
    std::array<std::vector<double>, kMaxDim> grad;
    double spectral_energy = 0.0; // sum over modes of |A_k xi_k|^2

    double spacing() const { return box_length / grid; }

    double value_at(const std::array<double, kMaxDim>& x) const { return interpolate(value, x); }

    double gradient_at(const std::array<double, kMaxDim>& x, int axis) const {
        return interpolate(grad[axis], x);
    }

    /// omega(0) - omega(e_axis) at unit lattice offset, for stationarity
    /// statistics shared with the lattice field.
    double gradient_at_origin(int axis) const {
        std::array<double, kMaxDim> zero{}, e{};
        e[axis] = 1.0;
        return value_at(zero) - value_at(e);
    }

    double interpolate(const std::vector<double>& gridv, const std::array<double, kMaxDim>& x) const {
        const double h = spacing();
        std::array<int, kMaxDim> base{};
        std::array<double, kMaxDim> frac{};
        for (int a = 0; a < d; ++a) {
            double u = x[a] / h;
            double fl = std::floor(u);
            base[a] = geom.wrap(static_cast<int>(fl) % grid);
            frac[a] = u - fl;
        }
        double acc = 0.0;
        const int corners = 1 << d;
        for (int m = 0; m < corners; ++m) {
            double wgt = 1.0;
            std::array<int, kMaxDim> c{};
            for (int a = 0; a < d; ++a) {
                const int bit = (m >> a) & 1;
                wgt *= bit ? frac[a] : (1.0 - frac[a]);
                c[a] = bit ? geom.wrap(base[a] + 1) : base[a];
            }
            acc += wgt * gridv[static_cast<std::size_t>(geom.index(c))];
        }
        return acc;
    }
};

inline ContinuumField sample_continuum_field(int d, double box_length, int grid,
                                             const GaussianPotential& v, std::uint64_t seed) {
    if (d < 3) throw std::invalid_argument("continuum field: needs d >= 3");
    if (grid < 8 || grid % 2 != 0) throw std::invalid_argument("continuum field: even grid >= 8");
    ContinuumField f;
    f.d = d;
    f.box_length = box_length;
    f.grid = grid;
    f.seed = seed;
    f.geom = TorusGeometry(d, grid);

    Rng rng(seed);
    std::vector<std::complex<double>> noise;
    detail::hermitian_noise(f.geom, rng, noise);

    const double dk = 2.0 * std::numbers::pi / box_length;
    const double mode_norm =
        std::pow(2.0 * std::numbers::pi, -0.25 * d) * std::pow(dk, 0.5 * d); // sqrt((2pi)^{-d/2} dk^d)
    const std::size_t n = noise.size();

    // amplitudes; signed momentum per axis, Nyquist derivative multiplier zero
    std::vector<std::complex<double>> spec(n);
    std::vector<double> p_axis(static_cast<std::size_t>(grid));
    std::vector<double> p_deriv(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        const int ks = (k <= grid / 2) ? k : k - grid;
        p_axis[static_cast<std::size_t>(k)] = dk * ks;
        p_deriv[static_cast<std::size_t>(k)] = (k == grid / 2) ? 0.0 : dk * ks;
    }
    f.spectral_energy = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const auto c = f.geom.coords(static_cast<std::int64_t>(i));
        double p2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double pa = p_axis[static_cast<std::size_t>(c[a])];
            p2 += pa * pa;
        }
        const double amp = mode_norm * std::sqrt(v.vhat_r2(p2) / p2);
        spec[i] = amp * noise[i];
        f.spectral_energy += std::norm(spec[i]);
    }
    spec[0] = {0.0, 0.0};

    // value grid: eta(x_j) = sum_k spec_k e^{-i p_k . x_j}  (forward transform)
    std::vector<std::complex<double>> work = spec;
    fft_cube_inplace(work, d, grid, FFTW_FORWARD);
    f.value.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.value[i] = work[i].real();

    // gradient grids: multiply spectrum by -i p_l (Nyquist term dropped)
    for (int axis = 0; axis < d; ++axis) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = f.geom.coords(static_cast<std::int64_t>(i));
            const double pl = p_deriv[static_cast<std::size_t>(c[axis])];
            work[i] = spec[i] * std::complex<double>(0.0, -pl);
        }
        fft_cube_inplace(work, d, grid, FFTW_FORWARD);
        f.grad[axis].resize(n);
        for (std::size_t i = 0; i < n; ++i) f.grad[axis][i] = work[i].real();
    }
    return f;
}

// ---------------------------------------------------------------------------
// Snapshot persistence: flat binary + JSON sidecar
// ---------------------------------------------------------------------------

struct FieldHeader {
    char magic[8] = {'S', 'R', 'W', 'F', 'I', 'E', 'L', 'D'};
    std::uint32_t version = 1;
    std::uint32_t kind = 0;
    std::uint32_t d = 0;
    std::uint32_t L = 0;
    std::uint64_t seed = 0;
    std::uint64_t count = 0;
    double box_length = 0.0; // continuum only
};

inline void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

inline void save_field(const FieldSample& f, const std::string& path) {
    FieldHeader h;
    h.kind = static_cast<std::uint32_t>(f.kind);
    h.d = static_cast<std::uint32_t>(f.geom.dim());
    h.L = static_cast<std::uint32_t>(f.geom.side());
    h.seed = f.seed;
    h.count = f.values.size();
    std::string bytes(reinterpret_cast<const char*>(&h), sizeof(h));
    bytes.append(reinterpret_cast<const char*>(f.values.data()), f.values.size() * sizeof(double));
    atomic_write_file(path, bytes);

    nlohmann::json side{{"format_version", h.version},
                        {"kind", field_kind_name(f.kind)},
                        {"d", h.d},
                        {"L", h.L},
                        {"seed", h.seed},
                        {"count", h.count}};
    atomic_write_file(path + ".json", side.dump(2) + "\n");
}

inline FieldSample load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    FieldHeader h;
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::string(h.magic, 8) != "SRWFIELD")
        throw std::runtime_error("bad field snapshot header in " + path);
    FieldSample f;
    f.geom = TorusGeometry(static_cast<int>(h.d), static_cast<int>(h.L));
    f.kind = static_cast<FieldKind>(h.kind);
    f.seed = h.seed;
    f.values.resize(h.count);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(h.count * sizeof(double)));
    if (!in) throw std::runtime_error("truncated field snapshot " + path);
    return f;
}

/// CSV export of a 2d slice (axes ax1, ax2) through `fixed` coordinates.
inline std::string field_slice_csv(const FieldSample& f, int ax1, int ax2,
                                   std::array<int, kMaxDim> fixed = {}) {
    std::string csv = "i,j,value\n";
    const int L = f.geom.side();
    auto c = fixed;
    char buf[64];
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            c[ax1] = i;
            c[ax2] = j;
            const double v = f.values[static_cast<std::size_t>(f.geom.index(c))];
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", i, j, v);
            csv += buf;
        }
    return csv;
}

} // namespace srw

#endif
