#ifndef SRW_TORUS_HPP
#define SRW_TORUS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srw {

constexpr int kMaxDim = 4;

/// Flat-index geometry of the periodic lattice {0..L-1}^d.
/// Axis 0 is the fastest-varying index.
class TorusGeometry {
  public:
    TorusGeometry() = default;
    TorusGeometry(int d, int L) : d_(d), L_(L) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("torus: dimension out of range");
        if (L < 2) throw std::invalid_argument("torus: side too small");
        std::int64_t n = 1;
        for (int a = 0; a < d; ++a) {
            stride_[a] = n;
            n *= L;
        }
        size_ = n;
    }

    int dim() const { return d_; }
    int side() const { return L_; }
    std::int64_t size() const { return size_; }

    std::int64_t index(const std::array<int, kMaxDim>& c) const {
        std::int64_t i = 0;
        for (int a = 0; a < d_; ++a) i += stride_[a] * wrap(c[a]);
        return i;
    }

    std::array<int, kMaxDim> coords(std::int64_t i) const {
        std::array<int, kMaxDim> c{};
        for (int a = 0; a < d_; ++a) {
            c[a] = static_cast<int>(i % L_);
            i /= L_;
        }
        return c;
    }

    /// Neighbor in direction +axis or -axis.
    std::int64_t neighbor(std::int64_t i, int axis, int sign) const {
        const std::int64_t s = stride_[axis];
        const int c = static_cast<int>((i / s) % L_);
        if (sign > 0) return (c + 1 == L_) ? i + s - s * L_ : i + s;
        return (c == 0) ? i - s + s * L_ : i - s;
    }

    /// Site shifted by integer offset vector (wraps).
    std::int64_t shifted(std::int64_t i, const std::array<int, kMaxDim>& off) const {
        auto c = coords(i);
        for (int a = 0; a < d_; ++a) c[a] = wrap(c[a] + off[a]);
        return index(c);
    }

    int wrap(int c) const {
        c %= L_;
        return c < 0 ? c + L_ : c;
    }

  private:
    int d_ = 0;
    int L_ = 0;
    std::int64_t size_ = 0;
    std::array<std::int64_t, kMaxDim> stride_{};
};

} // namespace srw

#endif
