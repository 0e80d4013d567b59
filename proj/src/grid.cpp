#include "frontrelax/grid.hpp"

#include "frontrelax/errors.hpp"

#include <cmath>
#include <numbers>

namespace frontrelax {

Grid1D::Grid1D(double half_length, int node_count) : half_length_(half_length), n_(node_count) {
    if (!(half_length > 0.0)) throw InputError("Grid1D: half_length must be positive");
    if (node_count < 16) throw InputError("Grid1D: node_count must be at least 16");
    h_ = 2.0 * half_length / (node_count - 1);
}

Eigen::VectorXd Grid1D::nodes() const {
    Eigen::VectorXd z(n_);
    for (int i = 0; i < n_; ++i) z[i] = node(i);
    return z;
}

double Grid1D::inner(std::span<const double> a, std::span<const double> b) const {
    if (static_cast<int>(a.size()) != n_ || static_cast<int>(b.size()) != n_) {
        throw InputError("Grid1D::inner: slice length does not match grid");
    }
    double s = 0.5 * (a[0] * b[0] + a[n_ - 1] * b[n_ - 1]);
    for (int i = 1; i < n_ - 1; ++i) s += a[i] * b[i];
    return s * h_;
}

TransverseGrid::TransverseGrid(int dimension, double half_length, int nodes_per_axis)
    : d_(dimension), half_length_(half_length), n_(nodes_per_axis) {
    if (d_ != 1 && d_ != 2) throw InputError("TransverseGrid: dimension must be 1 or 2");
    if (!(half_length > 0.0)) throw InputError("TransverseGrid: half_length must be positive");
    if (n_ < 2 || (n_ & (n_ - 1)) != 0) {
        throw InputError("TransverseGrid: nodes per axis must be a power of two");
    }
    h_ = 2.0 * half_length / n_;
}

double TransverseGrid::wavenumber(int k) const noexcept {
    const int kk = k <= n_ / 2 ? k : k - n_;
    return std::numbers::pi * kk / half_length_;
}

double TransverseGrid::coordinate(int idx, int axis) const noexcept {
    if (d_ == 1) return node(idx);
    return axis == 0 ? node(idx / n_) : node(idx % n_);
}

double TransverseGrid::radius_squared(int idx) const noexcept {
    if (d_ == 1) {
        const double y = node(idx);
        return y * y;
    }
    const double y0 = node(idx / n_);
    const double y1 = node(idx % n_);
    return y0 * y0 + y1 * y1;
}

double TransverseGrid::integral(std::span<const double> f) const {
    if (static_cast<int>(f.size()) != size()) {
        throw InputError("TransverseGrid::integral: field size does not match grid");
    }
    double s = 0.0;
    for (double x : f) s += x;
    return s * cell_volume();
}

}  // namespace frontrelax
