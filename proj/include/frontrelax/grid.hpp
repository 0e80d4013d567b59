#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace frontrelax {

/// Uniform z-grid on [-L, L] including both endpoints.
class Grid1D {
public:
    Grid1D(double half_length, int node_count);

    double half_length() const noexcept { return half_length_; }
    int size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double node(int i) const noexcept { return -half_length_ + i * h_; }
    Eigen::VectorXd nodes() const;

    /// Trapezoid inner product of two real z-slices (one component).
    double inner(std::span<const double> a, std::span<const double> b) const;

private:
    double half_length_;
    int n_;
    double h_;
};

/// Periodic grid on the torus [-L, L)^d, d in {1, 2}, N nodes per axis (power of two).
/// Fields are stored row-major, axis 0 slowest.
class TransverseGrid {
public:
    TransverseGrid(int dimension, double half_length, int nodes_per_axis);

    int dimension() const noexcept { return d_; }
    double half_length() const noexcept { return half_length_; }
    int nodes_per_axis() const noexcept { return n_; }
    int size() const noexcept { return d_ == 1 ? n_ : n_ * n_; }
    double spacing() const noexcept { return h_; }
    double cell_volume() const noexcept { return d_ == 1 ? h_ : h_ * h_; }
    double node(int j) const noexcept { return -half_length_ + j * h_; }
    /// Angular wavenumber of FFT bin k (standard ordering, Nyquist bin taken positive).
    double wavenumber(int k) const noexcept;

    /// |eta|^2 at flat index idx.
    double radius_squared(int idx) const noexcept;
    /// Coordinate along `axis` at flat index idx.
    double coordinate(int idx, int axis) const noexcept;

    /// Sum of f times the cell volume.
    double integral(std::span<const double> f) const;

private:
    int d_;
    double half_length_;
    int n_;
    double h_;
};

using TransverseField = Eigen::VectorXd;

}  // namespace frontrelax
