#pragma once

#include "frontrelax/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace frontrelax {

/// Values on the (z, y) grid, m components. Storage is [component][z][y] with y contiguous,
/// so FFTs along y act on contiguous rows and z-columns are strided by the y-size.
class Field {
public:
    Field(int components, Grid1D zgrid, TransverseGrid ygrid);

    int components() const noexcept { return m_; }
    int nz() const noexcept { return zgrid_.size(); }
    int ny() const noexcept { return ygrid_.size(); }
    const Grid1D& zgrid() const noexcept { return zgrid_; }
    const TransverseGrid& ygrid() const noexcept { return ygrid_; }

    double& at(int k, int i, int j) noexcept { return data_[index(k, i, j)]; }
    double at(int k, int i, int j) const noexcept { return data_[index(k, i, j)]; }
    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }
    /// Contiguous y-row of component k at z-node i.
    double* row(int k, int i) noexcept { return data_.data() + index(k, i, 0); }
    const double* row(int k, int i) const noexcept { return data_.data() + index(k, i, 0); }

    /// The z-slice (m x N_z) at transverse node j.
    Eigen::MatrixXd column(int j) const;
    void set_column(int j, const Eigen::MatrixXd& slice);

    double max_abs() const;
    bool all_finite() const;
    void set_zero();

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

private:
    std::size_t index(int k, int i, int j) const noexcept {
        return (static_cast<std::size_t>(k) * zgrid_.size() + i) * ygrid_.size() + j;
    }
    void check_same_shape(const Field& other) const;

    int m_;
    Grid1D zgrid_;
    TransverseGrid ygrid_;
    std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// max over y-columns of the discrete H^1_z norm (components summed).
double norm_sup_y_h1_z(const Field& f);
/// (int (1 + |y|^2)^m ||f(., y)||_{H^1_z}^2 dy)^{1/2}.
double norm_weighted_l2_y_h1_z(const Field& f, double m);

}  // namespace frontrelax
