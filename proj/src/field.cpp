#include "frontrelax/field.hpp"

#include "frontrelax/errors.hpp"
#include "frontrelax/spectral_1d.hpp"

#include <algorithm>
#include <cmath>

namespace frontrelax {

Field::Field(int components, Grid1D zgrid, TransverseGrid ygrid)
    : m_(components), zgrid_(zgrid), ygrid_(ygrid) {
    if (m_ < 1) throw InputError("Field: need at least one component");
    data_.assign(static_cast<std::size_t>(m_) * zgrid_.size() * ygrid_.size(), 0.0);
}

Eigen::MatrixXd Field::column(int j) const {
    Eigen::MatrixXd s(m_, nz());
    for (int k = 0; k < m_; ++k) {
        for (int i = 0; i < nz(); ++i) s(k, i) = at(k, i, j);
    }
    return s;
}

void Field::set_column(int j, const Eigen::MatrixXd& slice) {
    if (slice.rows() != m_ || slice.cols() != nz()) throw InputError("Field::set_column: slice shape mismatch");
    for (int k = 0; k < m_; ++k) {
        for (int i = 0; i < nz(); ++i) at(k, i, j) = slice(k, i);
    }
}

double Field::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool Field::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void Field::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void Field::check_same_shape(const Field& other) const {
    if (other.m_ != m_ || other.nz() != nz() || other.ny() != ny()) throw InputError("Field: shape mismatch");
}

Field& Field::operator+=(const Field& other) {
    check_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double norm_sup_y_h1_z(const Field& f) {
    double best = 0.0;
    for (int j = 0; j < f.ny(); ++j) best = std::max(best, slice_h1_norm(f.zgrid(), f.column(j)));
    return best;
}

double norm_weighted_l2_y_h1_z(const Field& f, double m) {
    double sum = 0.0;
    for (int j = 0; j < f.ny(); ++j) {
        const double n = slice_h1_norm(f.zgrid(), f.column(j));
        sum += std::pow(1.0 + f.ygrid().radius_squared(j), m) * n * n;
    }
    return std::sqrt(sum * f.ygrid().cell_volume());
}

}  // namespace frontrelax
