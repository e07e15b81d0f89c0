#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace proxnet {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sizes in this library stay in the hundreds of rows.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    /// Throws StructuralError on ragged input.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Vector diag() const;
    Matrix transposed() const;
    bool all_finite() const;
    bool is_diagonal() const;

    /// max |a_ij - a_ji|
    double asymmetry() const;
    double frobenius() const;

    std::vector<std::vector<double>> to_rows() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

/// (m + m^T) / 2, exactly symmetric.
Matrix symmetrized(const Matrix& m);

/// Largest absolute entrywise difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace proxnet
