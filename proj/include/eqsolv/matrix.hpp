#ifndef EQSOLV_MATRIX_HPP
#define EQSOLV_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace eqsolv {

/// Dense row-major matrix. Arithmetic lives with the structure that owns the
/// scalar domain (group, ring, symbolic product), not here.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw std::invalid_argument("matrix data size mismatch");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const noexcept { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }
    bool operator<(const Matrix& other) const {
        if (rows_ != other.rows_) return rows_ < other.rows_;
        if (cols_ != other.cols_) return cols_ < other.cols_;
        return data_ < other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

}  // namespace eqsolv

#endif  // EQSOLV_MATRIX_HPP
