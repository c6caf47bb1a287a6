#pragma once

// Small dense vectors and matrices. Sizes in this project stay below ~20, so
// everything is heap-backed std::vector storage with value semantics.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace etc::num {

class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0);
    Vec(std::initializer_list<double> values);
    explicit Vec(std::vector<double> values);

    std::size_t size() const noexcept { return v_.size(); }
    bool empty() const noexcept { return v_.empty(); }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    std::span<const double> view() const noexcept { return v_; }
    const std::vector<double>& values() const noexcept { return v_; }
    auto begin() const noexcept { return v_.begin(); }
    auto end() const noexcept { return v_.end(); }

    bool all_finite() const noexcept;

    Vec slice(std::size_t offset, std::size_t width) const;
    void assign_slice(std::size_t offset, const Vec& part);

    Vec& operator+=(const Vec& rhs);
    Vec& operator-=(const Vec& rhs);
    Vec& operator*=(double s);

    friend bool operator==(const Vec&, const Vec&) = default;

private:
    std::vector<double> v_;
};

Vec operator+(Vec lhs, const Vec& rhs);
Vec operator-(Vec lhs, const Vec& rhs);
Vec operator*(double s, Vec v);
Vec operator*(Vec v, double s);
Vec operator-(Vec v);

Vec concat(const Vec& a, const Vec& b);
double dot(const Vec& a, const Vec& b);

/// Sum of absolute values.
double norm_one(const Vec& v);
/// ||v||, the Euclidean norm.
double norm_two(const Vec& v);
double norm_inf(const Vec& v);

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
    Mat(std::initializer_list<std::initializer_list<double>> rows);
    /// Row-major entries.
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Mat identity(std::size_t n);
    static Mat from_rows(const std::vector<Vec>& rows);
    /// [[a, b], [c, d]] with compatible block sizes.
    static Mat block(const Mat& a, const Mat& b, const Mat& c, const Mat& d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& entries() const noexcept { return a_; }
    bool all_finite() const noexcept;

    Vec row(std::size_t i) const;
    Mat row_block(std::size_t offset, std::size_t count) const;
    Mat transpose() const;

    /// Induced infinity norm (max absolute row sum).
    double norm_inf() const;
    bool is_symmetric(double rel_tol = 1e-12) const;
    Mat symmetrized() const;

    Mat& operator+=(const Mat& rhs);
    Mat& operator-=(const Mat& rhs);
    Mat& operator*=(double s);

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

Mat operator+(Mat lhs, const Mat& rhs);
Mat operator-(Mat lhs, const Mat& rhs);
Mat operator*(double s, Mat m);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& m, const Vec& v);

/// x^T M x
double quadratic_form(const Mat& m, const Vec& x);

}  // namespace etc::num
