#include "etc/num/linalg.hpp"

#include "etc/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace etc::num {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            fail(ErrorCode::NonFinite, fmt::format("{} constructed with a non-finite entry", what));
        }
    }
}

void require_same_size(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        fail(ErrorCode::DimensionMismatch, fmt::format("{}: sizes {} and {} differ", op, a, b));
    }
}

}  // namespace

Vec::Vec(std::size_t n, double fill) : v_(n, fill) {
    require_finite(v_, "Vec");
}

Vec::Vec(std::initializer_list<double> values) : v_(values) {
    require_finite(v_, "Vec");
}

Vec::Vec(std::vector<double> values) : v_(std::move(values)) {
    require_finite(v_, "Vec");
}

bool Vec::all_finite() const noexcept {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

Vec Vec::slice(std::size_t offset, std::size_t width) const {
    if (offset + width > v_.size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("slice [{}, {}) outside vector of size {}", offset, offset + width, v_.size()));
    }
    Vec out;
    out.v_.assign(v_.begin() + static_cast<std::ptrdiff_t>(offset),
                  v_.begin() + static_cast<std::ptrdiff_t>(offset + width));
    return out;
}

void Vec::assign_slice(std::size_t offset, const Vec& part) {
    if (offset + part.size() > v_.size()) {
        fail(ErrorCode::DimensionMismatch, "assign_slice out of range");
    }
    std::copy(part.v_.begin(), part.v_.end(), v_.begin() + static_cast<std::ptrdiff_t>(offset));
}

Vec& Vec::operator+=(const Vec& rhs) {
    require_same_size(size(), rhs.size(), "Vec +=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += rhs.v_[i];
    return *this;
}

Vec& Vec::operator-=(const Vec& rhs) {
    require_same_size(size(), rhs.size(), "Vec -=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= rhs.v_[i];
    return *this;
}

Vec& Vec::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

Vec operator+(Vec lhs, const Vec& rhs) { return lhs += rhs; }
Vec operator-(Vec lhs, const Vec& rhs) { return lhs -= rhs; }
Vec operator*(double s, Vec v) { return v *= s; }
Vec operator*(Vec v, double s) { return v *= s; }
Vec operator-(Vec v) { return v *= -1.0; }

Vec concat(const Vec& a, const Vec& b) {
    std::vector<double> out(a.values());
    out.insert(out.end(), b.begin(), b.end());
    return Vec(std::move(out));
}

double dot(const Vec& a, const Vec& b) {
    require_same_size(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_one(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm_two(const Vec& v) {
    // Scaled accumulation keeps tiny ideal-run states from underflowing.
    double scale = norm_inf(v);
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) {
        double r = x / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Mat::Mat(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {
    require_finite(a_, "Mat");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
        }
        a_.insert(a_.end(), r.begin(), r.end());
    }
    require_finite(a_, "Mat");
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("{} entries for a {}x{} matrix", a_.size(), rows_, cols_));
    }
    require_finite(a_, "Mat");
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return {};
    Mat m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            fail(ErrorCode::DimensionMismatch, "ragged rows");
        }
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::block(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    if (a.rows_ != b.rows_ || c.rows_ != d.rows_ || a.cols_ != c.cols_ || b.cols_ != d.cols_) {
        fail(ErrorCode::DimensionMismatch, "incompatible block sizes");
    }
    Mat m(a.rows_ + c.rows_, a.cols_ + b.cols_);
    auto put = [&m](const Mat& src, std::size_t r0, std::size_t c0) {
        for (std::size_t i = 0; i < src.rows_; ++i)
            for (std::size_t j = 0; j < src.cols_; ++j) m(r0 + i, c0 + j) = src(i, j);
    };
    put(a, 0, 0);
    put(b, 0, a.cols_);
    put(c, a.rows_, 0);
    put(d, a.rows_, a.cols_);
    return m;
}

bool Mat::all_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

Vec Mat::row(std::size_t i) const {
    return Vec(std::vector<double>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                   a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
}

Mat Mat::row_block(std::size_t offset, std::size_t count) const {
    if (offset + count > rows_) {
        fail(ErrorCode::DimensionMismatch, "row block out of range");
    }
    return Mat(count, cols_,
               std::vector<double>(a_.begin() + static_cast<std::ptrdiff_t>(offset * cols_),
                                   a_.begin() + static_cast<std::ptrdiff_t>((offset + count) * cols_)));
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool Mat::is_symmetric(double rel_tol) const {
    if (!is_square()) return false;
    double scale = std::max(norm_inf(), 1e-300);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    return true;
}

Mat Mat::symmetrized() const {
    if (!is_square()) fail(ErrorCode::DimensionMismatch, "symmetrize needs a square matrix");
    Mat s(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
}

Mat& Mat::operator+=(const Mat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(ErrorCode::DimensionMismatch, "Mat +=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
    return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(ErrorCode::DimensionMismatch, "Mat -=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
Mat operator*(double s, Mat m) { return m *= s; }

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("product of {}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
    }
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec operator*(const Mat& m, const Vec& v) {
    if (m.cols() != v.size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("{}x{} matrix times vector of size {}", m.rows(), m.cols(), v.size()));
    }
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    // Unchecked: callers that integrate test finiteness themselves.
    Vec r(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i];
    return r;
}

double quadratic_form(const Mat& m, const Vec& x) {
    return dot(x, m * x);
}

}  // namespace etc::num
