#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace obmimo {

using cxd = std::complex<double>;

// Dense complex matrix, row-major, zero-initialized on construction.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = cxd{1.0, 0.0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cxd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cxd* data() { return data_.data(); }
    const cxd* data() const { return data_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> data_;
};

// alpha * A * B
CMatrix matmul(const CMatrix& a, const CMatrix& b, double alpha = 1.0);

// c = alpha * A * B + beta * c; c must already have the right shape.
void matmul_into(double alpha, const CMatrix& a, const CMatrix& b, double beta, CMatrix& c);

// alpha * A^H * B
CMatrix herm_matmul(const CMatrix& a, const CMatrix& b, double alpha = 1.0);

CMatrix conjugate(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
CMatrix adjoint(const CMatrix& a);

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cxd scale, const CMatrix& a);

// a  (x)  I_m: used only to materialize block-structured covariances for
// small-instance validation.
CMatrix kron_identity(const CMatrix& a, std::size_t m);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace obmimo
