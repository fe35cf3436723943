#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <vector>

#include "laufer/scalar.hpp"

namespace laufer {

/// Relative singular-value cutoff for FLOAT-mode rank decisions.
inline constexpr double kFloatRankRelTol = 1e-8;

/// Dense matrix of mode-tagged scalars. Small, value-semantic; sized for
/// Hessians and section-counting systems, not for numerics at scale.
class ScalarMatrix {
public:
    ScalarMatrix(int rows, int cols, Mode mode)
        : rows_(rows), cols_(cols), mode_(mode), a_(static_cast<std::size_t>(rows) * cols, Scalar::zero(mode)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("matrix shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Mode mode() const { return mode_; }

    const Scalar& at(int i, int j) const { return a_[index(i, j)]; }
    void set(int i, int j, const Scalar& v) {
        if (v.mode() != mode_) throw ModeMismatchError();
        a_[index(i, j)] = v;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    friend bool operator==(const ScalarMatrix& x, const ScalarMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.mode_ == y.mode_ && x.a_ == y.a_;
    }

    Eigen::MatrixXcd to_eigen() const {
        Eigen::MatrixXcd m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).to_complex();
        return m;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("matrix index");
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    int rows_, cols_;
    Mode mode_;
    std::vector<Scalar> a_;
};

struct RankResult {
    int rank = 0;
    /// FLOAT only: a singular value fell within a factor of 10 of the
    /// cutoff, so the rank decision is fragile and reports should say so.
    bool near_threshold = false;
};

namespace detail {

/// Row-reduce in place over exact rationals. Returns pivot column list.
inline std::vector<int> exact_rref(std::vector<std::vector<Scalar>>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(m[r], m[pivot]);
        Scalar inv = Scalar::one(Mode::EXACT) / m[r][c];
        for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::vector<std::vector<Scalar>> to_rows(const ScalarMatrix& m) {
    std::vector<std::vector<Scalar>> rows(m.rows(), std::vector<Scalar>(m.cols(), Scalar::zero(m.mode())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m.at(i, j);
    return rows;
}

}  // namespace detail

/// Rank of a matrix. EXACT mode row-reduces with exact arithmetic and is
/// never tolerance-dependent; FLOAT mode thresholds singular values at
/// rel_tol times the largest one and flags near-cutoff decisions.
inline RankResult rank_of(const ScalarMatrix& m, double rel_tol = kFloatRankRelTol) {
    if (m.rows() == 0 || m.cols() == 0) return {0, false};
    if (m.mode() == Mode::EXACT) {
        auto rows = detail::to_rows(m);
        return {static_cast<int>(detail::exact_rref(rows).size()), false};
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.to_eigen());
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return {0, false};
    const double top = sv(0);
    if (top == 0.0) return {0, false};
    const double cut = top * rel_tol;
    RankResult r;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++r.rank;
        if (sv(i) > cut / 10.0 && sv(i) < cut * 10.0) r.near_threshold = true;
    }
    return r;
}

inline int corank_of(const ScalarMatrix& m, double rel_tol = kFloatRankRelTol) {
    return m.cols() - rank_of(m, rel_tol).rank;
}

/// Basis of the right null space. EXACT: free-column back substitution on
/// the reduced row echelon form (deterministic, one vector per free
/// column). FLOAT: right singular vectors below the cutoff, rephased so the
/// largest entry is real positive.
inline std::vector<std::vector<Scalar>> kernel_basis(const ScalarMatrix& m,
                                                     double rel_tol = kFloatRankRelTol) {
    std::vector<std::vector<Scalar>> basis;
    const int cols = m.cols();
    if (cols == 0) return basis;
    if (m.mode() == Mode::EXACT) {
        auto rows = detail::to_rows(m);
        std::vector<int> pivots = detail::exact_rref(rows);
        std::vector<bool> is_pivot(cols, false);
        for (int c : pivots) is_pivot[c] = true;
        for (int free = 0; free < cols; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Scalar> v(cols, Scalar::zero(Mode::EXACT));
            v[free] = Scalar::one(Mode::EXACT);
            for (std::size_t pr = 0; pr < pivots.size(); ++pr)
                v[pivots[pr]] = -rows[pr][free];
            basis.push_back(std::move(v));
        }
        return basis;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.to_eigen(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = top * rel_tol;
    for (Eigen::Index j = 0; j < svd.matrixV().cols(); ++j) {
        const bool in_kernel = j >= sv.size() || sv(j) <= cut || top == 0.0;
        if (!in_kernel) continue;
        Eigen::VectorXcd v = svd.matrixV().col(j);
        Eigen::Index lead;
        v.cwiseAbs().maxCoeff(&lead);
        if (std::abs(v(lead)) > 0.0) v *= std::abs(v(lead)) / v(lead);
        std::vector<Scalar> out(cols, Scalar::zero(Mode::FLOAT));
        for (int i = 0; i < cols; ++i) out[i] = Scalar(Complex(v(i)));
        basis.push_back(std::move(out));
    }
    return basis;
}

}  // namespace laufer
