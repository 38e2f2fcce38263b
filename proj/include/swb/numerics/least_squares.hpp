#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/numerics/matrix.hpp"

namespace swb::num {

// Raised when the design matrix has (numerically) dependent columns.
class RankDeficientError : public NumericError {
public:
    RankDeficientError(std::size_t rank, std::vector<std::size_t> dropped)
        : NumericError("rank-deficient least-squares design (numerical rank " +
                       std::to_string(rank) + ")"),
          rank_(rank),
          dropped_(std::move(dropped)) {}

    std::size_t numerical_rank() const { return rank_; }
    // Column indices the pivoted factorization could not include.
    const std::vector<std::size_t>& dependent_columns() const { return dropped_; }

private:
    std::size_t rank_;
    std::vector<std::size_t> dropped_;
};

struct LeastSquaresSolution {
    std::vector<double> coefficients;
    double rss = 0.0;          // residual sum of squares
    std::size_t dof = 0;       // n - p
};

// Householder QR with column pivoting. Requires rows >= cols; throws
// RankDeficientError when the numerical rank is below cols.
inline LeastSquaresSolution solve_least_squares(const DenseMatrix& a,
                                                const std::vector<double>& b) {
    const std::size_t n = a.rows(), m = a.cols();
    if (n < m) throw NumericError("least squares needs rows >= cols");
    if (b.size() != n) throw NumericError("rhs length does not match rows");

    DenseMatrix r = a;
    std::vector<double> qtb = b;
    std::vector<std::size_t> piv(m);
    for (std::size_t j = 0; j < m; ++j) piv[j] = j;

    std::vector<double> colnorm(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += r(i, j) * r(i, j);
        colnorm[j] = s;
    }

    const double eps = std::numeric_limits<double>::epsilon();
    double r00 = 0.0;
    std::size_t rank = m;

    for (std::size_t k = 0; k < m; ++k) {
        // Recompute trailing norms exactly; cheap at these sizes and avoids
        // the classic downdating instability.
        for (std::size_t j = k; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += r(i, j) * r(i, j);
            colnorm[j] = s;
        }
        std::size_t best = k;
        for (std::size_t j = k + 1; j < m; ++j)
            if (colnorm[j] > colnorm[best]) best = j;
        if (best != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(r(i, k), r(i, best));
            std::swap(piv[k], piv[best]);
            std::swap(colnorm[k], colnorm[best]);
        }

        double norm = std::sqrt(colnorm[k]);
        if (k == 0) r00 = norm;
        if (norm <= r00 * static_cast<double>(std::max(n, m)) * eps || norm == 0.0) {
            rank = k;
            break;
        }

        // Householder vector for column k, rows k..n-1.
        double alpha = r(k, k) >= 0 ? -norm : norm;
        std::vector<double> v(n - k);
        v[0] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = r(i, k);
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
        if (vnorm2 == 0.0) continue;

        for (std::size_t j = k + 1; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += v[i - k] * r(i, j);
            s = 2.0 * s / vnorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= s * v[i - k];
        }
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += v[i - k] * qtb[i];
        s = 2.0 * s / vnorm2;
        for (std::size_t i = k; i < n; ++i) qtb[i] -= s * v[i - k];
    }

    if (rank < m) {
        std::vector<std::size_t> dropped(piv.begin() + static_cast<long>(rank), piv.end());
        std::sort(dropped.begin(), dropped.end());
        throw RankDeficientError(rank, dropped);
    }

    // Back substitution.
    std::vector<double> x(m, 0.0);
    for (std::size_t kk = m; kk-- > 0;) {
        double s = qtb[kk];
        for (std::size_t j = kk + 1; j < m; ++j) s -= r(kk, j) * x[j];
        x[kk] = s / r(kk, kk);
    }

    LeastSquaresSolution sol;
    sol.coefficients.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) sol.coefficients[piv[j]] = x[j];

    double rss = 0.0;
    for (std::size_t i = m; i < n; ++i) rss += qtb[i] * qtb[i];
    sol.rss = rss;
    sol.dof = n - m;
    return sol;
}

// Orthonormal-basis tracker for greedy column selection (stepwise adds, MARS
// forward pass). Columns are Gram-Schmidt orthogonalized twice; candidates
// that fall below the collinearity threshold report no gain.
class IncrementalLeastSquares {
public:
    explicit IncrementalLeastSquares(std::vector<double> y)
        : y_(std::move(y)), residual_(y_), rss_(norm2_squared(y_)) {}

    std::size_t n() const { return y_.size(); }
    std::size_t basis_size() const { return q_.size(); }
    double rss() const { return rss_; }
    const std::vector<double>& residual() const { return residual_; }

    // Orthogonalize x against the current basis; returns false when the
    // remainder is negligible relative to the input.
    bool orthogonalize(std::vector<double> x, std::vector<double>& out) const {
        const double input_norm2 = norm2_squared(x);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : q_) {
                double c = dot(q, x);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
            }
        }
        double rem2 = norm2_squared(x);
        if (input_norm2 == 0.0 || rem2 <= 1e-20 * input_norm2) return false;
        double inv = 1.0 / std::sqrt(rem2);
        for (double& v : x) v *= inv;
        out = std::move(x);
        return true;
    }

    // RSS reduction from adding one column; 0 when collinear.
    double gain(const std::vector<double>& x) const {
        std::vector<double> q;
        if (!orthogonalize(x, q)) return 0.0;
        double c = dot(q, residual_);
        return c * c;
    }

    // RSS reduction from adding a column pair (hinge mirror). Collinear
    // members of the pair degrade gracefully to the single-column gain.
    double gain_pair(const std::vector<double>& u, const std::vector<double>& v) const {
        std::vector<double> qu, qv;
        bool have_u = orthogonalize(u, qu);
        if (!have_u) return gain(v);
        double cu = dot(qu, residual_);
        double reduction = cu * cu;
        std::vector<double> v2 = v;
        double c = dot(qu, v2);
        for (std::size_t i = 0; i < v2.size(); ++i) v2[i] -= c * qu[i];
        std::vector<double> qv2;
        // Orthogonalize the deflated second column against the basis too.
        if (orthogonalize(v2, qv2)) {
            double cv = dot(qv2, residual_);
            reduction += cv * cv;
        }
        return reduction;
    }

    // Append a column; returns false (and leaves state unchanged) if collinear.
    bool add_column(const std::vector<double>& x) {
        std::vector<double> q;
        if (!orthogonalize(x, q)) return false;
        double c = dot(q, residual_);
        for (std::size_t i = 0; i < residual_.size(); ++i) residual_[i] -= c * q[i];
        rss_ = norm2_squared(residual_);
        q_.push_back(std::move(q));
        return true;
    }

private:
    std::vector<double> y_;
    std::vector<double> residual_;
    std::vector<std::vector<double>> q_;
    double rss_;
};

}  // namespace swb::num
