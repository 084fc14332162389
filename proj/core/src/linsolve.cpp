#include "fraclab/linsolve.hpp"
#include "fraclab/errors.hpp"

#include <cmath>

namespace fraclab {

namespace {

bool is_tridiagonal(const SparseSym& k) {
    for (int i = 0; i < k.n; ++i)
        for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p)
            if (std::abs(k.col[p] - i) > 1) return false;
    return true;
}

void thomas_solve(const SparseSym& k, double alpha, const std::vector<double>& rhs,
                  std::vector<double>& x) {
    const int n = k.n;
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
    for (int i = 0; i < n; ++i) {
        b[i] = 1.0;
        for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
            const int j = k.col[p];
            const double v = alpha * k.val[p];
            if (j == i - 1)
                a[i] = v;
            else if (j == i)
                b[i] += v;
            else
                c[i] = v;
        }
    }
    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (int i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
    }
    x.resize(n);
    x[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

void cg_solve(const SparseSym& k, double alpha, const std::vector<double>& rhs,
              std::vector<double>& x) {
    const int n = k.n;
    x = rhs; // good starting guess for a near-identity system
    std::vector<double> ax(n), r(n), p(n), ap(n);
    k.apply(x.data(), ax.data());
    double rhs_norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        r[i] = rhs[i] - (x[i] + alpha * ax[i]);
        rhs_norm2 += rhs[i] * rhs[i];
    }
    const double tol2 = 1e-28 * rhs_norm2 + 1e-300;
    double rr = 0.0;
    for (int i = 0; i < n; ++i) rr += r[i] * r[i];
    p = r;
    for (int iter = 0; iter < 500; ++iter) {
        if (rr <= tol2) return;
        k.apply(p.data(), ap.data());
        double pap = 0.0;
        for (int i = 0; i < n; ++i) {
            ap[i] = p[i] + alpha * ap[i];
            pap += p[i] * ap[i];
        }
        const double gamma = rr / pap;
        double rr_next = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] += gamma * p[i];
            r[i] -= gamma * ap[i];
            rr_next += r[i] * r[i];
        }
        const double beta = rr_next / rr;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }
    if (rr > 1e4 * tol2)
        throw NumericalError("shifted_solve: conjugate gradients stalled, residual " +
                             std::to_string(std::sqrt(rr / (rhs_norm2 + 1e-300))));
}

} // namespace

void shifted_solve(const SparseSym& k, double alpha, const std::vector<double>& rhs,
                   std::vector<double>& x) {
    if (alpha == 0.0) {
        x = rhs;
        return;
    }
    if (is_tridiagonal(k))
        thomas_solve(k, alpha, rhs, x);
    else
        cg_solve(k, alpha, rhs, x);
}

} // namespace fraclab
