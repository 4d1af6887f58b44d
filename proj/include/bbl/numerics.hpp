#pragma once

// Small numerics kernel: adaptive Gauss-Kronrod quadrature (scalar and
// fixed-size array integrands), Brent root bracketing, golden-section
// minimization, and the tiny linear solves the rest of the library needs.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace bbl::num {

inline constexpr int kGk15Points = 15;

// Gauss-Kronrod 7-15 pair on [-1,1]; positive abscissae only, mirrored in use.
extern const double gk15_nodes[8];
extern const double gk15_weights[8];
extern const double g7_weights[4];

// 16-point Gauss-Legendre on [-1,1], positive half.
extern const double gl16_nodes[8];
extern const double gl16_weights[8];

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

// Adaptive GK15 for a scalar integrand; absolute tolerance.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 32);

// Adaptive GK15 for an N-component integrand evaluated in one call; the error
// control is on the max-norm across components.
template <std::size_t N>
struct QuadResultN {
    std::array<double, N> value{};
    double error = 0.0;
    int panels = 0;
};

namespace detail {
void integrate_vec(const std::function<void(double, double*)>& f, std::size_t n,
                   double a, double b, double abs_tol, int max_depth,
                   double* out_value, double* out_error, int* out_panels);
}

// The integrand writes its N components through the out pointer.
template <std::size_t N, class F>
QuadResultN<N> integrate_n(F&& f, double a, double b, double abs_tol,
                           int max_depth = 32) {
    QuadResultN<N> r;
    std::function<void(double, double*)> fw = std::forward<F>(f);
    detail::integrate_vec(fw, N, a, b, abs_tol, max_depth, r.value.data(),
                          &r.error, &r.panels);
    return r;
}

struct RootResult {
    double x = 0.0;
    int iters = 0;
    bool converged = false;
};

// Brent on a bracketing interval [a,b] with f(a)*f(b) <= 0.
RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double fa, double fb, double xtol, int max_iter = 200);

// Golden-section minimization of a unimodal function on [a,b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol, int max_iter = 300);

// Dense Gaussian elimination with partial pivoting, for n <= 8.
// Returns false if the matrix is numerically singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& rhs, int n);

// 1-norm condition estimate of a small dense matrix via its explicit inverse.
double condition_1norm(std::vector<double> a, int n);

// Cyclic tridiagonal solve (Thomas + Sherman-Morrison).  diag/lower/upper have
// length n; `corner_lo` couples row 0 to column n-1 and `corner_up` couples
// row n-1 to column 0.  Overwrites rhs with the solution; returns false on a
// numerically singular pivot.
bool solve_cyclic_tridiag(std::vector<double> lower, std::vector<double> diag,
                          std::vector<double> upper, double corner_lo,
                          double corner_up, std::vector<double>& rhs);

} // namespace bbl::num
