#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace bbl::num {

// QUADPACK dqk15 constants.
const double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double gk15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

const double gl16_nodes[8] = {
    0.095012509837637440185319335424958,
    0.281603550779258913230460501460496,
    0.458016777657227386342419442983578,
    0.617876244402643748446671764048791,
    0.755404408355003033895101194847442,
    0.865631202387831743880467897712393,
    0.944575023073232576077988415534608,
    0.989400934991649932596154173450333};
const double gl16_weights[8] = {
    0.189450610455068496285396723208283,
    0.182603415044923588866763667969220,
    0.169156519395002538189312079030360,
    0.149595988816576732081501730547478,
    0.124628971255533872052476282192016,
    0.095158511682492784809925107602246,
    0.062253523938647892862843836994378,
    0.027152459411754094851780572456018};

namespace {

struct Panel {
    double a, b;
    double value, error;
};

// One GK15 evaluation over [a,b] for an n-component integrand.  `val`, `aux`
// and `scratch` have length n; returns the max-norm error estimate.
double gk15_panel(const std::function<void(double, double*)>& f, std::size_t n,
                  double a, double b, double* val, double* scratch,
                  double* gauss, double* aux) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        val[i] = 0.0;
        gauss[i] = 0.0;
    }
    for (int j = 0; j < 8; ++j) {
        const double x = gk15_nodes[j];
        f(c + h * x, scratch);
        if (j == 7) {
            for (std::size_t i = 0; i < n; ++i) {
                val[i] += gk15_weights[7] * scratch[i];
                gauss[i] += g7_weights[3] * scratch[i];
            }
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) aux[i] = scratch[i];
        f(c - h * x, scratch);
        for (std::size_t i = 0; i < n; ++i) {
            const double pair = aux[i] + scratch[i];
            val[i] += gk15_weights[j] * pair;
            if (j % 2 == 1) gauss[i] += g7_weights[j / 2] * pair;
        }
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        val[i] *= h;
        gauss[i] *= h;
        err = std::max(err, std::abs(val[i] - gauss[i]));
    }
    // QUADPACK-style sharpening of the raw |K - G| difference.
    return err == 0.0 ? 0.0 : err * std::min(1.0, std::pow(200.0 * err, 0.5));
}

} // namespace

namespace detail {

void integrate_vec(const std::function<void(double, double*)>& f, std::size_t n,
                   double a, double b, double abs_tol, int max_depth,
                   double* out_value, double* out_error, int* out_panels) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
    std::vector<double> scratch(n), gauss(n), aux(n);
    struct Seg {
        double a, b, err;
        std::vector<double> val;
        int depth;
    };
    std::vector<Seg> stack;
    Seg root{a, b, 0.0, std::vector<double>(n), 0};
    root.err = gk15_panel(f, n, a, b, root.val.data(), scratch.data(), gauss.data(), aux.data());
    stack.push_back(std::move(root));

    for (std::size_t i = 0; i < n; ++i) out_value[i] = 0.0;
    double total_err = 0.0;
    int panels = 0;
    while (!stack.empty()) {
        Seg s = std::move(stack.back());
        stack.pop_back();
        ++panels;
        // Per-segment share of the budget, proportional to segment width.
        const double share = abs_tol * std::abs(s.b - s.a) / std::max(std::abs(b - a), 1e-300);
        if (s.err <= std::max(share, 1e-18) || s.depth >= max_depth ||
            std::abs(s.b - s.a) < 1e-15 * std::abs(b - a)) {
            for (std::size_t i = 0; i < n; ++i) out_value[i] += s.val[i];
            total_err += s.err;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        Seg l{s.a, m, 0.0, std::vector<double>(n), s.depth + 1};
        Seg r{m, s.b, 0.0, std::vector<double>(n), s.depth + 1};
        l.err = gk15_panel(f, n, s.a, m, l.val.data(), scratch.data(), gauss.data(), aux.data());
        r.err = gk15_panel(f, n, m, s.b, r.val.data(), scratch.data(), gauss.data(), aux.data());
        stack.push_back(std::move(l));
        stack.push_back(std::move(r));
    }
    if (out_error) *out_error = total_err;
    if (out_panels) *out_panels = panels;
}

} // namespace detail

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
    QuadResult r;
    std::function<void(double, double*)> fw = [&f](double s, double* out) { out[0] = f(s); };
    detail::integrate_vec(fw, 1, a, b, abs_tol, max_depth, &r.value, &r.error, &r.panels);
    return r;
}

RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double fa, double fb, double xtol, int max_iter) {
    RootResult res;
    if (fa == 0.0) { res.x = a; res.converged = true; return res; }
    if (fb == 0.0) { res.x = b; res.converged = true; return res; }
    if (fa * fb > 0.0) throw std::invalid_argument("brent: root not bracketed");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        res.iters = iter + 1;
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            res.x = b;
            res.converged = true;
            return res;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    res.x = b;
    return res;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol, int max_iter) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

bool solve_dense(std::vector<double>& a, std::vector<double>& rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
            std::swap(rhs[col], rhs[piv]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] * inv;
            if (m == 0.0) continue;
            for (int k = col; k < n; ++k) a[r * n + k] -= m * a[col * n + k];
            rhs[r] -= m * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * rhs[k];
        rhs[r] = s / a[r * n + r];
    }
    return true;
}

double condition_1norm(std::vector<double> a, int n) {
    auto norm1 = [n](const std::vector<double>& m) {
        double best = 0.0;
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int r = 0; r < n; ++r) s += std::abs(m[r * n + c]);
            best = std::max(best, s);
        }
        return best;
    };
    const double na = norm1(a);
    // Invert column by column.
    std::vector<double> inv(n * n, 0.0);
    for (int c = 0; c < n; ++c) {
        std::vector<double> m = a;
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        if (!solve_dense(m, e, n)) return std::numeric_limits<double>::infinity();
        for (int r = 0; r < n; ++r) inv[r * n + c] = e[r];
    }
    return na * norm1(inv);
}

bool solve_cyclic_tridiag(std::vector<double> lower, std::vector<double> diag,
                          std::vector<double> upper, double corner_lo,
                          double corner_up, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    if (n < 3) return false;
    // Sherman-Morrison: A = T + u v^T with u = (gamma,0,...,corner_up*?), the
    // standard choice below.
    const double gamma = -diag[0];
    std::vector<double> dd = diag;
    dd[0] -= gamma;
    dd[n - 1] -= corner_lo * corner_up / gamma;

    auto thomas = [&](std::vector<double> d, std::vector<double> x) -> std::vector<double> {
        std::vector<double> c(n, 0.0);
        if (d[0] == 0.0) { x.assign(1, std::nan("")); return x; }
        c[0] = upper[0] / d[0];
        x[0] = x[0] / d[0];
        for (int i = 1; i < n; ++i) {
            const double m = d[i] - lower[i] * c[i - 1];
            if (m == 0.0) { x.assign(1, std::nan("")); return x; }
            c[i] = (i < n - 1 ? upper[i] : 0.0) / m;
            x[i] = (x[i] - lower[i] * x[i - 1]) / m;
        }
        for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
        return x;
    };

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner_lo;
    std::vector<double> y = thomas(dd, rhs);
    if (y.size() == 1) return false;
    std::vector<double> z = thomas(dd, u);
    if (z.size() == 1) return false;
    const double vy = y[0] + (corner_up / gamma) * y[n - 1];
    const double vz = z[0] + (corner_up / gamma) * z[n - 1];
    const double denom = 1.0 + vz;
    if (denom == 0.0) return false;
    const double factor = vy / denom;
    for (int i = 0; i < n; ++i) rhs[i] = y[i] - factor * z[i];
    return true;
}

} // namespace bbl::num
