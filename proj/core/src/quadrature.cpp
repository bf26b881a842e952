#include <heston/quadrature.hpp>

#include <heston/errors.hpp>

#include <cmath>
#include <queue>
#include <vector>

namespace heston {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct interval {
    double a, b;
    double value;  // K15 estimate
    double err;    // |K15 - G7|

    bool operator<(const interval& o) const { return err < o.err; }
};

interval evaluate(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double k15 = 0.0;
    double g7 = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double fsum = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
        k15 += kWgk[i] * fsum;
        // the odd-index Kronrod nodes are exactly the 7-point Gauss nodes
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    const double fc = f(c);
    k15 = (k15 + kWgk[7] * fc) * h;
    g7 = (g7 + kWg[3] * fc) * h;
    return {a, b, k15, std::fabs(k15 - g7)};
}

}  // namespace

quad_result integrate(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, double rel_tol) {
    if (!(a < b)) throw domain_error("integrate requires a < b");

    constexpr int kInitial = 8;
    constexpr int kMaxIntervals = 4000;

    std::priority_queue<interval> queue;
    double total = 0.0;
    double total_err = 0.0;
    int evals = 0;
    const double h0 = (b - a) / kInitial;
    for (int i = 0; i < kInitial; ++i) {
        interval iv = evaluate(f, a + i * h0, a + (i + 1) * h0);
        evals += 15;
        total += iv.value;
        total_err += iv.err;
        queue.push(iv);
    }

    int n_intervals = kInitial;
    while (total_err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (n_intervals >= kMaxIntervals) {
            throw domain_error("adaptive quadrature failed to converge");
        }
        interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        interval left = evaluate(f, worst.a, mid);
        interval right = evaluate(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        ++n_intervals;
    }
    return {total, total_err, evals};
}

}  // namespace heston
