#include "atomiv/quadrature.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "atomiv/errors.hpp"

namespace atomiv::quad {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes and the centre.
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt) {
  if (a == b) return {};
  std::priority_queue<Panel> panels;
  Panel first = gauss_kronrod_15(f, a, b);
  double value = first.value;
  double error = first.error;
  int evaluations = 15;
  panels.push(first);
  int intervals = 1;
  while (error > std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(value))) {
    if (!std::isfinite(value)) {
      throw QuadratureError("quadrature: integrand produced a non-finite value", value, error, evaluations);
    }
    if (intervals >= opt.max_intervals) {
      std::ostringstream os;
      os << "quadrature: interval budget exhausted on [" << a << ", " << b << "], estimate " << value
         << ", error " << error;
      throw QuadratureError(os.str(), value, error, evaluations);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    evaluations += 30;
    ++intervals;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  if (!std::isfinite(total)) {
    throw QuadratureError("quadrature: integrand produced a non-finite value", total, total_error, evaluations);
  }
  return {total, total_error, evaluations};
}

}  // namespace atomiv::quad
