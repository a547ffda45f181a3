#include "adjsim/repro.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adjsim/adjust.hpp"
#include "adjsim/combinatorics.hpp"
#include "adjsim/errors.hpp"

namespace adjsim::repro {

namespace {

void require_range(Count u1, Count n) {
  if (n < 1) throw InputError("N must be at least 1 (got " + std::to_string(n) + ")");
  if (u1 < 0 || u1 > n) {
    throw InputError("u1 must lie in [0, N] (got u1 = " + std::to_string(u1) + ", N = " + std::to_string(n) + ")");
  }
}

template <class Real>
Real max_of(const Real& a, const Real& b) {
  return a < b ? b : a;
}

}  // namespace

template <class Real>
Real adjusted_below_max(Count u1, Count n) {
  return Real(-u1) / Real(n * n + (n - 1) * u1);
}

template <class Real>
Real expected_adjusted_below_max(Count u1, Count n) {
  Real acc(0);
  for (Count k = 1; k < n; ++k) acc += adjusted_below_max<Real>(k, n) * binomial_pmf<Real>(n, k, u1, n);
  return acc;
}

template <class Real>
Real toy_adjusted(Count u1, Count n, const Real& c) {
  require_range(u1, n);
  return u1 == n ? c : adjusted_below_max<Real>(u1, n);
}

template <class Real>
Real toy_expected_adjusted(Count u1, Count n, const Real& c) {
  require_range(u1, n);
  return c * binomial_pmf<Real>(n, n, u1, n) + expected_adjusted_below_max<Real>(u1, n);
}

template <class Real>
Real toy_double_adjusted(Count u1, Count n, const Real& c) {
  const Real as = toy_adjusted(u1, n, c);
  const Real e = toy_expected_adjusted(u1, n, c);
  return apply_adjustment(as, e, max_of(Real(0), c), c).value;
}

template <class Real>
Real toy_single_expectation(Count u1, Count n) {
  require_range(u1, n);
  const Real x(u1), N(n);
  return x + (N - Real(1)) / N * x * x;
}

template <class Real>
Real toy_nested_expectation(Count u1, Count n) {
  require_range(u1, n);
  const Real x(u1), N(n);
  const Real r = (N - Real(1)) / N;
  return (Real(2) * N - Real(1)) / N * x + r * r * x * x;
}

template <class Real>
CounterexampleRecord<Real> prop1_record(int part, Count u1, Count n, const Real& c) {
  if (part < 1 || part > 5) throw InputError("part must be 1..5 (got " + std::to_string(part) + ")");
  require_range(u1, n);
  CounterexampleRecord<Real> r;
  r.part = part;
  r.u1 = u1;
  r.n = n;
  r.c = c;
  switch (part) {
    case 1: {
      r.expectation = toy_single_expectation<Real>(u1, n);
      r.nested_expectation = toy_nested_expectation<Real>(u1, n);
      r.violated = !nearly_equal(*r.expectation, *r.nested_expectation);
      break;
    }
    case 2: {
      // Least squares of AS(k) on k^2, k = 0..N, the support of u~1 when 0 < u1 < N.
      const Count points = n + 1;
      Real mx(0), my(0);
      std::vector<Real> xs, ys;
      for (Count k = 0; k <= n; ++k) {
        xs.emplace_back(k * k);
        ys.push_back(toy_adjusted<Real>(k, n, c));
        mx += xs.back();
        my += ys.back();
      }
      mx /= Real(points);
      my /= Real(points);
      Real sxy(0), sxx(0);
      for (Count k = 0; k < points; ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
      }
      const Real slope = sxy / sxx;
      const Real intercept = my - slope * mx;
      Real worst(0);
      for (Count k = 0; k < points; ++k) worst = max_of(worst, abs_value(Real(ys[k] - intercept - slope * xs[k])));
      r.affine_residual = worst;
      r.adjusted = toy_adjusted<Real>(u1, n, c);
      r.violated = !nearly_equal(worst, Real(0));
      break;
    }
    case 3: {
      r.adjusted = toy_adjusted<Real>(u1, n, c);
      r.expected_adjusted = toy_expected_adjusted<Real>(u1, n, c);
      r.violated = !nearly_equal(*r.expected_adjusted, Real(0));
      break;
    }
    case 4: {
      r.adjusted = toy_adjusted<Real>(u1, n, c);
      r.expected_adjusted = toy_expected_adjusted<Real>(u1, n, c);
      r.adjusted_max = max_of(Real(0), c);
      r.double_adjusted = toy_double_adjusted<Real>(u1, n, c);
      r.violated = !nearly_equal(*r.adjusted, *r.double_adjusted);
      break;
    }
    case 5: {
      // Standardized u1 is 0 wherever the null sd is positive (0 < u~1 < N)
      // and c on the point-mass tables u~1 in {0, N}.
      const bool interior = u1 > 0 && u1 < n;
      r.standardized = interior ? Real(0) : c;
      const Real edge = binomial_pmf<Real>(n, 0, u1, n) + binomial_pmf<Real>(n, n, u1, n);
      r.standardized_mean = c * edge;
      r.standardized_variance = c * c * edge * (Real(1) - edge);
      r.violated = !(nearly_equal(*r.standardized_mean, Real(0)) && nearly_equal(*r.standardized_variance, Real(1)));
      break;
    }
  }
  return r;
}

std::vector<GridCell> figure1_grid(Count n_max, std::span<const double> c_values) {
  if (n_max < 2) throw InputError("n_max must be at least 2 (got " + std::to_string(n_max) + ")");
  if (c_values.empty()) throw InputError("at least one convention value c is required");
  std::vector<GridCell> cells;
  cells.reserve(c_values.size() * static_cast<std::size_t>(n_max * (n_max - 1) / 2));
  for (double c : c_values) {
    for (Count n = 2; n <= n_max; ++n) {
      for (Count u1 = 1; u1 < n; ++u1) {
        GridCell cell;
        cell.c = c;
        cell.n = n;
        cell.u1 = u1;
        cell.as_value = toy_adjusted<double>(u1, n, c);
        cell.a2s_value = toy_double_adjusted<double>(u1, n, c);
        const double diff = std::fabs(cell.as_value - cell.a2s_value);
        if (diff < kUnderflowThreshold) {
          cell.underflow = true;
          cell.neg_log10_diff = kUnderflowSentinel;
        } else {
          cell.neg_log10_diff = -std::log10(diff);
        }
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

void write_grid_csv(std::ostream& os, std::span<const GridCell> cells) {
  os << "c,N,u1,AS,A2S,neg_log10_diff,underflow\n";
  os << std::setprecision(17);
  for (const auto& cell : cells) {
    os << cell.c << ',' << cell.n << ',' << cell.u1 << ',' << cell.as_value << ',' << cell.a2s_value << ','
       << cell.neg_log10_diff << ',' << (cell.underflow ? 1 : 0) << '\n';
  }
}

std::string plot_script(const std::string& csv_path) {
  std::ostringstream os;
  os << "#!/usr/bin/env python3\n"
        "# Heatmaps of -log10|AS - A2S| over (u1, N), one panel per convention c.\n"
        "import sys\n"
        "import numpy as np\n"
        "import pandas as pd\n"
        "import matplotlib.pyplot as plt\n\n"
        "path = sys.argv[1] if len(sys.argv) > 1 else "
     << std::quoted(csv_path)
     << "\n"
        "df = pd.read_csv(path)\n"
        "cs = list(dict.fromkeys(df['c']))\n"
        "fig, axes = plt.subplots(1, len(cs), figsize=(5 * len(cs), 4), squeeze=False)\n"
        "for ax, c in zip(axes[0], cs):\n"
        "    sub = df[df['c'] == c]\n"
        "    n_max = int(sub['N'].max())\n"
        "    grid = np.full((n_max + 1, n_max + 1), np.nan)\n"
        "    grid[sub['N'].to_numpy(), sub['u1'].to_numpy()] = sub['neg_log10_diff'].to_numpy()\n"
        "    im = ax.imshow(grid, origin='lower', aspect='auto')\n"
        "    ax.set_title(f'c = {c}')\n"
        "    ax.set_xlabel('u1')\n"
        "    ax.set_ylabel('N')\n"
        "    fig.colorbar(im, ax=ax)\n"
        "fig.tight_layout()\n"
        "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
  return os.str();
}

AsymptoticResult asymptotic_check(Count j, double c, Count n) {
  if (j < 1) throw InputError("j must be at least 1");
  if (n <= j) throw InputError("N must exceed j (got N = " + std::to_string(n) + ", j = " + std::to_string(j) + ")");
  if (c == 0.0) throw CapabilityError("the limit formula covers c != 0 only; c = 0 is settled by the u1=1, N=2 example");
  AsymptoticResult r;
  const Count u1 = n - j;
  r.adjusted = toy_adjusted<double>(u1, n, c);
  r.double_adjusted = toy_double_adjusted<double>(u1, n, c);
  r.ratio = r.double_adjusted / r.adjusted / static_cast<double>(n);
  r.limit = 2.0 / ((c > 0 ? std::exp(static_cast<double>(j)) : 0.0) - 1.0);
  return r;
}

#define ADJSIM_INSTANTIATE(Real)                                                    \
  template Real adjusted_below_max<Real>(Count, Count);                             \
  template Real expected_adjusted_below_max<Real>(Count, Count);                    \
  template Real toy_adjusted<Real>(Count, Count, const Real&);                      \
  template Real toy_expected_adjusted<Real>(Count, Count, const Real&);             \
  template Real toy_double_adjusted<Real>(Count, Count, const Real&);               \
  template Real toy_single_expectation<Real>(Count, Count);                         \
  template Real toy_nested_expectation<Real>(Count, Count);                         \
  template CounterexampleRecord<Real> prop1_record<Real>(int, Count, Count, const Real&);

ADJSIM_INSTANTIATE(double)
ADJSIM_INSTANTIATE(Rational)

#undef ADJSIM_INSTANTIATE

}  // namespace adjsim::repro
