// Exits 0 when the linked LAPACK returns an accurate eigendecomposition.
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

int main() {
  constexpr int n = 192;
  std::vector<double> a(n * n), v(n * n), w(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      a[i * n + j] = a[j * n + i] = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? 0.5 * i / n : 0.0);
  v = a;
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, w.data()) != 0) return 1;
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double av = 0.0;
      for (int j = 0; j < n; ++j) av += a[i * n + j] * v[k * n + j];
      worst = std::max(worst, std::abs(av - w[k] * v[k * n + i]));
    }
  return worst < 1e-8 ? 0 : 1;
}
