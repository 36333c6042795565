#ifndef FRACDIFF_HP_BASIS_HPP
#define FRACDIFF_HP_BASIS_HPP

#include <cmath>
#include <vector>

namespace fracdiff {

// 1D local shape functions on [-1,1] of degree r: endpoint hats plus
// integrated-Legendre bubbles (j = 2..r), the standard conditioning-friendly
// hp basis.
struct Hp1dBasis {
  int r;

  void eval(double xi, std::vector<double>& val,
            std::vector<double>& der) const {
    val.assign(static_cast<std::size_t>(r) + 1, 0.0);
    der.assign(static_cast<std::size_t>(r) + 1, 0.0);
    val[0] = 0.5 * (1.0 - xi);
    der[0] = -0.5;
    val[1] = 0.5 * (1.0 + xi);
    der[1] = 0.5;
    if (r < 2) return;
    std::vector<double> leg(static_cast<std::size_t>(r) + 1);
    leg[0] = 1.0;
    leg[1] = xi;
    for (int n = 2; n <= r; ++n)
      leg[static_cast<std::size_t>(n)] =
          ((2.0 * n - 1.0) * xi * leg[static_cast<std::size_t>(n - 1)] -
           (n - 1.0) * leg[static_cast<std::size_t>(n - 2)]) /
          n;
    for (int j = 2; j <= r; ++j) {
      const double c = 1.0 / std::sqrt(2.0 * (2.0 * j - 1.0));
      val[static_cast<std::size_t>(j)] =
          c * (leg[static_cast<std::size_t>(j)] -
               leg[static_cast<std::size_t>(j - 2)]);
      // L_j' - L_{j-2}' = (2j-1) L_{j-1}
      der[static_cast<std::size_t>(j)] =
          c * (2.0 * j - 1.0) * leg[static_cast<std::size_t>(j - 1)];
    }
  }
};

}  // namespace fracdiff

#endif
